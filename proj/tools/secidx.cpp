// secidx: command-line front end for secure index coding.
//
// Exit codes: 0 ok/secure/yes, 1 usage or parse error, 2 proven no (or
// insecure/undecodable), 3 unknown, 4 enumeration budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secidx/io.hpp"
#include "secidx/secidx.hpp"

namespace {

using namespace secidx;
using json = nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kNo = 2, kUnknown = 3, kBudget = 4 };

struct RunConfig {
  std::string instance_path;
  std::string code_path;
  std::optional<std::size_t> t_level;
  std::string access;
  std::size_t b = 1;
  std::uint64_t budget = std::uint64_t{1} << 22;
  bool json = false;
  std::string dot_path;
  std::string out_path;
  std::size_t receiver = 0;
  std::size_t length = 0;
};

AccessStructure resolve_adversary(const RunConfig& cfg, const io::InstanceFile& file) {
  if (cfg.t_level) return AccessStructure::t_level(*cfg.t_level);
  if (!cfg.access.empty()) return io::access_from_sets_text(cfg.access);
  if (file.adversary) return *file.adversary;
  throw ParseError("no adversary: give --t-level, --access, or an \"adversary\" entry in the instance file");
}

ExistenceVerdict decide(const RunConfig& cfg, const Instance& inst, const AccessStructure& acc) {
  if (acc.is_t_level()) return decide_tlevel(inst, acc.level(), cfg.b);
  if (cfg.b != 1) throw InvalidLevel("--b > 1 is supported only with a t-level adversary");
  return decide_general(inst, acc);
}

std::string describe(const Certificate& c) {
  if (const auto* leak = std::get_if<LeakCertificate>(&c)) {
    std::ostringstream os;
    os << "receiver " << leak->receiver << " decodes X" << leak->message << " from C and side information inside A="
       << format_set(leak->access) << " ∪ B=" << format_set(leak->block);
    return os.str();
  }
  const auto& acyclic = std::get<AcyclicCertificate>(c);
  std::string order;
  for (const Vertex& v : acyclic.order) order += (order.empty() ? "" : " ") + v.label();
  return "receiver/message graph is acyclic and every message is wanted (topological order: " + order + ")";
}

void print_verdict(const ExistenceVerdict& v, std::ostream& os) {
  os << "answer: " << to_string(v.answer) << "\n";
  if (v.answer == Answer::yes && v.code) {
    os << "construction: " << v.construction << " (length " << v.code->length() << " over GF(" << v.code->q() << ")"
       << (v.field_substituted ? ", field enlarged" : "") << ")\n";
  }
  for (const Certificate& c : v.reasons) os << "reason: " << describe(c) << "\n";
  if (!v.note.empty()) os << "note: " << v.note << "\n";
  os << "bounds: lower=" << (v.bounds.lower ? std::to_string(*v.bounds.lower) : "-")
     << " upper=" << (v.bounds.upper ? std::to_string(*v.bounds.upper) : "-") << "\n";
  if (!v.bounds.note.empty()) os << "bounds note: " << v.bounds.note << "\n";
}

int exit_for(Answer a) {
  switch (a) {
    case Answer::yes: return kOk;
    case Answer::no: return kNo;
    case Answer::unknown: return kUnknown;
  }
  return kUnknown;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot write file");
  out << text;
}

int cmd_analyze(const RunConfig& cfg) {
  const io::InstanceFile file = io::load_instance(cfg.instance_path);
  const ExistenceVerdict v = decide(cfg, file.instance, resolve_adversary(cfg, file));
  if (cfg.json) {
    std::cout << io::to_json(v).dump(2) << "\n";
  } else {
    print_verdict(v, std::cout);
  }
  return exit_for(v.answer);
}

int cmd_construct(const RunConfig& cfg) {
  const io::InstanceFile file = io::load_instance(cfg.instance_path);
  const ExistenceVerdict v = decide(cfg, file.instance, resolve_adversary(cfg, file));
  if (v.answer != Answer::yes) {
    print_verdict(v, std::cerr);
    return exit_for(v.answer);
  }
  write_output(cfg.out_path, io::to_json(*v.code).dump(2) + "\n");
  std::ostream& info = cfg.out_path.empty() ? std::cerr : std::cout;
  info << "construction: " << v.construction << "\n"
       << "length: " << v.code->length() << "\n"
       << "q: " << v.code->q() << (v.field_substituted ? " (enlarged from " + std::to_string(file.instance.q) + ")" : "") << "\n"
       << "K_min: " << k_min(normalize(file.instance)) << "\n";
  try {
    info << "security level: " << security_level_linear(*v.code, cfg.budget) << "\n";
  } catch (const BudgetExceeded&) {
    info << "security level: (column span exceeds budget)\n";
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const io::InstanceFile file = io::load_instance(cfg.instance_path);
  const Code code = io::load_code(cfg.code_path);
  const AccessStructure acc = resolve_adversary(cfg, file);
  const VerificationReport report = verify(code, file.instance, acc, cfg.b, {cfg.budget, 1});
  if (cfg.json) {
    std::cout << io::to_json(report, cfg.b).dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < report.decodable.size(); ++i) {
      std::cout << "receiver " << i + 1 << ": " << (report.decodable[i] ? "decodes" : "CANNOT decode") << "\n";
    }
    for (const PairReport& p : report.security.pairs) {
      if (p.uniform) continue;
      std::cout << "leak: A=" << format_set(p.access) << " reveals information about X_" << format_set(p.block)
                << " (H=" << p.h_block_bits << " bits, H|view=" << p.h_block_given_view_bits << " bits)\n";
    }
    std::cout << "secure: " << (report.security.secure ? "yes" : "no") << "\n";
  }
  return report.ok() ? kOk : kNo;
}

std::vector<Symbol> read_symbols(std::istream& in) {
  std::vector<Symbol> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.front() == '-' || v > UINT32_MAX) throw ParseError("not a field symbol: '" + tok + "'");
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

void print_row(std::span<const Symbol> row) {
  for (std::size_t k = 0; k < row.size(); ++k) std::cout << (k ? " " : "") << row[k];
  std::cout << "\n";
}

int cmd_encode(const RunConfig& cfg) {
  const Code code = io::load_code(cfg.code_path);
  std::size_t key_len = code.key_dimension();
  if (const TableCode* t = code.as_table(); t && t->key_alphabet > 1) key_len = 1;
  const std::size_t record = code.messages() + key_len;
  const std::vector<Symbol> symbols = read_symbols(std::cin);
  if (record == 0 || symbols.size() % record != 0) {
    throw ParseError("encode: input must be groups of " + std::to_string(record) + " symbols (m messages then key)");
  }
  for (std::size_t at = 0; at < symbols.size(); at += record) {
    std::span<const Symbol> all(symbols.data() + at, record);
    print_row(encode(code, all.first(code.messages()), all.subspan(code.messages())));
  }
  return kOk;
}

int cmd_decode(const RunConfig& cfg) {
  const io::InstanceFile file = io::load_instance(cfg.instance_path);
  const Code code = io::load_code(cfg.code_path);
  const Receiver& r = file.instance.receiver(cfg.receiver);
  const std::size_t record = code.length() + r.knows.size();
  const std::vector<Symbol> symbols = read_symbols(std::cin);
  if (record == 0 || symbols.size() % record != 0) {
    throw ParseError("decode: input must be groups of " + std::to_string(record) + " symbols (codeword then side information)");
  }
  for (std::size_t at = 0; at < symbols.size(); at += record) {
    std::span<const Symbol> all(symbols.data() + at, record);
    for (Symbol s : all) {
      if (s >= code.q()) throw ParseError("decode: symbol " + std::to_string(s) + " is not in GF(" + std::to_string(code.q()) + ")");
    }
    const auto wanted = decode(code, file.instance, cfg.receiver, all.first(code.length()), all.subspan(code.length()));
    if (!wanted) {
      std::cerr << "receiver " << cfg.receiver << " cannot decode its wanted messages from this code\n";
      return kNo;
    }
    print_row(*wanted);
  }
  return kOk;
}

int cmd_graph(const RunConfig& cfg) {
  const io::InstanceFile file = io::load_instance(cfg.instance_path);
  std::optional<AccessStructure> acc;
  if (cfg.t_level || !cfg.access.empty() || file.adversary) acc = resolve_adversary(cfg, file);
  const BipartiteGraph g = build_graph(file.instance, acc.value_or(AccessStructure::explicit_sets({})));
  write_output(cfg.dot_path, to_dot(g));
  if (!cfg.dot_path.empty()) std::cout << "acyclic: " << (is_acyclic(g) ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_search(const RunConfig& cfg) {
  const io::InstanceFile file = io::load_instance(cfg.instance_path);
  const AccessStructure acc = resolve_adversary(cfg, file);
  const std::optional<Code> code = search_linear(file.instance, acc, cfg.length, {cfg.budget, 1}, cfg.b);
  if (!code) {
    if (cfg.json) {
      std::cout << json{{"found", false}, {"length", cfg.length}}.dump(2) << "\n";
    } else {
      std::cout << "no linear code of length " << cfg.length << " over GF(" << file.instance.q << ") passes\n";
    }
    return kNo;
  }
  if (cfg.json) {
    std::cout << json{{"found", true}, {"length", cfg.length}, {"code", io::to_json(*code)}}.dump(2) << "\n";
  } else {
    write_output(cfg.out_path, io::to_json(*code).dump(2) + "\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure index coding: existence, construction and exhaustive verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_instance = [&](CLI::App* sub) { sub->add_option("--instance", cfg.instance_path, "instance JSON file")->required(); };
  auto add_adversary = [&](CLI::App* sub) {
    auto* t = sub->add_option("--t-level", cfg.t_level, "eavesdropper knows any t messages");
    auto* a = sub->add_option("--access", cfg.access, "explicit access sets, e.g. '[[3,4]]'");
    t->excludes(a);
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", cfg.budget, "maximum enumerated states")->check(CLI::PositiveNumber);
  };
  auto add_b = [&](CLI::App* sub) { sub->add_option("--b", cfg.b, "block size for b-block security")->check(CLI::PositiveNumber); };

  auto* analyze = app.add_subcommand("analyze", "decide whether a secure index code exists");
  add_instance(analyze);
  add_adversary(analyze);
  add_b(analyze);
  analyze->add_flag("--json", cfg.json, "JSON output");

  auto* construct = app.add_subcommand("construct", "build a secure code and write it as JSON");
  add_instance(construct);
  add_adversary(construct);
  add_b(construct);
  add_budget(construct);
  construct->add_option("--out", cfg.out_path, "code file to write (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "exhaustively check decodability and security of a code");
  add_instance(verify_cmd);
  verify_cmd->add_option("--code", cfg.code_path, "code JSON file")->required();
  add_adversary(verify_cmd);
  add_b(verify_cmd);
  add_budget(verify_cmd);
  verify_cmd->add_flag("--json", cfg.json, "JSON report");

  auto* encode_cmd = app.add_subcommand("encode", "encode whitespace-separated message symbols from stdin");
  encode_cmd->add_option("--code", cfg.code_path, "code JSON file")->required();

  auto* decode_cmd = app.add_subcommand("decode", "decode codeword + side-information symbols from stdin");
  add_instance(decode_cmd);
  decode_cmd->add_option("--code", cfg.code_path, "code JSON file")->required();
  decode_cmd->add_option("--receiver", cfg.receiver, "1-based receiver index")->required();

  auto* graph = app.add_subcommand("graph", "export the directed bipartite graph as DOT");
  add_instance(graph);
  add_adversary(graph);
  graph->add_option("--dot", cfg.dot_path, "DOT file to write (default stdout)");

  auto* search = app.add_subcommand("search", "exhaustive search over linear codes of a given length");
  add_instance(search);
  add_adversary(search);
  add_b(search);
  add_budget(search);
  search->add_option("--length", cfg.length, "codelength l")->required();
  search->add_option("--out", cfg.out_path, "code file to write (default stdout)");
  search->add_flag("--json", cfg.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(cfg);
    if (*construct) return cmd_construct(cfg);
    if (*verify_cmd) return cmd_verify(cfg);
    if (*encode_cmd) return cmd_encode(cfg);
    if (*decode_cmd) return cmd_decode(cfg);
    if (*graph) return cmd_graph(cfg);
    if (*search) return cmd_search(cfg);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const NoSecureCode& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
