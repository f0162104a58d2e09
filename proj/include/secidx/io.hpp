#pragma once

// JSON readers and writers for instance, code, report and verdict files.
// Indices in every file are 1-based.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "secidx/analysis.hpp"
#include "secidx/codes.hpp"
#include "secidx/errors.hpp"
#include "secidx/model.hpp"
#include "secidx/oracle.hpp"

namespace secidx::io {

using json = nlohmann::json;

struct InstanceFile {
  Instance instance;
  std::optional<AccessStructure> adversary;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline std::uint64_t non_negative(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  const std::int64_t x = v.get<std::int64_t>();
  if (x < 0) throw ParseError(where + ": expected a non-negative integer, got " + std::to_string(x));
  return static_cast<std::uint64_t>(x);
}

inline IndexSet index_set(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of indices");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::uint64_t x = non_negative(v[k], where + "[" + std::to_string(k) + "]");
    if (x < 1) throw ParseError(where + "[" + std::to_string(k) + "]: indices are 1-based");
    out.push_back(static_cast<std::size_t>(x));
  }
  return make_set(std::move(out));
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

inline FieldMatrix matrix(const json& v, PrimeField f, const std::string& where, std::size_t cols_if_empty = 0) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of rows");
  std::vector<std::vector<Symbol>> rows;
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!v[r].is_array()) throw ParseError(rw + ": expected a row array");
    std::vector<Symbol> row;
    for (std::size_t c = 0; c < v[r].size(); ++c) {
      const std::uint64_t x = non_negative(v[r][c], rw + "[" + std::to_string(c) + "]");
      if (x >= f.size()) throw ParseError(rw + "[" + std::to_string(c) + "]: " + std::to_string(x) + " is not in GF(" + std::to_string(f.size()) + ")");
      row.push_back(static_cast<Symbol>(x));
    }
    rows.push_back(std::move(row));
  }
  try {
    return FieldMatrix::from_rows(f, rows, cols_if_empty);
  } catch (const StructuralError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

inline AccessStructure access_from_json(const json& v, const std::string& where = "adversary") {
  const json& type = detail::field(v, "type", where);
  if (type == "t_level") return AccessStructure::t_level(detail::non_negative(detail::field(v, "t", where), where + ".t"));
  if (type == "explicit") {
    const json& sets = detail::field(v, "sets", where);
    if (!sets.is_array()) throw ParseError(where + ".sets: expected an array");
    std::vector<IndexSet> out;
    for (std::size_t k = 0; k < sets.size(); ++k) out.push_back(detail::index_set(sets[k], where + ".sets[" + std::to_string(k) + "]"));
    return AccessStructure::explicit_sets(std::move(out));
  }
  throw ParseError(where + ".type: expected \"t_level\" or \"explicit\"");
}

/// `[[3,4],[1]]` shorthand for an explicit structure.
inline AccessStructure access_from_sets_text(const std::string& text) {
  const json v = detail::parse_text(text, "--access");
  if (!v.is_array()) throw ParseError("--access: expected an array of index arrays");
  std::vector<IndexSet> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(detail::index_set(v[k], "--access[" + std::to_string(k) + "]"));
  return AccessStructure::explicit_sets(std::move(out));
}

inline json to_json(const AccessStructure& acc) {
  if (acc.is_t_level()) return {{"type", "t_level"}, {"t", acc.level()}};
  return {{"type", "explicit"}, {"sets", acc.sets()}};
}

inline InstanceFile instance_from_json(const json& v) {
  InstanceFile out;
  const std::uint64_t q = detail::non_negative(detail::field(v, "q", "instance"), "instance.q");
  if (!is_prime(q)) throw ParseError("instance.q: " + std::to_string(q) + " is not prime");
  out.instance.q = static_cast<Symbol>(q);
  out.instance.m = detail::non_negative(detail::field(v, "m", "instance"), "instance.m");
  const json& rs = detail::field(v, "receivers", "instance");
  if (!rs.is_array()) throw ParseError("instance.receivers: expected an array");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::string where = "instance.receivers[" + std::to_string(i) + "]";
    out.instance.receivers.push_back({detail::index_set(detail::field(rs[i], "knows", where), where + ".knows"),
                                      detail::index_set(detail::field(rs[i], "wants", where), where + ".wants")});
  }
  for (const std::string& violation : validate(out.instance)) {
    if (violation.find("out of range") != std::string::npos || violation.find("m must") != std::string::npos) {
      throw ParseError("instance: " + violation);
    }
  }
  if (v.contains("adversary") && !v["adversary"].is_null()) out.adversary = access_from_json(v["adversary"]);
  return out;
}

inline InstanceFile parse_instance(const std::string& text, const std::string& source = "instance") {
  const json v = detail::parse_text(text, source);
  try {
    return instance_from_json(v);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline InstanceFile load_instance(const std::string& path) { return parse_instance(detail::read_file(path), path); }

inline json to_json(const Instance& inst, const std::optional<AccessStructure>& adversary = std::nullopt) {
  json rs = json::array();
  for (const Receiver& r : inst.receivers) rs.push_back({{"knows", r.knows}, {"wants", r.wants}});
  json out = {{"q", inst.q}, {"m", inst.m}, {"receivers", rs}};
  if (adversary) out["adversary"] = to_json(*adversary);
  return out;
}

inline Code code_from_json(const json& v) {
  const json& kind = detail::field(v, "kind", "code");
  const std::uint64_t q = detail::non_negative(detail::field(v, "q", "code"), "code.q");
  if (!is_prime(q)) throw ParseError("code.q: " + std::to_string(q) + " is not prime");
  const PrimeField f(q);
  if (kind == "linear_det" || kind == "linear_rand") {
    FieldMatrix g = detail::matrix(detail::field(v, "G", "code"), f, "code.G");
    const bool has_tilde = v.contains("Gtilde") && !v["Gtilde"].is_null();
    if (kind == "linear_det") {
      if (has_tilde) throw ParseError("code.Gtilde: a linear_det code has no key matrix");
      return Code::linear(std::move(g));
    }
    if (!has_tilde) throw ParseError("code: linear_rand requires \"Gtilde\" (k rows, one per key symbol)");
    FieldMatrix gt = detail::matrix(v["Gtilde"], f, "code.Gtilde", g.cols());
    if (gt.cols() != g.cols()) throw ParseError("code.Gtilde: has " + std::to_string(gt.cols()) + " columns, G has " + std::to_string(g.cols()));
    return Code::linear_random(std::move(g), std::move(gt));
  }
  if (kind == "table") {
    const std::size_t m = detail::non_negative(detail::field(v, "m", "code"), "code.m");
    const std::size_t length = detail::non_negative(detail::field(v, "length", "code"), "code.length");
    const std::uint64_t keys = v.contains("keys") ? detail::non_negative(v["keys"], "code.keys") : 1;
    const FieldMatrix rows = detail::matrix(detail::field(v, "entries", "code"), f, "code.entries", length);
    if (rows.rows() > 0 && rows.cols() != length) throw ParseError("code.entries: rows must have `length` symbols");
    try {
      return Code::table(static_cast<Symbol>(q), m, length, keys, {rows.entries().begin(), rows.entries().end()});
    } catch (const StructuralError& e) {
      throw ParseError(std::string("code.entries: ") + e.what());
    }
  }
  throw ParseError("code.kind: expected \"linear_det\", \"linear_rand\" or \"table\"");
}

inline Code parse_code(const std::string& text, const std::string& source = "code") {
  const json v = detail::parse_text(text, source);
  try {
    return code_from_json(v);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline Code load_code(const std::string& path) { return parse_code(detail::read_file(path), path); }

inline json to_json(const Code& code) {
  if (const TableCode* t = code.as_table()) {
    json rows = json::array();
    for (std::size_t r = 0; r * t->length < t->entries.size() && t->length > 0; ++r) {
      rows.push_back(std::vector<Symbol>(t->entries.begin() + static_cast<std::ptrdiff_t>(r * t->length),
                                         t->entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * t->length)));
    }
    return {{"kind", "table"}, {"q", t->q}, {"m", t->m}, {"length", t->length}, {"keys", t->key_alphabet}, {"entries", rows}};
  }
  json out = {{"kind", code.as_randomized() ? "linear_rand" : "linear_det"},
              {"q", code.q()},
              {"G", code.generator().to_rows()}};
  if (code.as_randomized()) out["Gtilde"] = code.key_generator().to_rows();
  return out;
}

inline json to_json(const VerificationReport& report, std::size_t b) {
  json pairs = json::array();
  for (const PairReport& p : report.security.pairs) {
    pairs.push_back({{"A", p.access},
                     {"B", p.block},
                     {"uniform", p.uniform},
                     {"H_B_bits", p.h_block_bits},
                     {"H_B_given_CA_bits", p.h_block_given_view_bits}});
  }
  return {{"secure", report.security.secure},
          {"decodable", report.decodable},
          {"b", b},
          {"key_distribution", "uniform"},
          {"pairs", pairs}};
}

inline json to_json(const Certificate& c) {
  if (const auto* leak = std::get_if<LeakCertificate>(&c)) {
    return {{"type", "leak"}, {"receiver", leak->receiver}, {"A", leak->access}, {"message", leak->message}, {"B", leak->block}};
  }
  const auto& acyclic = std::get<AcyclicCertificate>(c);
  json order = json::array();
  for (const Vertex& v : acyclic.order) order.push_back(v.label());
  return {{"type", "acyclic"}, {"order", order}};
}

inline json to_json(const ExistenceVerdict& v) {
  json cert = json::object();
  if (v.answer == Answer::yes && v.code) {
    cert = {{"construction", v.construction}, {"field_substituted", v.field_substituted}, {"code", to_json(*v.code)}};
  } else if (v.answer == Answer::no) {
    json reasons = json::array();
    for (const Certificate& c : v.reasons) reasons.push_back(to_json(c));
    cert = {{"reasons", reasons}};
  } else {
    cert = {{"note", v.note}};
  }
  json bounds = {{"lower", nullptr}, {"upper", nullptr}};
  if (v.bounds.lower) bounds["lower"] = *v.bounds.lower;
  if (v.bounds.upper) bounds["upper"] = *v.bounds.upper;
  if (!v.bounds.note.empty()) bounds["note"] = v.bounds.note;
  return {{"answer", to_string(v.answer)}, {"certificate", cert}, {"bounds", bounds}};
}

}  // namespace secidx::io
