// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace secidx;
using namespace secidx::testing;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

AccessStructure sets(std::vector<IndexSet> s) { return AccessStructure::explicit_sets(std::move(s)); }

bool secure_at(const Code& code, const Instance& inst, const AccessStructure& acc, std::size_t b = 1) {
  return check_security(code, inst, acc, b).secure;
}

Instance at_field(Instance inst, Symbol q) {
  inst.q = q;
  return inst;
}

// Random normalized instance with K_min >= 1 over the given field.
Instance grid_instance(std::mt19937_64& rng, std::size_t m) { return random_instance(rng, next_prime(m), m, 1); }

std::vector<Instance> instance_grid() {
  std::mt19937_64 rng(2024);
  std::vector<Instance> out;
  for (std::size_t m = 2; m <= 5; ++m)
    for (int k = 0; k < 12; ++k) out.push_back(grid_instance(rng, m));
  return out;
}

// Codes passing some TLevel(t) in criteria 1 and 2, for the monotonicity check.
std::vector<std::pair<Code, Instance>> monotonicity_corpus;

void criterion_1(Check& c) {
  for (Symbol q : {2u, 3u}) {
    const Instance inst = four_receivers(q);
    const Code pairs = pair_sums_code(q), chained = chained_code(q);
    const std::string at = " (q=" + std::to_string(q) + ")";
    c.require(all_true(check_decodability(pairs, inst)), "pair-sum code not decodable" + at);
    c.require(all_true(check_decodability(chained, inst)), "chained code not decodable" + at);
    c.require(secure_at(pairs, inst, sets({{3, 4}})), "pair-sum code insecure vs {3,4}" + at);
    c.require(!secure_at(pairs, inst, sets({{3}})), "pair-sum code secure vs {3}" + at);
    c.require(secure_at(chained, inst, sets({{3}})), "chained code insecure vs {3}" + at);
    c.require(!secure_at(chained, inst, sets({{3, 4}})), "chained code secure vs {3,4}" + at);
    for (const Code& code : {pairs, chained}) {
      for (std::size_t t = 0; t < 4; ++t) {
        if (secure_at(code, inst, AccessStructure::t_level(t))) monotonicity_corpus.push_back({code, inst});
      }
    }
  }
}

void criterion_2(Check& c) {
  for (const Instance& inst : instance_grid()) {
    const std::size_t kmin = k_min(inst);
    const MdsConstruction mds = construct_mds(inst);
    c.require(!mds.field_substituted, "grid field too small");
    c.require(all_true(check_decodability(mds.code, inst)), "MDS code not decodable");
    for (std::size_t t = 0; t < kmin; ++t) {
      const bool ok = secure_at(mds.code, inst, AccessStructure::t_level(t));
      c.require(ok, "MDS code insecure at t=" + std::to_string(t) + " with m=" + std::to_string(inst.m));
      if (ok) monotonicity_corpus.push_back({mds.code, inst});
    }
  }
}

void criterion_3(Check& c) {
  std::mt19937_64 rng(99);
  std::size_t instances = 0;
  for (const Instance& inst : instance_grid()) {
    const std::size_t kmin = k_min(inst);
    for (std::size_t t = kmin; t < inst.m; ++t) {
      ++instances;
      const ExistenceVerdict v = decide_tlevel(inst, t);
      c.require(v.answer == Answer::no && v.reasons.size() == 1, "decide_tlevel did not say No");
      if (v.answer != Answer::no) continue;
      const auto* leak = std::get_if<LeakCertificate>(&v.reasons[0]);
      c.require(leak != nullptr, "No verdict without a leak certificate");
      if (leak == nullptr) continue;
      const Receiver& r = inst.receiver(leak->receiver);
      c.require(leak->access.size() == t && is_subset(r.knows, leak->access) && contains(r.wants, leak->message) &&
                    !contains(leak->access, leak->message) && certificate_holds(inst, *leak),
                "certificate is not a K_i in A, j outside A pattern");

      // 50 random decodable linear codes, all insecure at this t.
      std::size_t found = 0, tries = 0;
      while (found < 50 && tries < 20000) {
        ++tries;
        std::uniform_int_distribution<std::size_t> len(inst.m - kmin, inst.m);
        const Code code = Code::linear(random_matrix(rng, inst.q, inst.m, len(rng)));
        const StateSpace space(code, {});
        if (!all_true(check_decodability(space, inst))) continue;
        ++found;
        c.require(!check_security(space, AccessStructure::t_level(t), 1).secure, "decodable code secure above K_min");
      }
      c.require(found == 50, "only " + std::to_string(found) + " decodable random codes found");
    }
  }
  c.require(instances > 0, "empty grid");
}

void criterion_4(Check& c) {
  c.require(!monotonicity_corpus.empty(), "no codes collected from criteria 1-2");
  for (const auto& [code, inst] : monotonicity_corpus) {
    bool previous = true;
    for (std::size_t t = 0; t < inst.m; ++t) {
      const bool now = secure_at(code, inst, AccessStructure::t_level(t));
      c.require(previous || !now, "secure at t=" + std::to_string(t) + " but not below");
      previous = now;
    }
  }
}

struct RandomizedCase {
  Instance inst;
  std::vector<std::vector<Symbol>> g;
  std::vector<std::vector<Symbol>> g_tilde;
};

std::vector<RandomizedCase> randomized_corpus() {
  const Instance ex = spare_key();
  const Instance three{3, 3, {{{1, 2}, {3}}, {{2, 3}, {1}}}};
  const Instance pair3{3, 2, {{{2}, {1}}}};
  const Instance swap5{5, 2, {{{2}, {1}}, {{1}, {2}}}};
  const Instance chain{2, 3, {{{2}, {1}}, {{1, 2}, {3}}}};
  const Instance comp{5, 4, {{{1, 2}, {3, 4}}, {{3, 4}, {1, 2}}}};
  return {
      // [X1 + X2 + Y, Y]
      {ex, {{1, 0}, {1, 0}}, {{1, 1}}},
      // [X1 + X2, Y]
      {ex, {{1, 0}, {1, 0}}, {{0, 1}}},
      {three, {{1, 0}, {1, 0}, {1, 0}}, {{1, 1}}},
      {pair3, {{1, 0}, {0, 1}}, {{1, 1}}},
      {swap5, {{1, 0}, {0, 1}}, {{2, 1}}},
      {four_receivers(), {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0}}, {{0, 0, 1}}},
      {four_receivers(3), {{1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 1, 0}}, {{1, 1, 1}}},
      {chain, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}, {{1, 1, 0, 0}, {0, 0, 1, 1}}},
      {comp, {{1, 0, 0}, {1, 1, 0}, {1, 2, 0}, {1, 3, 0}}, {{1, 4, 1}}},
      {at_field(three, 2), {{1, 1, 0}, {1, 0, 1}, {1, 1, 1}}, {{0, 1, 1}}},
      {at_field(ex, 3), {{1, 2, 0}, {1, 2, 0}}, {{1, 1, 1}, {0, 1, 1}}},
  };
}

void criterion_5(Check& c) {
  std::size_t n = 0;
  for (const RandomizedCase& rc : randomized_corpus()) {
    const PrimeField f(rc.inst.q);
    const Code rnd = Code::linear_random(FieldMatrix::from_rows(f, rc.g), FieldMatrix::from_rows(f, rc.g_tilde));
    const std::string tag = "case " + std::to_string(++n) + ": ";
    const auto witness = find_witness(rnd, rc.inst);
    c.require(witness.has_value(), tag + "no linear decoder");
    if (!witness) continue;
    check_witness(rnd, rc.inst, *witness);
    c.require(all_true(check_decodability(rnd, rc.inst)), tag + "randomized code not decodable");
    const Derandomized d = derandomize_detailed(rnd, rc.inst, *witness);
    c.require(d.code.length() <= rnd.length(), tag + "derandomized code is longer");
    c.require(all_true(check_decodability(d.code, rc.inst)), tag + "derandomized code not decodable");
    check_witness(d.code, rc.inst, d.witness);

    std::vector<AccessStructure> adversaries;
    for (std::size_t t = 0; t < rc.inst.m; ++t) adversaries.push_back(AccessStructure::t_level(t));
    for (std::size_t k = 0; k <= rc.inst.m; ++k)
      for (const IndexSet& a : combinations(full_set(rc.inst.m), k)) adversaries.push_back(sets({a}));
    for (const AccessStructure& acc : adversaries) {
      if (secure_at(rnd, rc.inst, acc)) c.require(secure_at(d.code, rc.inst, acc), tag + "security lost");
    }
  }
  c.require(n >= 10, "corpus smaller than 10");
}

void criterion_6(Check& c) {
  const std::vector<std::pair<Instance, AccessStructure>> cases{
      {{2, 2, {{{1}, {2}}}}, sets({{}})},
      {{2, 3, {{{1, 2}, {3}}, {{2, 3}, {1}}}}, AccessStructure::t_level(1)},
      {{2, 3, {{{1}, {2, 3}}, {{2, 3}, {1}}}}, AccessStructure::t_level(0)},
      {{2, 4, {{{1, 2, 3}, {4}}, {{2, 3, 4}, {1}}, {{1, 3, 4}, {2}}}}, AccessStructure::t_level(2)},
      {{2, 4, {{{1, 2}, {3, 4}}, {{3, 4}, {1}}}}, sets({{1}})},
  };
  for (const auto& [inst, acc] : cases) {
    const LengthBounds bounds = length_bounds(inst, acc);
    const std::size_t target = inst.m - k_min(inst);
    c.require(bounds.lower == target && bounds.upper == target, "bounds do not pin m - K_min");
    const auto found = search_linear(inst, acc, target);
    c.require(found.has_value(), "no code at length m - K_min for m=" + std::to_string(inst.m));
    if (found) c.require(verify(*found, inst, acc).ok(), "search returned a failing code");
    c.require(!search_linear(inst, acc, target - 1), "code shorter than m - K_min found");
  }
}

void criterion_7(Check& c) {
  const Instance stripped = strip_unwanted(spare_key());
  const ExistenceVerdict no = decide_general(stripped, sets({{}}));
  c.require(no.answer == Answer::no && !no.reasons.empty() && std::holds_alternative<AcyclicCertificate>(no.reasons[0]),
            "stripped instance not No(Acyclic)");
  if (!no.reasons.empty()) {
    if (const auto* a = std::get_if<AcyclicCertificate>(&no.reasons[0])) {
      c.require(certificate_holds(stripped, sets({{}}), *a), "acyclic certificate does not hold");
    }
  }
  const ExistenceVerdict yes = decide_general(spare_key(), sets({{}}));
  c.require(yes.answer == Answer::yes && yes.code.has_value(), "unstripped instance not Yes");
  if (yes.code) {
    c.require(yes.code->generator().to_rows() == std::vector<std::vector<Symbol>>{{1}, {1}}, "certificate is not X1+X2");
    c.require(verify(*yes.code, spare_key(), sets({{}})).ok(), "X1+X2 fails the oracle");
  }
}

void criterion_8(Check& c) {
  const std::vector<Instance> cases{
      {5, 4, {{{1, 2, 3}, {4}}, {{2, 3, 4}, {1}}, {{1, 3, 4}, {2}}}},
      {5, 4, {{{1, 2, 3}, {4}}, {{1, 2, 4}, {3}}}},
      {5, 4, {{{2, 3, 4}, {1}}}},
  };
  for (const Instance& inst : cases) {
    c.require(k_min(inst) == 3, "K_min != 3");
    const ExistenceVerdict yes = decide_tlevel(inst, 1, 2);
    c.require(yes.answer == Answer::yes && yes.code, "t=1, b=2 not Yes");
    if (yes.code) c.require(verify(*yes.code, inst, AccessStructure::t_level(1), 2).ok(), "Yes certificate fails b=2 oracle");
    const ExistenceVerdict no = decide_tlevel(inst, 2, 2);
    c.require(no.answer == Answer::no, "t=2, b=2 not No");
    if (no.answer != Answer::no) continue;
    const auto& leak = std::get<LeakCertificate>(no.reasons[0]);
    c.require(certificate_holds(inst, leak) && leak.block.size() == 2, "b=2 certificate malformed");
    // The named (A, B) pair leaks for the MDS code, which decodes.
    const Code mds = construct_mds(inst).code;
    bool leaked = false;
    for (const PairReport& p : check_security(mds, inst, sets({leak.access}), 2).pairs) {
      if (p.block == leak.block) leaked = !p.uniform;
    }
    c.require(leaked, "certificate pair does not leak under the oracle");
  }
}

void criterion_9(Check& c) {
  for (std::size_t m = 1; m <= 6; ++m) {
    const Symbol q = next_prime(m);
    for (std::size_t kmin = 0; kmin + 1 <= m; ++kmin) {
      const long level = security_level_linear(Code::linear(vandermonde(m, m - kmin, q)));
      c.require(level == static_cast<long>(kmin) - 1,
                "m=" + std::to_string(m) + " K_min=" + std::to_string(kmin) + " level=" + std::to_string(level));
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "four-receiver pair-sum and chained codes over GF(2) and GF(3)", 1.0, criterion_1},
      {2, "MDS construction secure below K_min on grid", 60.0, criterion_2},
      {3, "no secure code at t >= K_min on grid", 0.0, criterion_3},
      {4, "security monotone in t-level", 0.0, criterion_4},
      {5, "derandomization dominates", 0.0, criterion_5},
      {6, "optimal length m - K_min by exhaustive search", 120.0, criterion_6},
      {7, "acyclic impossibility and X1+X2", 0.0, criterion_7},
      {8, "b-block threshold t <= K_min - b", 0.0, criterion_8},
      {9, "MDS security level K_min - 1", 0.0, criterion_9},
  };

  bool all = true;
  for (const Criterion& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_s > 0 && secs >= cr.limit_s) check.require(false, "runtime over limit");
    all = all && check.ok;
    std::printf("%s %d %s (%.3fs%s)%s%s\n", check.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                cr.limit_s > 0 ? (", limit " + std::to_string(static_cast<int>(cr.limit_s)) + "s").c_str() : "",
                check.ok ? "" : ": ", check.detail.str().c_str());
  }
  return all ? 0 : 1;
}
