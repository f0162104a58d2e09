#include <gtest/gtest.h>

#include "support.hpp"

using namespace secidx;
using namespace secidx::testing;

TEST(Properties, FieldAxioms) {
  for (Symbol q : {2u, 3u, 5u, 7u}) {
    const PrimeField f(q);
    for (Symbol a = 0; a < q; ++a) {
      EXPECT_EQ(f.add(a, f.neg(a)), 0u);
      if (a != 0) {
        EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      }
      for (Symbol b = 0; b < q; ++b) {
        EXPECT_EQ(f.add(a, b), f.add(b, a));
        EXPECT_EQ(f.mul(a, b), f.mul(b, a));
        EXPECT_EQ(f.sub(f.add(a, b), b), a);
        for (Symbol c = 0; c < q; ++c) {
          EXPECT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
          EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
          EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST(Properties, NormalizeIdempotent) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    Instance inst = random_instance(rng, 2, 4);
    inst.receivers.push_back({{1, 2}, {2}});
    const Instance once = normalize(inst);
    EXPECT_EQ(normalize(once), once);
    EXPECT_EQ(once.n(), inst.n() - 1);
  }
}

TEST(Properties, AcyclicityMatchesTransitiveClosure) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) {
    const Instance inst = random_instance(rng, 2, 1 + k % 4, 0);
    const BipartiteGraph g = build_graph(inst, AccessStructure::t_level(0));
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const Arc& a : g.arcs) reach[g.id(a.from)][g.id(a.to)] = true;
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
          if (reach[u][w] && reach[w][v]) reach[u][v] = true;
    bool cycle = false;
    for (std::size_t v = 0; v < n; ++v) cycle = cycle || reach[v][v];
    EXPECT_EQ(is_acyclic(g), !cycle);
  }
}

TEST(Properties, SecurityMonotoneInLevel) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 120; ++k) {
    const Symbol q = k % 2 ? 3 : 2;
    const std::size_t m = 2 + k % 3;
    const std::size_t l = 1 + k % m;
    const Code code = k % 5 == 0 ? Code::linear_random(random_matrix(rng, q, m, l), random_matrix(rng, q, 1, l))
                                 : Code::linear(random_matrix(rng, q, m, l));
    const Instance none{q, m, {}};
    std::vector<bool> secure;
    for (std::size_t t = 0; t < m; ++t) secure.push_back(check_security(code, none, AccessStructure::t_level(t)).secure);
    for (std::size_t t = 1; t < m; ++t) {
      if (secure[t]) {
        EXPECT_TRUE(secure[t - 1]) << "k=" << k << " t=" << t;
      }
    }
  }
}

TEST(Properties, LeakPatternForcesInsecurity) {
  std::mt19937_64 rng(4);
  int decodable_seen = 0;
  for (int k = 0; k < 400; ++k) {
    const Symbol q = k % 3 == 0 ? 3 : 2;
    const std::size_t m = 3 + k % 2;
    const Instance inst = random_instance(rng, q, m);
    const Code code = Code::linear(random_matrix(rng, q, m, 1 + k % m));
    if (!all_true(check_decodability(code, inst))) continue;
    for (std::size_t t = 0; t < m; ++t) {
      const auto acc = AccessStructure::t_level(t);
      if (find_leak(inst, acc)) {
        ++decodable_seen;
        EXPECT_FALSE(check_security(code, inst, acc).secure);
      }
    }
  }
  EXPECT_GT(decodable_seen, 10);
}

TEST(Properties, GapNeverNegative) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 60; ++k) {
    const Code code = Code::linear(random_matrix(rng, 3, 3, 1 + k % 3));
    for (const PairReport& p : check_security(code, Instance{3, 3, {}}, AccessStructure::t_level(k % 3)).pairs) {
      EXPECT_GE(p.gap_bits(), -1e-9);
    }
  }
}

TEST(Properties, SecurityLevelIsExactThreshold) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 150; ++k) {
    const Symbol q = k % 2 ? 3 : 2;
    const std::size_t m = 2 + k % 3;
    const Code code = Code::linear(random_matrix(rng, q, m, k % (m + 1)));
    const long level = security_level_linear(code);
    const Instance none{q, m, {}};
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t b = 1; b <= m - t; ++b) {
        const bool secure = check_security(code, none, AccessStructure::t_level(t), b).secure;
        // b-block security at level t iff t + b - 1 <= level.
        EXPECT_EQ(secure, static_cast<long>(t + b) - 1 <= level) << "k=" << k << " t=" << t << " b=" << b;
      }
    }
  }
}

TEST(Properties, DecideTLevelThreshold) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 60; ++k) {
    const std::size_t m = 2 + k % 4;
    const Instance inst = random_instance(rng, next_prime(m), m);
    bool seen_no = false;
    for (std::size_t t = 0; t < m; ++t) {
      const ExistenceVerdict v = decide_tlevel(inst, t);
      if (seen_no) {
        EXPECT_EQ(v.answer, Answer::no);
      }
      seen_no = seen_no || v.answer == Answer::no;
      if (v.answer == Answer::no) {
        EXPECT_TRUE(certificate_holds(inst, std::get<LeakCertificate>(v.reasons[0])));
      }
    }
  }
}

TEST(Properties, AcyclicInstancesHaveNoLinearCode) {
  const std::vector<Instance> tiny{
      {2, 2, {{{}, {1}}, {{1}, {2}}}},
      {2, 3, {{{}, {1}}, {{1}, {2, 3}}}},
      {2, 3, {{{}, {1, 2}}, {{1, 2}, {3}}}},
  };
  for (const Instance& inst : tiny) {
    const auto acc = AccessStructure::t_level(1);
    ASSERT_EQ(decide_general(inst, acc).answer, Answer::no);
    for (std::size_t l = 0; l <= inst.m && inst.m * l <= 12; ++l) EXPECT_FALSE(search_linear(inst, acc, l));
  }
}

TEST(Properties, DerandomizationDominates) {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int k = 0; k < 300 && checked < 40; ++k) {
    const Symbol q = k % 2 ? 3 : 2;
    const std::size_t m = 2 + k % 2;
    const std::size_t l = 2 + k % 2;
    const Instance inst = random_instance(rng, q, m);
    const Code rnd = Code::linear_random(random_matrix(rng, q, m, l), random_matrix(rng, q, 1, l));
    const auto w = find_witness(rnd, inst);
    if (!w) continue;
    ++checked;
    const Code det = derandomize(rnd, inst, *w);
    EXPECT_LE(det.length(), rnd.length());
    EXPECT_TRUE(all_true(check_decodability(det, inst)));
    for (std::size_t t = 0; t < m; ++t) {
      const auto acc = AccessStructure::t_level(t);
      if (check_security(rnd, inst, acc).secure) {
        EXPECT_TRUE(check_security(det, inst, acc).secure);
      }
    }
  }
  EXPECT_GE(checked, 20);
}

TEST(Properties, YesVerdictsPassOracle) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 40; ++k) {
    const std::size_t m = 2 + k % 3;
    const Instance inst = random_instance(rng, next_prime(m), m);
    const std::vector<IndexSet> members{IndexSet{static_cast<std::size_t>(1 + k % m)}};
    const auto acc = AccessStructure::explicit_sets(members);
    const ExistenceVerdict v = decide_general(inst, acc);
    if (v.answer != Answer::yes) continue;
    Instance at_q = inst;
    at_q.q = v.code->q();
    EXPECT_TRUE(verify(*v.code, at_q, acc).ok()) << "k=" << k;
  }
}
