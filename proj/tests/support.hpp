#pragma once

// Fixtures and independent brute-force references shared by the test suites.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "secidx/secidx.hpp"

namespace secidx::testing {

inline Instance four_receivers(Symbol q = 2) {
  return {q, 4, {{{2}, {1}}, {{1}, {2}}, {{2, 4}, {3}}, {{2, 3}, {4}}}};
}

inline Instance spare_key() { return {2, 2, {{{2}, {1}}}}; }

inline Code from_rows(Symbol q, const std::vector<std::vector<Symbol>>& rows, std::size_t cols_if_empty = 0) {
  return Code::linear(FieldMatrix::from_rows(PrimeField(q), rows, cols_if_empty));
}

// [X1+X2, X3+X4] and [X1+X2, X2+X3+X4].
inline Code pair_sums_code(Symbol q = 2) { return from_rows(q, {{1, 0}, {1, 0}, {0, 1}, {0, 1}}); }
inline Code chained_code(Symbol q = 2) { return from_rows(q, {{1, 0}, {1, 1}, {0, 1}, {0, 1}}); }

inline std::vector<std::vector<Symbol>> all_vectors(std::size_t len, Symbol q) {
  std::vector<std::vector<Symbol>> out(1);
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<std::vector<Symbol>> next;
    for (const auto& v : out) {
      for (Symbol s = 0; s < q; ++s) {
        auto w = v;
        w.push_back(s);
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Symbol> pick(const std::vector<Symbol>& x, const IndexSet& s) {
  std::vector<Symbol> out;
  for (std::size_t j : s) out.push_back(x[j - 1]);
  return out;
}

// Straight from the definition: two message vectors that agree on K_i and
// produce the same codeword for some keys must agree on W_i.
inline bool brute_decodes(const Code& code, const Receiver& r) {
  std::map<std::pair<std::vector<Symbol>, std::vector<Symbol>>, std::vector<Symbol>> seen;
  std::vector<Symbol> c(code.length());
  for (const auto& x : all_vectors(code.messages(), code.q())) {
    for (std::uint64_t y = 0; y < code.key_states(); ++y) {
      code.encode_state(x, y, c);
      auto [it, fresh] = seen.try_emplace({c, pick(x, r.knows)}, pick(x, r.wants));
      if (!fresh && it->second != pick(x, r.wants)) return false;
    }
  }
  return true;
}

// P(x_B | c, x_A) == P(x_B) for every observed (c, x_A), compared as exact
// rationals by cross-multiplication.
inline bool brute_independent(const Code& code, const IndexSet& a, const IndexSet& b) {
  std::map<std::pair<std::vector<Symbol>, std::vector<Symbol>>, std::map<std::vector<Symbol>, std::uint64_t>> joint;
  std::vector<Symbol> c(code.length());
  for (const auto& x : all_vectors(code.messages(), code.q())) {
    for (std::uint64_t y = 0; y < code.key_states(); ++y) {
      code.encode_state(x, y, c);
      joint[{c, pick(x, a)}][pick(x, b)] += 1;
    }
  }
  std::uint64_t values = 1;
  for (std::size_t k = 0; k < b.size(); ++k) values *= code.q();
  for (const auto& [view, counts] : joint) {
    std::uint64_t total = 0;
    for (const auto& [xb, n] : counts) total += n;
    if (counts.size() != values) return false;
    for (const auto& [xb, n] : counts) {
      if (n * values != total) return false;
    }
  }
  return true;
}

inline bool brute_secure(const Code& code, const std::vector<IndexSet>& access, std::size_t b = 1) {
  for (const IndexSet& a : access) {
    const IndexSet rest = complement(a, code.messages());
    for (const IndexSet& blk : combinations(rest, std::min(b, rest.size()))) {
      if (!blk.empty() && !brute_independent(code, a, blk)) return false;
    }
  }
  return true;
}

inline FieldMatrix random_matrix(std::mt19937_64& rng, Symbol q, std::size_t rows, std::size_t cols) {
  FieldMatrix g(PrimeField(q), rows, cols);
  std::uniform_int_distribution<Symbol> d(0, q - 1);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) g.set(r, c, d(rng));
  return g;
}

// Random normalized instance: every receiver knows at least `min_known`
// messages and wants at least one it does not know.
inline Instance random_instance(std::mt19937_64& rng, Symbol q, std::size_t m, std::size_t min_known = 1) {
  std::uniform_int_distribution<std::size_t> n_dist(1, 4);
  const std::size_t n = n_dist(rng);
  Instance inst{q, m, {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> perm(m);
    for (std::size_t k = 0; k < m; ++k) perm[k] = k + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<std::size_t> kd(std::min(min_known, m - 1), m - 1);
    const std::size_t nk = kd(rng);
    std::uniform_int_distribution<std::size_t> wd(1, m - nk);
    const std::size_t nw = wd(rng);
    Receiver r;
    r.knows = make_set({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(nk)});
    r.wants = make_set({perm.begin() + static_cast<std::ptrdiff_t>(nk), perm.begin() + static_cast<std::ptrdiff_t>(nk + nw)});
    inst.receivers.push_back(std::move(r));
  }
  return inst;
}

inline bool all_true(const std::vector<bool>& v) {
  for (bool b : v) {
    if (!b) return false;
  }
  return true;
}

}  // namespace secidx::testing
