#pragma once

// Exhaustive ground truth for decodability and b-block weak security.
//
// Messages are i.i.d. uniform over GF(q) and the key is uniform over its
// alphabet, independent of the messages. Every verdict comes from integer
// counts over all q^m * |Y| equiprobable (x, y) states: X_B is independent
// of (C, X_A) iff, for every (c, x_A) that occurs, all q^b values of x_B
// occur equally often. Entropies are reported for display only.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "secidx/codes.hpp"
#include "secidx/errors.hpp"
#include "secidx/model.hpp"

namespace secidx {

struct EnumerationOptions {
  std::uint64_t budget = std::uint64_t{1} << 22;  // max joint (x, y) states
  unsigned workers = 1;                           // message-space partitions
};

/// Shannon entropy in bits of the distribution proportional to `counts`.
inline double entropy_bits(std::span<const std::uint64_t> counts) {
  double total = 0;
  for (std::uint64_t c : counts) total += static_cast<double>(c);
  if (total == 0) return 0.0;
  double h = 0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

/// Occurrence counts of (conditioning value, target value) pairs.
/// Partial tables from disjoint parts of the state space merge additively.
class JointTable {
 public:
  void add(std::uint64_t cond, std::uint64_t target, std::uint64_t count = 1) {
    cells_[{cond, target}] += count;
    cond_[cond] += count;
    target_[target] += count;
    total_ += count;
  }

  void merge(const JointTable& other) {
    for (const auto& [key, n] : other.cells_) cells_[key] += n;
    for (const auto& [key, n] : other.cond_) cond_[key] += n;
    for (const auto& [key, n] : other.target_) target_[key] += n;
    total_ += other.total_;
  }

  std::uint64_t total() const { return total_; }

  /// Every observed conditioning value leaves the target uniform over
  /// `target_alphabet` values.
  bool conditionally_uniform(std::uint64_t target_alphabet) const {
    for (const auto& [key, n] : cells_) {
      if (n * target_alphabet != cond_.at(key.first)) return false;
    }
    return true;
  }

  /// The target is a function of the conditioning value.
  bool conditionally_deterministic() const {
    for (const auto& [key, n] : cells_) {
      if (n != cond_.at(key.first)) return false;
    }
    return true;
  }

  std::vector<std::uint64_t> target_counts() const {
    std::vector<std::uint64_t> out;
    out.reserve(target_.size());
    for (const auto& [key, n] : target_) out.push_back(n);
    return out;
  }

  double target_entropy_bits() const {
    const std::vector<std::uint64_t> counts = target_counts();
    return entropy_bits(counts);
  }

  /// H(target | cond) = sum_cells p(cell) log2(N_cond / n_cell).
  double conditional_entropy_bits() const {
    if (total_ == 0) return 0.0;
    double h = 0;
    for (const auto& [key, n] : cells_) {
      const double p = static_cast<double>(n) / static_cast<double>(total_);
      h += p * std::log2(static_cast<double>(cond_.at(key.first)) / static_cast<double>(n));
    }
    return h;
  }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
      return std::hash<std::uint64_t>{}(p.first * 0x9E3779B97F4A7C15ULL ^ (p.second + 0x7F4A7C159E3779B9ULL));
    }
  };

  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t, PairHash> cells_;
  std::unordered_map<std::uint64_t, std::uint64_t> cond_;
  std::unordered_map<std::uint64_t, std::uint64_t> target_;
  std::uint64_t total_ = 0;
};

/// Every (x, y) state of a code with its codeword interned to a dense id.
class StateSpace {
 public:
  StateSpace(const Code& code, const EnumerationOptions& opts)
      : q_(code.q()), m_(code.messages()), keys_(code.key_states()) {
    const auto xs = checked_pow(q_, m_);
    const std::uint64_t limit = std::min<std::uint64_t>(opts.budget, std::numeric_limits<std::uint32_t>::max());
    if (!xs || *xs > limit / keys_) {
      const std::uint64_t needed =
          xs && *xs <= std::numeric_limits<std::uint64_t>::max() / keys_ ? *xs * keys_ : std::numeric_limits<std::uint64_t>::max();
      throw BudgetExceeded("exhaustive enumeration", needed, opts.budget);
    }
    messages_ = *xs;
    ids_.resize(messages_ * keys_);

    const std::size_t l = code.length();
    const auto radix = checked_pow(q_, l);
    std::unordered_map<std::uint64_t, std::uint32_t> fast;
    std::map<std::vector<Symbol>, std::uint32_t> slow;
    std::vector<Symbol> x(m_), c(l);
    std::uint32_t next = 0;
    for (std::uint64_t xi = 0; xi < messages_; ++xi) {
      to_digits(xi, q_, x);
      for (std::uint64_t y = 0; y < keys_; ++y) {
        code.encode_state(x, y, c);
        std::uint32_t id;
        if (radix) {
          auto [it, fresh] = fast.try_emplace(from_digits(c, q_), next);
          if (fresh) ++next;
          id = it->second;
        } else {
          auto [it, fresh] = slow.try_emplace(c, next);
          if (fresh) ++next;
          id = it->second;
        }
        ids_[xi * keys_ + y] = id;
      }
    }
    distinct_ = next;
  }

  Symbol q() const { return q_; }
  std::size_t m() const { return m_; }
  std::uint64_t message_states() const { return messages_; }
  std::uint64_t key_states() const { return keys_; }
  std::uint64_t distinct_codewords() const { return distinct_; }
  std::uint32_t codeword_id(std::uint64_t x_index, std::uint64_t key) const { return ids_[x_index * keys_ + key]; }

 private:
  Symbol q_;
  std::size_t m_;
  std::uint64_t keys_;
  std::uint64_t messages_ = 0;
  std::uint64_t distinct_ = 0;
  std::vector<std::uint32_t> ids_;
};

namespace detail {

inline std::uint64_t project(std::span<const Symbol> x, const IndexSet& which, std::uint64_t q) {
  std::uint64_t out = 0;
  for (std::size_t k = which.size(); k-- > 0;) out = out * q + x[which[k] - 1];
  return out;
}

/// Joint counts of ((C, X_cond), X_target) over every state, split across
/// `workers` contiguous slices of the message space and merged.
inline JointTable tabulate(const StateSpace& space, const IndexSet& cond, const IndexSet& target, unsigned workers) {
  const std::uint64_t q = space.q();
  const std::uint64_t cond_radix = *checked_pow(q, cond.size());
  auto slice = [&](std::uint64_t begin, std::uint64_t end) {
    JointTable t;
    std::vector<Symbol> x(space.m());
    for (std::uint64_t xi = begin; xi < end; ++xi) {
      to_digits(xi, q, x);
      const std::uint64_t xc = project(x, cond, q);
      const std::uint64_t xt = project(x, target, q);
      for (std::uint64_t y = 0; y < space.key_states(); ++y) t.add(space.codeword_id(xi, y) * cond_radix + xc, xt);
    }
    return t;
  };

  const std::uint64_t n = space.message_states();
  const unsigned parts = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, n)));
  if (parts == 1) return slice(0, n);

  std::vector<JointTable> partial(parts);
  {
    std::vector<std::jthread> pool;
    for (unsigned p = 0; p < parts; ++p) {
      pool.emplace_back([&, p] { partial[p] = slice(n * p / parts, n * (p + 1) / parts); });
    }
  }
  JointTable out;
  for (const JointTable& t : partial) out.merge(t);
  return out;
}

inline void require_matching(const Code& code, const Instance& inst) {
  if (code.messages() != inst.m) {
    throw StructuralError("code encodes " + std::to_string(code.messages()) + " messages but instance has m=" +
                          std::to_string(inst.m));
  }
  require_valid_indices(Instance{code.q(), inst.m, inst.receivers});
}

}  // namespace detail

/// Receiver i passes iff X_{W_i} is a function of (C, X_{K_i}) over all
/// message and key values (receivers never see the key).
inline std::vector<bool> check_decodability(const StateSpace& space, const Instance& inst, unsigned workers = 1) {
  std::vector<bool> out;
  for (const Receiver& r : inst.receivers) {
    out.push_back(detail::tabulate(space, r.knows, r.wants, workers).conditionally_deterministic());
  }
  return out;
}

inline std::vector<bool> check_decodability(const Code& code, const Instance& inst, const EnumerationOptions& opts = {}) {
  detail::require_matching(code, inst);
  return check_decodability(StateSpace(code, opts), inst, opts.workers);
}

struct PairReport {
  IndexSet access;  // A
  IndexSet block;   // B, subset of A^c with |B| = b
  bool uniform;     // X_B independent of (C, X_A)
  double h_block_bits;
  double h_block_given_view_bits;

  double gap_bits() const { return h_block_bits - h_block_given_view_bits; }
};

struct SecurityReport {
  std::vector<PairReport> pairs;
  bool secure = true;
};

namespace detail {

inline std::vector<IndexSet> security_sets(std::size_t m, const AccessStructure& acc, std::size_t b) {
  if (b < 1) throw InvalidLevel("block size b must be at least 1");
  std::vector<IndexSet> sets = expand_access(acc, m);
  for (const IndexSet& a : sets) {
    const std::size_t unknown = m - a.size();
    if (unknown > 0 && b > unknown) {
      throw InvalidLevel("b=" + std::to_string(b) + " exceeds the " + std::to_string(unknown) +
                         " messages outside access set " + format_set(a));
    }
  }
  return sets;
}

}  // namespace detail

/// Checks H(X_B | C, X_A) = H(X_B) for every A in the structure and every
/// b-subset B of A^c. Members with empty complement impose nothing.
inline SecurityReport check_security(const StateSpace& space, const AccessStructure& acc, std::size_t b = 1,
                                     unsigned workers = 1) {
  const std::vector<IndexSet> sets = detail::security_sets(space.m(), acc, b);
  const std::uint64_t alphabet = *checked_pow(space.q(), b);
  SecurityReport report;
  for (const IndexSet& a : sets) {
    for (const IndexSet& block : combinations(complement(a, space.m()), b)) {
      const JointTable t = detail::tabulate(space, a, block, workers);
      PairReport p{a, block, t.conditionally_uniform(alphabet), t.target_entropy_bits(), t.conditional_entropy_bits()};
      report.secure = report.secure && p.uniform;
      report.pairs.push_back(std::move(p));
    }
  }
  return report;
}

inline SecurityReport check_security(const Code& code, const Instance& inst, const AccessStructure& acc,
                                     std::size_t b = 1, const EnumerationOptions& opts = {}) {
  if (code.messages() != inst.m) {
    throw StructuralError("code encodes " + std::to_string(code.messages()) + " messages but instance has m=" +
                          std::to_string(inst.m));
  }
  detail::security_sets(inst.m, acc, b);
  return check_security(StateSpace(code, opts), acc, b, opts.workers);
}

struct VerificationReport {
  std::vector<bool> decodable;
  SecurityReport security;

  bool all_decodable() const {
    for (bool d : decodable) {
      if (!d) return false;
    }
    return true;
  }
  bool ok() const { return all_decodable() && security.secure; }
};

inline VerificationReport verify(const Code& code, const Instance& inst, const AccessStructure& acc, std::size_t b = 1,
                                 const EnumerationOptions& opts = {}) {
  detail::require_matching(code, inst);
  detail::security_sets(inst.m, acc, b);
  const StateSpace space(code, opts);
  return {check_decodability(space, inst, opts.workers), check_security(space, acc, b, opts.workers)};
}

}  // namespace secidx
