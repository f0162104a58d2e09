#pragma once

// Existence decisions, impossibility certificates, codelength bounds and a
// brute-force search over small linear codes.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "secidx/codes.hpp"
#include "secidx/errors.hpp"
#include "secidx/model.hpp"
#include "secidx/oracle.hpp"

namespace secidx {

/// Receiver `receiver` decodes X_`message` from (C, X_K) and K ⊆ A ∪ B, so an
/// eavesdropper holding X_A learns something about X_B. With b = 1 this is
/// the K_i ⊆ A, j ∈ W_i \ A pattern.
struct LeakCertificate {
  std::size_t receiver;
  IndexSet access;
  std::size_t message;
  IndexSet block;
};

/// The receiver/message graph is acyclic and every message is wanted, so any
/// index code reveals every message; `order` is a topological order witnessing
/// acyclicity.
struct AcyclicCertificate {
  std::vector<Vertex> order;
};

using Certificate = std::variant<LeakCertificate, AcyclicCertificate>;

struct LengthBounds {
  std::optional<std::size_t> lower;
  std::optional<std::size_t> upper;
  std::string note;
};

enum class Answer { yes, no, unknown };

inline const char* to_string(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
  }
  return "?";
}

struct ExistenceVerdict {
  Answer answer = Answer::unknown;
  std::optional<Code> code;         // set iff answer == yes
  std::string construction;         // "mds" or "single_subset"
  bool field_substituted = false;   // certificate code uses a larger field than the instance
  std::vector<Certificate> reasons;  // set iff answer == no, strongest first
  LengthBounds bounds;
  std::string note;
};

inline std::size_t k_min_normalized(const Instance& inst) { return k_min(normalize(inst)); }

/// Any leak certificate (b = 1) for the structure: some A, i with K_i ⊆ A and
/// W_i ⊄ A. t-level structures are searched symbolically.
inline std::optional<LeakCertificate> find_leak(const Instance& inst, const AccessStructure& acc) {
  const Instance norm = normalize(inst);
  if (acc.is_t_level()) {
    const std::size_t t = acc.level();
    if (t >= inst.m) throw InvalidLevel("t-level " + std::to_string(t) + " outside [0," + std::to_string(inst.m - 1) + "]");
    for (std::size_t i = 1; i <= norm.n(); ++i) {
      const Receiver& r = norm.receivers[i - 1];
      if (r.knows.size() > t) continue;
      const std::size_t j = set_minus(r.wants, r.knows).front();
      IndexSet a = r.knows;
      for (std::size_t k : complement(set_union(r.knows, {j}), inst.m)) {
        if (a.size() == t) break;
        a.push_back(k);
      }
      return LeakCertificate{i, make_set(a), j, {j}};
    }
    return std::nullopt;
  }
  for (const IndexSet& a : expand_access(acc, inst.m)) {
    for (std::size_t i = 1; i <= norm.n(); ++i) {
      const Receiver& r = norm.receivers[i - 1];
      if (!is_subset(r.knows, a)) continue;
      const IndexSet outside = set_minus(r.wants, a);
      if (!outside.empty()) return LeakCertificate{i, a, outside.front(), {outside.front()}};
    }
  }
  return std::nullopt;
}

/// Structural check of a leak certificate against the normalized instance.
inline bool certificate_holds(const Instance& inst, const LeakCertificate& c) {
  const Instance norm = normalize(inst);
  if (c.receiver < 1 || c.receiver > norm.n()) return false;
  const Receiver& r = norm.receivers[c.receiver - 1];
  return contains(r.wants, c.message) && !contains(r.knows, c.message) && contains(c.block, c.message) &&
         set_intersect(c.access, c.block).empty() && is_subset(r.knows, set_union(c.access, c.block));
}

/// Structural check of an acyclicity certificate.
inline bool certificate_holds(const Instance& inst, const AccessStructure& acc, const AcyclicCertificate& c) {
  const Instance norm = normalize(inst);
  const BipartiteGraph g = build_graph(norm, AccessStructure::explicit_sets({}));
  if (c.order.size() != g.vertex_count()) return false;
  std::vector<std::size_t> pos(g.vertex_count(), g.vertex_count());
  for (std::size_t k = 0; k < c.order.size(); ++k) pos.at(g.id(c.order[k])) = k;
  for (std::size_t p : pos) {
    if (p == g.vertex_count()) return false;
  }
  for (const Arc& a : g.arcs) {
    if (pos[g.id(a.from)] >= pos[g.id(a.to)]) return false;
  }
  bool proper = acc.is_t_level();
  if (!proper) {
    for (const IndexSet& a : acc.sets()) proper = proper || a.size() < inst.m;
  }
  return proper && every_message_wanted(norm);
}

/// Upper bound m - K_min when A_max < K_min; the matching lower bound when,
/// in addition, a receiver with |K_i| = K_min wants every message it lacks.
inline LengthBounds length_bounds(const Instance& inst, const AccessStructure& acc) {
  const Instance norm = normalize(inst);
  const std::size_t kmin = k_min(norm);
  LengthBounds out;
  if (a_max(acc) >= kmin) return out;
  out.upper = norm.m - kmin;
  for (std::size_t i = 1; i <= norm.n(); ++i) {
    const Receiver& r = norm.receivers[i - 1];
    if (r.knows.size() == kmin && set_union(r.knows, r.wants) == full_set(norm.m)) {
      out.lower = norm.m - kmin;
      out.note = "receiver " + std::to_string(i) +
                 " has complementary requests: H(X) <= H(C) + H(X_K) gives m log q <= l log q + K_min log q";
      break;
    }
  }
  return out;
}

/// t-level existence. Yes iff t <= K_min - b (b = 1: t < K_min), certified by
/// the MDS code; otherwise No with a leak certificate.
inline ExistenceVerdict decide_tlevel(const Instance& inst, std::size_t t, std::size_t b = 1) {
  require_valid_indices(inst);
  if (t >= inst.m) throw InvalidLevel("t-level " + std::to_string(t) + " outside [0," + std::to_string(inst.m - 1) + "]");
  if (b < 1 || b > inst.m - t) {
    throw InvalidLevel("block size b=" + std::to_string(b) + " needs 1 <= b <= m - t = " + std::to_string(inst.m - t));
  }
  const Instance norm = normalize(inst);
  const std::size_t kmin = k_min(norm);
  ExistenceVerdict v;
  v.bounds = length_bounds(norm, AccessStructure::t_level(t));
  if (t + b <= kmin) {
    MdsConstruction mds = construct_mds(norm);
    v.answer = Answer::yes;
    v.code = std::move(mds.code);
    v.construction = "mds";
    v.field_substituted = mds.field_substituted;
    return v;
  }

  // A receiver with |K_i| = K_min decodes some j outside K_i. Put as much of
  // K_i into A as t allows, the rest (and j) into B, then pad both.
  std::size_t who = 1;
  for (std::size_t i = 1; i <= norm.n(); ++i) {
    if (norm.receivers[i - 1].knows.size() == kmin) {
      who = i;
      break;
    }
  }
  const Receiver& r = norm.receivers[who - 1];
  const std::size_t j = set_minus(r.wants, r.knows).front();
  IndexSet a(r.knows.begin(), r.knows.begin() + static_cast<std::ptrdiff_t>(std::min(t, r.knows.size())));
  for (std::size_t k : complement(set_union(r.knows, {j}), norm.m)) {
    if (a.size() == t) break;
    a.push_back(k);
  }
  a = make_set(a);
  IndexSet block = set_union(set_minus(r.knows, a), {j});
  for (std::size_t k : complement(set_union(a, block), norm.m)) {
    if (block.size() >= b) break;
    block.push_back(k);
  }
  block = make_set(block);
  v.answer = Answer::no;
  v.reasons.push_back(LeakCertificate{who, a, j, block});
  return v;
}

/// General access structures. Impossibility is checked first (acyclic graph
/// with every message wanted, then the K_i ⊆ A pattern), then A_max < K_min
/// (MDS code), then the single-access-set construction. Anything else is an
/// honest Unknown.
inline ExistenceVerdict decide_general(const Instance& inst, const AccessStructure& acc) {
  require_valid_indices(inst);
  const Instance norm = normalize(inst);
  const std::size_t kmin = k_min(norm);

  // Members equal to [m] leave nothing to protect.
  std::vector<IndexSet> effective;
  bool has_proper = acc.is_t_level();
  if (acc.is_t_level()) {
    if (acc.level() >= inst.m) throw InvalidLevel("t-level " + std::to_string(acc.level()) + " outside [0," + std::to_string(inst.m - 1) + "]");
  } else {
    for (const IndexSet& a : expand_access(acc, inst.m)) {
      if (a.size() < inst.m) effective.push_back(a);
    }
    has_proper = !effective.empty();
  }

  ExistenceVerdict v;
  v.bounds = length_bounds(norm, acc);

  const BipartiteGraph classical = build_graph(norm, AccessStructure::explicit_sets({}));
  const auto order = topological_order(classical);
  const std::optional<LeakCertificate> leak = find_leak(norm, acc);
  if (has_proper && order && every_message_wanted(norm)) {
    v.answer = Answer::no;
    v.reasons.push_back(AcyclicCertificate{*order});
    if (leak) v.reasons.push_back(*leak);
    return v;
  }
  if (leak) {
    v.answer = Answer::no;
    v.reasons.push_back(*leak);
    return v;
  }

  const std::size_t amax = acc.is_t_level() ? acc.level() : a_max(AccessStructure::explicit_sets(effective));
  if (amax < kmin) {
    MdsConstruction mds = construct_mds(norm);
    v.answer = Answer::yes;
    v.code = std::move(mds.code);
    v.construction = "mds";
    v.field_substituted = mds.field_substituted;
    return v;
  }
  if (!acc.is_t_level() && effective.size() <= 1) {
    const IndexSet a = effective.empty() ? full_set(norm.m) : effective.front();
    Code code = construct_single_subset(norm, a);
    v.field_substituted = code.q() != inst.q;
    v.answer = Answer::yes;
    v.code = std::move(code);
    v.construction = "single_subset";
    return v;
  }
  v.answer = Answer::unknown;
  v.note = "A_max >= K_min with several access sets: neither a construction nor an impossibility certificate applies";
  return v;
}

/// First m x l generator over GF(q) (lexicographic in row-major entries,
/// first entry most significant) whose code passes the oracle for
/// decodability and b-block security.
inline std::optional<Code> search_linear(const Instance& inst, const AccessStructure& acc, std::size_t l,
                                         const EnumerationOptions& opts = {}, std::size_t b = 1) {
  require_valid_indices(inst);
  const Instance norm = normalize(inst);
  const PrimeField f(inst.q);
  const std::size_t cells = norm.m * l;
  const auto total = checked_pow(inst.q, cells);
  if (!total || *total > opts.budget) {
    throw BudgetExceeded("generator enumeration", total.value_or(std::numeric_limits<std::uint64_t>::max()), opts.budget);
  }
  detail::security_sets(norm.m, acc, b);

  std::vector<Symbol> digits(cells, 0);
  for (std::uint64_t n = 0; n < *total; ++n) {
    FieldMatrix g(f, norm.m, l);
    for (std::size_t k = 0; k < cells; ++k) g.set(k / l, k % l, digits[k]);
    Code code = Code::linear(std::move(g));
    const StateSpace space(code, opts);
    const std::vector<bool> dec = check_decodability(space, norm, opts.workers);
    bool all = true;
    for (bool d : dec) all = all && d;
    if (all && check_security(space, acc, b, opts.workers).secure) return code;

    for (std::size_t k = cells; k-- > 0;) {
      if (++digits[k] < inst.q) break;
      digits[k] = 0;
    }
  }
  return std::nullopt;
}

}  // namespace secidx
