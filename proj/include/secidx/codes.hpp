#pragma once

// Index codes: deterministic linear C = XG, randomized linear C = XG + YG~,
// and explicit lookup tables (for arbitrary, possibly nonlinear encoders).
// Constructions: the MDS code of length m - K_min, the single-access-set code
// [X_A C'], and nullspace derandomization of randomized linear codes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "secidx/errors.hpp"
#include "secidx/gf.hpp"
#include "secidx/model.hpp"

namespace secidx {

/// q^e, or nullopt on 64-bit overflow.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t q, std::size_t e) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / q) return std::nullopt;
    out *= q;
  }
  return out;
}

/// Little-endian base-q digits: X_1 is the least significant symbol.
inline void to_digits(std::uint64_t index, std::uint64_t q, std::span<Symbol> out) {
  for (Symbol& d : out) {
    d = static_cast<Symbol>(index % q);
    index /= q;
  }
}

inline std::uint64_t from_digits(std::span<const Symbol> digits, std::uint64_t q) {
  std::uint64_t out = 0;
  for (std::size_t i = digits.size(); i-- > 0;) out = out * q + digits[i];
  return out;
}

struct LinearDet {
  FieldMatrix generator;  // m x l
};

struct LinearRand {
  FieldMatrix generator;      // m x l
  FieldMatrix key_generator;  // k x l
};

/// Explicit encoder. Row ((x_index * key_alphabet) + y) holds the codeword for
/// message vector x (base-q index, X_1 least significant) and key value y.
struct TableCode {
  Symbol q;
  std::size_t m;
  std::size_t length;
  std::uint64_t key_alphabet;
  std::vector<Symbol> entries;
};

class Code {
 public:
  static Code linear(FieldMatrix g) { return Code(LinearDet{std::move(g)}); }

  static Code linear_random(FieldMatrix g, FieldMatrix g_tilde) {
    if (g.field() != g_tilde.field()) throw StructuralError("G and Gtilde over different fields");
    if (g.cols() != g_tilde.cols()) {
      throw StructuralError("G is " + g.shape() + " but Gtilde is " + g_tilde.shape() + "; column counts must match");
    }
    return Code(LinearRand{std::move(g), std::move(g_tilde)});
  }

  static Code table(Symbol q, std::size_t m, std::size_t length, std::uint64_t key_alphabet,
                    std::vector<Symbol> entries) {
    PrimeField f(q);
    if (key_alphabet == 0) throw StructuralError("key alphabet must be nonempty");
    const auto xs = checked_pow(q, m);
    if (!xs || entries.size() != *xs * key_alphabet * length) {
      throw StructuralError("table code must define every (message, key) input: expected q^m*|Y|*l entries");
    }
    for (Symbol s : entries) {
      if (s >= q) throw StructuralError("table entry " + std::to_string(s) + " not reduced mod " + std::to_string(q));
    }
    return Code(TableCode{q, m, length, key_alphabet, std::move(entries)});
  }

  /// Builds a table code by evaluating `f(x, y)` on every input.
  static Code tabulate(Symbol q, std::size_t m, std::size_t length, std::uint64_t key_alphabet,
                       const std::function<std::vector<Symbol>(std::span<const Symbol>, std::uint64_t)>& f) {
    const auto xs = checked_pow(q, m);
    if (!xs) throw StructuralError("message space too large to tabulate");
    std::vector<Symbol> entries;
    entries.reserve(*xs * key_alphabet * length);
    std::vector<Symbol> x(m);
    for (std::uint64_t xi = 0; xi < *xs; ++xi) {
      to_digits(xi, q, x);
      for (std::uint64_t y = 0; y < key_alphabet; ++y) {
        std::vector<Symbol> c = f(x, y);
        if (c.size() != length) throw StructuralError("tabulated codeword has wrong length");
        entries.insert(entries.end(), c.begin(), c.end());
      }
    }
    return table(q, m, length, key_alphabet, std::move(entries));
  }

  bool is_linear() const { return !std::holds_alternative<TableCode>(kind_); }
  bool is_randomized() const {
    if (const auto* r = std::get_if<LinearRand>(&kind_)) return r->key_generator.rows() > 0;
    if (const auto* t = std::get_if<TableCode>(&kind_)) return t->key_alphabet > 1;
    return false;
  }

  Symbol q() const {
    return std::visit(
        [](const auto& k) -> Symbol {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, TableCode>) return k.q;
          else return k.generator.modulus();
        },
        kind_);
  }

  std::size_t messages() const {
    return std::visit(
        [](const auto& k) -> std::size_t {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, TableCode>) return k.m;
          else return k.generator.rows();
        },
        kind_);
  }

  std::size_t length() const {
    return std::visit(
        [](const auto& k) -> std::size_t {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, TableCode>) return k.length;
          else return k.generator.cols();
        },
        kind_);
  }

  /// k for linear randomized codes, 0 otherwise.
  std::size_t key_dimension() const {
    if (const auto* r = std::get_if<LinearRand>(&kind_)) return r->key_generator.rows();
    return 0;
  }

  /// Number of equiprobable key values: q^k, |Y|, or 1.
  std::uint64_t key_states() const {
    if (const auto* t = std::get_if<TableCode>(&kind_)) return t->key_alphabet;
    const auto s = checked_pow(q(), key_dimension());
    if (!s) throw BudgetExceeded("key space", std::numeric_limits<std::uint64_t>::max(), 0);
    return *s;
  }

  /// G for linear codes.
  const FieldMatrix& generator() const {
    if (const auto* d = std::get_if<LinearDet>(&kind_)) return d->generator;
    if (const auto* r = std::get_if<LinearRand>(&kind_)) return r->generator;
    throw StructuralError("table codes have no generator matrix");
  }

  const FieldMatrix& key_generator() const {
    if (const auto* r = std::get_if<LinearRand>(&kind_)) return r->key_generator;
    throw StructuralError("only randomized linear codes have a key generator");
  }

  const LinearDet* as_deterministic() const { return std::get_if<LinearDet>(&kind_); }
  const LinearRand* as_randomized() const { return std::get_if<LinearRand>(&kind_); }
  const TableCode* as_table() const { return std::get_if<TableCode>(&kind_); }

  /// Codeword for message vector x and key index y in [0, key_states()).
  /// `out` must have length() entries. No validation: this is the oracle's hot path.
  void encode_state(std::span<const Symbol> x, std::uint64_t key_index, std::span<Symbol> out) const {
    if (const auto* t = std::get_if<TableCode>(&kind_)) {
      const std::uint64_t row = from_digits(x, t->q) * t->key_alphabet + key_index;
      const Symbol* src = t->entries.data() + row * t->length;
      std::copy(src, src + t->length, out.begin());
      return;
    }
    const FieldMatrix& g = generator();
    const PrimeField& f = g.field();
    const std::uint64_t q = f.size();
    std::fill(out.begin(), out.end(), Symbol{0});
    for (std::size_t r = 0; r < g.rows(); ++r) {
      if (x[r] == 0) continue;
      for (std::size_t c = 0; c < g.cols(); ++c) out[c] = static_cast<Symbol>((out[c] + std::uint64_t{x[r]} * g(r, c)) % q);
    }
    if (const auto* rnd = std::get_if<LinearRand>(&kind_)) {
      const FieldMatrix& gt = rnd->key_generator;
      for (std::size_t r = 0; r < gt.rows(); ++r) {
        const Symbol y = static_cast<Symbol>(key_index % q);
        key_index /= q;
        if (y == 0) continue;
        for (std::size_t c = 0; c < gt.cols(); ++c) out[c] = static_cast<Symbol>((out[c] + std::uint64_t{y} * gt(r, c)) % q);
      }
    }
  }

 private:
  using Kind = std::variant<LinearDet, LinearRand, TableCode>;
  explicit Code(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

/// C = f(x, y). For randomized linear codes `key` is the k-vector Y; for
/// table codes it is a single value in [0, |Y|) (omitted when |Y| = 1).
inline std::vector<Symbol> encode(const Code& code, std::span<const Symbol> x, std::span<const Symbol> key = {}) {
  if (x.size() != code.messages()) {
    throw StructuralError("message vector has " + std::to_string(x.size()) + " symbols, code expects " +
                          std::to_string(code.messages()));
  }
  for (Symbol s : x) {
    if (s >= code.q()) throw StructuralError("symbol " + std::to_string(s) + " is not in GF(" + std::to_string(code.q()) + ")");
  }
  std::uint64_t key_index = 0;
  if (const TableCode* t = code.as_table()) {
    if (key.size() > 1 || (key.empty() && t->key_alphabet > 1)) {
      throw StructuralError("table code expects one key value in [0," + std::to_string(t->key_alphabet) + ")");
    }
    key_index = key.empty() ? 0 : key[0];
    if (key_index >= t->key_alphabet) throw StructuralError("key value out of range");
  } else {
    if (key.size() != code.key_dimension()) {
      throw StructuralError("key vector has " + std::to_string(key.size()) + " symbols, code expects " +
                            std::to_string(code.key_dimension()));
    }
    for (Symbol s : key) {
      if (s >= code.q()) throw StructuralError("key symbol " + std::to_string(s) + " is not in GF(" + std::to_string(code.q()) + ")");
    }
    key_index = from_digits(key, code.q());
  }
  std::vector<Symbol> out(code.length());
  code.encode_state(x, key_index, out);
  return out;
}

/// Receiver i (1-based) recovers X_{W_i}, in ascending index order, from the
/// codeword and its side information X_{K_i} (ascending). Returns nullopt when
/// the wanted symbols are not determined by the received data.
inline std::optional<std::vector<Symbol>> decode(const Code& code, const Instance& inst, std::size_t i,
                                                 std::span<const Symbol> codeword, std::span<const Symbol> side) {
  const LinearDet* lin = code.as_deterministic();
  if (lin == nullptr) throw StructuralError("decode requires a deterministic linear code");
  const Receiver& r = inst.receiver(i);
  const FieldMatrix& g = lin->generator;
  const PrimeField& f = g.field();
  if (g.rows() != inst.m) throw StructuralError("code has " + std::to_string(g.rows()) + " messages, instance has " + std::to_string(inst.m));
  if (codeword.size() != g.cols()) throw StructuralError("codeword length " + std::to_string(codeword.size()) + ", expected " + std::to_string(g.cols()));
  if (side.size() != r.knows.size()) throw StructuralError("receiver " + std::to_string(i) + " needs " + std::to_string(r.knows.size()) + " side symbols");

  // rhs = c - sum_{k in K} X_k g_k
  FieldMatrix rhs(f, g.cols(), 1);
  for (std::size_t c = 0; c < g.cols(); ++c) {
    if (codeword[c] >= f.size()) return std::nullopt;
    rhs.set(c, 0, codeword[c]);
  }
  for (std::size_t s = 0; s < r.knows.size(); ++s) {
    if (side[s] >= f.size()) return std::nullopt;
    for (std::size_t c = 0; c < g.cols(); ++c) rhs.set(c, 0, f.sub(rhs(c, 0), f.mul(side[s], g(r.knows[s] - 1, c))));
  }

  // Unknowns are the messages outside K; column u of `system` is g_{unknown[u]}.
  const IndexSet unknown = complement(r.knows, inst.m);
  std::vector<std::size_t> rows;
  for (std::size_t j : unknown) rows.push_back(j - 1);
  const FieldMatrix system = g.select_rows(rows).transpose();
  const std::optional<FieldMatrix> x = solve(system, rhs);
  if (!x) return std::nullopt;
  const FieldMatrix kernel = nullspace(system);

  std::vector<Symbol> out;
  for (std::size_t j : r.wants) {
    if (contains(r.knows, j)) {
      out.push_back(side[static_cast<std::size_t>(std::lower_bound(r.knows.begin(), r.knows.end(), j) - r.knows.begin())]);
      continue;
    }
    const std::size_t u = static_cast<std::size_t>(std::lower_bound(unknown.begin(), unknown.end(), j) - unknown.begin());
    for (std::size_t k = 0; k < kernel.cols(); ++k) {
      if (kernel(u, k) != 0) return std::nullopt;
    }
    out.push_back((*x)(u, 0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

struct MdsConstruction {
  Code code;
  std::size_t k_min;
  bool field_substituted;  // instance q < m, so the smallest prime >= m was used
};

/// C = XG with G an m x (m - K_min) Vandermonde matrix: any m - K_min rows are
/// independent, so every receiver solves for all its unknowns.
inline MdsConstruction construct_mds(const Instance& inst) {
  const Instance norm = normalize(inst);
  const std::size_t kmin = k_min(norm);
  const std::size_t l = norm.m - kmin;
  const bool substitute = inst.q < norm.m;
  const Symbol q = substitute ? next_prime(norm.m) : inst.q;
  return {Code::linear(vandermonde(norm.m, l, q)), kmin, substitute};
}

/// Code [X_A  C'] for a single access set A: X_A in the clear (ascending
/// indices) followed by an MDS code C' over the messages outside A, built
/// for the receivers that need something outside A.
inline Code construct_single_subset(const Instance& inst, const IndexSet& access) {
  require_valid_indices(inst);
  const IndexSet a = make_set(access);
  for (std::size_t j : a) {
    if (j < 1 || j > inst.m) throw StructuralError("access set index " + std::to_string(j) + " out of range");
  }
  const Instance norm = normalize(inst);
  const IndexSet outside = complement(a, inst.m);

  // Reduced instance over A^c, relabelled 1..|A^c|.
  std::vector<std::size_t> relabel(inst.m + 1, 0);
  for (std::size_t k = 0; k < outside.size(); ++k) relabel[outside[k]] = k + 1;
  Instance reduced{inst.q, outside.size(), {}};
  for (std::size_t i = 1; i <= norm.n(); ++i) {
    const Receiver& r = norm.receivers[i - 1];
    const bool knows_inside_only = is_subset(r.knows, a);
    const bool wants_outside = !is_subset(r.wants, a);
    if (knows_inside_only && wants_outside) throw NoSecureCode(i, format_set(a));
    if (!wants_outside) continue;  // decodes from X_A alone
    Receiver rr;
    for (std::size_t j : set_intersect(r.knows, outside)) rr.knows.push_back(relabel[j]);
    for (std::size_t j : set_intersect(r.wants, outside)) rr.wants.push_back(relabel[j]);
    reduced.receivers.push_back(std::move(rr));
  }
  reduced = normalize(reduced);

  const Symbol q = inst.q < outside.size() ? next_prime(outside.size()) : inst.q;
  PrimeField f(q);
  const std::size_t inner_len = reduced.m - k_min(reduced);
  const FieldMatrix inner = vandermonde(reduced.m, inner_len, q);

  FieldMatrix g(f, inst.m, a.size() + inner_len);
  for (std::size_t c = 0; c < a.size(); ++c) g.set(a[c] - 1, c, 1);
  for (std::size_t k = 0; k < outside.size(); ++k)
    for (std::size_t c = 0; c < inner_len; ++c) g.set(outside[k] - 1, a.size() + c, inner(k, c));
  return Code::linear(std::move(g));
}

// ---------------------------------------------------------------------------
// Linear decoders and derandomization
// ---------------------------------------------------------------------------

/// X_j = C d + X_{K_i} e for every message and key assignment.
struct WitnessEntry {
  std::size_t receiver;  // 1-based
  std::size_t message;   // 1-based, in W_i
  FieldMatrix d;         // l x 1
  FieldMatrix e;         // |K_i| x 1
};

struct DecoderWitness {
  std::vector<WitnessEntry> entries;
};

namespace detail {

inline const FieldMatrix* key_matrix_or_null(const Code& code) {
  if (const LinearRand* r = code.as_randomized()) return &r->key_generator;
  return nullptr;
}

/// G d + S_K e, where S_K embeds |K| coordinates into the rows of K.
inline FieldMatrix witness_image(const FieldMatrix& g, const IndexSet& knows, const FieldMatrix& d,
                                 const FieldMatrix& e) {
  FieldMatrix out = g * d;
  const PrimeField& f = g.field();
  for (std::size_t s = 0; s < knows.size(); ++s) out.set(knows[s] - 1, 0, f.add(out(knows[s] - 1, 0), e(s, 0)));
  return out;
}

}  // namespace detail

/// Solves the linear decoding identities [G S_K; G~ 0] (d, e) = (e_j, 0) for
/// every receiver/wanted pair. nullopt if some pair has no linear decoder.
inline std::optional<DecoderWitness> find_witness(const Code& code, const Instance& inst) {
  if (!code.is_linear()) throw StructuralError("witnesses exist only for linear codes");
  const FieldMatrix& g = code.generator();
  if (g.rows() != inst.m) throw StructuralError("code has " + std::to_string(g.rows()) + " messages, instance has " + std::to_string(inst.m));
  const FieldMatrix* gt = detail::key_matrix_or_null(code);
  const PrimeField& f = g.field();
  const std::size_t l = g.cols();
  const std::size_t k = gt ? gt->rows() : 0;

  DecoderWitness out;
  for (std::size_t i = 1; i <= inst.n(); ++i) {
    const Receiver& r = inst.receivers[i - 1];
    const std::size_t nk = r.knows.size();
    FieldMatrix system(f, inst.m + k, l + nk);
    for (std::size_t row = 0; row < inst.m; ++row)
      for (std::size_t c = 0; c < l; ++c) system.set(row, c, g(row, c));
    for (std::size_t s = 0; s < nk; ++s) system.set(r.knows[s] - 1, l + s, 1);
    for (std::size_t row = 0; row < k; ++row)
      for (std::size_t c = 0; c < l; ++c) system.set(inst.m + row, c, (*gt)(row, c));
    for (std::size_t j : r.wants) {
      FieldMatrix target(f, inst.m + k, 1);
      target.set(j - 1, 0, 1);
      const std::optional<FieldMatrix> sol = solve(system, target);
      if (!sol) return std::nullopt;
      FieldMatrix d(f, l, 1), e(f, nk, 1);
      for (std::size_t c = 0; c < l; ++c) d.set(c, 0, (*sol)(c, 0));
      for (std::size_t s = 0; s < nk; ++s) e.set(s, 0, (*sol)(l + s, 0));
      out.entries.push_back({i, j, std::move(d), std::move(e)});
    }
  }
  return out;
}

/// Throws InvalidWitness unless every (receiver, wanted message) pair has an
/// entry satisfying G d + S_K e = e_j and G~ d = 0.
inline void check_witness(const Code& code, const Instance& inst, const DecoderWitness& w) {
  if (!code.is_linear()) throw StructuralError("witnesses exist only for linear codes");
  const FieldMatrix& g = code.generator();
  const FieldMatrix* gt = detail::key_matrix_or_null(code);
  const PrimeField& f = g.field();
  for (std::size_t i = 1; i <= inst.n(); ++i) {
    const Receiver& r = inst.receivers[i - 1];
    for (std::size_t j : r.wants) {
      const std::string who = "witness (receiver " + std::to_string(i) + ", message " + std::to_string(j) + ")";
      const WitnessEntry* entry = nullptr;
      for (const WitnessEntry& e : w.entries) {
        if (e.receiver == i && e.message == j) entry = &e;
      }
      if (entry == nullptr) throw InvalidWitness(who + " is missing");
      if (entry->d.rows() != g.cols() || entry->d.cols() != 1 || entry->e.rows() != r.knows.size() ||
          entry->e.cols() != 1 || entry->d.field() != f || entry->e.field() != f) {
        throw InvalidWitness(who + " has wrong dimensions");
      }
      if (gt != nullptr && !((*gt) * entry->d).is_zero()) {
        throw InvalidWitness(who + ": d is not in the nullspace of Gtilde, so the key leaks into the decoder");
      }
      FieldMatrix unit(f, inst.m, 1);
      unit.set(j - 1, 0, 1);
      if (!(detail::witness_image(g, r.knows, entry->d, entry->e) == unit)) {
        throw InvalidWitness(who + " does not reproduce X_" + std::to_string(j));
      }
    }
  }
}

struct Derandomized {
  Code code;               // deterministic, generator G V
  FieldMatrix basis;       // V: l x l_hat, columns span Null(G~)
  DecoderWitness witness;  // decoders for the new code: d_hat with V d_hat = d
};

/// Replaces C = XG + YG~ by C V = XGV, where the columns of V span Null(G~).
/// Every decoding vector lies in Null(G~), so decodability carries over and
/// the new codeword is a function of the old one.
inline Derandomized derandomize_detailed(const Code& code, const Instance& inst, const DecoderWitness& witness) {
  const LinearRand* rnd = code.as_randomized();
  if (rnd == nullptr) throw StructuralError("derandomize expects a randomized linear code");
  if (rnd->generator.rows() != inst.m) throw StructuralError("code and instance disagree on m");
  check_witness(code, inst, witness);

  FieldMatrix basis = nullspace(rnd->key_generator);
  Code out = Code::linear(rnd->generator * basis);

  DecoderWitness moved;
  for (const WitnessEntry& e : witness.entries) {
    const std::optional<FieldMatrix> d_hat = solve(basis, e.d);
    if (!d_hat) throw InvalidWitness("decoder vector outside Null(Gtilde)");
    moved.entries.push_back({e.receiver, e.message, *d_hat, e.e});
  }
  return {std::move(out), std::move(basis), std::move(moved)};
}

inline Code derandomize(const Code& code, const Instance& inst, const DecoderWitness& witness) {
  return derandomize_detailed(code, inst, witness).code;
}

/// d(colsp(G)) - 2, computed by enumerating all q^l vectors G v. The code is
/// secure at every t-level up to this value. Returns -1 when some single
/// message leaks outright and m - 1 when the column span is {0}.
inline long security_level_linear(const Code& code, std::uint64_t budget = std::uint64_t{1} << 22) {
  const LinearDet* lin = code.as_deterministic();
  if (lin == nullptr) throw StructuralError("security_level_linear expects a deterministic linear code");
  const FieldMatrix& g = lin->generator;
  const std::uint64_t q = g.modulus();
  const auto total = checked_pow(q, g.cols());
  if (!total || *total > budget) {
    throw BudgetExceeded("column-span enumeration", total.value_or(std::numeric_limits<std::uint64_t>::max()), budget);
  }
  const std::size_t m = g.rows();
  std::size_t best = m + 1;
  std::vector<Symbol> v(g.cols());
  for (std::uint64_t idx = 1; idx < *total; ++idx) {
    to_digits(idx, q, v);
    std::size_t weight = 0;
    for (std::size_t r = 0; r < m; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t c = 0; c < g.cols(); ++c) acc = (acc + std::uint64_t{g(r, c)} * v[c]) % q;
      if (acc != 0) ++weight;
    }
    if (weight > 0) best = std::min(best, weight);
  }
  if (best == m + 1) return static_cast<long>(m) - 1;
  return static_cast<long>(best) - 2;
}

}  // namespace secidx
