#pragma once

// Arithmetic and dense linear algebra over prime fields GF(q).
//
// Matrices are small and dense; every routine is a plain Gauss-Jordan
// elimination. Row reduction always picks the leftmost pivot column and,
// within it, the first nonzero row, so reduced forms are deterministic.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "secidx/errors.hpp"

namespace secidx {

using Symbol = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Smallest prime >= n (2 for n <= 2).
inline Symbol next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return static_cast<Symbol>(n);
}

/// A prime field GF(q). Construction rejects composite or oversized moduli.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t q) : q_(static_cast<Symbol>(q)) {
    if (q > (std::uint64_t{1} << 31)) throw InfeasibleField("field size too large: " + std::to_string(q));
    if (!is_prime(q)) throw InfeasibleField("GF(q) requires prime q, got " + std::to_string(q));
  }

  Symbol size() const { return q_; }

  Symbol reduce(std::uint64_t v) const { return static_cast<Symbol>(v % q_); }
  Symbol add(Symbol a, Symbol b) const { return static_cast<Symbol>((std::uint64_t{a} + b) % q_); }
  Symbol sub(Symbol a, Symbol b) const { return static_cast<Symbol>((std::uint64_t{a} + q_ - b) % q_); }
  Symbol neg(Symbol a) const { return a == 0 ? 0 : q_ - a; }
  Symbol mul(Symbol a, Symbol b) const { return static_cast<Symbol>((std::uint64_t{a} * b) % q_); }

  Symbol pow(Symbol a, std::uint64_t e) const {
    std::uint64_t base = a % q_;
    std::uint64_t acc = 1 % q_;
    while (e != 0) {
      if (e & 1) acc = acc * base % q_;
      base = base * base % q_;
      e >>= 1;
    }
    return static_cast<Symbol>(acc);
  }

  /// Fermat inverse a^(q-2).
  Symbol inv(Symbol a) const {
    if (a % q_ == 0) throw DivisionByZero();
    return pow(a, q_ - 2);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  Symbol q_;
};

/// A single element tagged with its modulus.
class FieldElement {
 public:
  FieldElement(std::uint64_t value, std::uint64_t q) : field_(q), value_(field_.reduce(value)) {}
  FieldElement(std::uint64_t value, PrimeField field) : field_(field), value_(field.reduce(value)) {}

  Symbol value() const { return value_; }
  Symbol modulus() const { return field_.size(); }
  const PrimeField& field() const { return field_; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  PrimeField field_;
  Symbol value_;
};

enum class FieldOp { add, sub, mul };

inline FieldElement fe_op(const FieldElement& a, const FieldElement& b, FieldOp op) {
  if (a.modulus() != b.modulus()) {
    throw StructuralError("mismatched moduli " + std::to_string(a.modulus()) + " and " +
                          std::to_string(b.modulus()));
  }
  const PrimeField& f = a.field();
  switch (op) {
    case FieldOp::add: return {f.add(a.value(), b.value()), f};
    case FieldOp::sub: return {f.sub(a.value(), b.value()), f};
    case FieldOp::mul: return {f.mul(a.value(), b.value()), f};
  }
  throw StructuralError("unknown field operation");
}

inline FieldElement fe_inv(const FieldElement& a) { return {a.field().inv(a.value()), a.field()}; }

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return fe_op(a, b, FieldOp::add); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return fe_op(a, b, FieldOp::sub); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return fe_op(a, b, FieldOp::mul); }

/// Dense row-major matrix over GF(q). Zero-sized dimensions are allowed.
class FieldMatrix {
 public:
  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  /// Entries must already be reduced (< q); out-of-range values are rejected.
  static FieldMatrix from_rows(PrimeField field, const std::vector<std::vector<Symbol>>& rows,
                               std::size_t cols_if_empty = 0) {
    const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    FieldMatrix out(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) {
        throw StructuralError("ragged matrix: row " + std::to_string(r) + " has " +
                              std::to_string(rows[r].size()) + " entries, expected " + std::to_string(cols));
      }
      for (std::size_t c = 0; c < cols; ++c) {
        if (rows[r][c] >= field.size()) {
          throw StructuralError("entry " + std::to_string(rows[r][c]) + " at (" + std::to_string(r) + "," +
                                std::to_string(c) + ") is not reduced mod " + std::to_string(field.size()));
        }
        out.set(r, c, rows[r][c]);
      }
    }
    return out;
  }

  static FieldMatrix identity(PrimeField field, std::size_t n) {
    FieldMatrix out(field, n, n);
    for (std::size_t i = 0; i < n; ++i) out.set(i, i, 1);
    return out;
  }

  static FieldMatrix column(PrimeField field, std::span<const Symbol> values) {
    FieldMatrix out(field, values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) out.set(i, 0, field.reduce(values[i]));
    return out;
  }

  const PrimeField& field() const { return field_; }
  Symbol modulus() const { return field_.size(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Symbol operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  Symbol at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw StructuralError("matrix index out of range");
    return entries_[r * cols_ + c];
  }
  void set(std::size_t r, std::size_t c, Symbol v) { entries_[r * cols_ + c] = field_.reduce(v); }

  std::span<const Symbol> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  std::span<const Symbol> entries() const { return entries_; }

  std::vector<std::vector<Symbol>> to_rows() const {
    std::vector<std::vector<Symbol>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
    return out;
  }

  bool is_zero() const {
    for (Symbol v : entries_) {
      if (v != 0) return false;
    }
    return true;
  }

  FieldMatrix transpose() const {
    FieldMatrix out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out.set(c, r, (*this)(r, c));
    return out;
  }

  FieldMatrix select_rows(std::span<const std::size_t> which) const {
    FieldMatrix out(field_, which.size(), cols_);
    for (std::size_t i = 0; i < which.size(); ++i) {
      if (which[i] >= rows_) throw StructuralError("row selection out of range");
      for (std::size_t c = 0; c < cols_; ++c) out.set(i, c, (*this)(which[i], c));
    }
    return out;
  }

  FieldMatrix select_cols(std::span<const std::size_t> which) const {
    FieldMatrix out(field_, rows_, which.size());
    for (std::size_t i = 0; i < which.size(); ++i) {
      if (which[i] >= cols_) throw StructuralError("column selection out of range");
      for (std::size_t r = 0; r < rows_; ++r) out.set(r, i, (*this)(r, which[i]));
    }
    return out;
  }

  /// [this | other]
  FieldMatrix hconcat(const FieldMatrix& other) const {
    require_same_field(other);
    if (other.rows_ != rows_) throw StructuralError("hconcat: row counts differ");
    FieldMatrix out(field_, rows_, cols_ + other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out.set(r, c, (*this)(r, c));
      for (std::size_t c = 0; c < other.cols_; ++c) out.set(r, cols_ + c, other(r, c));
    }
    return out;
  }

  FieldMatrix operator*(const FieldMatrix& rhs) const {
    require_same_field(rhs);
    if (cols_ != rhs.rows_) {
      throw StructuralError("product of " + shape() + " and " + rhs.shape() + " matrices");
    }
    FieldMatrix out(field_, rows_, rhs.cols_);
    const std::uint64_t q = field_.size();
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < rhs.cols_; ++c) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < cols_; ++k) acc = (acc + std::uint64_t{(*this)(r, k)} * rhs(k, c)) % q;
        out.entries_[r * out.cols_ + c] = static_cast<Symbol>(acc);
      }
    }
    return out;
  }

  FieldMatrix operator+(const FieldMatrix& rhs) const {
    require_same_field(rhs);
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw StructuralError("sum of " + shape() + " and " + rhs.shape());
    FieldMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = field_.add(entries_[i], rhs.entries_[i]);
    return out;
  }

  /// Row vector times matrix: returns v * this.
  std::vector<Symbol> left_multiply(std::span<const Symbol> v) const {
    if (v.size() != rows_) throw StructuralError("vector of length " + std::to_string(v.size()) + " times " + shape());
    std::vector<std::uint64_t> acc(cols_, 0);
    const std::uint64_t q = field_.size();
    for (std::size_t r = 0; r < rows_; ++r) {
      if (v[r] == 0) continue;
      for (std::size_t c = 0; c < cols_; ++c) acc[c] = (acc[c] + std::uint64_t{v[r]} * (*this)(r, c)) % q;
    }
    return {acc.begin(), acc.end()};
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  void require_same_field(const FieldMatrix& other) const {
    if (other.field_ != field_) throw StructuralError("matrices over different fields");
  }

  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Symbol> entries_;
};

/// Reduced row echelon form plus pivot columns (one per nonzero row).
struct RowEchelon {
  FieldMatrix reduced;
  std::vector<std::size_t> pivots;

  std::size_t rank() const { return pivots.size(); }
};

inline RowEchelon row_reduce(FieldMatrix m) {
  const PrimeField& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t next_row = 0;
  for (std::size_t col = 0; col < m.cols() && next_row < m.rows(); ++col) {
    std::size_t pivot = next_row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != next_row) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        Symbol tmp = m(pivot, c);
        m.set(pivot, c, m(next_row, c));
        m.set(next_row, c, tmp);
      }
    }
    const Symbol scale = f.inv(m(next_row, col));
    for (std::size_t c = col; c < m.cols(); ++c) m.set(next_row, c, f.mul(m(next_row, c), scale));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == next_row || m(r, col) == 0) continue;
      const Symbol factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m.set(r, c, f.sub(m(r, c), f.mul(factor, m(next_row, c))));
    }
    pivots.push_back(col);
    ++next_row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const FieldMatrix& m) { return row_reduce(m).rank(); }

/// One solution x of A x = b, or nullopt if the system is inconsistent.
/// Free variables are set to zero, so a unique solution is always the one returned.
inline std::optional<FieldMatrix> solve(const FieldMatrix& a, const FieldMatrix& b) {
  if (b.cols() != 1 || b.rows() != a.rows()) {
    throw StructuralError("solve: right-hand side must be a " + std::to_string(a.rows()) + "x1 column, got " +
                          b.shape());
  }
  const RowEchelon ech = row_reduce(a.hconcat(b));
  const std::size_t n = a.cols();
  if (!ech.pivots.empty() && ech.pivots.back() == n) return std::nullopt;
  FieldMatrix x(a.field(), n, 1);
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) x.set(ech.pivots[r], 0, ech.reduced(r, n));
  return x;
}

/// Basis of {v : M v = 0} as the columns of a cols(M) x (cols(M) - rank(M)) matrix,
/// one basis vector per free column in ascending order.
inline FieldMatrix nullspace(const FieldMatrix& m) {
  const RowEchelon ech = row_reduce(m);
  const PrimeField& f = m.field();
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : ech.pivots) is_pivot[p] = true;

  FieldMatrix basis(f, n, n - ech.rank());
  std::size_t out_col = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    basis.set(free, out_col, 1);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) basis.set(ech.pivots[r], out_col, f.neg(ech.reduced(r, free)));
    ++out_col;
  }
  return basis;
}

/// m x l matrix with row i = [1, a_i, a_i^2, ..., a_i^(l-1)] and a_i = i (0-based).
/// Any l rows are linearly independent, so its transpose generates an MDS code.
inline FieldMatrix vandermonde(std::size_t m, std::size_t l, std::uint64_t q) {
  PrimeField f(q);
  if (q < m) {
    throw InfeasibleField("vandermonde needs " + std::to_string(m) + " distinct points but GF(" + std::to_string(q) +
                          ") has only " + std::to_string(q));
  }
  if (l > m) throw StructuralError("vandermonde: l=" + std::to_string(l) + " exceeds m=" + std::to_string(m));
  FieldMatrix out(f, m, l);
  for (std::size_t i = 0; i < m; ++i) {
    Symbol power = 1;
    for (std::size_t c = 0; c < l; ++c) {
      out.set(i, c, power);
      power = f.mul(power, static_cast<Symbol>(i));
    }
  }
  return out;
}

}  // namespace secidx
