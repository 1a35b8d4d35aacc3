#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loctrans {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVector = std::vector<Rational>;

// "p/q", or "p" when q = 1
std::string to_string(const Rational& q);
// accepts "p", "p/q", "-p/q"; result is canonicalized
Rational parse_rational(std::string_view s);

RatVector zeros(std::size_t n);
Rational dot(const RatVector& u, const RatVector& v);
RatVector add(const RatVector& u, const RatVector& v);
RatVector sub(const RatVector& u, const RatVector& v);
RatVector scaled(const RatVector& v, const Rational& s);
void axpy(RatVector& y, const Rational& a, const RatVector& x);
bool is_zero(const RatVector& v);
RatVector kron(const RatVector& u, const RatVector& v);

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVector row(std::size_t i) const;
  RatVector col(std::size_t j) const;
  RatMatrix transpose() const;
  bool is_zero() const;

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const Rational& s, const RatMatrix& a);
// column vector action M v
RatVector operator*(const RatMatrix& m, const RatVector& v);
// row vector action v M
RatVector operator*(const RatVector& v, const RatMatrix& m);
RatMatrix kron(const RatMatrix& a, const RatMatrix& b);
RatMatrix outer(const RatVector& u, const RatVector& v);

struct RowEchelon {
  RatMatrix rref;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon row_reduce(RatMatrix m);
std::size_t rank(const RatMatrix& m);
std::vector<RatVector> kernel_basis(const RatMatrix& m);
// nullopt when inconsistent; free variables set to zero
std::optional<RatVector> solve(const RatMatrix& m, const RatVector& b);
std::optional<RatMatrix> inverse(const RatMatrix& m);
RatMatrix pseudo_inverse(const RatMatrix& m);

// Mode products on a Kronecker-ordered tensor with per-mode sizes `dims`
// (mode 0 most significant).
// (1 x .. x M x .. x 1) v, M is (d' x dims[mode])
RatVector apply_mode(const RatMatrix& m, std::span<const std::size_t> dims, std::size_t mode,
                     const RatVector& v);
// phi (1 x .. x M x .. x 1), M is (dims[mode] x d')
RatVector apply_mode_dual(const RatVector& phi, std::span<const std::size_t> dims, std::size_t mode,
                          const RatMatrix& m);

}  // namespace loctrans
