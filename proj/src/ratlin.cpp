#include "loctrans/ratlin.hpp"

#include <stdexcept>

namespace loctrans {

std::string to_string(const Rational& r) {
  Rational q = r;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view s) {
  auto bad = [&] { return std::invalid_argument("malformed rational: \"" + std::string(s) + "\""); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto check_int = [&](std::string_view t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) throw bad();
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') throw bad();
  };
  std::string num(s.substr(0, slash));
  check_int(num);
  if (num[0] == '+') num.erase(0, 1);
  Rational q;
  if (slash == std::string_view::npos) {
    q = Rational(Integer(num), 1);
  } else {
    std::string den(s.substr(slash + 1));
    check_int(den);
    if (den[0] == '-' || den[0] == '+') throw bad();
    Integer d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: \"" + std::string(s) + "\"");
    q = Rational(Integer(num), d);
  }
  q.canonicalize();
  return q;
}

RatVector zeros(std::size_t n) { return RatVector(n); }

Rational dot(const RatVector& u, const RatVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dot: length mismatch");
  Rational s;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (sgn(u[i]) != 0 && sgn(v[i]) != 0) s += u[i] * v[i];
  return s;
}

RatVector add(const RatVector& u, const RatVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("add: length mismatch");
  RatVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] + v[i];
  return r;
}

RatVector sub(const RatVector& u, const RatVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("sub: length mismatch");
  RatVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - v[i];
  return r;
}

RatVector scaled(const RatVector& v, const Rational& s) {
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
  return r;
}

void axpy(RatVector& y, const Rational& a, const RatVector& x) {
  if (y.size() != x.size()) throw std::invalid_argument("axpy: length mismatch");
  if (sgn(a) == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (sgn(x[i]) != 0) y[i] += a * x[i];
}

bool is_zero(const RatVector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

RatVector kron(const RatVector& u, const RatVector& v) {
  RatVector r(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i * v.size() + j] = u[i] * v[j];
  return r;
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows[0].size();
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("from_rows: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RatVector RatMatrix::row(std::size_t i) const {
  return RatVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

RatVector RatMatrix::col(std::size_t j) const {
  RatVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : data_)
    if (sgn(x) != 0) return false;
  return true;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (sgn(b(k, j)) != 0) c(i, j) += x * b(k, j);
    }
  return c;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum: shape mismatch");
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference: shape mismatch");
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

RatMatrix operator*(const Rational& s, const RatMatrix& a) {
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

RatVector operator*(const RatMatrix& m, const RatVector& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
  RatVector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0 && sgn(v[j]) != 0) r[i] += m(i, j) * v[j];
  return r;
}

RatVector operator*(const RatVector& v, const RatMatrix& m) {
  if (m.rows() != v.size()) throw std::invalid_argument("vector-matrix product: shape mismatch");
  RatVector r(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (sgn(v[i]) == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) r[j] += v[i] * m(i, j);
  }
  return r;
}

RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(a(i, j)) == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return c;
}

RatMatrix outer(const RatVector& u, const RatVector& v) {
  RatMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

RowEchelon row_reduce(RatMatrix m) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rref = std::move(m);
  return out;
}

std::size_t rank(const RatMatrix& m) { return row_reduce(m).pivots.size(); }

std::vector<RatVector> kernel_basis(const RatMatrix& m) {
  RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rref(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVector> solve(const RatMatrix& m, const RatVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
  RatMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  RatVector x(m.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.rref(i, m.cols());
  return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
  std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.rref(i, n + j);
  return inv;
}

RatMatrix pseudo_inverse(const RatMatrix& m) {
  RowEchelon e = row_reduce(m);
  std::size_t r = e.pivots.size();
  if (r == 0) return RatMatrix(m.cols(), m.rows());
  // M = B C with B the pivot columns of M and C the nonzero rows of rref(M)
  RatMatrix b(m.rows(), r), c(r, m.cols());
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) b(i, k) = m(i, e.pivots[k]);
    for (std::size_t j = 0; j < m.cols(); ++j) c(k, j) = e.rref(k, j);
  }
  RatMatrix bt = b.transpose(), ct = c.transpose();
  auto cc = inverse(c * ct);
  auto bb = inverse(bt * b);
  return ct * *cc * *bb * bt;
}

RatVector apply_mode(const RatMatrix& m, std::span<const std::size_t> dims, std::size_t mode,
                     const RatVector& v) {
  if (mode >= dims.size() || m.cols() != dims[mode]) throw std::invalid_argument("apply_mode: shape mismatch");
  std::size_t pre = 1, post = 1;
  for (std::size_t k = 0; k < mode; ++k) pre *= dims[k];
  for (std::size_t k = mode + 1; k < dims.size(); ++k) post *= dims[k];
  if (v.size() != pre * dims[mode] * post) throw std::invalid_argument("apply_mode: vector length mismatch");
  std::size_t din = dims[mode], dout = m.rows();
  RatVector r(pre * dout * post);
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t i = 0; i < dout; ++i)
      for (std::size_t j = 0; j < din; ++j) {
        const Rational& x = m(i, j);
        if (sgn(x) == 0) continue;
        const Rational* src = &v[(p * din + j) * post];
        Rational* dst = &r[(p * dout + i) * post];
        for (std::size_t q = 0; q < post; ++q)
          if (sgn(src[q]) != 0) dst[q] += x * src[q];
      }
  return r;
}

RatVector apply_mode_dual(const RatVector& phi, std::span<const std::size_t> dims, std::size_t mode,
                          const RatMatrix& m) {
  if (mode >= dims.size() || m.rows() != dims[mode]) throw std::invalid_argument("apply_mode_dual: shape mismatch");
  std::size_t pre = 1, post = 1;
  for (std::size_t k = 0; k < mode; ++k) pre *= dims[k];
  for (std::size_t k = mode + 1; k < dims.size(); ++k) post *= dims[k];
  if (phi.size() != pre * dims[mode] * post) throw std::invalid_argument("apply_mode_dual: vector length mismatch");
  std::size_t din = dims[mode], dout = m.cols();
  RatVector r(pre * dout * post);
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t i = 0; i < din; ++i)
      for (std::size_t j = 0; j < dout; ++j) {
        const Rational& x = m(i, j);
        if (sgn(x) == 0) continue;
        const Rational* src = &phi[(p * din + i) * post];
        Rational* dst = &r[(p * dout + j) * post];
        for (std::size_t q = 0; q < post; ++q)
          if (sgn(src[q]) != 0) dst[q] += x * src[q];
      }
  return r;
}

}  // namespace loctrans
