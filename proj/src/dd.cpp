#include "loctrans/dd.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "loctrans/detmap.hpp"

namespace loctrans {

IntVector primitive(const RatVector& v) {
  Integer l = 1, g = 0;
  for (const auto& q : v)
    if (sgn(q) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  IntVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    r[i] = v[i].get_num() * (l / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return r;
}

namespace {

using Word = std::uint64_t;

void make_primitive(IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

Integer dot_int(const IntVector& a, const std::vector<std::size_t>& nz, const IntVector& r) {
  Integer s = 0;
  for (auto j : nz) mpz_addmul(s.get_mpz_t(), a[j].get_mpz_t(), r[j].get_mpz_t());
  return s;
}

}  // namespace

DdResult extreme_rays(const std::vector<IntVector>& rows, std::size_t d, const DdOptions& opts) {
  std::size_t m = rows.size();
  for (const auto& r : rows)
    if (r.size() != d) throw std::invalid_argument("extreme_rays: row length mismatch");
  const std::size_t W = (m + 63) / 64;

  // initial basis: first linearly independent rows
  std::vector<RatVector> echelon;
  std::vector<std::size_t> echelon_pivot, basis;
  for (std::size_t i = 0; i < m && basis.size() < d; ++i) {
    RatVector v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = rows[i][j];
    for (std::size_t k = 0; k < echelon.size(); ++k)
      if (sgn(v[echelon_pivot[k]]) != 0) axpy(v, -v[echelon_pivot[k]], echelon[k]);
    std::size_t p = 0;
    while (p < d && sgn(v[p]) == 0) ++p;
    if (p == d) continue;
    v = scaled(v, 1 / Rational(v[p]));
    echelon.push_back(std::move(v));
    echelon_pivot.push_back(p);
    basis.push_back(i);
  }
  if (basis.size() < d) throw std::invalid_argument("extreme_rays: cone is not pointed (constraint rank below dimension)");

  RatMatrix B(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) B(k, j) = rows[basis[k]][j];
  RatMatrix Binv = *inverse(B);

  std::vector<IntVector> rays;
  std::vector<Word> zs;  // W words per ray
  auto set_bit = [&](std::size_t ray, std::size_t row) { zs[ray * W + row / 64] |= Word(1) << (row % 64); };
  for (std::size_t k = 0; k < d; ++k) {
    rays.push_back(primitive(Binv.col(k)));
    zs.resize(rays.size() * W, 0);
    for (std::size_t l = 0; l < d; ++l)
      if (l != k) set_bit(k, basis[l]);
  }

  std::vector<bool> in_basis(m, false);
  for (auto b : basis) in_basis[b] = true;
  std::vector<std::size_t> processed(basis.begin(), basis.end());

  std::vector<Word> Z(W);
  for (std::size_t i = 0; i < m; ++i) {
    if (in_basis[i]) continue;
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < d; ++j)
      if (sgn(rows[i][j]) != 0) nz.push_back(j);
    std::size_t n = rays.size();
    std::vector<Integer> val(n);
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < n; ++r) {
      val[r] = dot_int(rows[i], nz, rays[r]);
      int sg = sgn(val[r]);
      (sg > 0 ? pos : sg < 0 ? neg : zero).push_back(r);
    }
    std::vector<IntVector> new_rays;
    std::vector<Word> new_zs;
    for (auto p : pos)
      for (auto q : neg) {
        std::size_t cnt = 0;
        for (std::size_t w = 0; w < W; ++w) {
          Z[w] = zs[p * W + w] & zs[q * W + w];
          cnt += static_cast<std::size_t>(std::popcount(Z[w]));
        }
        if (cnt + 2 < d) continue;
        bool adjacent = true;
        if (opts.rank_adjacency) {
          std::vector<RatVector> tight;
          for (auto row : processed)
            if (Z[row / 64] >> (row % 64) & 1) {
              RatVector rv(d);
              for (std::size_t j = 0; j < d; ++j) rv[j] = rows[row][j];
              tight.push_back(std::move(rv));
            }
          adjacent = rank(RatMatrix::from_rows(tight, d)) == d - 2;
        } else {
          for (std::size_t r = 0; r < n && adjacent; ++r) {
            if (r == p || r == q) continue;
            const Word* zr = &zs[r * W];
            bool contains = true;
            for (std::size_t w = 0; w < W; ++w)
              if (Z[w] & ~zr[w]) {
                contains = false;
                break;
              }
            if (contains) adjacent = false;
          }
        }
        if (!adjacent) continue;
        IntVector nr(d);
        Integer a = val[p], b = -val[q];
        for (std::size_t j = 0; j < d; ++j) {
          nr[j] = a * rays[q][j];
          mpz_addmul(nr[j].get_mpz_t(), b.get_mpz_t(), rays[p][j].get_mpz_t());
        }
        make_primitive(nr);
        new_rays.push_back(std::move(nr));
        for (std::size_t w = 0; w < W; ++w) new_zs.push_back(Z[w]);
        new_zs[new_zs.size() - W + i / 64] |= Word(1) << (i % 64);
      }
    for (auto r : zero) set_bit(r, i);
    std::vector<IntVector> next;
    std::vector<Word> next_zs;
    for (std::size_t r = 0; r < n; ++r) {
      if (sgn(val[r]) < 0) continue;
      next.push_back(std::move(rays[r]));
      next_zs.insert(next_zs.end(), zs.begin() + static_cast<std::ptrdiff_t>(r * W),
                     zs.begin() + static_cast<std::ptrdiff_t>((r + 1) * W));
    }
    for (auto& r : new_rays) next.push_back(std::move(r));
    next_zs.insert(next_zs.end(), new_zs.begin(), new_zs.end());
    rays = std::move(next);
    zs = std::move(next_zs);
    processed.push_back(i);
    if (rays.size() > opts.max_rays)
      throw CapExceeded("double description exceeded " + std::to_string(opts.max_rays) + " intermediate rays");
  }

  DdResult out;
  out.rays = std::move(rays);
  for (std::size_t r = 0; r < out.rays.size(); ++r) {
    std::vector<std::size_t> t;
    for (std::size_t row = 0; row < m; ++row)
      if (zs[r * W + row / 64] >> (row % 64) & 1) t.push_back(row);
    out.tight_rows.push_back(std::move(t));
  }
  return out;
}

}  // namespace loctrans
