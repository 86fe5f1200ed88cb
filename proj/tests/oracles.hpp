#pragma once

// Brute-force reference computations used by the tests. They work in Cartesian coordinates
// (x, y) with a + b*w = x + y*sqrt(d), so they share no code path with the library's basis
// arithmetic.

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;

struct Point {
  Q x, y;
};

inline bool half_basis(int d) { return d == -3 || d == -7 || d == -11; }

inline Q canon(long num, long den) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

inline Point cartesian(int d, const Q& a, const Q& b) {
  if (half_basis(d)) return {a + b / 2, b / 2};
  return {a, b};
}

inline Q norm(int d, const Point& p) { return p.x * p.x + Q(-d) * p.y * p.y; }

inline Q dist(int d, const Point& p, const Point& q) { return norm(d, {p.x - q.x, p.y - q.y}); }

/// Lattice points of O_E near p, found by scanning a coordinate box.
inline Q nearest_norm(int d, const Point& p, long reach = 3) {
  Q best = -1;
  // Invert the Cartesian map to locate the box.
  const Q b = half_basis(d) ? 2 * p.y : p.y;
  const Q a = half_basis(d) ? p.x - b / 2 : p.x;
  mpz_class fa, fb;
  mpz_fdiv_q(fa.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  mpz_fdiv_q(fb.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
  for (long i = -reach; i <= reach; ++i)
    for (long j = -reach; j <= reach; ++j) {
      const Q la = Q(fa) + i, lb = Q(fb) + j;
      const Q v = dist(d, p, cartesian(d, la, lb));
      if (best < 0 || v < best) best = v;
    }
  return best;
}

/// Exact deep-hole norm: circumcenters of all triangles of nearby lattice points that contain no
/// closer lattice point (empty circumcircle), maximized.
inline Q deep_hole_norm(int d) {
  std::vector<Point> pts;
  for (long a = -1; a <= 2; ++a)
    for (long b = -1; b <= 2; ++b) pts.push_back(cartesian(d, Q(a), Q(b)));
  Q best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        // |c - p|^2 equal for all three: linear system in (cx, cy) with metric diag(1, |d|).
        const Point &p = pts[i], &q = pts[j], &r = pts[k];
        const Q w = Q(-d);
        const Q a11 = 2 * (q.x - p.x), a12 = 2 * w * (q.y - p.y);
        const Q a21 = 2 * (r.x - p.x), a22 = 2 * w * (r.y - p.y);
        const Q b1 = norm(d, q) - norm(d, p), b2 = norm(d, r) - norm(d, p);
        const Q det = a11 * a22 - a12 * a21;
        if (det == 0) continue;
        const Point c{(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
        const Q radius = dist(d, c, p);
        if (nearest_norm(d, c) == radius) best = std::max(best, radius);
      }
  return best;
}

/// Largest nearest-lattice-point norm over an n x n grid of the fundamental parallelogram.
inline Q grid_max_norm(int d, long n) {
  Q best = 0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) best = std::max(best, nearest_norm(d, cartesian(d, canon(i, n), canon(j, n)), 1));
  return best;
}

inline int discriminant(int d) { return half_basis(d) ? d : 4 * d; }

/// |O^# / m O| per coordinate row, by brute force. Points of O^# are y / sqrt(D) with y in O,
/// written through y's coordinates in a box of side m|D|; two are equivalent iff
/// (y1 - y2) / (sqrt(D) m) lies in O.
inline long coset_count_one(int d, long m) {
  const long side = m * std::abs(discriminant(d));
  // y / (sqrt(D) m) in O  <=>  y in sqrt(D) m O. Compute the sublattice sqrt(D) m O in
  // coordinates of y and test membership by solving the 2x2 system.
  // sqrt(D) = 2w (sqrt case) or 2w - 1 (half case); multiplication by w sends (a, b) to
  // (p b, a + q b) with w^2 = p + q w.
  const long p = half_basis(d) ? (d - 1) / 4 : d, qq = half_basis(d) ? 1 : 0;
  auto mul_w = [&](std::pair<long, long> v) { return std::make_pair(p * v.second, v.first + qq * v.second); };
  auto root = [&](std::pair<long, long> v) {
    auto w = mul_w(v);
    std::pair<long, long> out{2 * w.first, 2 * w.second};
    if (half_basis(d)) out = {out.first - v.first, out.second - v.second};
    return std::make_pair(out.first * m, out.second * m);
  };
  const auto g1 = root({1, 0}), g2 = root({0, 1});
  const long det = g1.first * g2.second - g1.second * g2.first;
  auto in_sublattice = [&](long a, long b) {
    // Solve s g1 + t g2 = (a, b) over Q and test integrality.
    const long s_num = a * g2.second - b * g2.first;
    const long t_num = g1.first * b - g1.second * a;
    return s_num % det == 0 && t_num % det == 0;
  };
  std::vector<std::pair<long, long>> reps;
  for (long a = 0; a < side; ++a)
    for (long b = 0; b < side; ++b) {
      bool fresh = true;
      for (const auto& [ra, rb] : reps)
        if (in_sublattice(a - ra, b - rb)) {
          fresh = false;
          break;
        }
      if (fresh) reps.emplace_back(a, b);
    }
  return static_cast<long>(reps.size());
}

}  // namespace oracle
