#include "wrapnet/predicates.hpp"

#include <cmath>

namespace wrapnet {

namespace {

// Error-free transforms: a + b = s + e and a * b = p + e exactly.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Sign of the exact sum of `n` doubles. Components are accumulated into a
// nonoverlapping expansion ordered by increasing magnitude; its sign is the
// sign of the largest nonzero component.
template <int N>
int sign_of_sum(const std::array<double, N>& terms) {
  std::array<double, N> expansion{};
  int len = 0;
  for (double b : terms) {
    double q = b;
    int out = 0;
    for (int i = 0; i < len; ++i) {
      double s, e;
      two_sum(q, expansion[i], s, e);
      q = s;
      if (e != 0.0) expansion[out++] = e;
    }
    if (q != 0.0) expansion[out++] = q;
    len = out;
  }
  if (len == 0) return 0;
  return expansion[len - 1] > 0.0 ? 1 : -1;
}

}  // namespace

int orient2d_exact(const Vec2& a, const Vec2& b, const Vec2& c) {
  // det = ax*by - ay*bx + bx*cy - by*cx + cx*ay - cy*ax
  std::array<double, 12> t{};
  two_product(a.x(), b.y(), t[0], t[1]);
  two_product(-a.y(), b.x(), t[2], t[3]);
  two_product(b.x(), c.y(), t[4], t[5]);
  two_product(-b.y(), c.x(), t[6], t[7]);
  two_product(c.x(), a.y(), t[8], t[9]);
  two_product(-c.y(), a.x(), t[10], t[11]);
  return sign_of_sum<12>(t);
}

int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double left = (a.x() - c.x()) * (b.y() - c.y());
  const double right = (a.y() - c.y()) * (b.x() - c.x());
  const double det = left - right;
  // Shewchuk's first-stage bound, (3 + 16 eps) eps with eps = 2^-53.
  constexpr double eps = 1.1102230246251565e-16;
  constexpr double bound_factor = (3.0 + 16.0 * eps) * eps;
  const double bound = bound_factor * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient2d_exact(a, b, c);
}

bool triangles_overlap(const std::array<Vec2, 3>& t, const std::array<Vec2, 3>& u) {
  const int st = orient2d(t[0], t[1], t[2]);
  const int su = orient2d(u[0], u[1], u[2]);
  if (st == 0 || su == 0) return false;

  // Convex polygons have disjoint interiors iff some edge line of one of them
  // weakly separates it from the other.
  auto separated_by_edges = [](const std::array<Vec2, 3>& p, int sign, const std::array<Vec2, 3>& q) {
    for (int k = 0; k < 3; ++k) {
      const Vec2& a = p[k];
      const Vec2& b = p[(k + 1) % 3];
      bool all_outside = true;
      for (const Vec2& x : q) {
        if (orient2d(a, b, x) * sign > 0) {
          all_outside = false;
          break;
        }
      }
      if (all_outside) return true;
    }
    return false;
  };
  return !separated_by_edges(t, st, u) && !separated_by_edges(u, su, t);
}

}  // namespace wrapnet
