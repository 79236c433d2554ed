#pragma once

// Test-side oracles, written independently of the library internals: grid
// minimization for projections, Simpson arc-length integration for the
// half-plane metric, spine grid search for cross-page book distances. They
// are deliberately brute force; the library must agree with them, not the
// other way round.

#include <cmath>
#include <cstdint>
#include <vector>

#include "hadamard/hadamard.hpp"

namespace oracle {

using hadamard::BookPt;
using hadamard::EuclideanPt;
using hadamard::Geodesic;
using hadamard::HalfPlanePt;
using hadamard::Kind;
using hadamard::Point;
using hadamard::SpaceHandle;
using hadamard::SpikePt;

// Argmin of d(z, gamma(t)) over the uniform grid t = i/n. Squared or
// monotone-transformed distances are minimized where that is cheaper; the
// argmin is the same.
inline double grid_project_t(const SpaceHandle& s, const Geodesic& g,
                             const Point& z, int n) {
  switch (s.kind) {
    case Kind::Euclidean: {
      const auto& a = std::get<EuclideanPt>(g.a).x;
      const auto& b = std::get<EuclideanPt>(g.b).x;
      const auto& zz = std::get<EuclideanPt>(z).x;
      double qa = 0.0, qb = 0.0, qc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = b[i] - a[i];
        const double r = a[i] - zz[i];
        qa += d * d;
        qb += 2.0 * r * d;
        qc += r * r;
      }
      int best = 0;
      double best_f = qc;  // f2 at t = 0
      for (int i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double f2 = (qa * t + qb) * t + qc;
        if (f2 < best_f) {
          best_f = f2;
          best = i;
        }
      }
      return static_cast<double>(best) / n;
    }
    case Kind::Spike: {
      const auto& a = std::get<SpikePt>(g.a);
      const auto& b = std::get<SpikePt>(g.b);
      const auto& zz = std::get<SpikePt>(z);
      const bool through = a.branch != b.branch;
      int best = 0;
      double best_f = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        int br;
        double pos;
        if (!through) {
          br = a.branch;
          pos = a.s + t * (b.s - a.s);
        } else {
          const double arc = t * (a.s + b.s);
          if (arc <= a.s) {
            br = a.branch;
            pos = a.s - arc;
          } else {
            br = b.branch;
            pos = arc - a.s;
          }
        }
        const double f =
            (br == zz.branch || pos == 0.0) ? std::fabs(zz.s - pos) : zz.s + pos;
        if (f < best_f) {
          best_f = f;
          best = i;
        }
      }
      return static_cast<double>(best) / n;
    }
    case Kind::Book: {
      const auto& a = std::get<BookPt>(g.a);
      const auto& b = std::get<BookPt>(g.b);
      const auto& zz = std::get<BookPt>(z);
      const double leg = s.book().leg;
      // geodesic data, recomputed from scratch
      const bool same = a.page == b.page || a.v == 0.0 || b.v == 0.0;
      const int pg_a = a.v == 0.0 ? b.page : a.page;
      const int pg_b = b.v == 0.0 ? a.page : b.page;
      double w = 0.0, d1 = 0.0, d2 = 0.0;
      if (!same) {
        w = (a.u * b.v + b.u * a.v) / (a.v + b.v);
        if (w < 0.0) w = 0.0;
        if (w > leg) w = leg;
        d1 = std::hypot(a.u - w, a.v);
        d2 = std::hypot(b.u - w, b.v);
      }
      int best = 0;
      double best_f = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        int pg;
        double u, v;
        if (same) {
          pg = pg_a;
          u = a.u + t * (b.u - a.u);
          v = a.v + t * (b.v - a.v);
        } else {
          const double arc = t * (d1 + d2);
          if (arc <= d1) {
            pg = pg_a;
            const double tau = d1 > 0.0 ? arc / d1 : 0.0;
            u = a.u + tau * (w - a.u);
            v = a.v * (1.0 - tau);
          } else {
            pg = pg_b;
            const double tau = (arc - d1) / d2;
            u = w + tau * (b.u - w);
            v = tau * b.v;
          }
        }
        double f2;
        if (pg == zz.page || v <= 0.0 || zz.v == 0.0) {
          f2 = (u - zz.u) * (u - zz.u) + (v - zz.v) * (v - zz.v);
        } else {
          const double cross = (u * zz.v + zz.u * v) / (v + zz.v);
          if (cross >= 0.0 && cross <= leg) {
            f2 = (u - zz.u) * (u - zz.u) + (v + zz.v) * (v + zz.v);
          } else {
            const double via_a = std::hypot(u, v) + std::hypot(zz.u, zz.v);
            const double via_b =
                std::hypot(u - leg, v) + std::hypot(zz.u - leg, zz.v);
            const double m = std::min(via_a, via_b);
            f2 = m * m;
          }
        }
        if (f2 < best_f) {
          best_f = f2;
          best = i;
        }
      }
      return static_cast<double>(best) / n;
    }
    case Kind::HalfPlane: {
      const auto& a = std::get<HalfPlanePt>(g.a);
      const auto& b = std::get<HalfPlanePt>(g.b);
      const auto& zz = std::get<HalfPlanePt>(z);
      int best = 0;
      double best_f = std::numeric_limits<double>::infinity();
      const double scale = std::fabs(a.x) + std::fabs(b.x) + a.y + b.y;
      // minimize q(t) = |gamma(t) - z|^2 / (2 y(t) z_y), a monotone
      // transform of the distance
      if (std::fabs(a.x - b.x) <= 1e-13 * scale) {
        const double k = std::log(b.y / a.y);
        const double dx = a.x - zz.x;
        for (int i = 0; i <= n; ++i) {
          const double t = static_cast<double>(i) / n;
          const double y = a.y * std::exp(t * k);
          const double q = (dx * dx + (y - zz.y) * (y - zz.y)) / y;
          if (q < best_f) {
            best_f = q;
            best = i;
          }
        }
        return static_cast<double>(best) / n;
      }
      const double c =
          (a.x * a.x + a.y * a.y - b.x * b.x - b.y * b.y) /
          (2.0 * (a.x - b.x));
      const double ua = std::asinh((c - a.x) / a.y);
      const double ub = std::asinh((c - b.x) / b.y);
      const double du = (ub - ua) / n;
      const double shd = std::sinh(du), chd = std::cosh(du);
      const double sh_a = std::sinh(ua), ch_a = std::cosh(ua);
      double sh = sh_a, ch = ch_a;
      for (int i = 0; i <= n; ++i) {
        if ((i & 0xffff) == 0) {  // kill recurrence drift
          sh = std::sinh(ua + i * du);
          ch = std::cosh(ua + i * du);
        }
        const double inv = 1.0 / ch;
        const double x = a.x + a.y * (sh_a * ch - ch_a * sh) * inv;
        const double y = a.y * ch_a * inv;
        const double n2 = (x - zz.x) * (x - zz.x) + (y - zz.y) * (y - zz.y);
        const double q = n2 * ch;  // q / const, same argmin
        if (q < best_f) {
          best_f = q;
          best = i;
        }
        const double sh2 = sh * chd + ch * shd;
        ch = ch * chd + sh * shd;
        sh = sh2;
      }
      return static_cast<double>(best) / n;
    }
  }
  return 0.0;
}

// Hyperbolic arc length of the geodesic between a and b, by adaptive Simpson
// integration of the length element: along the circle through a and b the
// element is dtheta / sin(theta); along a vertical segment it is |dy| / y.
// No use of the acosh distance formula.
inline double halfplane_arclength(const HalfPlanePt& a, const HalfPlanePt& b) {
  const double scale = std::fabs(a.x) + std::fabs(b.x) + a.y + b.y;
  auto simpson = [](auto f, double lo, double hi) {
    int n = 64;
    auto comp = [&](int m) {
      const double h = (hi - lo) / m;
      double acc = f(lo) + f(hi);
      for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
      return acc * h / 3.0;
    };
    double prev = comp(n);
    for (int round = 0; round < 14; ++round) {
      n *= 2;
      const double cur = comp(n);
      if (std::fabs(cur - prev) < 1e-12 * (1.0 + std::fabs(cur))) return cur;
      prev = cur;
    }
    return prev;
  };
  if (std::fabs(a.x - b.x) <= 1e-13 * scale) {
    const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
    return simpson([](double y) { return 1.0 / y; }, lo, hi);
  }
  const double c = (a.x * a.x + a.y * a.y - b.x * b.x - b.y * b.y) /
                   (2.0 * (a.x - b.x));
  const double ta = std::atan2(a.y, a.x - c);
  const double tb = std::atan2(b.y, b.x - c);
  const double lo = std::min(ta, tb), hi = std::max(ta, tb);
  return simpson([](double th) { return 1.0 / std::sin(th); }, lo, hi);
}

// Cross-page book distance by brute-force search over spine crossing points.
inline double book_cross_oracle(double leg, const BookPt& p, const BookPt& q,
                                int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double w = leg * i / n;
    best = std::min(best,
                    std::hypot(p.u - w, p.v) + std::hypot(q.u - w, q.v));
  }
  return best;
}

}  // namespace oracle
