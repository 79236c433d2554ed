#pragma once

#include "spaces.hpp"

namespace hadamard {

struct ProjectionResult {
  Point point;
  double t = 0.0;
  double dist = 0.0;
  int iterations = 0;
  // Final ternary-search bracket. bracket_hi staying pinned near 1 certifies
  // that the minimizer sits at the far endpoint, which membership tests use
  // to certify exclusion.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

namespace detail {

// d(z, gamma(t)) evaluated with no per-call allocation. Convex in t on every
// CAT(0) space, which is what makes the ternary search sound.
struct DistanceProfile {
  Kind kind = Kind::Euclidean;
  // euclidean: residuals r = a - z and direction d per coordinate, so the
  // squared profile sum (r_i + t d_i)^2 is evaluated without the
  // cancellation a premultiplied quadratic suffers near a zero minimum.
  // qa = |d|^2 and qb = 2<r, d> feed the exact comparator below.
  std::vector<double> r, dvec;
  double qa = 0.0, qb = 0.0;
  SpikeEval sp{};
  int z_branch = 0;
  double z_s = 0.0;
  BookEval bk{};
  BookParams bp{};
  int z_page = 0;
  double z_u = 0.0, z_v = 0.0;
  // book, non-crossing geodesic: the squared profile is the single quadratic
  // (u(t)-zu)^2 + (v(t) -+ zv)^2 with slope coefficients bA, bB
  bool book_quad = false;
  double bA = 0.0, bB = 0.0;
  HalfPlaneEval hp{};
  double z_x = 0.0, z_y = 0.0;

  double operator()(double t) const {
    switch (kind) {
      case Kind::Euclidean: {
        double s2 = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s2 += sq(r[i] + t * dvec[i]);
        return std::sqrt(s2);
      }
      case Kind::Spike: {
        int br;
        double pos;
        if (!sp.through_origin) {
          br = sp.br_a;
          pos = sp.s_a + t * (sp.s_b - sp.s_a);
        } else {
          const double arc = t * (sp.s_a + sp.s_b);
          if (arc <= sp.s_a) {
            br = sp.br_a;
            pos = sp.s_a - arc;
          } else {
            br = sp.br_b;
            pos = arc - sp.s_a;
          }
        }
        return br == z_branch ? std::fabs(z_s - pos) : z_s + pos;
      }
      case Kind::Book: {
        const BookCoord c = eval_book(bk, t);
        return dist_book(bp, BookPt{c.pg, c.u, c.v},
                         BookPt{z_page, z_u, z_v});
      }
      case Kind::HalfPlane: {
        const PlaneCoord c = eval_halfplane(hp, t);
        const double n2 = sq(c.x - z_x) + sq(c.y - z_y);
        return acosh1p(n2 / (2.0 * c.y * z_y));
      }
    }
    return 0.0;
  }

  // f(m1) <= f(m2) for m1 < m2. Where the squared profile is one quadratic,
  // f(m1)^2 - f(m2)^2 factors as (m1 - m2)(A (m1 + m2) + B), so the
  // comparison reduces to one cancellation-light sign. That keeps the
  // ternary bracket on its exact-arithmetic trajectory even inside the
  // rounding plateau around the minimizer; endpoint certification (a bracket
  // pinned at 1) depends on this when the profile goes flat at the endpoint.
  bool leq(double m1, double m2) const {
    switch (kind) {
      case Kind::Euclidean:
        return qa * (m1 + m2) + qb >= 0.0;
      case Kind::Book:
        if (book_quad) return bA * (m1 + m2) + bB >= 0.0;
        return (*this)(m1) <= (*this)(m2);
      case Kind::HalfPlane: {
        // acosh1p is increasing, so compare its arguments
        const PlaneCoord c1 = eval_halfplane(hp, m1);
        const PlaneCoord c2 = eval_halfplane(hp, m2);
        const double q1 = (sq(c1.x - z_x) + sq(c1.y - z_y)) / c1.y;
        const double q2 = (sq(c2.x - z_x) + sq(c2.y - z_y)) / c2.y;
        return q1 <= q2;
      }
      default:
        return (*this)(m1) <= (*this)(m2);
    }
  }
};

inline DistanceProfile make_profile(const SpaceHandle& s, const Geodesic& g,
                                    const Point& z) {
  DistanceProfile f;
  f.kind = s.kind;
  const GeodesicEval ev = prepare_geodesic(s, g);
  switch (s.kind) {
    case Kind::Euclidean: {
      const auto& e = std::get<EuclidEval>(ev);
      const auto& zz = std::get<EuclideanPt>(z);
      f.r.resize(e.a.size());
      f.dvec = e.d;
      for (std::size_t i = 0; i < e.a.size(); ++i) {
        f.r[i] = e.a[i] - zz.x[i];
        f.qa += e.d[i] * e.d[i];
        f.qb += 2.0 * f.r[i] * e.d[i];
      }
      return f;
    }
    case Kind::Spike: {
      f.sp = std::get<SpikeEval>(ev);
      const auto& zz = std::get<SpikePt>(z);
      f.z_branch = zz.branch;
      f.z_s = zz.s;
      return f;
    }
    case Kind::Book: {
      f.bk = std::get<BookEval>(ev);
      f.bp = s.book();
      const auto& zz = std::get<BookPt>(z);
      f.z_page = zz.page;
      f.z_u = zz.u;
      f.z_v = zz.v;
      if (!f.bk.cross) {
        // gamma(t) = (ua + t du, va + t dv) on page pg_a; reaching z flips
        // the sign of zv when z sits on another page (spine points have
        // zv = 0, so either sign agrees there)
        const double du = f.bk.ub - f.bk.ua;
        const double dv = f.bk.vb - f.bk.va;
        const double ev_ = f.z_page == f.bk.pg_a ? f.bk.va - zz.v
                                                 : f.bk.va + zz.v;
        f.book_quad = true;
        f.bA = du * du + dv * dv;
        f.bB = 2.0 * ((f.bk.ua - zz.u) * du + ev_ * dv);
      }
      return f;
    }
    case Kind::HalfPlane: {
      f.hp = std::get<HalfPlaneEval>(ev);
      const auto& zz = std::get<HalfPlanePt>(z);
      f.z_x = zz.x;
      f.z_y = zz.y;
      return f;
    }
  }
  throw input_error("unknown space kind");
}

// The ternary bracket is noise-limited: within ~sqrt(eps) of a smooth
// minimizer the profile is flat at rounding scale, so the bracket midpoint
// can land anywhere on that plateau (~1e-8 wide). A parabola sampled at
// spacing 1e-5 sees curvature far above the noise floor and pins smooth
// minimizers to ~1e-10. Kinked minima (spike gluing, book spine crossings)
// and linear stretches keep the ternary answer: the fit only replaces it
// when the samples are strictly convex and the vertex is not worse.
template <typename F>
inline double refine_minimizer(const F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double h = 1e-5;
  const double c = std::clamp(mid, h, 1.0 - h);
  const double fl = f(c - h), fm = f(c), fh = f(c + h);
  const double denom = fl - 2.0 * fm + fh;
  if (!(denom > 0.0)) return mid;
  double cand = c + 0.5 * h * (fl - fh) / denom;
  if (!std::isfinite(cand)) return mid;
  cand = std::clamp(cand, c - h, c + h);
  cand = std::clamp(cand, 0.0, 1.0);
  const double f_mid = f(mid);
  return f(cand) <= f_mid + 1e-14 * (1.0 + std::fabs(f_mid)) ? cand : mid;
}

}  // namespace detail

// Closest-point projection of z onto the segment [g.a, g.b]. Ternary search
// on the convex profile d(z, gamma(t)), bracket shrinking by 2/3 per
// iteration, finished by one parabolic refinement inside the final bracket.
inline ProjectionResult project_to_geodesic(const SpaceHandle& s,
                                            const Geodesic& g, const Point& z,
                                            const ToleranceConfig& cfg = {}) {
  cfg.validate();
  validate_point(s, g.a);
  validate_point(s, g.b);
  validate_point(s, z);
  if (g.length <= 0.0) {
    return {g.a, 0.0, detail::dist(s, z, g.a), 0, 0.0, 0.0};
  }
  const detail::DistanceProfile f = detail::make_profile(s, g, z);
  double lo = 0.0, hi = 1.0;
  int iter = 0;
  while (hi - lo > cfg.tol_opt) {
    if (iter >= cfg.max_iter)
      throw numerical_error(
          "projection bracket still wider than tol_opt after max_iter", lo,
          hi);
    const double step = (hi - lo) / 3.0;
    const double m1 = lo + step;
    const double m2 = hi - step;
    if (f.leq(m1, m2))
      hi = m2;
    else
      lo = m1;
    ++iter;
  }
  const double t = detail::refine_minimizer(f, lo, hi);
  Point p = geodesic_point(s, g, t);
  const double d = detail::dist(s, z, p);
  return {std::move(p), t, d, iter, lo, hi};
}

// Projection onto a closed ball: z itself when inside, otherwise the point
// of [center, z] at arc length radius. Exact, no search.
inline Point project_to_ball(const SpaceHandle& s, const ConvexBody& body,
                             const Point& z) {
  if (!(body.radius > 0.0)) throw input_error("ball radius must be positive");
  validate_point(s, body.center);
  validate_point(s, z);
  const double d = detail::dist(s, body.center, z);
  if (d <= body.radius) return z;
  const Geodesic g = make_geodesic(s, body.center, z);
  return geodesic_point(s, g, body.radius / d);
}

}  // namespace hadamard
