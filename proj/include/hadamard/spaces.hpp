#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

#include "types.hpp"

// The four model spaces and their exact geodesic geometry.
//
//   euclidean  R^d with the usual metric; geodesics are segments.
//   spike      countably many intervals [0, n] glued at 0; the distance is
//              |s - t| on a common branch and s + t across branches.
//   book       triangular pages glued along a common spine edge; a geodesic
//              between interior points of different pages crosses the spine
//              exactly once, and unfolding the two pages into a plane turns
//              it into a straight segment.
//   halfplane  the hyperbolic upper half-plane, curvature -1; geodesics are
//              vertical rays and semicircles centered on the x-axis.

namespace hadamard {

inline SpaceHandle make_euclidean(int dim) {
  if (dim < 1) throw input_error("euclidean dimension must be >= 1");
  return {Kind::Euclidean, EuclideanParams{dim}};
}

inline SpaceHandle make_spike(int branches) {
  if (branches < 1) throw input_error("spike needs at least one branch");
  return {Kind::Spike, SpikeParams{branches}};
}

inline SpaceHandle make_book(int pages, double leg) {
  if (pages < 1) throw input_error("book needs at least one page");
  if (!std::isfinite(leg) || !(leg > 0.0))
    throw input_error("book leg length must be positive and finite");
  return {Kind::Book, BookParams{pages, leg}};
}

inline SpaceHandle make_halfplane() {
  return {Kind::HalfPlane, HalfPlaneParams{}};
}

inline void validate_point(const SpaceHandle& s, const Point& p) {
  switch (s.kind) {
    case Kind::Euclidean: {
      const auto* e = std::get_if<EuclideanPt>(&p);
      if (!e) throw input_error("point does not belong to a euclidean space");
      if (static_cast<int>(e->x.size()) != s.euclidean().dim)
        throw input_error("euclidean point has dimension " +
                          std::to_string(e->x.size()) + ", space has " +
                          std::to_string(s.euclidean().dim));
      return;
    }
    case Kind::Spike: {
      const auto* q = std::get_if<SpikePt>(&p);
      if (!q) throw input_error("point does not belong to a spike space");
      if (q->branch > s.spike().branches)
        throw input_error("spike branch index exceeds the space truncation");
      if (q->s > q->branch + 1e-9 * (1.0 + q->branch))
        throw input_error("spike coordinate exceeds the branch length");
      return;
    }
    case Kind::Book: {
      const auto* b = std::get_if<BookPt>(&p);
      if (!b) throw input_error("point does not belong to a book space");
      const auto& bp = s.book();
      if (b->page > bp.pages)
        throw input_error("book page index exceeds the space truncation");
      if (b->u + b->v > bp.leg + 1e-9 * (1.0 + bp.leg))
        throw input_error("book point lies outside its page (u + v > leg)");
      return;
    }
    case Kind::HalfPlane: {
      const auto* h = std::get_if<HalfPlanePt>(&p);
      if (!h) throw input_error("point does not belong to the half-plane");
      if (!(h->y > 0.0))
        throw input_error("half-plane point needs y > 0");
      return;
    }
  }
  throw input_error("unknown space kind");
}

namespace detail {

inline double sq(double v) { return v * v; }

// acosh(1 + q) for q >= 0 without the cancellation the naive form suffers
// near q = 0.
inline double acosh1p(double q) {
  return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

inline double dist_euclidean(const EuclideanPt& p, const EuclideanPt& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) acc += sq(p.x[i] - q.x[i]);
  return std::sqrt(acc);
}

inline double dist_spike(const SpikePt& p, const SpikePt& q) {
  return p.branch == q.branch ? std::fabs(p.s - q.s) : p.s + q.s;
}

// Unfolded cross-page distance. For interior points the straight segment of
// the unfolding crosses the spine at
//   w = (u_p v_q + u_q v_p) / (v_p + v_q),
// which is a convex combination of u_p and u_q and hence inside [0, leg];
// the corner routes below only guard rounding at the boundary.
inline double dist_book(const BookParams& bp, const BookPt& p,
                        const BookPt& q) {
  if (p.page == q.page || p.v == 0.0 || q.v == 0.0)
    return std::sqrt(sq(p.u - q.u) + sq(p.v - q.v));
  const double w = (p.u * q.v + q.u * p.v) / (p.v + q.v);
  if (w >= 0.0 && w <= bp.leg)
    return std::sqrt(sq(p.u - q.u) + sq(p.v + q.v));
  const double via_a =
      std::sqrt(sq(p.u) + sq(p.v)) + std::sqrt(sq(q.u) + sq(q.v));
  const double via_b = std::sqrt(sq(p.u - bp.leg) + sq(p.v)) +
                       std::sqrt(sq(q.u - bp.leg) + sq(q.v));
  return std::min(via_a, via_b);
}

inline double dist_halfplane(const HalfPlanePt& p, const HalfPlanePt& q) {
  const double n2 = sq(p.x - q.x) + sq(p.y - q.y);
  return acosh1p(n2 / (2.0 * p.y * q.y));
}

// Distance without revalidation; public entry points validate once.
inline double dist(const SpaceHandle& s, const Point& p, const Point& q) {
  switch (s.kind) {
    case Kind::Euclidean:
      return dist_euclidean(std::get<EuclideanPt>(p), std::get<EuclideanPt>(q));
    case Kind::Spike:
      return dist_spike(std::get<SpikePt>(p), std::get<SpikePt>(q));
    case Kind::Book:
      return dist_book(s.book(), std::get<BookPt>(p), std::get<BookPt>(q));
    case Kind::HalfPlane:
      return dist_halfplane(std::get<HalfPlanePt>(p),
                            std::get<HalfPlanePt>(q));
  }
  throw input_error("unknown space kind");
}

}  // namespace detail

inline double distance(const SpaceHandle& s, const Point& p, const Point& q) {
  validate_point(s, p);
  validate_point(s, q);
  return detail::dist(s, p, q);
}

inline bool points_equal(const SpaceHandle& s, const Point& p, const Point& q,
                         const ToleranceConfig& cfg = {}) {
  return distance(s, p, q) <= cfg.tol_point;
}

// Constant-speed parametrization: d(gamma(s), gamma(t)) = |s - t| * length
// for s, t in [0, 1], with gamma(0) = a and gamma(1) = b.
struct Geodesic {
  Point a;
  Point b;
  double length = 0.0;
};

inline Geodesic make_geodesic(const SpaceHandle& s, Point a, Point b) {
  const double len = distance(s, a, b);
  return {std::move(a), std::move(b), len};
}

namespace detail {

struct EuclidEval {
  std::vector<double> a;
  std::vector<double> d;  // gamma(t) = a + t d
};

struct SpikeEval {
  int br_a, br_b;
  double s_a, s_b;
  bool through_origin;  // branches differ; path runs s_a -> 0 -> s_b
};

// Cross-page book geodesics bend at the spine point (w, 0); d1 and d2 are
// the two straight legs in page coordinates.
struct BookEval {
  int pg_a, pg_b;
  double ua, va, ub, vb;
  bool cross;
  double w, d1, d2;
};

struct HalfPlaneEval {
  bool vertical;
  double xa, ya;
  double k;             // vertical ray: (xa, ya * exp(t k))
  double ua, du, ch_ua; // semicircle, arc-length angle u(t) = ua + t du
};

struct BookCoord {
  int pg;
  double u, v;
};

struct PlaneCoord {
  double x, y;
};

inline BookCoord eval_book(const BookEval& ev, double t) {
  if (!ev.cross) {
    return {ev.pg_a, ev.ua + t * (ev.ub - ev.ua), ev.va + t * (ev.vb - ev.va)};
  }
  const double total = ev.d1 + ev.d2;
  const double arc = t * total;
  if (arc <= ev.d1) {
    const double tau = ev.d1 > 0.0 ? arc / ev.d1 : 0.0;
    return {ev.pg_a, ev.ua + tau * (ev.w - ev.ua),
            std::max(0.0, ev.va * (1.0 - tau))};
  }
  const double tau = (arc - ev.d1) / ev.d2;
  return {ev.pg_b, ev.w + tau * (ev.ub - ev.w), std::max(0.0, tau * ev.vb)};
}

// x(t) = xa + ya sinh(ua - u)/cosh(u), y(t) = ya cosh(ua)/cosh(u) is the
// algebraically stable form of the semicircle parametrization; the textbook
// x = c - R tanh(u) cancels catastrophically when the chord is near
// vertical.
inline PlaneCoord eval_halfplane(const HalfPlaneEval& ev, double t) {
  if (ev.vertical) return {ev.xa, ev.ya * std::exp(t * ev.k)};
  const double u = ev.ua + t * ev.du;
  const double ch = std::cosh(u);
  return {ev.xa + ev.ya * std::sinh(ev.ua - u) / ch, ev.ya * ev.ch_ua / ch};
}

using GeodesicEval =
    std::variant<EuclidEval, SpikeEval, BookEval, HalfPlaneEval>;

inline GeodesicEval prepare_geodesic(const SpaceHandle& s, const Geodesic& g) {
  switch (s.kind) {
    case Kind::Euclidean: {
      const auto& a = std::get<EuclideanPt>(g.a);
      const auto& b = std::get<EuclideanPt>(g.b);
      EuclidEval ev;
      ev.a = a.x;
      ev.d.resize(a.x.size());
      for (std::size_t i = 0; i < a.x.size(); ++i) ev.d[i] = b.x[i] - a.x[i];
      return ev;
    }
    case Kind::Spike: {
      const auto& a = std::get<SpikePt>(g.a);
      const auto& b = std::get<SpikePt>(g.b);
      return SpikeEval{a.branch, b.branch, a.s, b.s, a.branch != b.branch};
    }
    case Kind::Book: {
      const auto& a = std::get<BookPt>(g.a);
      const auto& b = std::get<BookPt>(g.b);
      BookEval ev{};
      ev.ua = a.u;
      ev.va = a.v;
      ev.ub = b.u;
      ev.vb = b.v;
      if (a.page == b.page || a.v == 0.0 || b.v == 0.0) {
        // A spine endpoint belongs to every page; park the segment on the
        // other endpoint's page so it stays straight.
        const int pg = a.v == 0.0 ? b.page : a.page;
        ev.pg_a = ev.pg_b = pg;
        ev.cross = false;
        return ev;
      }
      ev.pg_a = a.page;
      ev.pg_b = b.page;
      ev.cross = true;
      double w = (a.u * b.v + b.u * a.v) / (a.v + b.v);
      w = std::clamp(w, 0.0, s.book().leg);
      ev.w = w;
      ev.d1 = std::sqrt(sq(a.u - w) + sq(a.v));
      ev.d2 = std::sqrt(sq(b.u - w) + sq(b.v));
      return ev;
    }
    case Kind::HalfPlane: {
      const auto& a = std::get<HalfPlanePt>(g.a);
      const auto& b = std::get<HalfPlanePt>(g.b);
      HalfPlaneEval ev{};
      ev.xa = a.x;
      ev.ya = a.y;
      const double scale =
          std::fabs(a.x) + std::fabs(b.x) + a.y + b.y;
      if (std::fabs(a.x - b.x) <= 1e-13 * scale) {
        ev.vertical = true;
        ev.k = std::log(b.y / a.y);
        return ev;
      }
      ev.vertical = false;
      const double c = (sq(a.x) + sq(a.y) - sq(b.x) - sq(b.y)) /
                       (2.0 * (a.x - b.x));
      ev.ua = std::asinh((c - a.x) / a.y);
      const double ub = std::asinh((c - b.x) / b.y);
      ev.du = ub - ev.ua;
      ev.ch_ua = std::cosh(ev.ua);
      return ev;
    }
  }
  throw input_error("unknown space kind");
}

inline Point eval_geodesic(const GeodesicEval& ge, double t) {
  if (const auto* e = std::get_if<EuclidEval>(&ge)) {
    std::vector<double> x(e->a.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = e->a[i] + t * e->d[i];
    return EuclideanPt{std::move(x)};
  }
  if (const auto* sp = std::get_if<SpikeEval>(&ge)) {
    if (!sp->through_origin)
      return spike_pt(sp->br_a, std::max(0.0, sp->s_a + t * (sp->s_b - sp->s_a)));
    const double arc = t * (sp->s_a + sp->s_b);
    if (arc <= sp->s_a) return spike_pt(sp->br_a, std::max(0.0, sp->s_a - arc));
    return spike_pt(sp->br_b, std::min(arc - sp->s_a, sp->s_b));
  }
  if (const auto* bk = std::get_if<BookEval>(&ge)) {
    const BookCoord c = eval_book(*bk, t);
    return book_pt(c.pg, std::max(0.0, c.u), c.v);
  }
  const auto& hp = std::get<HalfPlaneEval>(ge);
  const PlaneCoord c = eval_halfplane(hp, t);
  return halfplane_pt(c.x, c.y);
}

}  // namespace detail

inline Point geodesic_point(const SpaceHandle& s, const Geodesic& g,
                            double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw input_error("geodesic parameter must lie in [0, 1]");
  validate_point(s, g.a);
  validate_point(s, g.b);
  if (g.length == 0.0) return g.a;
  return detail::eval_geodesic(detail::prepare_geodesic(s, g), t);
}

enum class BodyKind { ClosedBall };

// Closed metric balls: the convex-body family every checker certifies
// against. Balls are convex here because all four spaces are CAT(0).
struct ConvexBody {
  BodyKind kind = BodyKind::ClosedBall;
  Point center;
  double radius = 1.0;
};

inline ConvexBody closed_ball(Point center, double radius) {
  if (!std::isfinite(radius) || !(radius > 0.0))
    throw input_error("ball radius must be positive and finite");
  return {BodyKind::ClosedBall, std::move(center), radius};
}

}  // namespace hadamard
