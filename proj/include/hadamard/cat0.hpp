#pragma once

#include "spaces.hpp"

namespace hadamard {

// For m the midpoint of [q, r]:
//   d(p,m)^2 <= d(p,q)^2/2 + d(p,r)^2/2 - d(q,r)^2/4
// holds in every CAT(0) space. residual = rhs - lhs, so nonnegative up to
// rounding; `satisfied` allows residual >= -tol.
struct CnReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool satisfied = false;
};

inline CnReport check_cn_inequality(const SpaceHandle& s, const Point& p,
                                    const Point& q, const Point& r,
                                    double tol) {
  if (!std::isfinite(tol) || tol < 0.0)
    throw input_error("cn tolerance must be a finite nonnegative number");
  const Geodesic g = make_geodesic(s, q, r);
  const Point m = geodesic_point(s, g, 0.5);
  validate_point(s, p);
  const double dpm = detail::dist(s, p, m);
  const double dpq = detail::dist(s, p, q);
  const double dpr = detail::dist(s, p, r);
  CnReport rep;
  rep.lhs = dpm * dpm;
  rep.rhs = 0.5 * dpq * dpq + 0.5 * dpr * dpr - 0.25 * g.length * g.length;
  rep.residual = rep.rhs - rep.lhs;
  rep.satisfied = rep.residual >= -tol;
  return rep;
}

}  // namespace hadamard
