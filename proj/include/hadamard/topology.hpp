#pragma once

#include <limits>
#include <optional>
#include <string>

#include "sampling.hpp"

namespace hadamard {

enum class Membership { In, Out, Indeterminate };

inline const char* membership_name(Membership m) {
  switch (m) {
    case Membership::In: return "in";
    case Membership::Out: return "out";
    case Membership::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

// U_x(y) = { z : the projection of z onto [x, y] is not y }. Open
// half-space-like sets; the weak topology is generated by them.
struct ElementaryQuery {
  Point x, y, z;
  Membership membership = Membership::Indeterminate;
  double margin = 0.0;  // d(P_[x,y] z, y)
  ProjectionResult projection;
};

// In is certified by margin > tol_point. Out needs the margin within
// tol_point AND the final ternary bracket pinned against t = 1: an interior
// minimizer that merely lands near y stays Indeterminate.
inline ElementaryQuery in_elementary_set(const SpaceHandle& s, const Point& x,
                                         const Point& y, const Point& z,
                                         const ToleranceConfig& cfg = {}) {
  cfg.validate();
  if (distance(s, x, y) <= cfg.tol_point)
    throw input_error("elementary set needs distinct defining points");
  const Geodesic g = make_geodesic(s, x, y);
  ElementaryQuery q{x, y, z, Membership::Indeterminate, 0.0, {}};
  q.projection = project_to_geodesic(s, g, z, cfg);
  q.margin = detail::dist(s, q.projection.point, y);
  if (q.margin > cfg.tol_point)
    q.membership = Membership::In;
  else if (q.projection.bracket_hi >= 1.0 - 10.0 * cfg.tol_opt)
    q.membership = Membership::Out;
  return q;
}

// In R^d, z lies in U_x(y) iff <b, z - x> < 1 with b = (y - x)/|y - x|^2.
// Compares that closed form against the metric decision.
struct HalfspaceAgreement {
  bool metric_in = false;
  bool formula_in = false;
  bool agree = false;
  double gap = 0.0;     // |<b, z - x> - 1|, distance to the cut
  double margin = 0.0;  // metric margin d(P z, y)
};

inline HalfspaceAgreement halfspace_formula_check(int dim, const Point& x,
                                                  const Point& y,
                                                  const Point& z,
                                                  const ToleranceConfig& cfg = {}) {
  const SpaceHandle s = make_euclidean(dim);
  validate_point(s, x);
  validate_point(s, y);
  validate_point(s, z);
  const auto& xx = std::get<EuclideanPt>(x).x;
  const auto& yy = std::get<EuclideanPt>(y).x;
  const auto& zz = std::get<EuclideanPt>(z).x;
  double n2 = 0.0, ip = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = yy[i] - xx[i];
    n2 += d * d;
    ip += d * (zz[i] - xx[i]);
  }
  if (n2 <= 0.0)
    throw input_error("half-space formula needs distinct x and y");
  const double scaled = ip / n2;
  const ElementaryQuery q = in_elementary_set(s, x, y, z, cfg);
  HalfspaceAgreement rep;
  rep.metric_in = q.membership == Membership::In;
  rep.formula_in = scaled < 1.0;
  rep.agree = rep.metric_in == rep.formula_in;
  rep.gap = std::fabs(scaled - 1.0);
  rep.margin = q.margin;
  return rep;
}

struct ProbeSet {
  std::vector<Point> probes;
};

enum class ConvergenceVerdict {
  ConvergedWithin,
  NotConvergedWithin,
  Indeterminate
};

inline const char* verdict_name(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::ConvergedWithin: return "converged-within";
    case ConvergenceVerdict::NotConvergedWithin: return "not-converged-within";
    case ConvergenceVerdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct ConvergenceReport {
  Point candidate;
  double epsilon = 0.0;
  ConvergenceVerdict verdict = ConvergenceVerdict::Indeterminate;
  int index = 0;        // 1-based first index of the stable tail
  int tail_window = 0;  // indices the tail must span to count as stable
  std::vector<std::vector<double>> traces;  // traces[probe][k]
  std::vector<double> strong_trace;         // d(x, x_k)
};

namespace detail {

struct VerdictAt {
  bool converged;
  int index;
  bool operator==(const VerdictAt& o) const {
    return converged == o.converged && index == o.index;
  }
};

inline VerdictAt classify_traces(const std::vector<std::vector<double>>& traces,
                                 std::size_t K, double eps, int min_tail) {
  // V = last 1-based index where any probe trace reaches eps.
  std::size_t V = 0;
  for (std::size_t k = 0; k < K; ++k)
    for (const auto& row : traces)
      if (row[k] >= eps) {
        V = k + 1;
        break;
      }
  if (V == 0) return {true, 1};
  if (K - V >= static_cast<std::size_t>(min_tail))
    return {true, static_cast<int>(V) + 1};
  return {false, 0};
}

}  // namespace detail

// Weak convergence x_k -> x tested against a finite probe set: the trace of
// probe y at k is d(x, P_[x,y] x_k), which tends to 0 exactly when the
// projections converge to x. ConvergedWithin(eps, N) means every trace stays
// below eps from N on AND that stable tail spans at least
// max(1, ceil(tail_fraction * K)) indices; without the tail window every
// finite sequence would trivially converge at its last element. The verdict
// is Indeterminate when moving the threshold by tol_point changes it.
inline ConvergenceReport weak_convergence_report(
    const SpaceHandle& s, const std::vector<Point>& seq, const Point& x,
    const ProbeSet& probes, double epsilon, const ToleranceConfig& cfg = {},
    double tail_fraction = 0.1, int threads = 1) {
  cfg.validate();
  if (seq.empty()) throw input_error("sequence must be nonempty");
  if (probes.probes.empty()) throw input_error("probe set must be nonempty");
  if (!(epsilon > 0.0)) throw input_error("epsilon must be positive");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw input_error("tail_fraction must lie in (0, 1]");
  validate_point(s, x);
  for (const Point& p : seq) validate_point(s, p);
  for (const Point& y : probes.probes)
    if (distance(s, x, y) <= cfg.tol_point)
      throw input_error("probe coincides with the candidate limit");

  const std::size_t K = seq.size();
  const std::size_t J = probes.probes.size();
  ConvergenceReport rep;
  rep.candidate = x;
  rep.epsilon = epsilon;
  rep.traces.assign(J, std::vector<double>(K, 0.0));
  rep.strong_trace.assign(K, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    rep.strong_trace[k] = detail::dist(s, x, seq[k]);

  std::vector<Geodesic> rays;
  rays.reserve(J);
  for (const Point& y : probes.probes) rays.push_back(make_geodesic(s, x, y));

  for_each_index(J * K, threads, [&](std::size_t idx) {
    const std::size_t j = idx / K;
    const std::size_t k = idx % K;
    const ProjectionResult pr =
        project_to_geodesic(s, rays[j], seq[k], cfg);
    rep.traces[j][k] = detail::dist(s, x, pr.point);
  });

  const int min_tail = std::max(
      1, static_cast<int>(std::ceil(tail_fraction * static_cast<double>(K))));
  rep.tail_window = min_tail;
  const auto at = [&](double eps) {
    return detail::classify_traces(rep.traces, K, eps, min_tail);
  };
  const detail::VerdictAt mid = at(epsilon);
  const detail::VerdictAt lo = at(epsilon - cfg.tol_point);
  const detail::VerdictAt hi = at(epsilon + cfg.tol_point);
  if (mid == lo && mid == hi) {
    rep.verdict = mid.converged ? ConvergenceVerdict::ConvergedWithin
                                : ConvergenceVerdict::NotConvergedWithin;
    rep.index = mid.index;
  } else {
    rep.verdict = ConvergenceVerdict::Indeterminate;
    rep.index = 0;
  }
  return rep;
}

// Three-valued certification outcome for set membership derived from
// margins: No / Yes only when the margin clears the indeterminacy band.
enum class Tri { No, Yes, Unclear };

struct PreimageMismatch {
  std::size_t index;
  Point z;
  bool lhs;  // P_g z lands on [x, y]
  bool rhs;  // z escapes both elementary sets U_a(x), U_b(y)
  double t;  // projection parameter of z on g
};

struct PreimageReport {
  double s_x = 0.0, s_y = 0.0;  // arc positions of x, y along g
  std::size_t checked = 0;
  std::size_t indeterminate = 0;
  std::vector<PreimageMismatch> mismatches;
};

// Identity under test, for x before y on the geodesic g = [a, b]:
//   P_g^{-1}([x, y]) = (H \ U_a(x)) ∩ (H \ U_b(y)).
// Both sides are evaluated independently per sample; disagreement between
// two certified decisions is a mismatch. Boundary constraints that are
// vacuous (x = a, or y = b) are certified true outright.
inline PreimageReport check_preimage_identity(
    const SpaceHandle& s, const Geodesic& g, const Point& x, const Point& y,
    const std::vector<Point>& samples, const ToleranceConfig& cfg = {},
    int threads = 1) {
  cfg.validate();
  validate_point(s, g.a);
  validate_point(s, g.b);
  const double L = g.length;
  if (L <= cfg.tol_point)
    throw input_error("preimage identity needs a nondegenerate geodesic");
  const double on_g_tol = std::max(cfg.tol_point, 1e-6 * (1.0 + L));
  const ProjectionResult prx = project_to_geodesic(s, g, x, cfg);
  if (prx.dist > on_g_tol) throw input_error("x does not lie on the geodesic");
  const ProjectionResult pry = project_to_geodesic(s, g, y, cfg);
  if (pry.dist > on_g_tol) throw input_error("y does not lie on the geodesic");
  const double s_x = prx.t * L;
  const double s_y = pry.t * L;
  if (s_x > s_y + on_g_tol)
    throw input_error("x must not come after y along the geodesic");

  const double band = std::max(cfg.tol_point, 1e-6);
  const bool x_is_a = detail::dist(s, g.a, x) <= band;
  const bool y_is_b = detail::dist(s, g.b, y) <= band;

  PreimageReport rep;
  rep.s_x = s_x;
  rep.s_y = s_y;
  rep.checked = samples.size();

  struct Row {
    Tri lhs = Tri::Unclear, rhs = Tri::Unclear;
    double t = 0.0;
  };
  std::vector<Row> rows(samples.size());

  for_each_index(samples.size(), threads, [&](std::size_t i) {
    const Point& z = samples[i];
    const ProjectionResult pr = project_to_geodesic(s, g, z, cfg);
    const double sz = pr.t * L;

    auto side = [&](bool vacuous, double signed_excess) {
      if (vacuous) return Tri::Yes;
      if (signed_excess > band) return Tri::Yes;
      if (signed_excess < -band) return Tri::No;
      return Tri::Unclear;
    };
    const Tri lower = side(x_is_a, sz - s_x);
    const Tri upper = side(y_is_b, s_y - sz);
    Tri lhs = Tri::Yes;
    if (lower == Tri::No || upper == Tri::No) lhs = Tri::No;
    else if (lower == Tri::Unclear || upper == Tri::Unclear) lhs = Tri::Unclear;

    auto escape = [&](const Point& base, const Point& tip) {
      // z escapes U_base(tip) iff P_[base,tip] z = tip.
      const ElementaryQuery q = in_elementary_set(s, base, tip, z, cfg);
      if (q.membership == Membership::Out) return Tri::Yes;
      if (q.membership == Membership::In) return Tri::No;
      return Tri::Unclear;
    };
    // U_a(a) is empty, so its complement constraint is vacuously true.
    const Tri left = x_is_a ? Tri::Yes : escape(g.a, x);
    const Tri right = y_is_b ? Tri::Yes : escape(g.b, y);
    Tri rhs = Tri::Yes;
    if (left == Tri::No || right == Tri::No) rhs = Tri::No;
    else if (left == Tri::Unclear || right == Tri::Unclear) rhs = Tri::Unclear;

    rows[i] = {lhs, rhs, pr.t};
  });

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Row& r = rows[i];
    if (r.lhs == Tri::Unclear || r.rhs == Tri::Unclear) {
      ++rep.indeterminate;
    } else if (r.lhs != r.rhs) {
      rep.mismatches.push_back(
          {i, samples[i], r.lhs == Tri::Yes, r.rhs == Tri::Yes, r.t});
    }
  }
  return rep;
}

struct ComplementViolation {
  std::size_t index;
  Point c;
  double margin;
};

struct ComplementReport {
  Point projection;  // P_C x
  std::size_t checked = 0;
  std::size_t indeterminate = 0;
  std::vector<ComplementViolation> violations;
};

// For x outside a closed convex body C, the elementary set U_x(P_C x) misses
// C entirely. Samples C and reports any certified member of the elementary
// set as a violation.
inline ComplementReport check_convex_complement(const SpaceHandle& s,
                                                const ConvexBody& body,
                                                const Point& x,
                                                std::size_t n_samples,
                                                std::uint64_t seed,
                                                const ToleranceConfig& cfg = {},
                                                int threads = 1) {
  cfg.validate();
  validate_point(s, body.center);
  validate_point(s, x);
  const double d0 = detail::dist(s, body.center, x);
  if (d0 <= body.radius + cfg.tol_point)
    throw input_error("x must lie strictly outside the body");
  ComplementReport rep;
  rep.projection = project_to_ball(s, body, x);
  rep.checked = n_samples;

  struct Row {
    Membership m = Membership::Indeterminate;
    double margin = 0.0;
    Point c;
  };
  std::vector<Row> rows(n_samples);
  for_each_index(n_samples, threads, [&](std::size_t i) {
    Rng rng = derive_rng(seed, i);
    Point c = sample_in_ball(s, body.center, body.radius, rng);
    const ElementaryQuery q = in_elementary_set(s, x, rep.projection, c, cfg);
    rows[i] = {q.membership, q.margin, std::move(c)};
  });
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (rows[i].m == Membership::In)
      rep.violations.push_back({i, rows[i].c, rows[i].margin});
    else if (rows[i].m == Membership::Indeterminate)
      ++rep.indeterminate;
  }
  return rep;
}

struct ConeTesterRow {
  std::size_t tester;
  int net_index;     // expelling net point, -1 when none found
  double net_gap;    // d(net point, P_K z)
  double margin;     // d(P_[x,m] z, m); expulsion needs this within tol
  bool expelled;
};

struct ConeCoverCertificate {
  double covering_radius = 0.0;  // sampled lower bound for the net
  bool all_expelled = false;
  std::vector<ConeTesterRow> rows;
};

// Certifies the finite cover behind local weak compactness: for every
// tester z strictly outside ball(x, eps) there is a net point y_i with
// d(y_i, P_K z) <= eps/2 whose midpoint m_i = midpoint(x, y_i) satisfies
// P_[x, m_i] z = m_i, i.e. z leaves U_x(m_i). The net must be an eps/2-net
// of the ball (validated here by sampling; failure is an input error, not a
// counterexample).
inline ConeCoverCertificate cone_cover_certificate(
    const SpaceHandle& s, const Point& x, double eps,
    const std::vector<Point>& net, const std::vector<Point>& testers,
    const ToleranceConfig& cfg = {}, std::uint64_t coverage_seed = 20260817ULL,
    std::size_t coverage_samples = 2000, int threads = 1) {
  cfg.validate();
  if (!(eps > 0.0)) throw input_error("eps must be positive");
  if (net.empty()) throw input_error("net must be nonempty");
  validate_point(s, x);
  for (const Point& y : net) {
    validate_point(s, y);
    if (detail::dist(s, x, y) > eps + cfg.tol_point)
      throw input_error("net point lies outside the ball");
  }

  ConeCoverCertificate cert;
  {
    std::vector<double> worst(coverage_samples, 0.0);
    for_each_index(coverage_samples, threads, [&](std::size_t m) {
      Rng rng = derive_rng(coverage_seed, m);
      const Point z = sample_in_ball(s, x, eps, rng);
      double best = std::numeric_limits<double>::infinity();
      for (const Point& y : net)
        best = std::min(best, detail::dist(s, z, y));
      worst[m] = best;
    });
    for (double w : worst) cert.covering_radius = std::max(cert.covering_radius, w);
    if (cert.covering_radius > 0.5 * eps + cfg.tol_point)
      throw input_error(
          "net is not an eps/2-net of the ball (sampled covering radius " +
          std::to_string(cert.covering_radius) + ")");
  }

  const ConvexBody ball = closed_ball(x, eps);
  cert.rows.resize(testers.size());
  for_each_index(testers.size(), threads, [&](std::size_t j) {
    const Point& z = testers[j];
    validate_point(s, z);
    if (detail::dist(s, x, z) <= eps + cfg.tol_point)
      throw input_error("tester " + std::to_string(j) +
                        " is not strictly outside the ball");
    const Point pk = project_to_ball(s, ball, z);
    std::vector<std::pair<double, int>> order;
    order.reserve(net.size());
    for (std::size_t i = 0; i < net.size(); ++i)
      order.emplace_back(detail::dist(s, net[i], pk), static_cast<int>(i));
    std::sort(order.begin(), order.end());

    ConeTesterRow row{j, -1, order.front().first, 0.0, false};
    int tried = 0;
    for (const auto& [gap, i] : order) {
      if (gap > 0.5 * eps + cfg.tol_point || tried >= 8) break;
      ++tried;
      const Geodesic ray = make_geodesic(s, x, net[i]);
      const Point m = geodesic_point(s, ray, 0.5);
      const ElementaryQuery q = in_elementary_set(s, x, m, z, cfg);
      if (q.membership == Membership::Out) {
        row = {j, i, gap, q.margin, true};
        break;
      }
      if (row.net_index < 0) row = {j, i, gap, q.margin, false};
    }
    cert.rows[j] = row;
  });
  cert.all_expelled = !cert.rows.empty();
  for (const auto& r : cert.rows) cert.all_expelled = cert.all_expelled && r.expelled;
  if (testers.empty()) cert.all_expelled = true;
  return cert;
}

}  // namespace hadamard
