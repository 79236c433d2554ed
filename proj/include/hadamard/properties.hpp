#pragma once

#include <optional>
#include <string>
#include <utility>

#include "topology.hpp"

namespace hadamard {

enum class WitnessKind {
  PropertyNViolation,
  Q4Violation,
  TwNeTgWitness,
  SeparationRecord
};

inline const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::PropertyNViolation: return "property-n-violation";
    case WitnessKind::Q4Violation: return "q4-violation";
    case WitnessKind::TwNeTgWitness: return "tw-ne-tg-witness";
    case WitnessKind::SeparationRecord: return "separation-record";
  }
  return "unknown";
}

// Self-contained numeric witness: named points plus the values computed from
// them. reverify_witness recomputes everything from the points alone, so a
// witness that only holds by accident of one run does not survive.
struct Witness {
  WitnessKind kind = WitnessKind::PropertyNViolation;
  std::vector<std::pair<std::string, Point>> points;
  std::vector<std::pair<std::string, double>> values;
  std::uint64_t seed = 0;

  const Point& point(const std::string& name) const {
    for (const auto& [n, p] : points)
      if (n == name) return p;
    throw input_error("witness has no point named " + name);
  }
  bool has_value(const std::string& name) const {
    for (const auto& [n, v] : values)
      if (n == name) return true;
    return false;
  }
  double value(const std::string& name) const {
    for (const auto& [n, v] : values)
      if (n == name) return v;
    throw input_error("witness has no value named " + name);
  }
  void put(std::string name, Point p) {
    points.emplace_back(std::move(name), std::move(p));
  }
  void put(std::string name, double v) {
    values.emplace_back(std::move(name), v);
  }
};

namespace detail {

// Noise floor for chained projections: the 1D minimizer plateau is of order
// sqrt(machine eps) in the parameter, so certified violations must clear a
// scale-aware band rather than tol_point alone.
inline double projection_band(const ToleranceConfig& cfg, double scale) {
  return std::max(cfg.tol_point, 2e-6 * (1.0 + scale));
}

}  // namespace detail

// Property (N): if m lies on [x, y] then P_g m lies on the subsegment
// [P_g x, P_g y]. Checks m_count interior points of [x, y]; the violation
// measure is the distance from P_g m to that subsegment.
inline std::optional<Witness> check_property_N(const SpaceHandle& s,
                                               const Geodesic& g,
                                               const Point& x, const Point& y,
                                               int m_count,
                                               const ToleranceConfig& cfg = {}) {
  cfg.validate();
  if (m_count < 1) throw input_error("m_count must be >= 1");
  validate_point(s, x);
  validate_point(s, y);
  if (g.length <= cfg.tol_point)
    throw input_error("property (N) needs a nondegenerate geodesic");
  if (detail::dist(s, x, y) <= cfg.tol_point) return std::nullopt;

  const ProjectionResult prx = project_to_geodesic(s, g, x, cfg);
  const ProjectionResult pry = project_to_geodesic(s, g, y, cfg);
  const Geodesic seg = make_geodesic(s, prx.point, pry.point);
  const Geodesic xy = make_geodesic(s, x, y);
  const double band = detail::projection_band(
      cfg, g.length + seg.length + prx.dist + pry.dist);

  for (int k = 1; k <= m_count; ++k) {
    const double t = static_cast<double>(k) / (m_count + 1);
    const Point m = geodesic_point(s, xy, t);
    const ProjectionResult prm = project_to_geodesic(s, g, m, cfg);
    double off;  // distance from P_g m to [P_g x, P_g y]
    double sub_t = 0.0;
    if (seg.length <= cfg.tol_point) {
      off = detail::dist(s, prm.point, prx.point);
    } else {
      const ProjectionResult on_seg =
          project_to_geodesic(s, seg, prm.point, cfg);
      off = on_seg.dist;
      sub_t = on_seg.t;
    }
    if (off > band) {
      Witness w;
      w.kind = WitnessKind::PropertyNViolation;
      w.put("g_a", g.a);
      w.put("g_b", g.b);
      w.put("x", x);
      w.put("y", y);
      w.put("m", m);
      w.put("proj_x", prx.point);
      w.put("proj_y", pry.point);
      w.put("proj_m", prm.point);
      w.put("m_param", t);
      w.put("t_x", prx.t);
      w.put("t_y", pry.t);
      w.put("t_m", prm.t);
      w.put("subsegment_t", sub_t);
      w.put("dist_to_subsegment", off);
      w.put("band", band);
      w.put("excess", off - band);
      return w;
    }
  }
  return std::nullopt;
}

struct Q4Outcome {
  bool hypothesis_met = false;
  std::optional<Witness> witness;
};

// (Q4), and with strict=false (Q4bar): the four-point condition
//   d(x,p) < d(x,q) and d(y,p) < d(y,q)  =>  d(m,p) <= d(m,q)
// for every m on [x, y] (non-strict hypothesis uses <=). The hypothesis
// counts as met only when the inequalities clear tol_point, or, non-strict,
// when they are exact ties; the conclusion is violated only beyond
// tol_point. Ties never manufacture witnesses.
inline Q4Outcome check_q4(const SpaceHandle& s, const Point& x, const Point& y,
                          const Point& p, const Point& q, int m_count,
                          bool strict, const ToleranceConfig& cfg = {}) {
  cfg.validate();
  if (m_count < 1) throw input_error("m_count must be >= 1");
  const double dxp = distance(s, x, p);
  const double dxq = distance(s, x, q);
  const double dyp = distance(s, y, p);
  const double dyq = distance(s, y, q);
  const auto less = [&](double a, double b) { return a < b - cfg.tol_point; };
  const bool hyp =
      strict ? (less(dxp, dxq) && less(dyp, dyq))
             : ((less(dxp, dxq) || dxp == dxq) && (less(dyp, dyq) || dyp == dyq));
  if (!hyp) return {false, std::nullopt};

  const Geodesic xy = make_geodesic(s, x, y);
  for (int k = 1; k <= m_count; ++k) {
    const double t = static_cast<double>(k) / (m_count + 1);
    const Point m = geodesic_point(s, xy, t);
    const double dmp = detail::dist(s, m, p);
    const double dmq = detail::dist(s, m, q);
    if (dmp > dmq + cfg.tol_point) {
      Witness w;
      w.kind = WitnessKind::Q4Violation;
      w.put("x", x);
      w.put("y", y);
      w.put("p", p);
      w.put("q", q);
      w.put("m", m);
      w.put("m_param", t);
      w.put("d_xp", dxp);
      w.put("d_xq", dxq);
      w.put("d_yp", dyp);
      w.put("d_yq", dyq);
      w.put("d_mp", dmp);
      w.put("d_mq", dmq);
      w.put("excess", dmp - dmq);
      return {true, std::move(w)};
    }
  }
  return {true, std::nullopt};
}

// The canonical separation example in the book of triangles: the page apexes
// C_n converge to the corner A in the weak sense (eventually inside every
// elementary set U_A(D_j)) while staying outside U_P(B), where P is the
// midpoint of the far edge [B, C] and B the far end of the spine. Returns
// the first index n whose apex certifies both sides. Works on the unit-leg
// book.
inline Witness book_witness_tw_ne_tg(int pages,
                                     const std::vector<Point>& probes,
                                     const ToleranceConfig& cfg = {}) {
  cfg.validate();
  if (pages < 1) throw input_error("pages must be >= 1");
  if (probes.empty()) throw input_error("need at least one probe");
  int max_pg = 1;
  for (const Point& d : probes) {
    const auto* b = std::get_if<BookPt>(&d);
    if (!b) throw input_error("probes must be book points");
    max_pg = std::max(max_pg, b->page);
  }
  if (pages < max_pg + 2)
    throw input_error(
        "book truncation too small to exhibit the witness; rebuild with "
        "pages >= " +
        std::to_string(max_pg + 2));
  const SpaceHandle s = make_book(pages, 1.0);
  const Point A = book_pt(1, 0.0, 0.0);
  const Point B = book_pt(1, 1.0, 0.0);
  const Point P = book_pt(1, 0.5, 0.5);  // midpoint of the far edge [B, C]
  for (const Point& d : probes) {
    validate_point(s, d);
    if (detail::dist(s, A, d) <= cfg.tol_point)
      throw input_error("probe coincides with the corner A");
  }

  for (int n = 1; n <= pages; ++n) {
    const Point cand = book_pt(n, 0.0, 1.0);
    bool ok = true;
    double weak_margin_min = std::numeric_limits<double>::infinity();
    for (const Point& d : probes) {
      const ElementaryQuery q = in_elementary_set(s, A, d, cand, cfg);
      if (q.membership != Membership::In) {
        ok = false;
        break;
      }
      weak_margin_min = std::min(weak_margin_min, q.margin);
    }
    if (!ok) continue;
    const ElementaryQuery out = in_elementary_set(s, P, B, cand, cfg);
    if (out.membership != Membership::Out) continue;

    Witness w;
    w.kind = WitnessKind::TwNeTgWitness;
    w.put("candidate", cand);
    w.put("corner", A);
    w.put("edge_mid", P);
    w.put("spine_end", B);
    for (std::size_t j = 0; j < probes.size(); ++j)
      w.put("probe_" + std::to_string(j + 1), probes[j]);
    w.put("page", static_cast<double>(n));
    w.put("probe_count", static_cast<double>(probes.size()));
    w.put("weak_margin_min", weak_margin_min);
    // the candidate sits inside every elementary neighborhood of the corner
    // yet stays a full unit away from it: weak attraction, no strong
    // convergence. edge_projection_margin ~ 0 records the Out certificate.
    w.put("strong_margin", detail::dist(s, cand, A));
    w.put("edge_projection_margin", out.margin);
    return w;
  }
  throw input_error(
      "no page apex certified within the truncation; rebuild with more pages");
}

// Projections of z onto every geodesic spanned by pairs of base points: the
// finite version of the injection behind the separation argument. Pairs
// closer than tol_point are skipped as degenerate.
struct Fingerprint {
  std::vector<Point> base;
  struct Entry {
    int i, j;
    ProjectionResult proj;
  };
  std::vector<Entry> entries;
};

inline Fingerprint fingerprint(const SpaceHandle& s,
                               const std::vector<Point>& base_set,
                               const Point& z,
                               const ToleranceConfig& cfg = {}) {
  cfg.validate();
  validate_point(s, z);
  for (const Point& b : base_set) validate_point(s, b);
  Fingerprint fp;
  fp.base = base_set;
  for (std::size_t i = 0; i < base_set.size(); ++i)
    for (std::size_t j = i + 1; j < base_set.size(); ++j) {
      if (detail::dist(s, base_set[i], base_set[j]) <= cfg.tol_point) continue;
      const Geodesic g = make_geodesic(s, base_set[i], base_set[j]);
      fp.entries.push_back({static_cast<int>(i), static_cast<int>(j),
                            project_to_geodesic(s, g, z, cfg)});
    }
  if (fp.entries.empty())
    throw input_error("base set needs at least two distinct points");
  return fp;
}

// For r = d(x, y) and base points x_D, y_D within r/3 of x and y, the
// projections of x and y onto [x_D, y_D] stay more than r/3 apart. That
// separation is what makes the fingerprint map injective on dense sets.
inline Witness check_fingerprint_separation(const SpaceHandle& s,
                                            const std::vector<Point>& base_set,
                                            const Point& x, const Point& y,
                                            const ToleranceConfig& cfg = {}) {
  cfg.validate();
  validate_point(s, x);
  validate_point(s, y);
  const double r = detail::dist(s, x, y);
  if (r <= cfg.tol_point) throw input_error("x and y must be distinct (r > 0)");
  int ix = -1, iy = -1;
  double dx_best = std::numeric_limits<double>::infinity();
  double dy_best = dx_best;
  for (std::size_t i = 0; i < base_set.size(); ++i) {
    validate_point(s, base_set[i]);
    const double dx = detail::dist(s, x, base_set[i]);
    const double dy = detail::dist(s, y, base_set[i]);
    if (dx < dx_best) {
      dx_best = dx;
      ix = static_cast<int>(i);
    }
    if (dy < dy_best) {
      dy_best = dy;
      iy = static_cast<int>(i);
    }
  }
  if (ix < 0 || !(dx_best < r / 3.0))
    throw input_error("density precondition unmet: no base point within r/3 of x");
  if (iy < 0 || !(dy_best < r / 3.0))
    throw input_error("density precondition unmet: no base point within r/3 of y");
  const Point& xd = base_set[ix];
  const Point& yd = base_set[iy];
  if (detail::dist(s, xd, yd) <= cfg.tol_point)
    throw input_error("witness base points coincide; densify the base set");
  const Geodesic gd = make_geodesic(s, xd, yd);
  const ProjectionResult px = project_to_geodesic(s, gd, x, cfg);
  const ProjectionResult py = project_to_geodesic(s, gd, y, cfg);
  const double sep = detail::dist(s, px.point, py.point);

  Witness w;
  w.kind = WitnessKind::SeparationRecord;
  w.put("x", x);
  w.put("y", y);
  w.put("x_base", xd);
  w.put("y_base", yd);
  w.put("proj_x", px.point);
  w.put("proj_y", py.point);
  w.put("r", r);
  w.put("separation", sep);
  w.put("t_x", px.t);
  w.put("t_y", py.t);
  w.put("margin", sep - r / 3.0);
  return w;
}

enum class PropertyId { N, Q4, Q4bar };

inline const char* property_name(PropertyId p) {
  switch (p) {
    case PropertyId::N: return "N";
    case PropertyId::Q4: return "Q4";
    case PropertyId::Q4bar: return "Q4bar";
  }
  return "unknown";
}

namespace detail {

inline Point sample_distinct(const SpaceHandle& s, Rng& rng,
                             const SampleWindow& w, const Point& other,
                             double min_dist) {
  Point p = sample_point(s, rng, w);
  for (int tries = 0; tries < 64 && dist(s, p, other) < min_dist; ++tries)
    p = sample_point(s, rng, w);
  return p;
}

inline int page_of(const Point& p) {
  const auto* b = std::get_if<BookPt>(&p);
  return b ? b->page : 0;
}

}  // namespace detail

// Randomized refutation driver. Draw i of a run is generated from the
// stream (seed, i), so results are deterministic for a given seed and
// independent of the thread count. Book draws for property (N) steer the
// probe endpoints onto pages other than the base geodesic's: violations
// need the projection to jump across the spine, and transversal pages are
// where that happens.
inline std::vector<Witness> search_counterexamples(
    const SpaceHandle& s, PropertyId property, int budget, std::uint64_t seed,
    const ToleranceConfig& cfg = {}, int m_count = 8, int threads = 1) {
  cfg.validate();
  if (budget < 1) throw input_error("budget must be >= 1");
  SampleWindow w;
  w.log_indices = true;
  std::vector<std::optional<Witness>> slots(budget);

  for_each_index(static_cast<std::size_t>(budget), threads, [&](std::size_t i) {
    Rng rng = derive_rng(seed, i);
    if (property == PropertyId::N) {
      const Point ga = sample_point(s, rng, w);
      const Point gb = detail::sample_distinct(s, rng, w, ga, 0.25);
      Point x = sample_point(s, rng, w);
      Point y = detail::sample_distinct(s, rng, w, x, 0.25);
      if (s.kind == Kind::Book && s.book().pages >= 4) {
        const int pa = detail::page_of(ga), pb = detail::page_of(gb);
        for (int tries = 0; tries < 64; ++tries) {
          const int px = detail::page_of(x);
          if (px != pa && px != pb) break;
          x = sample_point(s, rng, w);
        }
        for (int tries = 0; tries < 64; ++tries) {
          const int py = detail::page_of(y);
          if (py != pa && py != pb && py != detail::page_of(x) &&
              detail::dist(s, x, y) >= 0.25)
            break;
          y = sample_point(s, rng, w);
        }
      }
      const Geodesic g = make_geodesic(s, ga, gb);
      if (g.length <= 0.25) return;
      auto witness = check_property_N(s, g, x, y, m_count, cfg);
      if (witness) {
        witness->seed = seed;
        witness->put("draw", static_cast<double>(i));
        slots[i] = std::move(witness);
      }
      return;
    }
    const Point x = sample_point(s, rng, w);
    const Point y = detail::sample_distinct(s, rng, w, x, 0.25);
    const Point p = sample_point(s, rng, w);
    const Point q = sample_point(s, rng, w);
    Q4Outcome out = check_q4(s, x, y, p, q, m_count,
                             property == PropertyId::Q4, cfg);
    if (out.witness) {
      out.witness->seed = seed;
      out.witness->put("draw", static_cast<double>(i));
      slots[i] = std::move(out.witness);
    }
  });

  std::vector<Witness> found;
  for (auto& slot : slots)
    if (slot) found.push_back(std::move(*slot));
  return found;
}

// Closed-loop check: recompute every derived value from the stored points
// and compare. Returns false when any value drifts beyond tolerance or the
// claimed violation/certification no longer holds.
inline bool reverify_witness(const SpaceHandle& s, const Witness& w,
                             const ToleranceConfig& cfg = {}) {
  cfg.validate();
  const auto close = [&](double a, double b) {
    return std::fabs(a - b) <= std::max(cfg.tol_point, 1e-9 * (1.0 + std::fabs(b)));
  };
  switch (w.kind) {
    case WitnessKind::PropertyNViolation: {
      const Geodesic g = make_geodesic(s, w.point("g_a"), w.point("g_b"));
      const Point& m = w.point("m");
      // m must really lie on [x, y]
      const Geodesic xy = make_geodesic(s, w.point("x"), w.point("y"));
      const Point m_check = geodesic_point(s, xy, w.value("m_param"));
      if (detail::dist(s, m, m_check) > 1e-6 * (1.0 + xy.length)) return false;
      const ProjectionResult prx = project_to_geodesic(s, g, w.point("x"), cfg);
      const ProjectionResult pry = project_to_geodesic(s, g, w.point("y"), cfg);
      const ProjectionResult prm = project_to_geodesic(s, g, m, cfg);
      const Geodesic seg = make_geodesic(s, prx.point, pry.point);
      double off;
      if (seg.length <= cfg.tol_point)
        off = detail::dist(s, prm.point, prx.point);
      else
        off = project_to_geodesic(s, seg, prm.point, cfg).dist;
      const double band = detail::projection_band(
          cfg, g.length + seg.length + prx.dist + pry.dist);
      if (!close(off, w.value("dist_to_subsegment"))) return false;
      return off > band;
    }
    case WitnessKind::Q4Violation: {
      const double dmp = distance(s, w.point("m"), w.point("p"));
      const double dmq = distance(s, w.point("m"), w.point("q"));
      if (!close(dmp, w.value("d_mp")) || !close(dmq, w.value("d_mq")))
        return false;
      const double dxp = distance(s, w.point("x"), w.point("p"));
      const double dxq = distance(s, w.point("x"), w.point("q"));
      const double dyp = distance(s, w.point("y"), w.point("p"));
      const double dyq = distance(s, w.point("y"), w.point("q"));
      if (!close(dxp, w.value("d_xp")) || !close(dxq, w.value("d_xq")) ||
          !close(dyp, w.value("d_yp")) || !close(dyq, w.value("d_yq")))
        return false;
      return dmp > dmq + cfg.tol_point;
    }
    case WitnessKind::TwNeTgWitness: {
      const Point& cand = w.point("candidate");
      double weak_min = std::numeric_limits<double>::infinity();
      const int probe_count = static_cast<int>(w.value("probe_count"));
      for (int j = 1; j <= probe_count; ++j) {
        const ElementaryQuery q = in_elementary_set(
            s, w.point("corner"), w.point("probe_" + std::to_string(j)), cand,
            cfg);
        if (q.membership != Membership::In) return false;
        weak_min = std::min(weak_min, q.margin);
      }
      const ElementaryQuery out = in_elementary_set(
          s, w.point("edge_mid"), w.point("spine_end"), cand, cfg);
      if (out.membership != Membership::Out) return false;
      return close(weak_min, w.value("weak_margin_min")) &&
             close(out.margin, w.value("edge_projection_margin")) &&
             close(detail::dist(s, cand, w.point("corner")),
                   w.value("strong_margin"));
    }
    case WitnessKind::SeparationRecord: {
      const Geodesic gd = make_geodesic(s, w.point("x_base"), w.point("y_base"));
      const ProjectionResult px = project_to_geodesic(s, gd, w.point("x"), cfg);
      const ProjectionResult py = project_to_geodesic(s, gd, w.point("y"), cfg);
      const double sep = detail::dist(s, px.point, py.point);
      const double r = distance(s, w.point("x"), w.point("y"));
      if (!close(sep, w.value("separation")) || !close(r, w.value("r")))
        return false;
      return sep > r / 3.0 - 1e-9;
    }
  }
  return false;
}

}  // namespace hadamard
