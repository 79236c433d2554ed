#pragma once

#include <cstdio>

#include <json.hpp>

#include "cat0.hpp"
#include "properties.hpp"

// JSON descriptors for spaces, points, and reports. Points serialize as
// plain arrays read in the context of a space: euclidean [c1..cd],
// spike [branch, s], book [page, u, v], halfplane [x, y]. ordered_json keeps
// insertion order, so emitted documents are byte-stable.

namespace hadamard {

using ordered_json = nlohmann::ordered_json;

inline ordered_json space_to_json(const SpaceHandle& s) {
  ordered_json j;
  j["kind"] = kind_name(s.kind);
  switch (s.kind) {
    case Kind::Euclidean:
      j["params"] = {{"dim", s.euclidean().dim}};
      break;
    case Kind::Spike:
      j["params"] = {{"branches", s.spike().branches}};
      break;
    case Kind::Book:
      j["params"] = {{"pages", s.book().pages}, {"leg", s.book().leg}};
      break;
    case Kind::HalfPlane:
      j["params"] = ordered_json::object();
      break;
  }
  return j;
}

inline SpaceHandle space_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw input_error("space descriptor needs a kind");
  const std::string k = j.at("kind").get<std::string>();
  const ordered_json params = j.value("params", ordered_json::object());
  if (k == "euclidean") return make_euclidean(params.value("dim", 2));
  if (k == "spike") return make_spike(params.value("branches", 1));
  if (k == "book")
    return make_book(params.value("pages", 1), params.value("leg", 1.0));
  if (k == "halfplane") return make_halfplane();
  throw input_error("unknown space kind: " + k);
}

inline ordered_json point_to_json(const Point& p) {
  ordered_json out = ordered_json::array();
  if (const auto* e = std::get_if<EuclideanPt>(&p)) {
    for (double c : e->x) out.push_back(c);
  } else if (const auto* sp = std::get_if<SpikePt>(&p)) {
    out.push_back(sp->branch);
    out.push_back(sp->s);
  } else if (const auto* b = std::get_if<BookPt>(&p)) {
    out.push_back(b->page);
    out.push_back(b->u);
    out.push_back(b->v);
  } else {
    const auto& h = std::get<HalfPlanePt>(p);
    out.push_back(h.x);
    out.push_back(h.y);
  }
  return out;
}

namespace detail {

inline int json_index(const ordered_json& v, const char* what) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number()) {
    const double d = v.get<double>();
    const double r = std::nearbyint(d);
    if (std::fabs(d - r) > 1e-9)
      throw input_error(std::string(what) + " index must be an integer");
    return static_cast<int>(r);
  }
  throw input_error(std::string(what) + " index must be a number");
}

}  // namespace detail

inline Point point_from_json(const SpaceHandle& s, const ordered_json& j) {
  if (!j.is_array()) throw input_error("point must be a JSON array");
  switch (s.kind) {
    case Kind::Euclidean: {
      std::vector<double> x;
      x.reserve(j.size());
      for (const auto& c : j) x.push_back(c.get<double>());
      Point p = euclidean_pt(std::move(x));
      validate_point(s, p);
      return p;
    }
    case Kind::Spike: {
      if (j.size() != 2)
        throw input_error("spike point is [branch, s]");
      Point p = spike_pt(detail::json_index(j[0], "branch"),
                         j[1].get<double>());
      validate_point(s, p);
      return p;
    }
    case Kind::Book: {
      if (j.size() != 3) throw input_error("book point is [page, u, v]");
      Point p = book_pt(detail::json_index(j[0], "page"), j[1].get<double>(),
                        j[2].get<double>());
      validate_point(s, p);
      return p;
    }
    case Kind::HalfPlane: {
      if (j.size() != 2) throw input_error("halfplane point is [x, y]");
      Point p = halfplane_pt(j[0].get<double>(), j[1].get<double>());
      validate_point(s, p);
      return p;
    }
  }
  throw input_error("unknown space kind");
}

inline ordered_json projection_to_json(const ProjectionResult& r) {
  ordered_json j;
  j["point"] = point_to_json(r.point);
  j["t"] = r.t;
  j["dist"] = r.dist;
  j["iterations"] = r.iterations;
  j["bracket"] = {r.bracket_lo, r.bracket_hi};
  return j;
}

inline ordered_json elementary_to_json(const ElementaryQuery& q) {
  ordered_json j;
  j["x"] = point_to_json(q.x);
  j["y"] = point_to_json(q.y);
  j["z"] = point_to_json(q.z);
  j["membership"] = membership_name(q.membership);
  j["margin"] = q.margin;
  j["projection"] = projection_to_json(q.projection);
  return j;
}

inline ordered_json cn_to_json(const CnReport& r) {
  ordered_json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["residual"] = r.residual;
  j["satisfied"] = r.satisfied;
  return j;
}

inline ordered_json witness_to_json(const Witness& w) {
  ordered_json j;
  j["kind"] = witness_kind_name(w.kind);
  j["seed"] = w.seed;
  ordered_json pts = ordered_json::object();
  for (const auto& [name, p] : w.points) pts[name] = point_to_json(p);
  j["points"] = pts;
  ordered_json vals = ordered_json::object();
  for (const auto& [name, v] : w.values) vals[name] = v;
  j["values"] = vals;
  return j;
}

inline ordered_json convergence_verdict_json(const ConvergenceReport& r) {
  ordered_json j;
  j["kind"] = "weak-convergence";
  j["verdict"] = verdict_name(r.verdict);
  j["epsilon"] = r.epsilon;
  j["index"] = r.index;
  j["tail_window"] = r.tail_window;
  return j;
}

inline ordered_json convergence_traces_json(const ConvergenceReport& r) {
  ordered_json j;
  j["probe_traces"] = r.traces;
  j["strong_trace"] = r.strong_trace;
  return j;
}

inline ordered_json preimage_to_json(const PreimageReport& r) {
  ordered_json j = ordered_json::array();
  for (const auto& m : r.mismatches) {
    ordered_json e;
    e["index"] = m.index;
    e["z"] = point_to_json(m.z);
    e["lhs"] = m.lhs;
    e["rhs"] = m.rhs;
    e["t"] = m.t;
    j.push_back(e);
  }
  return j;
}

inline ordered_json complement_to_json(const ComplementReport& r) {
  ordered_json j = ordered_json::array();
  for (const auto& v : r.violations) {
    ordered_json e;
    e["index"] = v.index;
    e["c"] = point_to_json(v.c);
    e["margin"] = v.margin;
    j.push_back(e);
  }
  return j;
}

inline ordered_json cone_rows_json(const ConeCoverCertificate& c) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : c.rows) {
    ordered_json e;
    e["tester"] = r.tester;
    e["net_index"] = r.net_index;
    e["net_gap"] = r.net_gap;
    e["margin"] = r.margin;
    e["expelled"] = r.expelled;
    rows.push_back(e);
  }
  return rows;
}

inline ordered_json fingerprint_entries_json(const Fingerprint& fp) {
  ordered_json rows = ordered_json::array();
  for (const auto& e : fp.entries) {
    ordered_json r;
    r["i"] = e.i;
    r["j"] = e.j;
    r["point"] = point_to_json(e.proj.point);
    r["t"] = e.proj.t;
    r["dist"] = e.proj.dist;
    rows.push_back(r);
  }
  return rows;
}

// %.17g round-trips doubles exactly and is locale-independent here; CSV
// outputs are summaries, the JSON report is the canonical artifact.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hadamard
