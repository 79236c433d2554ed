// hadamard-weak: run weak-topology experiments on the model spaces from a
// JSON config and emit a deterministic report (JSON or CSV). Thin adapter:
// all numerics live in the library. Exit codes: 0 success, 1 verified
// counterexample where none was expected, 2 input or numerical errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hadamard/hadamard.hpp"
#include "hadamard/serialize.hpp"

namespace hw = hadamard;
using hw::ordered_json;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string output;
  std::string format;  // empty = take from config, default json
};

struct Outcome {
  ordered_json verdict = ordered_json::object();
  ordered_json traces = nullptr;
  ordered_json witnesses = ordered_json::array();
  ordered_json mismatches = ordered_json::array();
  std::string csv;
  int exit_code = 0;
};

std::uint64_t require_seed(const ordered_json& cfg) {
  if (!cfg.contains("seed"))
    throw hw::input_error(
        "this experiment is randomized; provide a seed in the config or via "
        "--seed");
  return cfg.at("seed").get<std::uint64_t>();
}

hw::ToleranceConfig tolerances_from(const ordered_json& cfg) {
  hw::ToleranceConfig t;
  if (cfg.contains("tolerances")) {
    const auto& j = cfg.at("tolerances");
    t.tol_point = j.value("tol_point", t.tol_point);
    t.tol_opt = j.value("tol_opt", t.tol_opt);
    t.max_iter = j.value("max_iter", t.max_iter);
  }
  t.validate();
  return t;
}

hw::SampleWindow window_from(const ordered_json& params) {
  hw::SampleWindow w;
  if (params.contains("window")) {
    const auto& j = params.at("window");
    w.box = j.value("box", w.box);
    w.hp_x = j.value("hp_x", w.hp_x);
    w.hp_ymin = j.value("hp_ymin", w.hp_ymin);
    w.hp_ymax = j.value("hp_ymax", w.hp_ymax);
  }
  return w;
}

std::vector<hw::Point> points_from(const hw::SpaceHandle& s,
                                   const ordered_json& arr,
                                   const char* what) {
  if (!arr.is_array())
    throw hw::input_error(std::string(what) + " must be an array of points");
  std::vector<hw::Point> out;
  out.reserve(arr.size());
  for (const auto& j : arr) out.push_back(hw::point_from_json(s, j));
  return out;
}

hw::Geodesic geodesic_from(const hw::SpaceHandle& s, const ordered_json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b"))
    throw hw::input_error("geodesic must be an object with points a and b");
  return hw::make_geodesic(s, hw::point_from_json(s, j.at("a")),
                           hw::point_from_json(s, j.at("b")));
}

Outcome run_project(const hw::SpaceHandle& s, const ordered_json& params,
                    const hw::ToleranceConfig& tol) {
  const hw::Geodesic g = geodesic_from(s, params.at("geodesic"));
  const hw::Point z = hw::point_from_json(s, params.at("z"));
  const hw::ProjectionResult pr = hw::project_to_geodesic(s, g, z, tol);
  Outcome out;
  out.verdict["kind"] = "projection";
  out.verdict.update(hw::projection_to_json(pr));
  out.csv = "t,dist,iterations,bracket_lo,bracket_hi\n" + hw::csv_num(pr.t) +
            "," + hw::csv_num(pr.dist) + "," + std::to_string(pr.iterations) +
            "," + hw::csv_num(pr.bracket_lo) + "," +
            hw::csv_num(pr.bracket_hi) + "\n";
  return out;
}

Outcome run_elementary(const hw::SpaceHandle& s, const ordered_json& params,
                       const hw::ToleranceConfig& tol) {
  const hw::Point x = hw::point_from_json(s, params.at("x"));
  const hw::Point y = hw::point_from_json(s, params.at("y"));
  const hw::Point z = hw::point_from_json(s, params.at("z"));
  const hw::ElementaryQuery q = hw::in_elementary_set(s, x, y, z, tol);
  Outcome out;
  out.verdict["kind"] = "elementary";
  out.verdict["membership"] = hw::membership_name(q.membership);
  out.verdict["margin"] = q.margin;
  out.verdict["projection"] = hw::projection_to_json(q.projection);
  out.csv = std::string("membership,margin,t,dist\n") +
            hw::membership_name(q.membership) + "," + hw::csv_num(q.margin) +
            "," + hw::csv_num(q.projection.t) + "," +
            hw::csv_num(q.projection.dist) + "\n";
  return out;
}

std::vector<hw::Point> sequence_from(const hw::SpaceHandle& s,
                                     const ordered_json& spec) {
  if (spec.is_array()) return points_from(s, spec, "sequence");
  if (!spec.is_object() || !spec.contains("kind"))
    throw hw::input_error("sequence must be a point array or a generator object");
  const std::string kind = spec.at("kind").get<std::string>();
  const int count = spec.value("count", 0);
  if (count < 1) throw hw::input_error("sequence generator needs count >= 1");
  std::vector<hw::Point> seq;
  seq.reserve(count);
  if (kind == "spike_endpoints") {
    if (s.kind != hw::Kind::Spike)
      throw hw::input_error("spike_endpoints needs a spike space");
    if (s.spike().branches < count)
      throw hw::input_error("spike_endpoints needs at least `count` branches");
    for (int k = 1; k <= count; ++k)
      seq.push_back(hw::spike_pt(k, static_cast<double>(k)));
    return seq;
  }
  if (kind == "harmonic") {
    if (s.kind != hw::Kind::Euclidean)
      throw hw::input_error("harmonic needs a euclidean space");
    for (int k = 1; k <= count; ++k) {
      std::vector<double> x(s.euclidean().dim, 0.0);
      x[0] = 1.0 / k;
      seq.push_back(hw::euclidean_pt(std::move(x)));
    }
    return seq;
  }
  if (kind == "alternating") {
    if (s.kind != hw::Kind::Euclidean)
      throw hw::input_error("alternating needs a euclidean space");
    for (int k = 1; k <= count; ++k) {
      std::vector<double> x(s.euclidean().dim, 0.0);
      x[0] = (k % 2 == 1) ? 1.0 : -1.0;
      seq.push_back(hw::euclidean_pt(std::move(x)));
    }
    return seq;
  }
  throw hw::input_error("unknown sequence generator: " + kind);
}

std::vector<hw::Point> probes_from(const hw::SpaceHandle& s,
                                   const ordered_json& spec) {
  if (spec.is_array()) return points_from(s, spec, "probes");
  if (!spec.is_object() || !spec.contains("kind"))
    throw hw::input_error("probes must be a point array or a generator object");
  const std::string kind = spec.at("kind").get<std::string>();
  const int count = spec.value("count", 0);
  if (count < 1) throw hw::input_error("probe generator needs count >= 1");
  if (kind == "spike_branch_midpoints") {
    if (s.kind != hw::Kind::Spike)
      throw hw::input_error("spike_branch_midpoints needs a spike space");
    if (s.spike().branches < count)
      throw hw::input_error("probe generator exceeds the branch truncation");
    std::vector<hw::Point> probes;
    probes.reserve(count);
    for (int j = 1; j <= count; ++j)
      probes.push_back(hw::spike_pt(j, 0.5 * j));
    return probes;
  }
  throw hw::input_error("unknown probe generator: " + kind);
}

Outcome run_weakconv(const hw::SpaceHandle& s, const ordered_json& params,
                     const hw::ToleranceConfig& tol, int threads) {
  const hw::Point x = hw::point_from_json(s, params.at("x"));
  const double eps = params.at("epsilon").get<double>();
  const std::vector<hw::Point> seq = sequence_from(s, params.at("sequence"));
  hw::ProbeSet probes{probes_from(s, params.at("probes"))};
  const double tail = params.value("tail_fraction", 0.1);
  const hw::ConvergenceReport rep =
      hw::weak_convergence_report(s, seq, x, probes, eps, tol, tail, threads);
  Outcome out;
  out.verdict = hw::convergence_verdict_json(rep);
  out.traces = hw::convergence_traces_json(rep);
  std::string csv = "probe,k,trace,strong\n";
  for (std::size_t j = 0; j < rep.traces.size(); ++j)
    for (std::size_t k = 0; k < rep.traces[j].size(); ++k)
      csv += std::to_string(j + 1) + "," + std::to_string(k + 1) + "," +
             hw::csv_num(rep.traces[j][k]) + "," +
             hw::csv_num(rep.strong_trace[k]) + "\n";
  out.csv = std::move(csv);
  return out;
}

Outcome run_preimage(const hw::SpaceHandle& s, const ordered_json& params,
                     std::uint64_t seed, const hw::ToleranceConfig& tol,
                     int threads) {
  const hw::Geodesic g = geodesic_from(s, params.at("geodesic"));
  const hw::Point x = hw::point_from_json(s, params.at("x"));
  const hw::Point y = hw::point_from_json(s, params.at("y"));
  const int n = params.at("samples").get<int>();
  if (n < 1) throw hw::input_error("samples must be >= 1");
  const hw::SampleWindow w = window_from(params);
  std::vector<hw::Point> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    hw::Rng rng = hw::derive_rng(seed, static_cast<std::uint64_t>(i));
    samples.push_back(hw::sample_point(s, rng, w));
  }
  const hw::PreimageReport rep =
      hw::check_preimage_identity(s, g, x, y, samples, tol, threads);
  Outcome out;
  out.verdict["kind"] = "preimage-identity";
  out.verdict["checked"] = rep.checked;
  out.verdict["mismatch_count"] = rep.mismatches.size();
  out.verdict["indeterminate"] = rep.indeterminate;
  out.verdict["s_x"] = rep.s_x;
  out.verdict["s_y"] = rep.s_y;
  out.mismatches = hw::preimage_to_json(rep);
  std::string csv = "index,t,lhs,rhs\n";
  for (const auto& m : rep.mismatches)
    csv += std::to_string(m.index) + "," + hw::csv_num(m.t) + "," +
           (m.lhs ? "1" : "0") + "," + (m.rhs ? "1" : "0") + "\n";
  out.csv = std::move(csv);
  out.exit_code = rep.mismatches.empty() ? 0 : 1;
  return out;
}

Outcome run_convex(const hw::SpaceHandle& s, const ordered_json& params,
                   std::uint64_t seed, const hw::ToleranceConfig& tol,
                   int threads) {
  const auto& body_j = params.at("body");
  const hw::ConvexBody body = hw::closed_ball(
      hw::point_from_json(s, body_j.at("center")),
      body_j.at("radius").get<double>());
  const hw::Point x = hw::point_from_json(s, params.at("x"));
  const int n = params.at("samples").get<int>();
  if (n < 1) throw hw::input_error("samples must be >= 1");
  const hw::ComplementReport rep = hw::check_convex_complement(
      s, body, x, static_cast<std::size_t>(n), seed, tol, threads);
  Outcome out;
  out.verdict["kind"] = "convex-complement";
  out.verdict["checked"] = rep.checked;
  out.verdict["violation_count"] = rep.violations.size();
  out.verdict["indeterminate"] = rep.indeterminate;
  out.verdict["projection"] = hw::point_to_json(rep.projection);
  out.mismatches = hw::complement_to_json(rep);
  std::string csv = "index,margin\n";
  for (const auto& v : rep.violations)
    csv += std::to_string(v.index) + "," + hw::csv_num(v.margin) + "\n";
  out.csv = std::move(csv);
  out.exit_code = rep.violations.empty() ? 0 : 1;
  return out;
}

Outcome run_cone(const hw::SpaceHandle& s, const ordered_json& params,
                 std::uint64_t seed, const hw::ToleranceConfig& tol,
                 int threads) {
  const hw::Point x = hw::point_from_json(s, params.at("x"));
  const double eps = params.at("epsilon").get<double>();
  std::vector<hw::Point> net;
  if (params.contains("net"))
    net = points_from(s, params.at("net"), "net");
  else
    net = hw::build_ball_net(s, x, eps, params.value("mesh", 0.45));

  std::vector<hw::Point> testers;
  if (params.contains("testers") && params.at("testers").is_array()) {
    testers = points_from(s, params.at("testers"), "testers");
  } else {
    const int m = params.value("testers", 100);
    if (m < 1) throw hw::input_error("testers must be >= 1");
    const hw::SampleWindow w = window_from(params);
    testers.reserve(m);
    for (int j = 0; j < m; ++j) {
      hw::Rng rng = hw::derive_rng(seed, static_cast<std::uint64_t>(j));
      hw::Point z = hw::sample_point(s, rng, w);
      int tries = 0;
      while (hw::distance(s, x, z) <= eps * 1.05) {
        if (++tries > 10000)
          throw hw::input_error(
              "sampling window too tight to draw testers outside the ball");
        z = hw::sample_point(s, rng, w);
      }
      testers.push_back(std::move(z));
    }
  }
  const std::size_t coverage =
      static_cast<std::size_t>(params.value("coverage_samples", 2000));
  const hw::ConeCoverCertificate cert = hw::cone_cover_certificate(
      s, x, eps, net, testers, tol, hw::detail::splitmix64(seed + 11),
      coverage, threads);
  Outcome out;
  out.verdict["kind"] = "cone-cover";
  out.verdict["all_expelled"] = cert.all_expelled;
  out.verdict["covering_radius"] = cert.covering_radius;
  out.verdict["net_size"] = net.size();
  out.verdict["tester_count"] = testers.size();
  out.traces = ordered_json::object();
  out.traces["testers"] = hw::cone_rows_json(cert);
  std::string csv = "tester,net_index,net_gap,margin,expelled\n";
  for (const auto& r : cert.rows)
    csv += std::to_string(r.tester) + "," + std::to_string(r.net_index) + "," +
           hw::csv_num(r.net_gap) + "," + hw::csv_num(r.margin) + "," +
           (r.expelled ? "1" : "0") + "\n";
  out.csv = std::move(csv);
  out.exit_code = cert.all_expelled ? 0 : 1;
  return out;
}

Outcome run_property_search(const hw::SpaceHandle& s,
                            const ordered_json& params, std::uint64_t seed,
                            const hw::ToleranceConfig& tol, int threads) {
  const std::string prop = params.at("property").get<std::string>();
  hw::PropertyId id;
  if (prop == "N") id = hw::PropertyId::N;
  else if (prop == "Q4") id = hw::PropertyId::Q4;
  else if (prop == "Q4bar") id = hw::PropertyId::Q4bar;
  else throw hw::input_error("unknown property: " + prop);
  const int budget = params.at("budget").get<int>();
  const int m_count = params.value("m_count", 8);
  const std::vector<hw::Witness> ws =
      hw::search_counterexamples(s, id, budget, seed, tol, m_count, threads);
  bool all_reverified = true;
  for (const auto& w : ws)
    all_reverified = all_reverified && hw::reverify_witness(s, w, tol);
  Outcome out;
  out.verdict["kind"] = "property-search";
  out.verdict["property"] = prop;
  out.verdict["budget"] = budget;
  out.verdict["witness_count"] = ws.size();
  out.verdict["all_reverified"] = all_reverified;
  for (const auto& w : ws) out.witnesses.push_back(hw::witness_to_json(w));
  std::string csv = "index,kind,draw,excess\n";
  for (std::size_t i = 0; i < ws.size(); ++i)
    csv += std::to_string(i) + "," + hw::witness_kind_name(ws[i].kind) + "," +
           hw::csv_num(ws[i].value("draw")) + "," +
           hw::csv_num(ws[i].has_value("excess") ? ws[i].value("excess") : 0.0) +
           "\n";
  out.csv = std::move(csv);
  if (params.contains("expect_witnesses")) {
    const bool expect = params.at("expect_witnesses").get<bool>();
    if (expect != !ws.empty()) out.exit_code = 1;
  }
  return out;
}

Outcome run_book_witness(const hw::SpaceHandle& s, const ordered_json& params,
                         const hw::ToleranceConfig& tol) {
  if (s.kind != hw::Kind::Book)
    throw hw::input_error("book-witness needs a book space");
  if (s.book().leg != 1.0)
    throw hw::input_error("book-witness runs on the unit-leg book");
  const std::vector<hw::Point> probes =
      points_from(s, params.at("probes"), "probes");
  const hw::Witness w = hw::book_witness_tw_ne_tg(s.book().pages, probes, tol);
  const bool ok = hw::reverify_witness(s, w, tol);
  Outcome out;
  out.verdict["kind"] = "book-witness";
  out.verdict["page"] = static_cast<int>(w.value("page"));
  out.verdict["weak_margin_min"] = w.value("weak_margin_min");
  out.verdict["strong_margin"] = w.value("strong_margin");
  out.verdict["reverified"] = ok;
  out.witnesses.push_back(hw::witness_to_json(w));
  out.csv = "page,weak_margin_min,strong_margin\n" +
            std::to_string(static_cast<int>(w.value("page"))) + "," +
            hw::csv_num(w.value("weak_margin_min")) + "," +
            hw::csv_num(w.value("strong_margin")) + "\n";
  return out;
}

Outcome run_fingerprint(const hw::SpaceHandle& s, const ordered_json& params,
                        const hw::ToleranceConfig& tol) {
  const std::vector<hw::Point> base =
      points_from(s, params.at("base_set"), "base_set");
  const hw::Point z = hw::point_from_json(s, params.at("z"));
  const hw::Fingerprint fp = hw::fingerprint(s, base, z, tol);
  Outcome out;
  out.verdict["kind"] = "fingerprint";
  out.verdict["base_size"] = base.size();
  out.verdict["entry_count"] = fp.entries.size();
  out.traces = ordered_json::object();
  out.traces["entries"] = hw::fingerprint_entries_json(fp);
  if (params.contains("separation")) {
    const auto& sj = params.at("separation");
    const hw::Witness w = hw::check_fingerprint_separation(
        s, base, hw::point_from_json(s, sj.at("x")),
        hw::point_from_json(s, sj.at("y")), tol);
    out.verdict["r"] = w.value("r");
    out.verdict["separation"] = w.value("separation");
    out.witnesses.push_back(hw::witness_to_json(w));
  }
  std::string csv = "i,j,t,dist\n";
  for (const auto& e : fp.entries)
    csv += std::to_string(e.i) + "," + std::to_string(e.j) + "," +
           hw::csv_num(e.proj.t) + "," + hw::csv_num(e.proj.dist) + "\n";
  out.csv = std::move(csv);
  return out;
}

int run(const std::string& experiment, const Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) throw hw::input_error("cannot open config file: " + opt.config_path);
  ordered_json cfg;
  try {
    cfg = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw hw::input_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw hw::input_error("config must be a JSON object");
  if (cfg.contains("experiment") &&
      cfg.at("experiment").get<std::string>() != experiment)
    throw hw::input_error("config experiment field disagrees with the subcommand");
  cfg["experiment"] = experiment;
  if (opt.seed) cfg["seed"] = *opt.seed;
  if (!opt.format.empty()) cfg["format"] = opt.format;
  const std::string format = cfg.value("format", "json");
  if (format != "json" && format != "csv")
    throw hw::input_error("format must be json or csv");
  if (opt.threads < 1) throw hw::input_error("--threads must be >= 1");

  const hw::SpaceHandle space = hw::space_from_json(cfg.at("space"));
  const ordered_json params = cfg.value("params", ordered_json::object());
  const hw::ToleranceConfig tol = tolerances_from(cfg);

  Outcome out;
  if (experiment == "project") out = run_project(space, params, tol);
  else if (experiment == "elementary") out = run_elementary(space, params, tol);
  else if (experiment == "weakconv")
    out = run_weakconv(space, params, tol, opt.threads);
  else if (experiment == "preimage-identity")
    out = run_preimage(space, params, require_seed(cfg), tol, opt.threads);
  else if (experiment == "convex-complement")
    out = run_convex(space, params, require_seed(cfg), tol, opt.threads);
  else if (experiment == "cone-cover")
    out = run_cone(space, params, require_seed(cfg), tol, opt.threads);
  else if (experiment == "property-search")
    out = run_property_search(space, params, require_seed(cfg), tol,
                              opt.threads);
  else if (experiment == "book-witness")
    out = run_book_witness(space, params, tol);
  else if (experiment == "fingerprint")
    out = run_fingerprint(space, params, tol);
  else
    throw hw::input_error("unknown experiment: " + experiment);

  std::string text;
  if (format == "json") {
    ordered_json report;
    report["config"] = cfg;
    report["verdict"] = out.verdict;
    report["traces"] = out.traces;
    report["witnesses"] = out.witnesses;
    report["mismatches"] = out.mismatches;
    ordered_json meta;
    meta["tool"] = "hadamard-weak";
    meta["version"] = "0.1.0";
    meta["experiment"] = experiment;
    meta["space"] = hw::kind_name(space.kind);
    report["metadata"] = meta;
    text = report.dump(2) + "\n";
  } else {
    text = out.csv;
  }

  if (!opt.output.empty()) {
    std::ofstream of(opt.output, std::ios::binary);
    if (!of) throw hw::input_error("cannot open output file: " + opt.output);
    of << text;
  } else {
    std::cout << text;
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak-topology experiments on Hadamard model spaces"};
  app.require_subcommand(1);
  Options opt;
  const char* names[] = {"project",        "elementary",
                         "weakconv",       "preimage-identity",
                         "convex-complement", "cone-cover",
                         "property-search", "book-witness",
                         "fingerprint"};
  const char* descs[] = {
      "closest-point projection onto a geodesic",
      "membership of z in the elementary set U_x(y)",
      "weak-convergence report for a sequence against probes",
      "preimage identity for geodesic subsegments",
      "elementary set of an outside point avoids the convex body",
      "finite cover certificate expelling far testers",
      "randomized counterexample search for (N), (Q4), (Q4bar)",
      "canonical book-of-triangles weak-but-not-strong witness",
      "projection fingerprint of a point against a base set"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", opt.config_path, "JSON experiment config")
        ->required();
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("--threads", opt.threads, "worker thread cap (default 1)");
    sub->add_option("--output", opt.output, "write the report to this file");
    sub->add_option("--format", opt.format, "json or csv (overrides config)");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    return run(chosen, opt);
  } catch (const hw::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hw::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
