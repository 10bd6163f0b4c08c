// mcurv: Menger-type curvature energies of sampled curves and manifolds.
//
// Subcommands: saw, energy (mp|ip|up|ep), beta, diverge (curve|manifold),
// cone-check. A JSON config file mirrors the flags of the invoked
// subcommand; explicit flags win. MCURV_THREADS sets the default worker
// count. Exit codes: 0 success, 1 input error, 2 precondition failure.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcurv/curves.hpp"
#include "mcurv/divergence.hpp"
#include "mcurv/geometry.hpp"
#include "mcurv/kernels.hpp"
#include "mcurv/manifolds.hpp"
#include "mcurv/parallel.hpp"
#include "mcurv/report_io.hpp"
#include "mcurv/saw.hpp"

using nlohmann::json;

namespace {

struct Options {
  // shared
  int threads = 0;
  bool no_simd = false;
  uint64_t seed = 1;
  std::string out;
  std::string out_csv;

  // saw family
  int N = 100;
  double alpha = 0.5;
  int K = -1;
  double tol = 1e-12;

  // saw grid
  size_t grid = 1024;

  // curve sources
  std::string gen = "circle";
  std::string input;
  bool closed = false;
  double input_length = 0;
  double radius = 1.0;
  double seg_len = 1.0;
  double ell_a = 2.0, ell_b = 1.0;
  size_t n_samples = 200;
  bool arc_weights = false;

  // energies
  double p = 2.0;
  std::string scheme = "auto";
  size_t samples = 200000;
  int excl = 1;
  bool shells = false;

  // manifolds
  int m = 1;
  double sphere_w = 0.5;
  size_t cloud = 0;

  // beta
  int centers = 64;
  int rexp_min = 3;
  int rexp_max = 12;
  size_t tuples = 10000;

  // diverge
  std::string levels;  // default 1..6 (curve) / 1..4 (manifold)
  int cells = 256;
  int spc = 64;
  int gap_samples = 1000;
  double delta = 1.0 / 32;
  double eps_slope = 0.1;
  double domain_bound = 0;

  // cone-check
  double holder_C = 0;
  double epsilon = 0;
};

mcurv::saw::SawParams saw_params_of(const Options& o) {
  if (o.K >= 0) return mcurv::saw::SawParams::with_level(o.N, o.alpha, o.K);
  return mcurv::saw::SawParams::with_tolerance(o.N, o.alpha, o.tol);
}

std::pair<int, int> parse_range(const std::string& s) {
  auto pos = s.find("..");
  if (pos == std::string::npos) {
    int v = std::stoi(s);
    return {v, v};
  }
  return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw mcurv::input_error("cannot open output file: " + path);
  f << content;
}

void emit_json(const Options& o, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (o.out.empty())
    std::cout << text;
  else
    write_file(o.out, text);
}

mcurv::curves::SampledCurve parse_curve_csv(const std::string& path, bool closed,
                                            double length) {
  std::ifstream f(path);
  if (!f) throw mcurv::input_error("cannot open curve file: " + path);
  std::vector<double> params;
  std::vector<mcurv::Vec> pts;
  std::string line;
  size_t row = 0;
  size_t dim = 0;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        vals.push_back(v);
      } catch (const std::exception&) {
        throw mcurv::input_error("curve CSV row " + std::to_string(row) +
                                 ": malformed number '" + cell + "'");
      }
    }
    if (vals.size() < 2)
      throw mcurv::input_error("curve CSV row " + std::to_string(row) +
                               ": need t and at least one coordinate");
    if (dim == 0) dim = vals.size() - 1;
    if (vals.size() - 1 != dim)
      throw mcurv::input_error("curve CSV row " + std::to_string(row) +
                               ": inconsistent column count");
    params.push_back(vals[0]);
    pts.emplace_back(vals.begin() + 1, vals.end());
  }
  if (params.size() < 3) throw mcurv::input_error("curve CSV has fewer than 3 rows");
  if (closed && !(length > 0))
    throw mcurv::input_error("closed CSV curves need --length");
  return mcurv::curves::SampledCurve::from_points(
      std::move(params), pts, closed, length,
      mcurv::curves::SampledCurve::Param::arc_length);
}

mcurv::curves::SampledCurve build_curve(const Options& o) {
  using namespace mcurv::curves;
  if (!o.input.empty()) return parse_curve_csv(o.input, o.closed, o.input_length);
  if (o.gen == "circle") return make_circle(o.radius, o.n_samples);
  if (o.gen == "segment") return make_segment(o.seg_len, o.n_samples);
  if (o.gen == "ellipse") return make_ellipse(o.ell_a, o.ell_b, o.n_samples);
  if (o.gen == "saw-graph")
    return make_saw_graph(saw_params_of(o), o.n_samples, o.arc_weights);
  throw mcurv::input_error("unknown curve generator: " + o.gen);
}

mcurv::manifolds::SampledManifold build_manifold(const Options& o) {
  using namespace mcurv::manifolds;
  if (o.gen == "flat-patch") return make_flat_patch(o.m, o.m + 1);
  if (o.gen == "sphere-patch") return make_sphere_patch(o.m, o.radius, o.sphere_w);
  if (o.gen == "saw-graph") return make_saw_graph_manifold(o.m, saw_params_of(o));
  throw mcurv::input_error("unknown manifold generator: " + o.gen);
}

mcurv::curves::QuadratureSpec quad_of(const Options& o) {
  mcurv::curves::QuadratureSpec q;
  if (o.scheme == "riemann")
    q.scheme = mcurv::curves::QuadratureSpec::Scheme::product_riemann;
  else if (o.scheme == "mc")
    q.scheme = mcurv::curves::QuadratureSpec::Scheme::monte_carlo;
  else if (o.scheme == "auto")
    q.scheme = mcurv::curves::QuadratureSpec::Scheme::automatic;
  else
    throw mcurv::input_error("unknown scheme: " + o.scheme);
  q.mc_samples = o.samples;
  q.seed = o.seed;
  q.exclusion_radius = o.excl;
  q.threads = o.threads;
  return q;
}

json config_echo(const Options& o, std::initializer_list<const char*> keys) {
  json cfg;
  for (const char* k : keys) {
    std::string key(k);
    if (key == "N") cfg["N"] = o.N;
    if (key == "alpha") cfg["alpha"] = o.alpha;
    if (key == "K") cfg["K"] = o.K;
    if (key == "tol") cfg["tol"] = o.tol;
    if (key == "p") cfg["p"] = o.p;
    if (key == "m") cfg["m"] = o.m;
    if (key == "gen") cfg["gen"] = o.gen;
    if (key == "n") cfg["n"] = o.n_samples;
    if (key == "samples") cfg["samples"] = o.samples;
    if (key == "seed") cfg["seed"] = o.seed;
    if (key == "scheme") cfg["scheme"] = o.scheme;
    if (key == "levels") cfg["levels"] = o.levels;
    if (key == "cells") cfg["cells"] = o.cells;
    if (key == "spc") cfg["spc"] = o.spc;
    if (key == "delta") cfg["delta"] = o.delta;
    if (key == "eps-slope") cfg["eps_slope"] = o.eps_slope;
    if (key == "centers") cfg["centers"] = o.centers;
    if (key == "tuples") cfg["tuples"] = o.tuples;
  }
  return cfg;
}

// ---- subcommand bodies ----------------------------------------------------

int run_saw(const Options& o) {
  auto params = saw_params_of(o);
  auto tab = mcurv::saw::SawTables::build(params);
  if (o.grid < 2) throw mcurv::input_error("grid must have at least 2 points");
  std::vector<double> xs(o.grid), fs(o.grid), Fs(o.grid);
  for (size_t i = 0; i < o.grid; ++i)
    xs[i] = static_cast<double>(i) / static_cast<double>(o.grid - 1);
  mcurv::kern::saw_eval_batch(xs.data(), o.grid, tab, fs.data(), Fs.data());
  std::ostringstream csv;
  csv << "x,f,F,error_bound\n";
  for (size_t i = 0; i < o.grid; ++i) {
    csv << mcurv::io::format_double(xs[i]) << ',' << mcurv::io::format_double(fs[i])
        << ',' << mcurv::io::format_double(Fs[i]) << ','
        << mcurv::io::format_double(xs[i] * tab.tail) << '\n';
  }
  write_file(o.out.empty() ? "saw.csv" : o.out, csv.str());
  std::cout << "hoelder_constant "
            << mcurv::io::format_double(mcurv::saw::hoelder_constant(params)) << "\n";
  return 0;
}

int run_energy_curve(const Options& o, const std::string& kind) {
  auto curve = build_curve(o);
  auto q = quad_of(o);
  mcurv::curves::EnergyResult res;
  if (kind == "mp")
    res = mcurv::curves::energy_mp(curve, o.p, q);
  else if (kind == "ip")
    res = mcurv::curves::energy_ip(curve, o.p, q);
  else
    res = mcurv::curves::energy_up(curve, o.p, q);

  json j{{"schema_version", mcurv::io::schema_version},
         {"kind", kind},
         {"energy", res.value},
         {"scheme", res.monte_carlo ? "monte-carlo" : "product-riemann"},
         {"samples", res.samples},
         {"std_error", res.monte_carlo ? json(res.std_error) : json()},
         {"config", config_echo(o, {"gen", "n", "p", "seed", "scheme", "samples"})}};
  if (o.shells && kind == "mp") {
    auto rep = mcurv::curves::scale_decomposed_mp(curve, o.p, q);
    j["shells"] = mcurv::io::scale_report_json(rep);
  }
  emit_json(o, j);
  return 0;
}

int run_energy_ep(const Options& o) {
  auto M = build_manifold(o);
  auto res = mcurv::manifolds::energy_ep_mc(M, o.p, o.samples, o.seed, o.threads);
  json j{{"schema_version", mcurv::io::schema_version},
         {"kind", "ep"},
         {"energy", res.estimate},
         {"scheme", "monte-carlo"},
         {"samples", res.samples},
         {"std_error", res.std_error},
         {"config", config_echo(o, {"gen", "m", "p", "samples", "seed"})}};
  if (o.shells) {
    double diam = mcurv::manifolds::estimate_diameter(M);
    auto spec = mcurv::manifolds::ShellSpec::for_diameter(diam, 8);
    auto rep = mcurv::manifolds::energy_ep_shells(M, o.p, spec, o.samples / 8,
                                                  o.seed + 1, o.threads);
    j["shells"] = mcurv::io::scale_report_json(rep);
  }
  emit_json(o, j);
  return 0;
}

int run_beta(const Options& o) {
  auto M = build_manifold(o);
  std::vector<double> radii;
  for (int j = o.rexp_min; j <= o.rexp_max; ++j) radii.push_back(std::pow(2.0, -j));
  auto fit = mcurv::manifolds::beta_scaling_fit(M, o.centers, radii, o.alpha, o.cloud);
  std::ostringstream tuples_csv;
  auto dc = mcurv::manifolds::dc_beta_bound_check(
      M, o.tuples, o.seed, o.cloud, o.out_csv.empty() ? nullptr : &tuples_csv);
  if (!o.out_csv.empty()) write_file(o.out_csv, tuples_csv.str());
  json j{{"schema_version", mcurv::io::schema_version},
         {"slope", fit.degenerate_flat ? json() : json(fit.slope)},
         {"C_fit", fit.C_fit},
         {"violations", fit.violations},
         {"degenerate_flat", fit.degenerate_flat},
         {"simplex_bound_max_ratio", dc.max_ratio / dc.C_bound},
         {"simplex_bound_violations", dc.violations},
         {"simplex_bound_constant", dc.C_bound},
         {"config", config_echo(o, {"gen", "m", "N", "alpha", "centers", "tuples", "seed"})}};
  emit_json(o, j);
  return 0;
}

int run_diverge(const Options& o, const std::string& which) {
  mcurv::diverge::LowerBoundConfig cfg;
  cfg.saw_params = saw_params_of(o);
  cfg.p = o.p;
  cfg.m = o.m;
  cfg.delta = o.delta;
  cfg.eps_slope = o.eps_slope;
  cfg.domain_bound = o.domain_bound;
  cfg.cells_per_level = o.cells;
  cfg.samples_per_cell = o.spc;
  cfg.gap_samples = o.gap_samples;
  cfg.seed = o.seed;
  cfg.threads = o.threads;

  std::string levels = o.levels;
  if (levels.empty()) levels = which == "curve" ? "1..6" : "1..4";
  auto [lo, hi] = parse_range(levels);
  mcurv::ScaleReport rep = which == "curve"
                               ? mcurv::diverge::curve_lowerbound(cfg, lo, hi)
                               : mcurv::diverge::manifold_lowerbound(cfg, lo, hi);

  json j = mcurv::io::scale_report_json(rep);
  j["kind"] = which;
  j["verdict"] = mcurv::diverge::is_divergent(rep) ? "DIVERGENT" : "CONVERGENT";
  Options echo = o;
  echo.levels = levels;
  j["config"] = config_echo(echo, {"N", "alpha", "p", "m", "levels", "cells", "spc",
                                   "delta", "eps-slope", "seed"});
  if (!o.out_csv.empty()) {
    std::ostringstream csv;
    mcurv::io::scale_report_csv(csv, rep);
    write_file(o.out_csv, csv.str());
  }
  emit_json(o, j);
  std::cout << (mcurv::diverge::is_divergent(rep) ? "DIVERGENT" : "CONVERGENT")
            << " fitted=" << mcurv::io::format_double(rep.fitted_exponent)
            << " predicted=" << mcurv::io::format_double(rep.predicted_exponent)
            << "\n";
  return 0;
}

int run_cone_check(const Options& o) {
  mcurv::curves::SampledCurve curve = [&] {
    if (o.gen == "saw-graph") {
      // arc-length resampled graph so parameter distances are arc distances
      auto graph = mcurv::curves::make_saw_graph(saw_params_of(o),
                                                 std::max<size_t>(4 * o.n_samples, 4096));
      std::vector<mcurv::Vec> poly(graph.size());
      for (size_t i = 0; i < graph.size(); ++i) poly[i] = graph.point(i);
      return mcurv::curves::resample_arclength(poly, o.n_samples, false);
    }
    return build_curve(o);
  }();

  double C = o.holder_C;
  double alpha = o.alpha;
  if (C <= 0) {
    if (o.gen == "saw-graph")
      C = mcurv::saw::hoelder_constant(saw_params_of(o));
    else if (o.gen == "circle") {
      C = 1.0 / o.radius;
      alpha = 1.0;
    } else {
      C = 1.0;
      alpha = 1.0;
    }
  }
  double eps = o.epsilon;
  if (eps <= 0) eps = 0.9 * std::pow(0.99 / (2.5 * C), 1.0 / alpha);
  if (curve.closed) eps = std::min(eps, 0.49 * curve.length);

  auto rep = mcurv::curves::secant_cone_check(curve, alpha, C, eps);
  json j{{"schema_version", mcurv::io::schema_version},
         {"max_angle_ratio", rep.max_angle_ratio},
         {"pass", rep.pass},
         {"pairs_checked", rep.pairs_checked},
         {"holder_C", C},
         {"alpha", alpha},
         {"epsilon", eps},
         {"config", config_echo(o, {"gen", "n", "N", "alpha"})}};
  emit_json(o, j);
  std::cout << (rep.pass ? "PASS" : "FAIL") << " max_angle_ratio="
            << mcurv::io::format_double(rep.max_angle_ratio) << "\n";
  return 0;
}

// Config file support: keys of the JSON object become flags of the invoked
// subcommand unless the flag is already present on the command line.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream f(config_path);
  if (!f) throw mcurv::input_error("cannot open config file: " + config_path);
  json cfg = json::parse(f, nullptr, true, true);
  if (!cfg.is_object()) throw mcurv::input_error("config file must hold a JSON object");

  auto has_flag = [&](const std::string& name) {
    std::string flag = "--" + name;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (has_flag(it.key())) continue;
    if (it.value().is_boolean()) {
      if (it.value().get<bool>()) args.push_back("--" + it.key());
    } else if (it.value().is_string()) {
      args.push_back("--" + it.key());
      args.push_back(it.value().get<std::string>());
    } else {
      args.push_back("--" + it.key());
      args.push_back(it.value().dump());
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Menger-type curvature energies of sampled curves and manifolds"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file mirroring the flags");
  app.add_option("--threads", o.threads, "worker threads (default: MCURV_THREADS or all cores)");
  app.add_flag("--no-simd", o.no_simd, "force the scalar kernel variants");

  auto add_saw_opts = [&](CLI::App* c) {
    c->add_option("--N", o.N, "saw base N");
    c->add_option("--alpha", o.alpha, "Hoelder exponent alpha");
    c->add_option("--K", o.K, "explicit truncation level");
    c->add_option("--tol", o.tol, "truncation tolerance (used when --K absent)");
  };

  auto* saw_cmd = app.add_subcommand("saw", "tabulate the saw f and its antiderivative F");
  add_saw_opts(saw_cmd);
  saw_cmd->add_option("--grid", o.grid, "number of grid points on [0,1]");
  saw_cmd->add_option("--out", o.out, "output CSV path (default saw.csv)");

  auto* energy_cmd = app.add_subcommand("energy", "curvature energies");
  energy_cmd->require_subcommand(1);
  std::vector<CLI::App*> energy_kinds;
  for (const char* kind : {"mp", "ip", "up", "ep"}) {
    auto* c = energy_cmd->add_subcommand(kind, std::string("energy ") + kind);
    add_saw_opts(c);
    c->add_option("--gen", o.gen, "generator: circle|segment|ellipse|saw-graph|flat-patch|sphere-patch");
    c->add_option("--input", o.input, "curve CSV (t,x1..xn per row)");
    c->add_flag("--closed", o.closed, "treat CSV input as closed");
    c->add_option("--length", o.input_length, "parameter period for closed CSV input");
    c->add_option("--r", o.radius, "circle/sphere radius");
    c->add_option("--len", o.seg_len, "segment length");
    c->add_option("--a", o.ell_a, "ellipse semi-axis a");
    c->add_option("--b", o.ell_b, "ellipse semi-axis b");
    c->add_option("--w", o.sphere_w, "sphere patch half-width");
    c->add_option("--n", o.n_samples, "curve sample count");
    c->add_option("--m", o.m, "manifold dimension (ep)");
    c->add_option("--p", o.p, "energy exponent p");
    c->add_option("--scheme", o.scheme, "auto|riemann|mc");
    c->add_option("--samples", o.samples, "Monte-Carlo sample count");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--excl", o.excl, "diagonal exclusion radius in index space");
    c->add_flag("--shells", o.shells, "include dyadic shell decomposition");
    c->add_flag("--arc-weights", o.arc_weights, "saw graph: arc-length weights");
    c->add_option("--out", o.out, "output JSON path (default stdout)");
    energy_kinds.push_back(c);
  }

  auto* beta_cmd = app.add_subcommand("beta", "beta-number scaling and simplex bound checks");
  add_saw_opts(beta_cmd);
  beta_cmd->add_option("--gen", o.gen, "flat-patch|sphere-patch|saw-graph");
  beta_cmd->add_option("--m", o.m, "manifold dimension");
  beta_cmd->add_option("--r", o.radius, "sphere radius");
  beta_cmd->add_option("--w", o.sphere_w, "sphere patch half-width");
  beta_cmd->add_option("--centers", o.centers, "number of centers");
  beta_cmd->add_option("--rexp-min", o.rexp_min, "smallest dyadic radius exponent");
  beta_cmd->add_option("--rexp-max", o.rexp_max, "largest dyadic radius exponent");
  beta_cmd->add_option("--tuples", o.tuples, "tuples for the simplex bound check");
  beta_cmd->add_option("--cloud", o.cloud, "point-cloud resolution per axis");
  beta_cmd->add_option("--seed", o.seed, "random seed");
  beta_cmd->add_option("--out", o.out, "output JSON path (default stdout)");
  beta_cmd->add_option("--dump-tuples", o.out_csv, "CSV dump of the checked tuples");

  auto* diverge_cmd = app.add_subcommand("diverge", "blow-up lower-bound harness");
  diverge_cmd->require_subcommand(1);
  for (const char* which : {"curve", "manifold"}) {
    auto* c = diverge_cmd->add_subcommand(which, std::string("diverge ") + which);
    add_saw_opts(c);
    c->add_option("--p", o.p, "energy exponent p");
    c->add_option("--m", o.m, "manifold dimension");
    c->add_option("--k,--levels", o.levels, "level range, e.g. 1..6");
    c->add_option("--cells", o.cells, "sampled cells per level");
    c->add_option("--spc", o.spc, "Monte-Carlo samples per cell");
    c->add_option("--gap-samples", o.gap_samples, "secant-gap triples per level");
    c->add_option("--delta", o.delta, "tuple box radius fraction");
    c->add_option("--eps-slope", o.eps_slope, "slope bound defining the flat prefix");
    c->add_option("--A", o.domain_bound, "explicit domain bound A (0: scan)");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--out", o.out, "output JSON path (default stdout)");
    c->add_option("--out-csv", o.out_csv, "per-level CSV path");
  }

  auto* cone_cmd = app.add_subcommand("cone-check", "secant-cone containment check");
  add_saw_opts(cone_cmd);
  cone_cmd->add_option("--gen", o.gen, "segment|circle|saw-graph");
  cone_cmd->add_option("--r", o.radius, "circle radius");
  cone_cmd->add_option("--len", o.seg_len, "segment length");
  cone_cmd->add_option("--n", o.n_samples, "sample count");
  cone_cmd->add_option("--C", o.holder_C, "Hoelder constant (0: generator default)");
  cone_cmd->add_option("--epsilon", o.epsilon, "pair separation cutoff (0: auto)");
  cone_cmd->add_option("--out", o.out, "output JSON path (default stdout)");

  // global flags (--config, --threads, --no-simd) may appear after the
  // subcommand name; let unmatched options fall through to the parent
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    for (auto* sub : a->get_subcommands({})) {
      sub->fallthrough();
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  try {
    auto args = expand_config(argc, argv);
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mcurv::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (o.no_simd) mcurv::kern::set_isa(mcurv::kern::Isa::scalar);
    if (saw_cmd->parsed()) return run_saw(o);
    if (energy_cmd->parsed()) {
      for (size_t i = 0; i < energy_kinds.size(); ++i) {
        if (energy_kinds[i]->parsed()) {
          const char* kinds[] = {"mp", "ip", "up", "ep"};
          if (i == 3) return run_energy_ep(o);
          return run_energy_curve(o, kinds[i]);
        }
      }
    }
    if (beta_cmd->parsed()) return run_beta(o);
    if (diverge_cmd->parsed()) {
      for (auto* c : diverge_cmd->get_subcommands())
        if (c->parsed()) return run_diverge(o, c->get_name());
    }
    if (cone_cmd->parsed()) return run_cone_check(o);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const mcurv::precondition_error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const mcurv::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
