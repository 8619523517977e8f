#include "cvt3d/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cvt3d/bounds.hpp"
#include "cvt3d/gfunc.hpp"
#include "cvt3d/io.hpp"
#include "cvt3d/lattice.hpp"
#include "cvt3d/lloyd.hpp"
#include "cvt3d/parallel.hpp"
#include "cvt3d/voronoi.hpp"

namespace cvt3d::cli {

namespace fs = std::filesystem;

namespace {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string domain = "torus";
  std::string n = "64";
  int k = 3;
  std::string kind = "bcc";
  std::uint64_t seed = 0;
  int iters = 10000;
  std::optional<int> restarts;
  int m = 14;
  int mmin = 4;
  int mmax = 20;
  double a = 1.0;
  std::string omega = "0.25,0.75";
  std::string out = ".";
  std::optional<int> threads;
  std::string input;
  std::string dump = "tessellation.json";
  std::optional<long> budget;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("--n: not an integer: '" + item + "'");
    }
    require(used == item.size() && v >= 1, "--n: expected positive integers, got '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  require(!out.empty(), "--n must not be empty");
  return out;
}

Subcube parse_omega(const std::string& text) {
  const auto comma = text.find(',');
  require(comma != std::string::npos, "--omega expects \"x0,x1\"");
  Subcube s;
  try {
    s.lo = std::stod(text.substr(0, comma));
    s.hi = std::stod(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw ValidationError("--omega expects two numbers \"x0,x1\"");
  }
  require(0.0 <= s.lo && s.lo < s.hi && s.hi <= 1.0, "--omega must satisfy 0 <= x0 < x1 <= 1");
  return s;
}

Domain domain_of(const Options& o) {
  try {
    return parse_domain(o.domain);
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
}

LatticeKind kind_of(const Options& o) {
  try {
    return parse_lattice_kind(o.kind);
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
}

fs::path input_path(const Options& o) {
  const fs::path p = o.input.empty() ? fs::path(o.out) / "tessellation.json" : fs::path(o.input);
  require(fs::exists(p), "input tessellation not found: " + p.string());
  return p;
}

Tessellation load_tessellation(const Options& o) {
  const Json j = Json::parse(read_text(input_path(o)));
  return tessellation_from_json(j);
}

void emit(const Options& o, const std::string& name, const std::string& text, std::ostream& out) {
  const fs::path p = fs::path(o.out) / name;
  write_text(p, text);
  out << "wrote " << p.string() << '\n';
}

void emit_json(const Options& o, const std::string& name, const Json& j, std::ostream& out) {
  emit(o, name, j.dump(2) + "\n", out);
}

OptimizeConfig lloyd_config(const Options& o) {
  OptimizeConfig cfg;
  cfg.max_iters = o.iters;
  cfg.seed = o.seed;
  return cfg;
}

void cmd_constants(const Options& o, std::ostream& out) { emit_json(o, "constants.json", constants_json(), out); }

void cmd_lattice(const Options& o, std::ostream& out) {
  const LatticeKind kind = kind_of(o);
  const Domain domain = domain_of(o);
  require(o.k >= 1 && o.k <= 40, "--k must lie in [1, 40]");
  const Tessellation t = build_tessellation(generate_lattice(kind, o.k), domain);
  Json s;
  s["kind"] = to_string(kind);
  s["k"] = o.k;
  s["domain"] = to_string(domain);
  s["n"] = t.size();
  s["energy"] = t.energy;
  s["density"] = std::pow(static_cast<double>(t.size()), 2.0 / 3.0) * t.energy;
  emit_json(o, "lattice.json", s, out);
  emit(o, "cells.csv", cells_csv(t), out);
  emit_json(o, o.dump, tessellation_to_json(t), out);
}

void cmd_lloyd(const Options& o, std::ostream& out) {
  const Domain domain = domain_of(o);
  const auto ns = parse_sizes(o.n);
  require(ns.size() == 1, "lloyd takes a single --n");
  require(o.iters >= 1, "--iters must be >= 1");
  const auto start = random_generators(ns[0], derive_seed(o.seed, ns[0]));
  const OptimizeResult r = optimize(start, domain, lloyd_config(o));
  const Tessellation t = build_tessellation(r.generators, domain);
  emit(o, "trace.csv", trace_csv(r.trace), out);
  emit_json(o, "generators.json", generators_to_json(r.generators), out);
  Json s;
  s["n"] = ns[0];
  s["domain"] = to_string(domain);
  s["seed"] = o.seed;
  s["converged"] = r.converged;
  s["stop_reason"] = r.reason == StopReason::MoveTol ? "move_tol" : (r.reason == StopReason::EnergyTol ? "energy_tol" : "max_iters");
  s["iterations"] = r.iterations;
  s["final_energy"] = t.energy;
  s["density"] = std::pow(static_cast<double>(t.size()), 2.0 / 3.0) * t.energy;
  emit_json(o, "lloyd.json", s, out);
  emit(o, "cells.csv", cells_csv(t), out);
  emit_json(o, o.dump, tessellation_to_json(t), out);
}

void cmd_audit(const Options& o, std::ostream& out) {
  const Tessellation t = load_tessellation(o);
  const AuditReport rep = audit(t);
  emit(o, "audit.csv", audit_csv(rep), out);
  const auto& c = constants();
  Json s;
  s["n"] = rep.n;
  s["domain"] = to_string(rep.domain);
  s["energy"] = rep.energy;
  s["density"] = rep.density;
  s["tau_lb"] = static_cast<double>(c.tau_lb);
  s["tau_floor_pass"] = rep.tau_floor_pass;
  s["energy_floor_margin"] = rep.energy_floor_margin;
  s["diam_low_pass"] = rep.diam_low_pass;
  s["volume_low_pass"] = rep.volume_low_pass;
  s["diam_high_pass"] = rep.diam_high_pass ? Json(*rep.diam_high_pass) : Json("not applicable");
  s["faces_pass"] = rep.faces_pass;
  s["max_faces"] = rep.max_faces;
  s["mean_faces"] = rep.mean_faces;
  s["delone_min_ratio"] = rep.delone_min_ratio;
  s["delone_max_ratio"] = rep.delone_max_ratio;
  s["min_ball_floor_slack"] = rep.min_ball_floor_slack;
  emit_json(o, "audit.json", s, out);
}

void cmd_lemma_d(const Options& o, std::ostream& out) {
  const int budget = static_cast<int>(o.budget.value_or(256));
  require(budget >= 1, "--budget must be >= 1");
  const Tessellation t = load_tessellation(o);
  std::vector<std::string> rows(t.size());
  std::vector<char> passed(t.size(), 0);
  parallel_for(t.size(), [&](std::size_t k) {
    std::ostringstream row;
    row << k << ',';
    try {
      const LemmaDCheck c = lemma_d_check(t.cells[k], t.generators[k], budget);
      row << format_double(c.gain) << ',' << format_double(c.bound_r) << ',' << format_double(c.bound_vol) << ','
          << format_double(c.r) << ',' << format_double(c.volume) << ',' << format_double(c.detail.farthest_candidate_gain)
          << ',' << format_double(c.detail.cube_candidate_gain) << ',' << (c.pass ? 1 : 0);
      passed[k] = c.pass ? 1 : 0;
    } catch (const GeometryError&) {
      row << "nan,nan,nan,nan,nan,nan,nan,na";
      passed[k] = 1;
    }
    rows[k] = row.str();
  });
  std::string text = "cell,gain,bound_r,bound_vol,r,volume,farthest_gain,cube_gain,pass\n";
  std::size_t fails = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    text += rows[k] + '\n';
    fails += passed[k] ? 0 : 1;
  }
  emit(o, "lemma_d.csv", text, out);
  out << "cells failing: " << fails << '\n';
}

void cmd_lemma_below(const Options& o, std::ostream& out) {
  const Tessellation t = load_tessellation(o);
  require(t.size() >= 2, "lemma-below needs at least two generators");
  const NearestNeighborStats nn = nearest_neighbor_stats(t.generators, t.domain);
  std::string text = "cell,sigma,r,bound_r,bound_vol,bound_quadratic,satisfied\n";
  std::size_t unsatisfied = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const LemmaBelowCheck c = lemma_below_check(t, k, nn);
    text += std::to_string(k) + ',' + format_double(c.sigma) + ',' + format_double(c.r) + ',' + format_double(c.bound_r) +
            ',' + format_double(c.bound_vol) + ',' + format_double(c.bound_quadratic) + ',' + (c.satisfied ? "1" : "0") +
            '\n';
    unsatisfied += c.satisfied ? 0 : 1;
  }
  emit(o, "lemma_below.csv", text, out);
  out << "cells not satisfied: " << unsatisfied << '\n';
}

void cmd_boundary(const Options& o, std::ostream& out, bool k_given) {
  const Subcube omega = parse_omega(o.omega);
  Tessellation t;
  if (o.input.empty() && k_given) {
    require(o.k >= 1 && o.k <= 40, "--k must lie in [1, 40]");
    t = build_tessellation(generate_lattice(kind_of(o), o.k), Domain::UnitCube);
  } else {
    t = load_tessellation(o);
  }
  require(t.domain == Domain::UnitCube, "boundary needs a cube-domain tessellation");
  const BoundarySplit b = boundary_split(t, omega);
  std::string text = "n,e_boundary,e_interior,e_exterior,n_boundary,n_interior,n_exterior\n";
  text += std::to_string(t.size()) + ',' + format_double(b.e_boundary) + ',' + format_double(b.e_interior) + ',' +
          format_double(b.e_exterior) + ',' + std::to_string(b.n_boundary) + ',' + std::to_string(b.n_interior) + ',' +
          std::to_string(b.n_exterior) + '\n';
  emit(o, "boundary.csv", text, out);
}

void cmd_zador(const Options& o, std::ostream& out) {
  ZadorConfig cfg;
  cfg.restarts = o.restarts.value_or(4);
  require(cfg.restarts >= 1, "--restarts must be >= 1");
  require(o.iters >= 1, "--iters must be >= 1");
  cfg.lloyd = lloyd_config(o);
  const auto rows = zador_sweep(parse_sizes(o.n), domain_of(o), cfg);
  std::string text = "n,best_energy,n23E,bcc_n23E,restart_spread,above_ball_floor,above_tau_lb\n";
  for (const auto& r : rows) {
    text += std::to_string(r.n) + ',' + format_double(r.best_energy) + ',' + format_double(r.density) + ',' +
            (r.bcc_density ? format_double(*r.bcc_density) : "na") + ',' + format_double(r.restart_spread) + ',' +
            (r.above_ball_floor ? "1" : "0") + ',' + (r.above_tau_lb ? "1" : "0") + '\n';
  }
  emit(o, "zador.csv", text, out);
}

GMinConfig gmin_config(const Options& o, int default_restarts) {
  GMinConfig cfg;
  cfg.restarts = o.restarts.value_or(default_restarts);
  require(cfg.restarts >= 0, "--restarts must be >= 0");
  if (o.budget) {
    require(*o.budget >= 1, "--budget must be >= 1");
    cfg.eval_budget = *o.budget;
  }
  cfg.seed = o.seed;
  return cfg;
}

void cmd_gmin(const Options& o, std::ostream& out) {
  require(o.a > 0.0 && std::isfinite(o.a), "--a must be positive");
  require(o.m >= 4 && o.m <= 60, "--m must lie in [4, 60]");
  const GMinResult r = minimize_G(o.a, o.m, gmin_config(o, 16));
  Json s;
  s["a"] = o.a;
  s["m"] = o.m;
  s["value"] = r.value;
  s["ball_lower_bound"] = ball_lower_bound(o.a);
  s["restarts_used"] = r.restarts_used;
  s["effective_faces"] = r.effective_faces;
  s["best_start"] = r.start_labels[r.best_start];
  s["start_values"] = Json::array();
  for (std::size_t i = 0; i < r.start_values.size(); ++i) {
    s["start_values"].push_back({{"start", r.start_labels[i]}, {"normalized_value", r.start_values[i]}});
  }
  s["best_restart_trace"] = r.best_restart_trace;
  s["polytope"] = polytope_to_json(r.polytope);
  emit_json(o, "gmin.json", s, out);
  out << "G(" << format_double(o.a) << ", " << o.m << ") ~ " << format_double(r.value) << '\n';
}

void cmd_gprobe(const Options& o, std::ostream& out) {
  require(o.a > 0.0 && std::isfinite(o.a), "--a must be positive");
  require(4 <= o.mmin && o.mmin < o.mmax && o.mmax <= 60, "need 4 <= --mmin < --mmax <= 60");
  const auto rows = convexity_probe(o.a, o.mmin, o.mmax, gmin_config(o, 16));
  emit(o, "gprobe.csv", probe_csv(rows), out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Centroidal Voronoi tessellation laboratory in the unit cube and flat torus"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--threads", o.threads, "Worker threads (default: CVT3D_THREADS or hardware)")
        ->check(CLI::Range(1, 1024));
    sub->add_option("--seed", o.seed, "Base random seed");
  };
  auto tess_input = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Tessellation JSON (default: OUT/tessellation.json)");
  };

  auto* constants_cmd = app.add_subcommand("constants", "Closed-form constants with printed-decimal deviations");
  common(constants_cmd);

  auto* lattice_cmd = app.add_subcommand("lattice", "Lattice tessellation and its energy density");
  common(lattice_cmd);
  lattice_cmd->add_option("--kind", o.kind, "sc, bcc or fcc");
  lattice_cmd->add_option("--k", o.k, "Conventional cells per axis");
  lattice_cmd->add_option("--domain", o.domain, "cube or torus");
  lattice_cmd->add_option("--dump", o.dump, "Tessellation file name inside OUT");

  auto* lloyd_cmd = app.add_subcommand("lloyd", "Lloyd iteration from random generators");
  common(lloyd_cmd);
  lloyd_cmd->add_option("--n", o.n, "Number of generators");
  lloyd_cmd->add_option("--domain", o.domain, "cube or torus");
  lloyd_cmd->add_option("--iters", o.iters, "Maximum iterations");
  lloyd_cmd->add_option("--dump", o.dump, "Tessellation file name inside OUT");

  auto* audit_cmd = app.add_subcommand("audit", "Per-cell bound audit");
  common(audit_cmd);
  tess_input(audit_cmd);

  auto* lemma_d_cmd = app.add_subcommand("lemma-d", "Insertion-gain oracle on every cell");
  common(lemma_d_cmd);
  tess_input(lemma_d_cmd);
  lemma_d_cmd->add_option("--budget", o.budget, "Low-discrepancy candidates per cell");

  auto* lemma_below_cmd = app.add_subcommand("lemma-below", "Nearest-neighbor separation oracle");
  common(lemma_below_cmd);
  tess_input(lemma_below_cmd);

  auto* boundary_cmd = app.add_subcommand("boundary", "Energy of cells meeting the boundary of a subcube");
  common(boundary_cmd);
  tess_input(boundary_cmd);
  boundary_cmd->add_option("--omega", o.omega, "Subcube \"x0,x1\"");
  auto* boundary_k = boundary_cmd->add_option("--k", o.k, "Use a cube-domain lattice with k cells per axis");
  boundary_cmd->add_option("--kind", o.kind, "Lattice kind for --k");

  auto* zador_cmd = app.add_subcommand("zador", "Multi-start Lloyd sweep of n^{2/3} E");
  common(zador_cmd);
  zador_cmd->add_option("--n", o.n, "Comma-separated generator counts");
  zador_cmd->add_option("--domain", o.domain, "cube or torus");
  zador_cmd->add_option("--restarts", o.restarts, "Random restarts per n");
  zador_cmd->add_option("--iters", o.iters, "Maximum Lloyd iterations");

  auto* gmin_cmd = app.add_subcommand("gmin", "Minimal second moment over polytopes with at most m faces");
  common(gmin_cmd);
  gmin_cmd->add_option("--a", o.a, "Volume");
  gmin_cmd->add_option("--m", o.m, "Maximum face count");
  gmin_cmd->add_option("--restarts", o.restarts, "Random starts");
  gmin_cmd->add_option("--budget", o.budget, "Objective evaluations per start");

  auto* gprobe_cmd = app.add_subcommand("gprobe", "G(a, m) over a range of m with differences");
  common(gprobe_cmd);
  gprobe_cmd->add_option("--a", o.a, "Volume");
  gprobe_cmd->add_option("--mmin", o.mmin, "Smallest m");
  gprobe_cmd->add_option("--mmax", o.mmax, "Largest m");
  gprobe_cmd->add_option("--restarts", o.restarts, "Random starts per m");
  gprobe_cmd->add_option("--budget", o.budget, "Objective evaluations per start");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  try {
    if (o.threads) set_thread_count(static_cast<std::size_t>(*o.threads));
    std::error_code ec;
    fs::create_directories(o.out, ec);
    require(fs::is_directory(o.out), "--out is not a usable directory: " + o.out);

    if (constants_cmd->parsed()) cmd_constants(o, out);
    else if (lattice_cmd->parsed()) cmd_lattice(o, out);
    else if (lloyd_cmd->parsed()) cmd_lloyd(o, out);
    else if (audit_cmd->parsed()) cmd_audit(o, out);
    else if (lemma_d_cmd->parsed()) cmd_lemma_d(o, out);
    else if (lemma_below_cmd->parsed()) cmd_lemma_below(o, out);
    else if (boundary_cmd->parsed()) cmd_boundary(o, out, boundary_k->count() > 0);
    else if (zador_cmd->parsed()) cmd_zador(o, out);
    else if (gmin_cmd->parsed()) cmd_gmin(o, out);
    else if (gprobe_cmd->parsed()) cmd_gprobe(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"cvt3d"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cvt3d::cli
