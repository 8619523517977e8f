#include "cvt3d/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cvt3d/lattice.hpp"
#include "cvt3d/parallel.hpp"

namespace cvt3d {

namespace {

GershoConstants evaluate_constants() {
  using L = long double;
  const L pi = std::numbers::pi_v<L>;
  GershoConstants c{};
  c.omega3 = 4.0L * pi / 3.0L;
  c.c_d = (4.0L * 27.0L) / (25.0L * 1000.0L);
  c.delta = std::sqrt(1.0L + (16.0L * 27.0L) / (25.0L * 1000.0L)) - 1.0L;
  c.delta_quadratic = std::sqrt(1.0L + c.c_d) - 1.0L;
  c.gamma1 = std::pow(2.0L / 5.0L, 2.0L / 3.0L) / 40.0L;
  c.gamma2 = c.delta * std::pow(c.omega3, -1.0L / 3.0L);
  c.gamma3 = std::pow(c.omega3, -1.0L / 5.0L) * std::pow(c.gamma1, 1.0L / 5.0L);
  c.gamma4 = 2.0L * std::pow(12.0L, 0.25L) * std::cbrt(16.0L) /
             (std::pow(pi, 0.25L) * std::pow(c.omega3, 1.0L / 12.0L)) * std::pow(c.delta, -0.5L) *
             std::pow(1.0L / c.c_d, 0.25L);
  c.gamma5 = 0.25L * c.delta * c.gamma3;
  const L ratio = 3.0L * c.gamma4 / c.gamma5;
  c.n_star = 2.0L * ratio * ratio * ratio;
  c.tau_lb = (2.0L * pi / 5.0L) * std::pow(c.omega3, -5.0L / 3.0L);
  // Unit-volume ball of radius R = omega3^{-1/3}: integral of 4 pi s^4 ds over [0, R].
  const L radius = std::pow(c.omega3, -1.0L / 3.0L);
  c.c_ball = 4.0L * pi * std::pow(radius, 5.0L) / 5.0L;
  return c;
}

}  // namespace

const GershoConstants& constants() {
  static const GershoConstants c = evaluate_constants();
  return c;
}

std::vector<ConstantRow> constant_report() {
  const auto& c = constants();
  // Truncated octahedron: dimensionless second moment 19 / (192 * 2^{1/3}), times 3.
  const long double bcc = 3.0L * 19.0L / (192.0L * std::cbrt(2.0L));
  std::vector<ConstantRow> rows = {
      {"omega3", c.omega3, std::nullopt, std::nullopt},
      {"c_d", c.c_d, std::nullopt, std::nullopt},
      {"delta", c.delta, std::nullopt, std::nullopt},
      {"delta_quadratic_root", c.delta_quadratic, std::nullopt, std::nullopt},
      {"Gamma1", c.gamma1, 0.013572, std::nullopt},
      {"Gamma2", c.gamma2, std::nullopt, std::nullopt},
      {"Gamma3", c.gamma3, 0.317769, std::nullopt},
      {"Gamma4", c.gamma4, 333.18, std::nullopt},
      {"Gamma5", c.gamma5, 0.000451, std::nullopt},
      {"N_star", c.n_star, 2.94e20, std::nullopt},
      {"tau_lb", c.tau_lb, 0.11545, std::nullopt},
      {"C_ball", c.c_ball, std::nullopt, std::nullopt},
      {"bcc_density", bcc, 0.23562, std::nullopt},
  };
  for (auto& r : rows) {
    if (r.paper_decimal) {
      r.rel_deviation = static_cast<double>(std::fabs(r.formula_value - *r.paper_decimal) /
                                            std::fabs(static_cast<long double>(*r.paper_decimal)));
    }
  }
  return rows;
}

double ball_lower_bound(double volume) {
  if (!(volume >= 0.0)) throw std::invalid_argument("ball_lower_bound: volume must be >= 0");
  return static_cast<double>(constants().c_ball) * std::pow(volume, 5.0 / 3.0);
}

AuditReport audit(const Tessellation& t) {
  const auto& c = constants();
  const std::size_t n = t.size();
  const double nd = static_cast<double>(n);
  const double n13 = std::cbrt(nd);
  const bool has_nm2 = n > 2;
  const double nm2_13 = has_nm2 ? std::cbrt(nd - 2.0) : std::numeric_limits<double>::quiet_NaN();

  std::optional<NearestNeighborStats> nn;
  if (n >= 2) nn = nearest_neighbor_stats(t.generators, t.domain);

  AuditReport rep;
  rep.n = n;
  rep.domain = t.domain;
  rep.cells.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const auto& cell = t.cells[k];
    const Moments m = moments(cell, t.generators[k]);
    const double diam = diameter(cell);
    CellAudit& a = rep.cells[k];
    a.index = k;
    a.volume_n = m.volume * nd;
    a.diam_n13 = diam * n13;
    a.diam_nm2_13 = diam * nm2_13;
    a.faces = face_count(cell);
    a.energy_n53 = m.second_moment * nd * std::pow(nd, 2.0 / 3.0);
    a.sigma_n13 = nn ? nn->sigma[k] * n13 : std::numeric_limits<double>::quiet_NaN();
    a.ball_floor_slack = moments(cell, m.centroid).second_moment - ball_lower_bound(m.volume);
    a.bounding_radius = bounding_radius(cell, t.generators[k]);
    a.diam_low_ok = diam >= static_cast<double>(c.gamma3) / n13;
    a.volume_low_ok = m.volume >= static_cast<double>(c.omega3 * c.gamma5 * c.gamma5 * c.gamma5) / nd;
    if (has_nm2) a.diam_high_ok = diam <= static_cast<double>(c.gamma4) / nm2_13;
    a.faces_ok = static_cast<long double>(a.faces) <= c.n_star;
  });

  rep.energy = t.energy;
  rep.density = std::pow(nd, 2.0 / 3.0) * t.energy;
  rep.tau_floor_pass = rep.density >= static_cast<double>(c.tau_lb);
  rep.energy_floor_margin = rep.density - static_cast<double>(c.c_ball);
  if (has_nm2) rep.diam_high_pass = true;
  double face_sum = 0.0;
  double max_cover = 0.0;
  rep.min_ball_floor_slack = std::numeric_limits<double>::infinity();
  for (const auto& a : rep.cells) {
    rep.diam_low_pass = rep.diam_low_pass && a.diam_low_ok;
    rep.volume_low_pass = rep.volume_low_pass && a.volume_low_ok;
    if (has_nm2) rep.diam_high_pass = *rep.diam_high_pass && *a.diam_high_ok;
    rep.faces_pass = rep.faces_pass && a.faces_ok;
    rep.max_faces = std::max(rep.max_faces, a.faces);
    face_sum += static_cast<double>(a.faces);
    max_cover = std::max(max_cover, a.bounding_radius);
    rep.min_ball_floor_slack = std::min(rep.min_ball_floor_slack, a.ball_floor_slack);
  }
  rep.mean_faces = n > 0 ? face_sum / nd : 0.0;
  rep.delone_min_ratio = nn ? nn->min * n13 : std::numeric_limits<double>::quiet_NaN();
  rep.delone_max_ratio = max_cover * n13;
  return rep;
}

LemmaDCheck lemma_d_check(const ConvexPolytope& cell, const Vec3& y, int budget) {
  const auto& c = constants();
  LemmaDCheck out;
  out.detail = insertion_gain(cell, y, budget);
  out.gain = out.detail.gain;
  out.volume = moments(cell, y).volume;
  out.r = bounding_radius(cell, y);
  out.bound_r = static_cast<double>(c.c_d) * out.r * out.r * out.volume;
  out.bound_vol = static_cast<double>(c.gamma1) * std::pow(out.volume, 5.0 / 3.0);
  out.pass = out.gain >= std::max(out.bound_r, out.bound_vol);
  return out;
}

LemmaBelowCheck lemma_below_check(const Tessellation& t, std::size_t index, const NearestNeighborStats& nn) {
  if (t.size() < 2) throw std::invalid_argument("lemma_below_check: need at least two generators");
  if (index >= t.size()) throw std::out_of_range("lemma_below_check: index out of range");
  const auto& c = constants();
  LemmaBelowCheck out;
  const auto& cell = t.cells[index];
  out.sigma = nn.sigma[index];
  out.r = bounding_radius(cell, t.generators[index]);
  out.bound_r = out.r * static_cast<double>(c.delta);
  out.bound_vol = static_cast<double>(c.gamma2) * std::cbrt(moments(cell, t.generators[index]).volume);
  out.bound_quadratic = out.r * static_cast<double>(c.delta_quadratic);
  out.satisfied = out.sigma >= out.bound_r && out.sigma >= out.bound_vol;
  return out;
}

LemmaBelowCheck lemma_below_check(const Tessellation& t, std::size_t index) {
  return lemma_below_check(t, index, nearest_neighbor_stats(t.generators, t.domain));
}

BoundarySplit boundary_split(const Tessellation& t, const Subcube& omega) {
  if (t.domain != Domain::UnitCube) throw std::invalid_argument("boundary_split: cube domain only");
  if (!(omega.lo >= 0.0 && omega.hi <= 1.0 && omega.lo < omega.hi)) {
    throw std::invalid_argument("boundary_split: omega must be a subcube of [0,1]^3 with positive volume");
  }
  BoundarySplit out;
  CompensatedSum eb;
  CompensatedSum ei;
  CompensatedSum ee;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& cell = t.cells[k];
    ConvexPolytope overlap = cell;
    for (int axis = 0; axis < 3 && !overlap.empty(); ++axis) {
      Vec3 dir;
      dir[axis] = 1.0;
      clip_in_place(overlap, {dir, omega.hi});
      clip_in_place(overlap, {-dir, -omega.lo});
    }
    const double e = t.cell_energy[k];
    if (overlap.empty()) {
      ee.add(e);
      ++out.n_exterior;
      continue;
    }
    const double tol = 1e-9 * bbox_diagonal(cell);
    bool touches = false;
    for (const auto& v : cell.vertices) {
      for (int axis = 0; axis < 3; ++axis) {
        touches = touches || v[axis] <= omega.lo + tol || v[axis] >= omega.hi - tol;
      }
    }
    if (touches) {
      eb.add(e);
      ++out.n_boundary;
    } else {
      ei.add(e);
      ++out.n_interior;
    }
  }
  out.e_boundary = eb.value();
  out.e_interior = ei.value();
  out.e_exterior = ee.value();
  return out;
}

std::vector<ZadorRow> zador_sweep(const std::vector<std::size_t>& n_list, Domain domain, const ZadorConfig& cfg) {
  if (n_list.empty()) throw std::invalid_argument("zador_sweep: n_list must not be empty");
  if (cfg.restarts < 1) throw std::invalid_argument("zador_sweep: restarts must be >= 1");
  const auto& c = constants();
  std::vector<ZadorRow> rows;
  for (std::size_t n : n_list) {
    if (n < 1) throw std::invalid_argument("zador_sweep: n must be >= 1");
    const double scale = std::pow(static_cast<double>(n), 2.0 / 3.0);
    ZadorRow row;
    row.n = n;
    row.best_energy = std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int r = 0; r < cfg.restarts; ++r) {
      const auto start = random_generators(n, derive_seed(cfg.lloyd.seed, n, static_cast<std::uint64_t>(r)));
      const auto res = optimize(start, domain, cfg.lloyd);
      row.best_energy = std::min(row.best_energy, res.final_energy);
      lo = std::min(lo, res.final_energy * scale);
      hi = std::max(hi, res.final_energy * scale);
    }
    row.restart_spread = hi - lo;
    if (cfg.bcc_seed && domain == Domain::UnitTorus && n % 2 == 0) {
      const int k = static_cast<int>(std::lround(std::cbrt(static_cast<double>(n / 2))));
      if (static_cast<std::size_t>(2 * k * k * k) == n) {
        const auto res = optimize(generate_lattice(LatticeKind::BCC, k), domain, cfg.lloyd);
        row.bcc_density = res.final_energy * scale;
        row.best_energy = std::min(row.best_energy, res.final_energy);
      }
    }
    row.density = row.best_energy * scale;
    row.above_ball_floor = row.density >= static_cast<double>(c.c_ball);
    row.above_tau_lb = row.density >= static_cast<double>(c.tau_lb);
    rows.push_back(row);
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: samples must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace cvt3d
