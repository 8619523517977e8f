#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvt3d/geom.hpp"
#include "cvt3d/lloyd.hpp"
#include "cvt3d/voronoi.hpp"

namespace cvt3d {

/// Constants of the quantization-energy estimates, evaluated in extended
/// precision from their closed forms. Printed reference decimals are kept
/// separately in constant_report().
struct GershoConstants {
  long double omega3;   // volume of the unit ball, 4 pi / 3
  long double c_d;      // 2^2 3^3 / (5^2 10^3)
  long double delta;    // sqrt(1 + 4 c_d) - 1
  long double delta_quadratic;  // sqrt(1 + c_d) - 1, root of s^2 + 2 r s - c_d r^2
  long double gamma1;   // (2/5)^{2/3} / 40
  long double gamma2;   // delta omega3^{-1/3}
  long double gamma3;   // omega3^{-1/5} gamma1^{1/5}
  long double gamma4;
  long double gamma5;   // delta gamma3 / 4
  long double n_star;   // 2 (3 gamma4 / gamma5)^3
  long double tau_lb;   // (2 pi / 5) omega3^{-5/3}
  long double c_ball;   // second moment of the unit-volume ball about its centre
};

const GershoConstants& constants();

struct ConstantRow {
  std::string name;
  long double formula_value = 0;
  std::optional<double> paper_decimal;
  std::optional<double> rel_deviation;
};

/// One row per constant; rows with a printed decimal carry the relative
/// deviation |formula - printed| / |printed|.
std::vector<ConstantRow> constant_report();

/// C_ball * volume^{5/3}: smallest possible second moment about the centroid
/// of a convex body of the given volume.
double ball_lower_bound(double volume);

struct CellAudit {
  std::size_t index = 0;
  double volume_n = 0.0;          // |V| n
  double diam_n13 = 0.0;          // diam n^{1/3}
  double diam_nm2_13 = 0.0;       // diam (n-2)^{1/3}, NaN for n <= 2
  std::size_t faces = 0;
  double energy_n53 = 0.0;        // cell energy n^{5/3}; equals the density for congruent cells
  double sigma_n13 = 0.0;         // nearest-neighbor distance n^{1/3}, NaN for n = 1
  double ball_floor_slack = 0.0;  // second moment about centroid minus ball bound
  double bounding_radius = 0.0;
  bool diam_low_ok = true;        // diam >= Gamma3 n^{-1/3}
  bool volume_low_ok = true;      // |V| >= omega3 Gamma5^3 / n
  std::optional<bool> diam_high_ok;  // diam <= Gamma4 (n-2)^{-1/3}; unset for n <= 2
  bool faces_ok = true;           // faces <= N*
};

struct AuditReport {
  std::size_t n = 0;
  Domain domain = Domain::UnitCube;
  std::vector<CellAudit> cells;
  double energy = 0.0;
  double density = 0.0;  // n^{2/3} E
  bool diam_low_pass = true;
  bool volume_low_pass = true;
  std::optional<bool> diam_high_pass;
  bool faces_pass = true;
  bool tau_floor_pass = true;      // density >= tau_lb
  double energy_floor_margin = 0.0;  // density - C_ball
  std::size_t max_faces = 0;
  double mean_faces = 0.0;
  double delone_min_ratio = 0.0;   // min sigma n^{1/3}
  double delone_max_ratio = 0.0;   // max covering radius n^{1/3}
  double min_ball_floor_slack = 0.0;
};

AuditReport audit(const Tessellation& t);

struct LemmaDCheck {
  double gain = 0.0;
  double bound_r = 0.0;    // c_d r^2 |V|
  double bound_vol = 0.0;  // Gamma1 |V|^{5/3}
  double r = 0.0;
  double volume = 0.0;
  InsertionGain detail;
  bool pass = false;
};

LemmaDCheck lemma_d_check(const ConvexPolytope& cell, const Vec3& y, int budget);

struct LemmaBelowCheck {
  double sigma = 0.0;
  double r = 0.0;
  double bound_r = 0.0;          // r delta
  double bound_vol = 0.0;        // Gamma2 |V|^{1/3}
  double bound_quadratic = 0.0;  // r (sqrt(1 + c_d) - 1)
  bool satisfied = false;
};

LemmaBelowCheck lemma_below_check(const Tessellation& t, std::size_t index);
/// Same, reusing precomputed nearest-neighbor distances.
LemmaBelowCheck lemma_below_check(const Tessellation& t, std::size_t index, const NearestNeighborStats& nn);

struct Subcube {
  double lo = 0.0;
  double hi = 1.0;
};

struct BoundarySplit {
  double e_boundary = 0.0;  // cells meeting the boundary of omega
  double e_interior = 0.0;  // cells inside omega, away from its boundary
  double e_exterior = 0.0;  // cells with no positive-volume overlap with omega
  std::size_t n_boundary = 0;
  std::size_t n_interior = 0;
  std::size_t n_exterior = 0;
};

/// Cube domain only. A cell counts as boundary when it overlaps omega with
/// positive volume and touches or crosses its boundary (a closed cell whose
/// face lies on the boundary counts).
BoundarySplit boundary_split(const Tessellation& t, const Subcube& omega);

struct ZadorConfig {
  int restarts = 4;
  OptimizeConfig lloyd;
  bool bcc_seed = true;  // also start from the BCC lattice when n = 2k^3 on the torus
};

struct ZadorRow {
  std::size_t n = 0;
  double best_energy = 0.0;
  double density = 0.0;
  std::optional<double> bcc_density;  // density reached from the BCC start
  double restart_spread = 0.0;        // max - min density over random restarts
  bool above_ball_floor = false;
  bool above_tau_lb = false;
};

std::vector<ZadorRow> zador_sweep(const std::vector<std::size_t>& n_list, Domain domain, const ZadorConfig& cfg);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cvt3d
