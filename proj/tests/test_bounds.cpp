#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "cvt3d/bounds.hpp"
#include "cvt3d/lattice.hpp"
#include "oracles.hpp"

using namespace cvt3d;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

struct BigConstants {
  Big omega3, c_d, delta, delta_q, g1, g2, g3, g4, g5, nstar, tau, cball;
};

BigConstants big_constants() {
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  const Big pi = boost::math::constants::pi<Big>();
  BigConstants b;
  b.omega3 = 4 * pi / 3;
  b.c_d = Big(4 * 27) / Big(25 * 1000);
  b.delta = sqrt(1 + Big(16 * 27) / Big(25 * 1000)) - 1;
  b.delta_q = sqrt(1 + b.c_d) - 1;
  b.g1 = pow(Big(2) / 5, Big(2) / 3) / 40;
  b.g2 = b.delta * pow(b.omega3, Big(-1) / 3);
  b.g3 = pow(b.omega3, Big(-1) / 5) * pow(b.g1, Big(1) / 5);
  b.g4 = 2 * pow(Big(12), Big(1) / 4) * pow(Big(16), Big(1) / 3) / (pow(pi, Big(1) / 4) * pow(b.omega3, Big(1) / 12)) *
         pow(b.delta, Big(-1) / 2) * pow(Big(25 * 1000) / Big(4 * 27), Big(1) / 4);
  b.g5 = b.delta * b.g3 / 4;
  b.nstar = 2 * pow(3 * b.g4 / b.g5, 3);
  b.tau = 2 * pi / 5 * pow(b.omega3, Big(-5) / 3);
  // Ball of unit volume: radius R with omega3 R^3 = 1; integral of 4 pi s^4 over [0, R].
  const Big radius = pow(b.omega3, Big(-1) / 3);
  b.cball = 4 * pi * pow(radius, 5) / 5;
  return b;
}

double rel(long double a, const Big& b) {
  return static_cast<double>(boost::multiprecision::abs(Big(a) - b) / boost::multiprecision::abs(b));
}

}  // namespace

TEST_CASE("constants agree with a 50-digit evaluation") {
  const auto& c = constants();
  const BigConstants b = big_constants();
  const double tol = 1e-15;
  CHECK(rel(c.omega3, b.omega3) < tol);
  CHECK(rel(c.c_d, b.c_d) < tol);
  CHECK(rel(c.delta, b.delta) < tol);
  CHECK(rel(c.delta_quadratic, b.delta_q) < tol);
  CHECK(rel(c.gamma1, b.g1) < tol);
  CHECK(rel(c.gamma2, b.g2) < tol);
  CHECK(rel(c.gamma3, b.g3) < tol);
  CHECK(rel(c.gamma4, b.g4) < tol);
  CHECK(rel(c.gamma5, b.g5) < tol);
  CHECK(rel(c.n_star, b.nstar) < 1e-14);
  CHECK(rel(c.tau_lb, b.tau) < tol);
  CHECK(rel(c.c_ball, b.cball) < tol);
}

TEST_CASE("Gamma1 is the maximum of (|V| - t^3) t^2 / (24 |V|^{5/3})") {
  // With |V| = 1 and s = t^3: maximize (1 - s) s^{2/3} / 24 over [0, 1].
  auto neg = [](double s) { return -(1.0 - s) * std::pow(s, 2.0 / 3.0) / 24.0; };
  const auto [s_best, f_best] = boost::math::tools::brent_find_minima(neg, 0.0, 1.0, 52);
  CHECK(std::abs(-f_best - static_cast<double>(constants().gamma1)) < 1e-10);
  CHECK(s_best == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("c_d is the maximum of (1/2 - x/(2r))^3 (x/r)^2") {
  auto neg = [](double u) { return -std::pow(0.5 - 0.5 * u, 3) * u * u; };
  const auto [u_best, f_best] = boost::math::tools::brent_find_minima(neg, 0.0, 1.0, 52);
  CHECK(std::abs(-f_best - static_cast<double>(constants().c_d)) < 1e-10);
  CHECK(u_best == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("printed decimals") {
  const auto& c = constants();
  CHECK(std::abs(static_cast<double>(c.gamma3) - 0.317769) / 0.317769 < 5e-6);
  // 0.013572 is Gamma1 = 0.0135720880... rounded to six decimals.
  CHECK(std::abs(static_cast<double>(c.gamma1) - 0.013572) <= 0.5e-6);
  CHECK(std::abs(static_cast<double>(c.tau_lb) - 0.11545) <= 0.5e-5);

  const auto rows = constant_report();
  auto find = [&](const std::string& name) {
    for (const auto& r : rows) {
      if (r.name == name) return r;
    }
    FAIL("missing row " << name);
    return ConstantRow{};
  };
  for (const char* name : {"Gamma1", "Gamma3", "Gamma4", "Gamma5", "N_star", "tau_lb"}) {
    const ConstantRow r = find(name);
    REQUIRE(r.paper_decimal.has_value());
    REQUIRE(r.rel_deviation.has_value());
    CHECK(*r.rel_deviation == doctest::Approx(std::abs(static_cast<double>(r.formula_value) - *r.paper_decimal) /
                                              *r.paper_decimal));
  }
  CHECK(find("Gamma2").formula_value > 0);
  // Reported, not asserted: Gamma4, Gamma5 and N_star differ from their printed decimals.
  CHECK(*find("Gamma4").rel_deviation > 0.0);
}

TEST_CASE("C_ball is twice the printed tau lower bound") {
  const auto& c = constants();
  CHECK(static_cast<double>(c.c_ball / c.tau_lb) == doctest::Approx(2.0).epsilon(1e-15));
  // Closed form 3/5 (3 / (4 pi))^{2/3}.
  CHECK(static_cast<double>(c.c_ball) ==
        doctest::Approx(0.6 * std::pow(3.0 / (4.0 * std::acos(-1.0)), 2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("C_ball against Monte Carlo") {
  const double radius = std::pow(static_cast<double>(constants().omega3), -1.0 / 3.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-radius, radius);
  const std::size_t samples = 4'000'000;
  const double box = std::pow(2.0 * radius, 3);
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const double r2 = norm2(x);
    const double f = r2 <= radius * radius ? r2 * box : 0.0;
    s += f;
    s2 += f * f;
  }
  const double mean = s / samples;
  const double se = std::sqrt((s2 / samples - mean * mean) / samples);
  CHECK(std::abs(mean - static_cast<double>(constants().c_ball)) < 3.0 * se);
}

TEST_CASE("ball lower bound") {
  const double c = static_cast<double>(constants().c_ball);
  CHECK(ball_lower_bound(0.0) == 0.0);
  CHECK(ball_lower_bound(1.0) == doctest::Approx(c));
  CHECK(ball_lower_bound(8.0) == doctest::Approx(32.0 * c).epsilon(1e-14));
  CHECK_THROWS(ball_lower_bound(-1.0));
}

TEST_CASE("audit of BCC n = 128") {
  const Tessellation t = build_tessellation(generate_lattice(LatticeKind::BCC, 4), Domain::UnitTorus);
  const AuditReport rep = audit(t);
  CHECK(rep.n == 128);
  CHECK(rep.diam_low_pass);
  CHECK(rep.volume_low_pass);
  REQUIRE(rep.diam_high_pass.has_value());
  CHECK(*rep.diam_high_pass);
  CHECK(rep.faces_pass);
  CHECK(rep.tau_floor_pass);
  CHECK(std::abs(rep.density - 0.23562) < 5e-4);
  CHECK(rep.max_faces == 14);
  CHECK(rep.mean_faces == doctest::Approx(14.0));
  CHECK(rep.energy_floor_margin > 0.0);
  CHECK(rep.min_ball_floor_slack > 0.0);
  for (const auto& c : rep.cells) CHECK(c.energy_n53 == doctest::Approx(rep.density).epsilon(1e-12));
  // Truncated octahedron for cube side 1/k: vertices are permutations of (0, 1/4, 1/2)/k, diameter sqrt(5)/(2k).
  CHECK(rep.cells[0].diam_n13 == doctest::Approx(std::sqrt(5.0) / 8.0 * std::cbrt(128.0)).epsilon(1e-12));
}

TEST_CASE("audit of a single generator") {
  const Tessellation t = build_tessellation(std::vector<Vec3>{{0.4, 0.5, 0.6}}, Domain::UnitCube);
  const AuditReport rep = audit(t);
  CHECK(rep.volume_low_pass);
  CHECK_FALSE(rep.diam_high_pass.has_value());
  CHECK_FALSE(rep.cells[0].diam_high_ok.has_value());
  CHECK(std::isnan(rep.cells[0].sigma_n13));
}

TEST_CASE("audit ratios are translation invariant on the torus") {
  auto g = random_generators(80, 4);
  const AuditReport a = audit(build_tessellation(g, Domain::UnitTorus));
  for (auto& p : g) p = wrap_torus(p + Vec3{0.37, 0.11, 0.73});
  const AuditReport b = audit(build_tessellation(g, Domain::UnitTorus));
  CHECK(a.density == doctest::Approx(b.density).epsilon(1e-10));
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    CHECK(a.cells[k].volume_n == doctest::Approx(b.cells[k].volume_n).epsilon(1e-10));
    CHECK(a.cells[k].diam_n13 == doctest::Approx(b.cells[k].diam_n13).epsilon(1e-10));
    CHECK(a.cells[k].faces == b.cells[k].faces);
  }
}

TEST_CASE("Lloyd-converged n = 64: ball floor slack and lemma d on every cell") {
  OptimizeConfig cfg;
  cfg.energy_tol = 1e-9;
  cfg.max_iters = 2000;
  for (Domain d : {Domain::UnitTorus, Domain::UnitCube}) {
    const OptimizeResult r = optimize(random_generators(64, 9), d, cfg);
    const Tessellation t = build_tessellation(r.generators, d);
    const AuditReport rep = audit(t);
    CHECK(rep.min_ball_floor_slack >= 0.0);
    CHECK(rep.tau_floor_pass);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(lemma_d_check(t.cells[k], t.generators[k], 64).pass);
  }
}

TEST_CASE("lemma d on special cells") {
  const ConvexPolytope cube = make_unit_cube();
  const LemmaDCheck centre = lemma_d_check(cube, {0.5, 0.5, 0.5}, 256);
  CHECK(centre.pass);
  CHECK(centre.r == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(centre.bound_r == doctest::Approx(0.00432 * 0.75));
  CHECK(centre.bound_vol == doctest::Approx(static_cast<double>(constants().gamma1)));

  const Vec3 y = Vec3{0.5, 0.5, 0.5} + (Vec3{1, 1, 1} - Vec3{0.5, 0.5, 0.5}) * 0.999;
  const LemmaDCheck off = lemma_d_check(cube, y, 256);
  CHECK(off.pass);
  CHECK(off.r == doctest::Approx(bounding_radius(cube, y)));

  // Ball approximation: 600 tangent planes on a Fibonacci sphere.
  std::vector<HalfSpace> hs;
  const double golden = std::acos(-1.0) * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < 600; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / 600.0;
    const double s = std::sqrt(1.0 - z * z);
    hs.push_back({{s * std::cos(golden * i), s * std::sin(golden * i), z}, 1.0});
  }
  const ConvexPolytope ball = intersect_halfspaces(hs, 2.0);
  CHECK(volume(ball) == doctest::Approx(4.0 * std::acos(-1.0) / 3.0).epsilon(0.02));
  CHECK(lemma_d_check(ball, {0, 0, 0}, 256).pass);
}

TEST_CASE("property: lemma d on random polytopes") {
  std::mt19937_64 rng(100);
  for (int i = 0; i < 40; ++i) {
    const ConvexPolytope p = oracle::random_clipped_cube(rng, 1 + i % 6);
    const Vec3 y = oracle::random_interior_point(p, rng, 1e-6);
    const LemmaDCheck c = lemma_d_check(p, y, 64);
    CHECK(c.pass);
    CHECK(c.gain >= c.detail.farthest_candidate_gain);
  }
}

TEST_CASE("lemma below on lattices") {
  for (auto kind : {LatticeKind::SC, LatticeKind::BCC, LatticeKind::FCC}) {
    const Tessellation t = build_tessellation(generate_lattice(kind, 3), Domain::UnitTorus);
    const auto nn = nearest_neighbor_stats(t.generators, t.domain);
    for (std::size_t k = 0; k < t.size(); ++k) {
      const LemmaBelowCheck c = lemma_below_check(t, k, nn);
      CHECK(c.satisfied);
      CHECK(c.bound_quadratic < c.bound_r);
    }
  }
  // BCC k = 3: sigma = sqrt(3)/6; r is the truncated-octahedron circumradius sqrt(5)/(4k).
  const Tessellation bcc = build_tessellation(generate_lattice(LatticeKind::BCC, 3), Domain::UnitTorus);
  const LemmaBelowCheck c = lemma_below_check(bcc, 0);
  CHECK(c.sigma == doctest::Approx(std::sqrt(3.0) / 6.0));
  CHECK(c.r == doctest::Approx(std::sqrt(5.0) / 12.0));
}

TEST_CASE("lemma below flags a near-duplicate pair") {
  auto g = random_generators(10, 6);
  g.push_back(g[3] + Vec3{1e-6, 0, 0});
  const Tessellation t = build_tessellation(g, Domain::UnitCube);
  CHECK_FALSE(lemma_below_check(t, 3).satisfied);
  CHECK_FALSE(lemma_below_check(t, 10).satisfied);
  CHECK_THROWS(lemma_below_check(build_tessellation(std::vector<Vec3>{{0.5, 0.5, 0.5}}, Domain::UnitCube), 0));
}

TEST_CASE("boundary split classification") {
  // Omega = Q: every cell meeting the walls is a boundary cell.
  const Tessellation t = build_tessellation(generate_lattice(LatticeKind::SC, 4), Domain::UnitCube);
  const BoundarySplit all = boundary_split(t, {0.0, 1.0});
  CHECK(all.n_boundary == 64 - 8);
  CHECK(all.n_interior == 8);
  CHECK(all.n_exterior == 0);
  CHECK(all.e_boundary + all.e_interior == doctest::Approx(t.energy).epsilon(1e-13));

  const Tessellation one = build_tessellation(std::vector<Vec3>{{0.3, 0.3, 0.3}}, Domain::UnitCube);
  const BoundarySplit s1 = boundary_split(one, {0.25, 0.75});
  CHECK(s1.n_boundary == 1);
  CHECK(s1.e_interior == 0.0);

  CHECK_THROWS(boundary_split(t, {0.5, 0.5}));
  CHECK_THROWS(boundary_split(t, {-0.1, 0.5}));
  CHECK_THROWS(boundary_split(build_tessellation(generate_lattice(LatticeKind::SC, 2), Domain::UnitTorus), {0.0, 1.0}));
}

TEST_CASE("boundary split partitions the energy") {
  for (int k = 4; k <= 8; ++k) {
    const Tessellation t = build_tessellation(generate_lattice(LatticeKind::SC, k), Domain::UnitCube);
    const BoundarySplit b = boundary_split(t, {0.25, 0.75});
    CHECK(b.e_boundary + b.e_interior + b.e_exterior == doctest::Approx(t.energy).epsilon(1e-13));
    CHECK(b.n_boundary + b.n_interior + b.n_exterior == t.size());
  }
}

TEST_CASE("Zador sweep rows respect the floors") {
  ZadorConfig cfg;
  cfg.restarts = 2;
  cfg.lloyd.max_iters = 200;
  cfg.lloyd.energy_tol = 1e-10;
  const auto rows = zador_sweep({20, 54}, Domain::UnitTorus, cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.above_ball_floor);
    CHECK(r.above_tau_lb);
    CHECK(r.density >= static_cast<double>(constants().c_ball));
  }
  REQUIRE(rows[1].bcc_density.has_value());
  CHECK(std::abs(*rows[1].bcc_density - 0.23562) < 5e-4);
  CHECK_FALSE(rows[0].bcc_density.has_value());
  CHECK_THROWS(zador_sweep({}, Domain::UnitTorus, cfg));
}

TEST_CASE("log-log slope") {
  std::vector<double> x, y;
  for (double v : {2.0, 5.0, 11.0, 40.0}) {
    x.push_back(v);
    y.push_back(3.0 * std::pow(v, -2.0 / 3.0));
  }
  CHECK(loglog_slope(x, y) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS(loglog_slope({1.0}, {1.0}));
  CHECK_THROWS(loglog_slope({1.0, 2.0}, {0.0, 1.0}));
}
