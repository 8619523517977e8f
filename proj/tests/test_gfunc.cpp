#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "cvt3d/bounds.hpp"
#include "cvt3d/gfunc.hpp"
#include "cvt3d/parallel.hpp"
#include "oracles.hpp"

using namespace cvt3d;

namespace {

constexpr int kDim = 9;  // three free vertices; the fourth is pinned at the origin
using Point = std::array<double, kDim>;

// I(T) / |T|^{5/3} about the centroid, tetrahedron given by its vertices.
double tetra_objective(const Point& p) {
  const Vec3 a{0, 0, 0};
  const Vec3 b{p[0], p[1], p[2]};
  const Vec3 c{p[3], p[4], p[5]};
  const Vec3 d{p[6], p[7], p[8]};
  const double v = oracle::tetra_volume(a, b, c, d);
  if (v < 1e-12) return 1e9;
  const Vec3 centroid = (a + b + c + d) * 0.25;
  return oracle::tetra_second_moment(a, b, c, d, centroid) / std::pow(v, 5.0 / 3.0);
}

// Plain Nelder-Mead with restarts from the best vertex.
double nelder_mead(Point start, int restarts) {
  double best = tetra_objective(start);
  for (int round = 0; round < restarts; ++round) {
    std::array<Point, kDim + 1> s;
    std::array<double, kDim + 1> f;
    s[0] = start;
    for (int i = 0; i < kDim; ++i) {
      s[i + 1] = start;
      s[i + 1][i] += 0.2;
    }
    for (int i = 0; i <= kDim; ++i) f[i] = tetra_objective(s[i]);
    for (int it = 0; it < 20000; ++it) {
      std::array<int, kDim + 1> idx;
      for (int i = 0; i <= kDim; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](int x, int y) { return f[x] < f[y]; });
      const int lo = idx[0], hi = idx[kDim], second = idx[kDim - 1];
      if (f[hi] - f[lo] < 1e-15) break;
      Point centre{};
      for (int i = 0; i <= kDim; ++i) {
        if (i == hi) continue;
        for (int j = 0; j < kDim; ++j) centre[j] += s[i][j] / kDim;
      }
      auto along = [&](double t) {
        Point q;
        for (int j = 0; j < kDim; ++j) q[j] = centre[j] + t * (s[hi][j] - centre[j]);
        return q;
      };
      const Point r = along(-1.0);
      const double fr = tetra_objective(r);
      if (fr < f[lo]) {
        const Point e = along(-2.0);
        const double fe = tetra_objective(e);
        if (fe < fr) {
          s[hi] = e;
          f[hi] = fe;
        } else {
          s[hi] = r;
          f[hi] = fr;
        }
      } else if (fr < f[second]) {
        s[hi] = r;
        f[hi] = fr;
      } else {
        const Point k = along(fr < f[hi] ? -0.5 : 0.5);
        const double fk = tetra_objective(k);
        if (fk < std::min(fr, f[hi])) {
          s[hi] = k;
          f[hi] = fk;
        } else {
          for (int i = 0; i <= kDim; ++i) {
            if (i == lo) continue;
            for (int j = 0; j < kDim; ++j) s[i][j] = s[lo][j] + 0.5 * (s[i][j] - s[lo][j]);
            f[i] = tetra_objective(s[i]);
          }
        }
      }
    }
    const int lo = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
    start = s[lo];
    best = std::min(best, f[lo]);
  }
  return best;
}

double known_value(std::vector<FaceParam> (*make)()) { return normalized_moment(make()); }

}  // namespace

TEST_CASE("known solids evaluate to their tabulated moments") {
  // I / |V|^{5/3} = 3 G, with G the dimensionless second moment.
  CHECK(known_value(regular_tetrahedron_faces) == doctest::Approx(3 * 0.1040042).epsilon(1e-6));
  CHECK(known_value(cube_faces) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(known_value(octahedron_faces) == doctest::Approx(3 * 0.0825482).epsilon(1e-6));
  CHECK(known_value(rhombic_dodecahedron_faces) == doctest::Approx(3 * 0.0787451).epsilon(1e-6));
  CHECK(known_value(truncated_octahedron_faces) ==
        doctest::Approx(3.0 * 19.0 / (192.0 * std::cbrt(2.0))).epsilon(1e-12));
}

TEST_CASE("the m = 4 vertex-parameterized oracle finds the regular tetrahedron") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double best = 1e9;
  for (int trial = 0; trial < 3; ++trial) {
    Point p;
    for (auto& x : p) x = u(rng);
    best = std::min(best, nelder_mead(p, 30));
  }
  CHECK(best == doctest::Approx(known_value(regular_tetrahedron_faces)).epsilon(1e-8));

  GMinConfig cfg;
  cfg.restarts = 4;
  const GMinResult r = minimize_G(1.0, 4, cfg);
  CHECK(std::abs(r.value - best) / best < 1e-5);
}

TEST_CASE("G(1, 6) and G(1, 14) upper bounds") {
  GMinConfig cfg;
  cfg.restarts = 4;
  CHECK(minimize_G(1.0, 6, cfg).value <= 0.25 + 1e-9);
  CHECK(minimize_G(1.0, 14, cfg).value <= 0.2357);
}

TEST_CASE("result invariants") {
  GMinConfig cfg;
  cfg.restarts = 3;
  for (int m : {4, 7, 12}) {
    for (double a : {0.5, 1.0, 8.0}) {
      const GMinResult r = minimize_G(a, m, cfg);
      const Moments mm = moments(r.polytope, vertex_centroid(r.polytope));
      CHECK(std::abs(mm.volume - a) <= 1e-9 * a);
      CHECK(std::abs(moments(r.polytope, mm.centroid).second_moment - r.value) <= 1e-12 * r.value);
      CHECK(r.value >= ball_lower_bound(a));
      CHECK(r.effective_faces <= static_cast<std::size_t>(m));
      CHECK(r.effective_faces >= 4);
      CHECK(r.faces.size() == static_cast<std::size_t>(m));
      CHECK(r.restarts_used == static_cast<int>(r.start_values.size()));
      for (std::size_t i = 1; i < r.best_restart_trace.size(); ++i) {
        CHECK(r.best_restart_trace[i] <= r.best_restart_trace[i - 1] * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("restart dominance over the seeded solids") {
  GMinConfig cfg;
  cfg.restarts = 2;
  const std::pair<int, std::vector<FaceParam> (*)()> solids[] = {{4, regular_tetrahedron_faces},
                                                                  {6, cube_faces},
                                                                  {8, octahedron_faces},
                                                                  {12, rhombic_dodecahedron_faces},
                                                                  {14, truncated_octahedron_faces}};
  for (int m : {6, 9, 14}) {
    const GMinResult r = minimize_G(1.0, m, cfg);
    for (const auto& [faces, make] : solids) {
      if (m >= faces) CHECK(r.value <= known_value(make) * (1 + 1e-12));
    }
  }
}

TEST_CASE("scaling identity G(a, m) = a^{5/3} G(1, m)") {
  GMinConfig cfg;
  cfg.restarts = 3;
  for (int m : {5, 6, 9}) {
    const double g1 = minimize_G(1.0, m, cfg).value;
    for (double a : {0.5, 8.0}) {
      const double ga = minimize_G(a, m, cfg).value;
      CHECK(std::abs(ga - std::pow(a, 5.0 / 3.0) * g1) <= 1e-9 * ga);
    }
  }
}

TEST_CASE("input validation") {
  GMinConfig cfg;
  CHECK_THROWS(minimize_G(0.0, 6, cfg));
  CHECK_THROWS(minimize_G(-1.0, 6, cfg));
  CHECK_THROWS(minimize_G(1.0, 3, cfg));
  CHECK_THROWS(minimize_G(1.0, 61, cfg));
  CHECK_THROWS(convexity_probe(1.0, 6, 6, cfg));
  CHECK_THROWS(convexity_probe(1.0, 3, 6, cfg));
}

TEST_CASE("unbounded parameter sets are rejected") {
  const std::vector<FaceParam> slab = {FaceParam::from_halfspace({{1, 0, 0}, 1.0}),
                                       FaceParam::from_halfspace({{-1, 0, 0}, 1.0})};
  CHECK(polytope_from_faces(slab).empty());
  CHECK(std::isinf(normalized_moment(slab)));
}

TEST_CASE("convexity probe: monotone, above the ball floor, labelled") {
  GMinConfig cfg;
  cfg.restarts = 4;
  const auto rows = convexity_probe(1.0, 4, 9, cfg);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].m == 4 + static_cast<int>(i));
    CHECK(rows[i].value >= ball_lower_bound(1.0));
    if (i > 0) {
      CHECK(rows[i].value <= rows[i - 1].value + 1e-9);
      CHECK(rows[i].d1 == doctest::Approx(rows[i].value - rows[i - 1].value));
    }
  }
  CHECK(rows.front().label == "n/a");
  CHECK(rows.back().label == "n/a");
  CHECK(std::isnan(rows.front().d1));
  CHECK(std::isnan(rows.back().d2));
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    CHECK(rows[i].d2 == doctest::Approx(rows[i + 1].value - 2 * rows[i].value + rows[i - 1].value));
    CHECK(rows[i].label != "n/a");
  }
}

TEST_CASE("restarts do not depend on the worker count") {
  GMinConfig cfg;
  cfg.restarts = 5;
  set_thread_count(1);
  const GMinResult a = minimize_G(1.0, 8, cfg);
  set_thread_count(3);
  const GMinResult b = minimize_G(1.0, 8, cfg);
  set_thread_count(1);
  CHECK(a.value == b.value);
  CHECK(a.start_values == b.start_values);
}
