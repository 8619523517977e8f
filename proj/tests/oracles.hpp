#pragma once

// Independent reference computations for the tests. None of these call the
// moment routines of the library; they only use the polytope's face planes.

#include <cmath>
#include <random>
#include <vector>

#include "cvt3d/geom.hpp"

namespace oracle {

using cvt3d::Vec3;

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct Plane {
  Vec3 n;
  double d = 0.0;  // n . x <= d inside
};

// Face planes from three non-collinear vertices of each face loop.
inline std::vector<Plane> planes_of(const cvt3d::ConvexPolytope& p) {
  std::vector<Plane> out;
  for (const auto& f : p.faces) {
    Vec3 best;
    double best_len = 0.0;
    const Vec3& a = p.vertices[f[0]];
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      const Vec3 c = cvt3d::cross(p.vertices[f[i]] - a, p.vertices[f[i + 1]] - a);
      if (cvt3d::norm(c) > best_len) {
        best_len = cvt3d::norm(c);
        best = c;
      }
    }
    if (best_len == 0.0) continue;
    const Vec3 n = best / best_len;
    out.push_back({n, cvt3d::dot(n, a)});
  }
  return out;
}

inline bool inside(const std::vector<Plane>& planes, const Vec3& x) {
  for (const auto& pl : planes) {
    if (cvt3d::dot(pl.n, x) > pl.d) return false;
  }
  return true;
}

// Rejection sampling in the bounding box: integral of |x - q|^2 over p.
inline McEstimate mc_second_moment(const cvt3d::ConvexPolytope& p, const Vec3& q, std::size_t samples,
                                   std::uint64_t seed) {
  const auto planes = planes_of(p);
  Vec3 lo = p.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : p.vertices) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  const double box = (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec3 x{lo.x + (hi.x - lo.x) * u(rng), lo.y + (hi.y - lo.y) * u(rng), lo.z + (hi.z - lo.z) * u(rng)};
    const double f = inside(planes, x) ? cvt3d::norm2(x - q) * box : 0.0;
    s += f;
    s2 += f * f;
  }
  const double n = static_cast<double>(samples);
  const double mean = s / n;
  return {mean, std::sqrt(std::max(0.0, s2 / n - mean * mean) / n)};
}

inline McEstimate mc_volume(const cvt3d::ConvexPolytope& p, std::size_t samples, std::uint64_t seed) {
  const auto planes = planes_of(p);
  Vec3 lo = p.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : p.vertices) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  const double box = (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec3 x{lo.x + (hi.x - lo.x) * u(rng), lo.y + (hi.y - lo.y) * u(rng), lo.z + (hi.z - lo.z) * u(rng)};
    hits += inside(planes, x) ? 1 : 0;
  }
  const double pr = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * pr, box * std::sqrt(pr * (1.0 - pr) / static_cast<double>(samples))};
}

// Box [0,a]x[0,b]x[0,c] about its centre.
inline double box_second_moment(double a, double b, double c) { return a * b * c * (a * a + b * b + c * c) / 12.0; }

// Tetrahedron (a,b,c,d) about point q: exact quadratic-moment formula with
// vertices measured from q.
inline double tetra_second_moment(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& q) {
  const Vec3 v[4] = {a - q, b - q, c - q, d - q};
  const double vol = std::abs(cvt3d::dot(v[1] - v[0], cvt3d::cross(v[2] - v[0], v[3] - v[0]))) / 6.0;
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) s += cvt3d::dot(v[i], v[j]);
  }
  return vol * s / 10.0;
}

inline double tetra_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return std::abs(cvt3d::dot(b - a, cvt3d::cross(c - a, d - a))) / 6.0;
}

// Unit cube clipped by `cuts` random planes passing near its centre.
inline cvt3d::ConvexPolytope random_clipped_cube(std::mt19937_64& rng, int cuts) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 0.45);
  for (;;) {
    cvt3d::ConvexPolytope p = cvt3d::make_unit_cube();
    for (int i = 0; i < cuts && !p.empty(); ++i) {
      const Vec3 n = cvt3d::HalfSpace::from_direction({g(rng), g(rng), g(rng)}, 0.0).normal;
      p = cvt3d::clip(p, {n, cvt3d::dot(n, Vec3{0.5, 0.5, 0.5}) + u(rng)});
    }
    if (!p.empty()) return p;
  }
}

// Random point strictly inside p (rejection from the bounding box).
inline Vec3 random_interior_point(const cvt3d::ConvexPolytope& p, std::mt19937_64& rng, double margin) {
  Vec3 lo = p.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : p.vertices) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const Vec3 x{lo.x + (hi.x - lo.x) * u(rng), lo.y + (hi.y - lo.y) * u(rng), lo.z + (hi.z - lo.z) * u(rng)};
    if (cvt3d::interior_depth(p, x) > margin) return x;
  }
}

}  // namespace oracle
