#include "cvt3d/lloyd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "cvt3d/parallel.hpp"

namespace cvt3d {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

struct Plane {
  Vec3 normal;
  Vec3 point;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

std::vector<Vec3> random_generators(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) {
    p.x = uniform01(rng);
    p.y = uniform01(rng);
    p.z = uniform01(rng);
  }
  return pts;
}

std::vector<Vec3> lloyd_step(const Tessellation& t, double* max_move) {
  std::vector<Vec3> next(t.size());
  std::vector<double> moves(t.size());
  parallel_for(t.size(), [&](std::size_t k) {
    const Vec3 c = moments(t.cells[k], t.generators[k]).centroid;
    moves[k] = distance(c, t.generators[k]);
    next[k] = t.domain == Domain::UnitTorus ? wrap_torus(c) : c;
    if (t.domain == Domain::UnitCube) {
      for (int i = 0; i < 3; ++i) next[k][i] = std::clamp(next[k][i], 0.0, 1.0);
    }
  });
  if (max_move) *max_move = moves.empty() ? 0.0 : *std::max_element(moves.begin(), moves.end());
  return next;
}

std::vector<Vec3> lloyd_step(std::span<const Vec3> gens, Domain domain) {
  return lloyd_step(build_tessellation(gens, domain));
}

OptimizeResult optimize(std::span<const Vec3> gens, Domain domain, const OptimizeConfig& cfg) {
  if (cfg.max_iters < 1 || !(cfg.move_tol > 0.0) || !(cfg.energy_tol > 0.0)) {
    throw std::invalid_argument("optimize: max_iters >= 1 and positive tolerances required");
  }
  OptimizeResult res;
  std::vector<Vec3> current(gens.begin(), gens.end());
  if (domain == Domain::UnitTorus) {
    for (auto& g : current) g = wrap_torus(g);
  }
  double prev_energy = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Tessellation t = build_tessellation(current, domain);
    double move = 0.0;
    std::vector<Vec3> next = lloyd_step(t, &move);
    res.trace.push_back({iter, t.energy, move});
    res.iterations = iter;
    if (move < cfg.move_tol) {
      res.reason = StopReason::MoveTol;
      break;
    }
    if (std::isfinite(prev_energy) && prev_energy - t.energy <= cfg.energy_tol * prev_energy) {
      res.reason = StopReason::EnergyTol;
      break;
    }
    if (iter == cfg.max_iters) break;
    prev_energy = t.energy;
    current = std::move(next);
  }
  res.converged = res.reason != StopReason::MaxIters;
  res.generators = std::move(current);
  res.final_energy = res.trace.back().energy;
  return res;
}

double split_gain(const ConvexPolytope& cell, const Vec3& y, const Vec3& y2) {
  if (norm2(y2 - y) == 0.0) return 0.0;
  // Only the part of the cell closer to y2 changes owner; the rest cancels.
  const ConvexPolytope taken = clip(cell, HalfSpace::bisector(y2, y));
  if (taken.empty()) return 0.0;
  return moments(taken, y).second_moment - moments(taken, y2).second_moment;
}

InsertionGain insertion_gain(const ConvexPolytope& cell, const Vec3& y, int budget) {
  if (budget < 1) throw std::invalid_argument("insertion_gain: budget must be >= 1");
  if (cell.empty()) throw GeometryError("insertion_gain: empty cell");
  const double scale = bbox_diagonal(cell);
  if (!(interior_depth(cell, y) > 1e-9 * scale)) {
    throw GeometryError("insertion_gain: y must lie in the interior of the cell");
  }

  InsertionGain out;
  out.best_point = y;
  auto consider = [&](const Vec3& cand) {
    const double g = split_gain(cell, y, cand);
    ++out.evaluated;
    if (g > out.gain) {
      out.gain = g;
      out.best_point = cand;
    }
    return g;
  };

  // Farthest-vertex construction: y' = y + (2/5)(z - y).
  Vec3 far = cell.vertices.front();
  for (const auto& v : cell.vertices) {
    if (norm2(v - y) > norm2(far - y)) far = v;
  }
  out.farthest_candidate = y + (far - y) * 0.4;
  out.farthest_candidate_gain = consider(out.farthest_candidate);

  // Cube construction: largest slab piece V ∩ {±(x_k - y_k) >= t/2}, t^3 = 2|V|/5.
  const double vol = moments(cell, y).volume;
  const double t = std::cbrt(0.4 * vol);
  double best_piece = -1.0;
  for (int axis = 0; axis < 3; ++axis) {
    for (double s : {1.0, -1.0}) {
      Vec3 dir;
      dir[axis] = -s;
      const HalfSpace slab{dir, -(s * y[axis] + 0.5 * t)};
      const ConvexPolytope piece = clip(cell, slab);
      const double pv = piece.empty() ? 0.0 : moments(piece, y).volume;
      if (pv > best_piece) {
        best_piece = pv;
        out.cube_candidate = y;
        out.cube_candidate[axis] += s * 0.5 * t;
      }
    }
  }
  out.cube_candidate_gain = consider(out.cube_candidate);

  // Halton points of the bounding box that fall inside the cell.
  Vec3 lo = cell.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : cell.vertices) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  std::vector<Plane> planes;
  for (const auto& g : face_geometry(cell)) {
    if (g.area > 0.0) planes.push_back({g.normal, g.center});
  }
  int accepted = 0;
  const std::uint64_t max_attempts = 64ull * static_cast<std::uint64_t>(budget) + 64;
  for (std::uint64_t i = 1; i <= max_attempts && accepted < budget; ++i) {
    const Vec3 p{lo.x + (hi.x - lo.x) * radical_inverse(i, 2), lo.y + (hi.y - lo.y) * radical_inverse(i, 3),
                 lo.z + (hi.z - lo.z) * radical_inverse(i, 5)};
    bool inside = true;
    for (const auto& pl : planes) {
      if (dot(pl.normal, p - pl.point) > 0.0) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    ++accepted;
    consider(p);
  }
  return out;
}

double removal_cost(const Tessellation& t, std::size_t index) {
  if (t.size() < 2) throw std::invalid_argument("removal_cost: need at least two generators");
  if (index >= t.size()) throw std::out_of_range("removal_cost: generator index out of range");
  const CellBuilder builder(t.generators, t.domain);
  const auto& nbrs = t.neighbor_ids[index];
  std::vector<double> delta(nbrs.size());
  parallel_for(nbrs.size(), [&](std::size_t i) {
    const std::size_t j = nbrs[i];
    const ConvexPolytope grown = builder.build(j, index);
    delta[i] = moments(grown, t.generators[j]).second_moment - t.cell_energy[j];
  });
  CompensatedSum sum;
  sum.add(-t.cell_energy[index]);
  for (double d : delta) sum.add(d);
  return sum.value();
}

}  // namespace cvt3d
