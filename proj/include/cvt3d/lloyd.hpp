#pragma once

#include <cstdint>
#include <vector>

#include "cvt3d/geom.hpp"
#include "cvt3d/voronoi.hpp"

namespace cvt3d {

struct OptimizeConfig {
  int max_iters = 10000;
  double move_tol = 1e-10;     // max generator displacement per step
  double energy_tol = 1e-13;   // relative energy decrease per step
  std::uint64_t seed = 0;
};

enum class StopReason { MoveTol, EnergyTol, MaxIters };

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double max_move = 0.0;
};

struct OptimizeResult {
  std::vector<Vec3> generators;
  std::vector<TraceRow> trace;  // energy of the configuration entering each step
  bool converged = false;
  StopReason reason = StopReason::MaxIters;
  int iterations = 0;
  double final_energy = 0.0;
};

/// Moves every generator to the centroid of its cell (re-wrapped on the torus).
std::vector<Vec3> lloyd_step(std::span<const Vec3> gens, Domain domain);
/// Same, reusing an existing tessellation; `max_move` receives the largest displacement.
std::vector<Vec3> lloyd_step(const Tessellation& t, double* max_move = nullptr);

/// Plain Lloyd iteration. Row i of the trace holds the energy of the iterate
/// before step i and the displacement that step would make; iteration stops
/// when that displacement drops below move_tol, the relative energy decrease
/// drops below energy_tol, or max_iters steps were taken.
OptimizeResult optimize(std::span<const Vec3> gens, Domain domain, const OptimizeConfig& cfg);

/// Mixes a base seed with stream identifiers (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic uniform random points in [0,1)^3 from a 64-bit seed.
std::vector<Vec3> random_generators(std::size_t n, std::uint64_t seed);

struct InsertionGain {
  Vec3 best_point;
  double gain = 0.0;
  /// Point at distance 2r/5 from y toward the farthest vertex.
  Vec3 farthest_candidate;
  double farthest_candidate_gain = 0.0;
  /// Face centre of the largest slab piece outside the cube of side t, t^3 = 2|V|/5.
  Vec3 cube_candidate;
  double cube_candidate_gain = 0.0;
  std::size_t evaluated = 0;
};

/// Energy drop of the cell `cell` (generator y) when a second generator y2 is
/// added: integral over the cell of |x-y|^2 - min(|x-y|^2, |x-y2|^2).
double split_gain(const ConvexPolytope& cell, const Vec3& y, const Vec3& y2);

/// Best split gain over a Halton candidate set of size `budget` inside the
/// cell plus the two constructive candidates. Throws if y is not interior.
InsertionGain insertion_gain(const ConvexPolytope& cell, const Vec3& y, int budget);

/// Exact energy increase when generator `index` is deleted. Only the cells of
/// its neighbors are rebuilt.
double removal_cost(const Tessellation& t, std::size_t index);

}  // namespace cvt3d
