#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvt3d/geom.hpp"

namespace cvt3d {

enum class Domain { UnitCube, UnitTorus };

std::string to_string(Domain d);
Domain parse_domain(const std::string& name);

class VoronoiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks the generator-set invariants for `domain` (n >= 1, finite, distinct,
/// inside the cube) and throws VoronoiError otherwise. Torus points are
/// accepted anywhere and wrapped by wrap_torus().
void validate_generators(std::span<const Vec3> gens, Domain domain);

/// Wraps each coordinate into [0, 1).
Vec3 wrap_torus(const Vec3& p);
/// Minimal-image displacement b - a on the unit torus.
Vec3 torus_delta(const Vec3& a, const Vec3& b);
double domain_distance(const Vec3& a, const Vec3& b, Domain domain);

/// Voronoi cell of every generator. Cube cells are clipped to [0,1]^3; torus
/// cells are the unwrapped polytope around their generator (never split at the
/// seam), so each cell contains its own generator and cells may stick out of
/// [0,1)^3.
struct Tessellation {
  std::vector<Vec3> generators;
  Domain domain = Domain::UnitCube;
  std::vector<ConvexPolytope> cells;
  /// Generator indices whose axial planes bound each cell (sorted, unique).
  std::vector<std::vector<std::size_t>> neighbor_ids;
  std::vector<double> cell_energy;  // integral of |x - y_k|^2 over cell k
  double energy = 0.0;

  std::size_t size() const { return generators.size(); }
};

/// Builds single cells against a fixed generator set using a uniform bucket
/// grid. Candidates are visited ring by ring (nearest rings first) until the
/// covered radius is at least twice the farthest cell vertex from the
/// generator, which certifies that no unvisited generator can cut the cell.
class CellBuilder {
 public:
  CellBuilder(std::span<const Vec3> gens, Domain domain);

  /// Cell of generator `index`, optionally pretending generator `excluded`
  /// does not exist.
  ConvexPolytope build(std::size_t index, std::optional<std::size_t> excluded = std::nullopt) const;

  std::size_t grid_size() const { return grid_; }

 private:
  std::vector<Vec3> gens_;
  Domain domain_;
  std::size_t grid_;
  std::vector<std::vector<std::size_t>> buckets_;

  std::size_t bucket_coord(double c) const;
};

Tessellation build_tessellation(std::span<const Vec3> gens, Domain domain);

/// Sum of per-cell second moments about the generators, reduced in index
/// order with compensated summation.
double energy(const Tessellation& t);

/// Generators of the cell faces of a polytope built by CellBuilder.
std::vector<std::size_t> cell_neighbors(const ConvexPolytope& cell, std::size_t self);

struct NearestNeighborStats {
  std::vector<double> sigma;  // distance to the closest other generator
  double min = 0.0;
  double max = 0.0;
};

/// Exact nearest-neighbor distances (geodesic on the torus). Requires n >= 2.
NearestNeighborStats nearest_neighbor_stats(std::span<const Vec3> gens, Domain domain);

/// Index of the generator closest to `x` (lowest index on exact ties).
std::size_t nearest_generator(std::span<const Vec3> gens, const Vec3& x, Domain domain);

/// Image of `x` closest to `anchor` (identity for the cube).
Vec3 unwrap_near(const Vec3& x, const Vec3& anchor, Domain domain);

}  // namespace cvt3d
