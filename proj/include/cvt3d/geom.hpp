#pragma once

// Convex polytope kernel: half-space clipping, exact moment integration,
// diameter and face counting.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvt3d/vec3.hpp"

namespace cvt3d {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed half-space {x : normal . x <= offset} with a unit normal.
struct HalfSpace {
  Vec3 normal;
  double offset = 0.0;

  /// Normalizes `direction`; `offset` is measured along the normalized direction.
  static HalfSpace from_direction(const Vec3& direction, double offset);

  /// Points at least as close to `keep` as to `other` (the axial plane of the pair).
  static HalfSpace bisector(const Vec3& keep, const Vec3& other);

  HalfSpace flipped() const { return {-normal, -offset}; }
  double signed_distance(const Vec3& p) const { return dot(normal, p) - offset; }
};

/// Face label used when a face does not come from any generator or half-space list.
inline constexpr int kNoSource = -1000000;

/// Bounded convex polytope stored as a vertex list plus face loops.
///
/// Each face loop is counterclockwise when seen from outside. `face_sources`
/// carries one integer per face telling which plane produced it (a generator
/// index for Voronoi cells, a half-space index for G-minimization, negative
/// values for domain walls). A polytope without faces is empty.
struct ConvexPolytope {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;
  std::vector<int> face_sources;
  std::optional<std::size_t> generator_tag;

  bool empty() const { return faces.empty(); }
};

struct Moments {
  double volume = 0.0;
  Vec3 centroid;
  double second_moment = 0.0;  // integral of |x - query|^2 over the polytope
  bool empty = true;
};

struct FaceGeometry {
  Vec3 normal;  // unit outward normal (zero for degenerate faces)
  double area = 0.0;
  Vec3 center;  // vertex average
};

// Construction.
ConvexPolytope make_box(const Vec3& lo, const Vec3& hi, int first_source = -1);
ConvexPolytope make_unit_cube();
/// Intersection of `halfspaces` with the box [-bound, bound]^3. Face sources are
/// half-space indices; faces left over from the bounding box carry kNoSource.
ConvexPolytope intersect_halfspaces(std::span<const HalfSpace> halfspaces, double bound);

// Transformations (exact up to floating point; topology unchanged).
ConvexPolytope translated(const ConvexPolytope& p, const Vec3& t);
ConvexPolytope scaled(const ConvexPolytope& p, double c, const Vec3& center = {});

// Core operations.
ConvexPolytope clip(const ConvexPolytope& p, const HalfSpace& h, int source = kNoSource);
/// In-place variant; returns false when `p` was left unchanged.
bool clip_in_place(ConvexPolytope& p, const HalfSpace& h, int source = kNoSource);

Moments moments(const ConvexPolytope& p, const Vec3& query);
double volume(const ConvexPolytope& p);

double diameter(const ConvexPolytope& p);
double bounding_radius(const ConvexPolytope& p, const Vec3& query);
std::size_t face_count(const ConvexPolytope& p);

// Helpers.
std::vector<FaceGeometry> face_geometry(const ConvexPolytope& p);
double bbox_diagonal(const ConvexPolytope& p);
bool contains(const ConvexPolytope& p, const Vec3& x, double tol);
/// Minimum distance from `x` to the face planes; negative when `x` is outside.
double interior_depth(const ConvexPolytope& p, const Vec3& x);
Vec3 vertex_centroid(const ConvexPolytope& p);

/// Throws GeometryError when the polytope violates a structural or convexity
/// invariant (face planarity, convexity, Euler relation, positive volume).
void validate(const ConvexPolytope& p);

}  // namespace cvt3d
