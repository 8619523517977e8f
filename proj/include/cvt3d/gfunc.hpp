#pragma once

// Minimal second moment about the centroid over convex polytopes with volume
// a and at most m faces, G(a, m), by multi-start compass search over
// face-normal/offset parameters.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvt3d/geom.hpp"

namespace cvt3d {

/// One supporting half-space: normal (sin t cos p, sin t sin p, cos t), offset.
struct FaceParam {
  double theta = 0.0;
  double phi = 0.0;
  double offset = 1.0;

  Vec3 normal() const;
  static FaceParam from_halfspace(const HalfSpace& h);
  HalfSpace halfspace() const { return {normal(), offset}; }
};

struct GMinConfig {
  int restarts = 16;               // random starts, on top of the seeded solids
  long eval_budget = 60000;        // objective evaluations per start
  double min_step = 1e-8;          // compass search stops below this step
  std::uint64_t seed = 0;
};

struct GMinResult {
  double value = 0.0;  // second moment about the centroid of `polytope`
  ConvexPolytope polytope;  // centroid at the origin, volume a
  std::vector<FaceParam> faces;  // unit-volume parameters of the winner
  int restarts_used = 0;
  std::vector<double> best_restart_trace;  // normalized objective after each accepted step
  std::size_t effective_faces = 0;
  std::vector<double> start_values;  // final normalized value of every start, in start order
  std::vector<std::string> start_labels;
  std::size_t best_start = 0;
};

/// Scale-free shape functional I(P) / |P|^{5/3}, with I the second moment about
/// the centroid; +inf for empty or unbounded parameter sets.
double normalized_moment(std::span<const FaceParam> faces);
double normalized_moment(const ConvexPolytope& p);

/// Polytope of the parameters inside the box [-bound, bound]^3, or empty when
/// the intersection is empty or reaches the box.
ConvexPolytope polytope_from_faces(std::span<const FaceParam> faces, double bound = 20.0);

/// Known solids as m-face parameter sets, padded with near-tangent redundant
/// faces when m exceeds their face count.
std::vector<FaceParam> regular_tetrahedron_faces();
std::vector<FaceParam> cube_faces();
std::vector<FaceParam> octahedron_faces();
std::vector<FaceParam> rhombic_dodecahedron_faces();
std::vector<FaceParam> truncated_octahedron_faces();

/// Faces with area at least 1e-8 a^{2/3}.
std::size_t effective_face_count(const ConvexPolytope& p, double a);

GMinResult minimize_G(double a, int m, const GMinConfig& cfg,
                      std::span<const std::vector<FaceParam>> extra_starts = {});

struct ProbeRow {
  int m = 0;
  double value = 0.0;
  double d1 = 0.0;     // G(m) - G(m-1), NaN on the first row
  double d2 = 0.0;     // G(m+1) - 2 G(m) + G(m-1), NaN at the ends
  double sigma = 0.0;  // spread of the best quarter of the starts
  std::size_t effective_faces = 0;
  std::string label;   // convex, concave, inconclusive or n/a
};

/// Evaluates G(a, m) for m_min..m_max. Each m is also started from the
/// optimum at m-1 plus a redundant face, so the feasible-set nesting shows up
/// in the results.
std::vector<ProbeRow> convexity_probe(double a, int m_min, int m_max, const GMinConfig& cfg);

}  // namespace cvt3d
