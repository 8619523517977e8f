#pragma once

#include <string>
#include <vector>

#include "cvt3d/geom.hpp"
#include "cvt3d/voronoi.hpp"

namespace cvt3d {

enum class LatticeKind { SC, BCC, FCC };

std::string to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(const std::string& name);

/// Points per conventional cubic cell: 1, 2 or 4.
std::size_t points_per_cell(LatticeKind kind);

/// Lattice generators on the unit torus: k^3 conventional cells of side 1/k.
/// SC is shifted by half a spacing, BCC/FCC by a quarter spacing, so no point
/// sits on the torus seam.
std::vector<Vec3> generate_lattice(LatticeKind kind, int k);

/// n^{2/3} E of the torus tessellation of generate_lattice(kind, k).
double energy_density(LatticeKind kind, int k);

/// Voronoi cell of the lattice point at the origin for a conventional cell of
/// side `a` (cube, truncated octahedron, rhombic dodecahedron).
ConvexPolytope reference_cell(LatticeKind kind, double a = 1.0);

}  // namespace cvt3d
