#include "cvt3d/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace cvt3d {

namespace {

std::vector<Vec3> basis_offsets(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::SC:
      return {{0, 0, 0}};
    case LatticeKind::BCC:
      return {{0, 0, 0}, {0.5, 0.5, 0.5}};
    case LatticeKind::FCC:
      return {{0, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0.5}};
  }
  return {};
}

}  // namespace

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::SC:
      return "sc";
    case LatticeKind::BCC:
      return "bcc";
    case LatticeKind::FCC:
      return "fcc";
  }
  return "?";
}

LatticeKind parse_lattice_kind(const std::string& name) {
  if (name == "sc") return LatticeKind::SC;
  if (name == "bcc") return LatticeKind::BCC;
  if (name == "fcc") return LatticeKind::FCC;
  throw std::invalid_argument("unknown lattice kind '" + name + "' (expected sc, bcc or fcc)");
}

std::size_t points_per_cell(LatticeKind kind) { return basis_offsets(kind).size(); }

std::vector<Vec3> generate_lattice(LatticeKind kind, int k) {
  if (k < 1) throw std::invalid_argument("lattice replication factor must be >= 1");
  const double a = 1.0 / k;
  const double shift = kind == LatticeKind::SC ? 0.5 : 0.25;
  const auto offsets = basis_offsets(kind);
  std::vector<Vec3> pts;
  pts.reserve(offsets.size() * static_cast<std::size_t>(k) * k * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        for (const auto& o : offsets) {
          pts.push_back(wrap_torus(Vec3{(i + o.x + shift) * a, (j + o.y + shift) * a, (l + o.z + shift) * a}));
        }
      }
    }
  }
  return pts;
}

double energy_density(LatticeKind kind, int k) {
  const auto gens = generate_lattice(kind, k);
  const auto t = build_tessellation(gens, Domain::UnitTorus);
  return std::pow(static_cast<double>(gens.size()), 2.0 / 3.0) * t.energy;
}

ConvexPolytope reference_cell(LatticeKind kind, double a) {
  std::vector<Vec3> neighbors;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int l = -1; l <= 1; ++l) {
        for (const auto& o : basis_offsets(kind)) {
          const Vec3 z = (Vec3{static_cast<double>(i), static_cast<double>(j), static_cast<double>(l)} + o) * a;
          if (norm2(z) > 0.0) neighbors.push_back(z);
        }
      }
    }
  }
  ConvexPolytope cell = make_box({-a, -a, -a}, {a, a, a});
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    clip_in_place(cell, HalfSpace::bisector({}, neighbors[i]), static_cast<int>(i));
  }
  return cell;
}

}  // namespace cvt3d
