#include "cvt3d/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "cvt3d/parallel.hpp"

namespace cvt3d {

std::string to_string(Domain d) { return d == Domain::UnitCube ? "cube" : "torus"; }

Domain parse_domain(const std::string& name) {
  if (name == "cube") return Domain::UnitCube;
  if (name == "torus") return Domain::UnitTorus;
  throw VoronoiError("unknown domain '" + name + "' (expected cube or torus)");
}

Vec3 wrap_torus(const Vec3& p) {
  auto w = [](double c) {
    double r = c - std::floor(c);
    return r >= 1.0 ? 0.0 : r;
  };
  return {w(p.x), w(p.y), w(p.z)};
}

Vec3 torus_delta(const Vec3& a, const Vec3& b) {
  Vec3 d = b - a;
  d.x -= std::nearbyint(d.x);
  d.y -= std::nearbyint(d.y);
  d.z -= std::nearbyint(d.z);
  return d;
}

double domain_distance(const Vec3& a, const Vec3& b, Domain domain) {
  return domain == Domain::UnitTorus ? norm(torus_delta(a, b)) : distance(a, b);
}

Vec3 unwrap_near(const Vec3& x, const Vec3& anchor, Domain domain) {
  return domain == Domain::UnitTorus ? anchor + torus_delta(anchor, x) : x;
}

void validate_generators(std::span<const Vec3> gens, Domain domain) {
  if (gens.empty()) throw VoronoiError("generator set must contain at least one point");
  for (const auto& p : gens) {
    if (!is_finite(p)) throw VoronoiError("generator with non-finite coordinate");
    if (domain == Domain::UnitCube) {
      for (int i = 0; i < 3; ++i) {
        if (p[i] < 0.0 || p[i] > 1.0) throw VoronoiError("generator outside the unit cube");
      }
    }
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (domain_distance(gens[i], gens[j], domain) <= 1e-12) {
        throw VoronoiError("duplicate generators " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

CellBuilder::CellBuilder(std::span<const Vec3> gens, Domain domain) : domain_(domain) {
  gens_.assign(gens.begin(), gens.end());
  if (domain_ == Domain::UnitTorus) {
    for (auto& g : gens_) g = wrap_torus(g);
  }
  grid_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::cbrt(static_cast<double>(gens_.size()))));
  buckets_.assign(grid_ * grid_ * grid_, {});
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    const std::size_t b = (bucket_coord(g.z) * grid_ + bucket_coord(g.y)) * grid_ + bucket_coord(g.x);
    buckets_[b].push_back(i);
  }
}

std::size_t CellBuilder::bucket_coord(double c) const {
  const double s = std::floor(c * static_cast<double>(grid_));
  return static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(grid_ - 1)));
}

ConvexPolytope CellBuilder::build(std::size_t index, std::optional<std::size_t> excluded) const {
  const Vec3 y = gens_.at(index);
  const bool torus = domain_ == Domain::UnitTorus;
  const long g = static_cast<long>(grid_);
  const double h = 1.0 / static_cast<double>(grid_);

  // On the torus the cell lies inside the bisectors with the generator's own
  // images, i.e. the unit box centred at y.
  ConvexPolytope cell = torus ? make_box(y - Vec3{0.5, 0.5, 0.5}, y + Vec3{0.5, 0.5, 0.5})
                              : make_unit_cube();
  if (torus) std::fill(cell.face_sources.begin(), cell.face_sources.end(), static_cast<int>(index));
  cell.generator_tag = index;

  const long bx = static_cast<long>(bucket_coord(y.x));
  const long by = static_cast<long>(bucket_coord(y.y));
  const long bz = static_cast<long>(bucket_coord(y.z));
  const long max_ring = torus ? 2 * g + 2 : g;

  struct Candidate {
    double d2;
    std::size_t id;
    Vec3 image;
  };
  std::vector<Candidate> ring_points;
  auto floor_div = [](long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };

  for (long ring = 0;; ++ring) {
    if (ring > max_ring) {
      if (torus) throw VoronoiError("security radius exceeded the domain without certifying the cell");
      break;
    }
    ring_points.clear();
    for (long dz = -ring; dz <= ring; ++dz) {
      for (long dy = -ring; dy <= ring; ++dy) {
        for (long dx = -ring; dx <= ring; ++dx) {
          if (std::max({std::labs(dx), std::labs(dy), std::labs(dz)}) != ring) continue;
          long tx = bx + dx;
          long ty = by + dy;
          long tz = bz + dz;
          Vec3 shift;
          if (torus) {
            const long sx = floor_div(tx, g);
            const long sy = floor_div(ty, g);
            const long sz = floor_div(tz, g);
            tx -= sx * g;
            ty -= sy * g;
            tz -= sz * g;
            shift = {static_cast<double>(sx), static_cast<double>(sy), static_cast<double>(sz)};
          } else if (tx < 0 || ty < 0 || tz < 0 || tx >= g || ty >= g || tz >= g) {
            continue;
          }
          const auto& bucket = buckets_[(tz * g + ty) * g + tx];
          for (std::size_t j : bucket) {
            if (excluded && j == *excluded) continue;
            const bool self_image = j == index;
            if (self_image && shift == Vec3{}) continue;
            const Vec3 z = gens_[j] + shift;
            ring_points.push_back({norm2(z - y), j, z});
          }
        }
      }
    }
    std::sort(ring_points.begin(), ring_points.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.d2, a.id, a.image.x, a.image.y, a.image.z) <
             std::tie(b.d2, b.id, b.image.x, b.image.y, b.image.z);
    });
    for (const auto& c : ring_points) {
      clip_in_place(cell, HalfSpace::bisector(y, c.image), static_cast<int>(c.id));
      if (cell.empty()) throw VoronoiError("Voronoi cell vanished; generator set is degenerate");
    }
    const double covered = static_cast<double>(ring) * h;
    if (covered >= 2.0 * bounding_radius(cell, y)) break;
    if (!torus && ring >= g) break;
  }
  return cell;
}

std::vector<std::size_t> cell_neighbors(const ConvexPolytope& cell, std::size_t self) {
  std::vector<std::size_t> out;
  for (int s : cell.face_sources) {
    if (s >= 0 && static_cast<std::size_t>(s) != self) out.push_back(static_cast<std::size_t>(s));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Tessellation build_tessellation(std::span<const Vec3> gens, Domain domain) {
  validate_generators(gens, domain);
  Tessellation t;
  t.domain = domain;
  t.generators.assign(gens.begin(), gens.end());
  if (domain == Domain::UnitTorus) {
    for (auto& g : t.generators) g = wrap_torus(g);
  }
  const std::size_t n = t.generators.size();
  CellBuilder builder(t.generators, domain);
  t.cells.resize(n);
  t.neighbor_ids.resize(n);
  t.cell_energy.resize(n);
  parallel_for(n, [&](std::size_t k) {
    t.cells[k] = builder.build(k);
    t.neighbor_ids[k] = cell_neighbors(t.cells[k], k);
    t.cell_energy[k] = moments(t.cells[k], t.generators[k]).second_moment;
  });
  CompensatedSum sum;
  for (double e : t.cell_energy) sum.add(e);
  t.energy = sum.value();
  return t;
}

double energy(const Tessellation& t) {
  CompensatedSum sum;
  for (std::size_t k = 0; k < t.cells.size(); ++k) {
    sum.add(moments(t.cells[k], t.generators[k]).second_moment);
  }
  return sum.value();
}

NearestNeighborStats nearest_neighbor_stats(std::span<const Vec3> gens, Domain domain) {
  if (gens.size() < 2) throw VoronoiError("nearest-neighbor statistics need at least two generators");
  NearestNeighborStats s;
  s.sigma.assign(gens.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const double d = domain_distance(gens[i], gens[j], domain);
      s.sigma[i] = std::min(s.sigma[i], d);
      s.sigma[j] = std::min(s.sigma[j], d);
    }
  }
  s.min = *std::min_element(s.sigma.begin(), s.sigma.end());
  s.max = *std::max_element(s.sigma.begin(), s.sigma.end());
  return s;
}

std::size_t nearest_generator(std::span<const Vec3> gens, const Vec3& x, Domain domain) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const double d = domain == Domain::UnitTorus ? norm2(torus_delta(x, gens[i])) : norm2(gens[i] - x);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace cvt3d
