#include "cvt3d/gfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cvt3d/lloyd.hpp"
#include "cvt3d/parallel.hpp"

namespace cvt3d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOffsetMin = 0.05;  // at unit volume
constexpr double kPadGap = 1.02;     // redundant faces sit just beyond the farthest vertex

std::vector<FaceParam> from_normals(const std::vector<Vec3>& normals, const std::vector<double>& offsets) {
  std::vector<FaceParam> out;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    out.push_back(FaceParam::from_halfspace(HalfSpace::from_direction(normals[i], offsets[i])));
  }
  return out;
}

std::vector<FaceParam> uniform_offsets(const std::vector<Vec3>& normals, double offset) {
  return from_normals(normals, std::vector<double>(normals.size(), offset));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 random_unit(std::mt19937_64& rng) {
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

struct Shape {
  double value = kInf;
  Vec3 centroid;
  double volume = 0.0;
};

Shape evaluate(std::span<const FaceParam> faces) {
  const ConvexPolytope p = polytope_from_faces(faces);
  if (p.empty()) return {};
  const Vec3 apex = vertex_centroid(p);
  const Moments m = moments(p, apex);
  const double about_centroid = m.second_moment - m.volume * norm2(m.centroid - apex);
  return {about_centroid / std::pow(m.volume, 5.0 / 3.0), m.centroid, m.volume};
}

// Recentres at the centroid and rescales to unit volume; the value is unchanged.
void normalize(std::vector<FaceParam>& faces, const Shape& s) {
  const double k = std::cbrt(1.0 / s.volume);
  for (auto& f : faces) f.offset = (f.offset - dot(f.normal(), s.centroid)) * k;
}

// Adds redundant faces so that `faces` has exactly m entries.
std::vector<FaceParam> pad_to(std::vector<FaceParam> faces, int m, std::uint64_t seed) {
  if (static_cast<int>(faces.size()) >= m) return faces;
  const ConvexPolytope p = polytope_from_faces(faces);
  if (p.empty()) return faces;
  double reach = 0.0;
  for (const auto& v : p.vertices) reach = std::max(reach, norm(v));
  std::mt19937_64 rng(seed);
  while (static_cast<int>(faces.size()) < m) {
    faces.push_back(FaceParam::from_halfspace({random_unit(rng), kPadGap * reach}));
  }
  return faces;
}

struct SearchOutcome {
  std::vector<FaceParam> faces;
  double value = kInf;
  std::vector<double> trace;
};

// Compass search: every accepted move strictly lowers the objective; the step
// halves after a sweep without improvement.
SearchOutcome compass_search(std::vector<FaceParam> faces, const GMinConfig& cfg) {
  SearchOutcome out;
  Shape cur = evaluate(faces);
  if (!std::isfinite(cur.value)) return out;
  normalize(faces, cur);
  cur = evaluate(faces);
  out.trace.push_back(cur.value);

  const std::size_t dims = faces.size() * 3;
  double step = 0.25;
  long evals = 0;
  while (step >= cfg.min_step && evals < cfg.eval_budget) {
    bool improved = false;
    for (std::size_t d = 0; d < dims && evals < cfg.eval_budget; ++d) {
      const std::size_t fi = d / 3;
      const int which = static_cast<int>(d % 3);
      for (double sign : {1.0, -1.0}) {
        std::vector<FaceParam> trial = faces;
        double& coord = which == 0 ? trial[fi].theta : (which == 1 ? trial[fi].phi : trial[fi].offset);
        coord += sign * step * (which == 2 ? 0.5 : 1.0);
        if (which == 2 && trial[fi].offset <= 0.0) continue;
        const Shape s = evaluate(trial);
        ++evals;
        if (s.value < cur.value) {
          faces = std::move(trial);
          normalize(faces, s);
          const Shape again = evaluate(faces);
          cur = again.value <= s.value ? again : s;
          out.trace.push_back(cur.value);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  out.value = cur.value;
  out.faces = std::move(faces);
  return out;
}

struct Start {
  std::vector<FaceParam> faces;
  std::string label;
};

std::vector<FaceParam> random_start(int m, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 4096; ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, attempt));
    std::vector<FaceParam> faces;
    for (int i = 0; i < m; ++i) {
      const double offset = kOffsetMin + (1.0 - kOffsetMin) * uniform01(rng);
      faces.push_back(FaceParam::from_halfspace({random_unit(rng), offset}));
    }
    if (std::isfinite(evaluate(faces).value)) return faces;
  }
  return {};
}

}  // namespace

Vec3 FaceParam::normal() const {
  const double s = std::sin(theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

FaceParam FaceParam::from_halfspace(const HalfSpace& h) {
  FaceParam f;
  f.theta = std::acos(std::clamp(h.normal.z, -1.0, 1.0));
  f.phi = std::atan2(h.normal.y, h.normal.x);
  f.offset = h.offset;
  return f;
}

ConvexPolytope polytope_from_faces(std::span<const FaceParam> faces, double bound) {
  std::vector<HalfSpace> hs;
  hs.reserve(faces.size());
  for (const auto& f : faces) hs.push_back(f.halfspace());
  ConvexPolytope p = intersect_halfspaces(hs, bound);
  if (p.empty()) return p;
  for (int s : p.face_sources) {
    if (s == kNoSource) return {};  // still touches the bounding box: unbounded or too large
  }
  return p;
}

double normalized_moment(std::span<const FaceParam> faces) { return evaluate(faces).value; }

double normalized_moment(const ConvexPolytope& p) {
  if (p.empty()) return kInf;
  const Moments m = moments(p, vertex_centroid(p));
  const Moments c = moments(p, m.centroid);
  return c.second_moment / std::pow(c.volume, 5.0 / 3.0);
}

std::vector<FaceParam> regular_tetrahedron_faces() {
  return uniform_offsets({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}, 0.5);
}

std::vector<FaceParam> cube_faces() {
  return uniform_offsets({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}, 0.5);
}

std::vector<FaceParam> octahedron_faces() {
  std::vector<Vec3> n;
  for (int i : {1, -1}) {
    for (int j : {1, -1}) {
      for (int k : {1, -1}) n.push_back({double(i), double(j), double(k)});
    }
  }
  return uniform_offsets(n, 0.5);
}

std::vector<FaceParam> rhombic_dodecahedron_faces() {
  std::vector<Vec3> n;
  for (int i : {1, -1}) {
    for (int j : {1, -1}) {
      n.push_back({double(i), double(j), 0});
      n.push_back({double(i), 0, double(j)});
      n.push_back({0, double(i), double(j)});
    }
  }
  return uniform_offsets(n, 0.5);
}

std::vector<FaceParam> truncated_octahedron_faces() {
  // Voronoi cell of the BCC lattice with unit conventional cube.
  auto faces = uniform_offsets({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}, 0.5);
  const auto hex = uniform_offsets(
      {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}, {-1, 1, 1}, {-1, 1, -1}, {-1, -1, 1}, {-1, -1, -1}},
      std::sqrt(3.0) / 4.0);
  faces.insert(faces.end(), hex.begin(), hex.end());
  return faces;
}

std::size_t effective_face_count(const ConvexPolytope& p, double a) {
  if (p.empty()) return 0;
  const double min_area = 1e-8 * std::pow(a, 2.0 / 3.0);
  const auto geo = face_geometry(p);
  std::vector<int> seen;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    if (geo[i].area < min_area) continue;
    const int s = p.face_sources.empty() ? static_cast<int>(i) : p.face_sources[i];
    if (std::find(seen.begin(), seen.end(), s) == seen.end()) seen.push_back(s);
  }
  return seen.size();
}

GMinResult minimize_G(double a, int m, const GMinConfig& cfg, std::span<const std::vector<FaceParam>> extra_starts) {
  if (!(a > 0.0)) throw std::invalid_argument("minimize_G: a must be positive");
  if (m < 4 || m > 60) throw std::invalid_argument("minimize_G: m must lie in [4, 60]");
  if (cfg.restarts < 0) throw std::invalid_argument("minimize_G: restarts must be >= 0");

  std::vector<Start> starts;
  auto add_solid = [&](int faces_needed, std::vector<FaceParam> (*make)(), const char* label) {
    if (m >= faces_needed) {
      starts.push_back({pad_to(make(), m, derive_seed(cfg.seed, 0xB0B, faces_needed)), label});
    }
  };
  add_solid(4, regular_tetrahedron_faces, "tetrahedron");
  add_solid(6, cube_faces, "cube");
  add_solid(8, octahedron_faces, "octahedron");
  add_solid(12, rhombic_dodecahedron_faces, "rhombic_dodecahedron");
  add_solid(14, truncated_octahedron_faces, "truncated_octahedron");
  for (std::size_t i = 0; i < extra_starts.size(); ++i) {
    if (static_cast<int>(extra_starts[i].size()) > m) {
      throw std::invalid_argument("minimize_G: extra start has more than m faces");
    }
    starts.push_back({pad_to(extra_starts[i], m, derive_seed(cfg.seed, 0xE7, i)), "warm_start"});
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    auto faces = random_start(m, derive_seed(cfg.seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(r)));
    if (!faces.empty()) starts.push_back({std::move(faces), "random_" + std::to_string(r)});
  }

  std::vector<SearchOutcome> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { outcomes[i] = compass_search(starts[i].faces, cfg); });

  GMinResult res;
  res.restarts_used = static_cast<int>(starts.size());
  std::size_t best = starts.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    res.start_values.push_back(outcomes[i].value);
    res.start_labels.push_back(starts[i].label);
    if (std::isfinite(outcomes[i].value) && (best == starts.size() || outcomes[i].value < outcomes[best].value)) {
      best = i;
    }
  }
  if (best == starts.size()) throw std::runtime_error("minimize_G: every start produced an unbounded polytope");

  res.best_start = best;
  res.faces = outcomes[best].faces;
  res.best_restart_trace = outcomes[best].trace;
  const ConvexPolytope unit = polytope_from_faces(res.faces);
  const Moments um = moments(unit, vertex_centroid(unit));
  const Vec3 c = um.centroid;
  ConvexPolytope shape = translated(unit, -c);
  shape = scaled(shape, std::cbrt(a / um.volume));
  res.polytope = std::move(shape);
  res.value = moments(res.polytope, moments(res.polytope, {}).centroid).second_moment;
  res.effective_faces = effective_face_count(res.polytope, a);
  return res;
}

std::vector<ProbeRow> convexity_probe(double a, int m_min, int m_max, const GMinConfig& cfg) {
  if (!(4 <= m_min && m_min < m_max && m_max <= 60)) {
    throw std::invalid_argument("convexity_probe: need 4 <= m_min < m_max <= 60");
  }
  std::vector<ProbeRow> rows;
  std::vector<std::vector<FaceParam>> warm;
  for (int m = m_min; m <= m_max; ++m) {
    const GMinResult r = minimize_G(a, m, cfg, warm);
    ProbeRow row;
    row.m = m;
    row.value = r.value;
    row.effective_faces = r.effective_faces;
    std::vector<double> finals;
    for (double v : r.start_values) {
      if (std::isfinite(v)) finals.push_back(v * std::pow(a, 5.0 / 3.0));
    }
    std::sort(finals.begin(), finals.end());
    const std::size_t q = std::min(finals.size(), std::max<std::size_t>(2, (finals.size() + 3) / 4));
    double mean = 0.0;
    for (std::size_t i = 0; i < q; ++i) mean += finals[i];
    mean /= static_cast<double>(q);
    double var = 0.0;
    for (std::size_t i = 0; i < q; ++i) var += (finals[i] - mean) * (finals[i] - mean);
    row.sigma = q > 1 ? std::sqrt(var / static_cast<double>(q - 1)) : 0.0;
    rows.push_back(row);
    warm = {r.faces};
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].d1 = i > 0 ? rows[i].value - rows[i - 1].value : nan;
    if (i > 0 && i + 1 < rows.size()) {
      rows[i].d2 = rows[i + 1].value - 2.0 * rows[i].value + rows[i - 1].value;
      const double noise = 2.0 * std::max({rows[i - 1].sigma, rows[i].sigma, rows[i + 1].sigma});
      rows[i].label = std::abs(rows[i].d2) <= noise ? "inconclusive" : (rows[i].d2 > 0 ? "convex" : "concave");
    } else {
      rows[i].d2 = nan;
      rows[i].label = "n/a";
    }
  }
  return rows;
}

}  // namespace cvt3d
