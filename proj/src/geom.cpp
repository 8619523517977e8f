#include "cvt3d/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

namespace cvt3d {

namespace {

constexpr double kPlaneRelTol = 1e-9;   // vertex-on-plane, relative to polytope size
constexpr double kDedupAbsTol = 1e-10;  // vertex merging after a clip
constexpr double kMergeNormalTol = 1e-7;

Vec3 newell_normal(const ConvexPolytope& p, const std::vector<int>& loop) {
  Vec3 n;
  const std::size_t k = loop.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3& a = p.vertices[loop[i]];
    const Vec3& b = p.vertices[loop[(i + 1) % k]];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

void check_structure(const ConvexPolytope& p) {
  if (p.empty()) return;
  if (p.vertices.size() < 4 || p.faces.size() < 4) {
    throw GeometryError("degenerate polytope: fewer than 4 vertices or faces");
  }
  if (!p.face_sources.empty() && p.face_sources.size() != p.faces.size()) {
    throw GeometryError("face_sources size does not match face count");
  }
  const int nv = static_cast<int>(p.vertices.size());
  for (const auto& f : p.faces) {
    if (f.size() < 3) throw GeometryError("face with fewer than 3 vertices");
    for (int idx : f) {
      if (idx < 0 || idx >= nv) throw GeometryError("face index out of range");
    }
  }
}

int source_of(const ConvexPolytope& p, std::size_t face) {
  return p.face_sources.empty() ? kNoSource : p.face_sources[face];
}

// Removes unreferenced vertices and renumbers the face loops.
void compact(ConvexPolytope& p) {
  std::vector<int> remap(p.vertices.size(), -1);
  std::vector<Vec3> kept;
  kept.reserve(p.vertices.size());
  for (auto& f : p.faces) {
    for (int& idx : f) {
      if (remap[idx] < 0) {
        remap[idx] = static_cast<int>(kept.size());
        kept.push_back(p.vertices[idx]);
      }
      idx = remap[idx];
    }
  }
  p.vertices = std::move(kept);
}

void make_empty(ConvexPolytope& p) {
  p.vertices.clear();
  p.faces.clear();
  p.face_sources.clear();
}

}  // namespace

HalfSpace HalfSpace::from_direction(const Vec3& direction, double offset) {
  const double len = norm(direction);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw GeometryError("half-space direction must be finite and nonzero");
  }
  return {direction / len, offset};
}

HalfSpace HalfSpace::bisector(const Vec3& keep, const Vec3& other) {
  const Vec3 d = other - keep;
  const double len = norm(d);
  if (!(len > 0.0)) throw GeometryError("bisector of coincident points");
  const Vec3 n = d / len;
  return {n, dot(n, (keep + other) * 0.5)};
}

ConvexPolytope make_box(const Vec3& lo, const Vec3& hi, int first_source) {
  if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z)) {
    throw GeometryError("box corners must satisfy lo < hi componentwise");
  }
  ConvexPolytope p;
  p.vertices = {
      {lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
      {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z},
  };
  // Order: -x, +x, -y, +y, -z, +z.
  p.faces = {
      {0, 4, 7, 3}, {1, 2, 6, 5}, {0, 1, 5, 4}, {3, 7, 6, 2}, {0, 3, 2, 1}, {4, 5, 6, 7},
  };
  p.face_sources.resize(6);
  for (int i = 0; i < 6; ++i) p.face_sources[i] = first_source - i;
  return p;
}

ConvexPolytope make_unit_cube() { return make_box({0, 0, 0}, {1, 1, 1}); }

ConvexPolytope intersect_halfspaces(std::span<const HalfSpace> halfspaces, double bound) {
  ConvexPolytope p = make_box({-bound, -bound, -bound}, {bound, bound, bound});
  std::fill(p.face_sources.begin(), p.face_sources.end(), kNoSource);
  for (std::size_t i = 0; i < halfspaces.size() && !p.empty(); ++i) {
    clip_in_place(p, halfspaces[i], static_cast<int>(i));
  }
  return p;
}

ConvexPolytope translated(const ConvexPolytope& p, const Vec3& t) {
  ConvexPolytope q = p;
  for (auto& v : q.vertices) v += t;
  return q;
}

ConvexPolytope scaled(const ConvexPolytope& p, double c, const Vec3& center) {
  if (!(c > 0.0)) throw GeometryError("scale factor must be positive");
  ConvexPolytope q = p;
  for (auto& v : q.vertices) v = center + (v - center) * c;
  return q;
}

double bbox_diagonal(const ConvexPolytope& p) {
  if (p.vertices.empty()) return 0.0;
  Vec3 lo = p.vertices.front();
  Vec3 hi = lo;
  for (const auto& v : p.vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  return norm(hi - lo);
}

bool clip_in_place(ConvexPolytope& p, const HalfSpace& h, int source) {
  if (p.empty()) return false;
  check_structure(p);

  const std::size_t nv = p.vertices.size();
  const double eps = kPlaneRelTol * bbox_diagonal(p);

  // Classification: -1 strictly inside, 0 on the plane (kept), +1 strictly outside.
  std::vector<double> dist(nv);
  std::vector<signed char> cls(nv);
  bool any_in = false;
  bool any_out = false;
  for (std::size_t i = 0; i < nv; ++i) {
    dist[i] = h.signed_distance(p.vertices[i]);
    cls[i] = dist[i] > eps ? 1 : (dist[i] < -eps ? -1 : 0);
    any_in |= cls[i] < 0;
    any_out |= cls[i] > 0;
  }
  if (!any_out) return false;
  if (!any_in) {
    make_empty(p);
    return true;
  }

  ConvexPolytope out;
  out.generator_tag = p.generator_tag;
  std::vector<int> new_index(nv, -1);
  for (std::size_t i = 0; i < nv; ++i) {
    if (cls[i] <= 0) {
      new_index[i] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(p.vertices[i]);
    }
  }
  const int first_new = static_cast<int>(out.vertices.size());

  std::map<std::pair<int, int>, int> edge_points;
  auto crossing = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = edge_points.find(key);
    if (it != edge_points.end()) return it->second;
    // Interpolate from the endpoint with the smaller index for a symmetric result.
    const int u = key.first;
    const int w = key.second;
    const double t = dist[u] / (dist[u] - dist[w]);
    const Vec3 x = p.vertices[u] + (p.vertices[w] - p.vertices[u]) * t;
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(x);
    edge_points.emplace(key, idx);
    return idx;
  };

  // cap_next[entry] = exit: the cap polygon runs against the clipped faces.
  std::map<int, int> cap_next;
  for (std::size_t fi = 0; fi < p.faces.size(); ++fi) {
    const auto& loop = p.faces[fi];
    const std::size_t k = loop.size();
    std::vector<int> kept;
    kept.reserve(k + 2);
    // Events in loop order: (is_exit, point).
    std::vector<std::pair<bool, int>> events;
    for (std::size_t i = 0; i < k; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % k];
      if (cls[a] <= 0) kept.push_back(new_index[a]);
      if (cls[a] <= 0 && cls[b] > 0) {
        const int e = cls[a] == 0 ? new_index[a] : crossing(a, b);
        if (cls[a] < 0) kept.push_back(e);
        events.emplace_back(true, e);
      } else if (cls[a] > 0 && cls[b] <= 0) {
        const int n = cls[b] == 0 ? new_index[b] : crossing(a, b);
        if (cls[b] < 0) kept.push_back(n);
        events.emplace_back(false, n);
      }
    }
    if (!events.empty()) {
      if (events.size() % 2 != 0) throw GeometryError("inconsistent clip classification");
      auto first_exit = std::find_if(events.begin(), events.end(),
                                     [](const auto& e) { return e.first; });
      std::rotate(events.begin(), first_exit, events.end());
      for (std::size_t i = 0; i + 1 < events.size(); i += 2) {
        if (!events[i].first || events[i + 1].first) {
          throw GeometryError("inconsistent clip classification");
        }
        const int exit_pt = events[i].second;
        const int entry_pt = events[i + 1].second;
        if (exit_pt != entry_pt) {
          if (!cap_next.emplace(entry_pt, exit_pt).second) {
            throw GeometryError("non-manifold clip cap");
          }
        }
      }
    }
    if (kept.size() >= 3) {
      out.faces.push_back(std::move(kept));
      out.face_sources.push_back(source_of(p, fi));
    }
  }

  if (cap_next.size() >= 3) {
    std::vector<int> cap;
    cap.reserve(cap_next.size());
    const int start = cap_next.begin()->first;
    int cur = start;
    do {
      cap.push_back(cur);
      auto it = cap_next.find(cur);
      if (it == cap_next.end() || cap.size() > cap_next.size()) {
        throw GeometryError("open clip cap");
      }
      cur = it->second;
    } while (cur != start);
    if (cap.size() != cap_next.size()) throw GeometryError("clip cap is not a single loop");
    out.faces.push_back(std::move(cap));
    out.face_sources.push_back(source);
  }

  // Merge new crossing points that collapsed onto existing vertices.
  const int total = static_cast<int>(out.vertices.size());
  std::vector<int> alias(total);
  std::iota(alias.begin(), alias.end(), 0);
  bool merged = false;
  for (int i = first_new; i < total; ++i) {
    for (int j = 0; j < i; ++j) {
      if (alias[j] == j && norm2(out.vertices[i] - out.vertices[j]) <= kDedupAbsTol * kDedupAbsTol) {
        alias[i] = j;
        merged = true;
        break;
      }
    }
  }
  if (merged) {
    std::vector<std::vector<int>> faces;
    std::vector<int> sources;
    for (std::size_t fi = 0; fi < out.faces.size(); ++fi) {
      std::vector<int> loop;
      for (int idx : out.faces[fi]) {
        const int a = alias[idx];
        if (loop.empty() || loop.back() != a) loop.push_back(a);
      }
      while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
      if (loop.size() >= 3) {
        faces.push_back(std::move(loop));
        sources.push_back(out.face_sources[fi]);
      }
    }
    out.faces = std::move(faces);
    out.face_sources = std::move(sources);
  }
  compact(out);

  if (out.vertices.size() < 4 || out.faces.size() < 4) {
    make_empty(out);
  }
  p = std::move(out);
  return true;
}

ConvexPolytope clip(const ConvexPolytope& p, const HalfSpace& h, int source) {
  ConvexPolytope q = p;
  clip_in_place(q, h, source);
  return q;
}

Vec3 vertex_centroid(const ConvexPolytope& p) {
  Vec3 c;
  for (const auto& v : p.vertices) c += v;
  return p.vertices.empty() ? c : c / static_cast<double>(p.vertices.size());
}

Moments moments(const ConvexPolytope& p, const Vec3& query) {
  Moments m;
  if (p.empty()) return m;
  check_structure(p);

  // Tetrahedra fanned from the first vertex of each face to the vertex average;
  // all integrals are taken relative to that apex.
  const Vec3 apex = vertex_centroid(p);
  double vol = 0.0;
  Vec3 first;       // integral of (x - apex)
  double second = 0.0;  // integral of |x - apex|^2
  for (const auto& loop : p.faces) {
    const Vec3 a = p.vertices[loop[0]] - apex;
    for (std::size_t j = 1; j + 1 < loop.size(); ++j) {
      const Vec3 b = p.vertices[loop[j]] - apex;
      const Vec3 c = p.vertices[loop[j + 1]] - apex;
      const double v = dot(a, cross(b, c)) / 6.0;
      const Vec3 s = a + b + c;
      vol += v;
      first += s * (v / 4.0);
      second += v / 20.0 * (norm2(a) + norm2(b) + norm2(c) + norm2(s));
    }
  }
  if (!(vol > 0.0)) {
    throw GeometryError("polytope has non-positive volume (check face orientation)");
  }
  const Vec3 shift = query - apex;
  m.volume = vol;
  m.centroid = apex + first / vol;
  m.second_moment = second - 2.0 * dot(shift, first) + vol * norm2(shift);
  m.empty = false;
  return m;
}

double volume(const ConvexPolytope& p) { return moments(p, vertex_centroid(p)).volume; }

double diameter(const ConvexPolytope& p) {
  if (p.empty() || p.vertices.size() < 4) throw GeometryError("diameter of an empty or degenerate polytope");
  double best = 0.0;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < p.vertices.size(); ++j) {
      best = std::max(best, norm2(p.vertices[i] - p.vertices[j]));
    }
  }
  return std::sqrt(best);
}

double bounding_radius(const ConvexPolytope& p, const Vec3& query) {
  if (p.empty() || p.vertices.size() < 4) throw GeometryError("bounding radius of an empty or degenerate polytope");
  double best = 0.0;
  for (const auto& v : p.vertices) best = std::max(best, norm2(v - query));
  return std::sqrt(best);
}

std::vector<FaceGeometry> face_geometry(const ConvexPolytope& p) {
  std::vector<FaceGeometry> out;
  out.reserve(p.faces.size());
  for (const auto& loop : p.faces) {
    FaceGeometry g;
    const Vec3 n = newell_normal(p, loop);
    const double len = norm(n);
    g.area = 0.5 * len;
    g.normal = len > 0.0 ? n / len : Vec3{};
    for (int idx : loop) g.center += p.vertices[idx];
    g.center = g.center / static_cast<double>(loop.size());
    out.push_back(g);
  }
  return out;
}

std::size_t face_count(const ConvexPolytope& p) {
  if (p.empty()) return 0;
  check_structure(p);
  const auto geo = face_geometry(p);
  const std::size_t nf = p.faces.size();
  std::vector<std::size_t> parent(nf);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };

  std::map<std::pair<int, int>, std::size_t> edge_owner;
  for (std::size_t fi = 0; fi < nf; ++fi) {
    const auto& loop = p.faces[fi];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const auto key = std::minmax(loop[i], loop[(i + 1) % loop.size()]);
      auto [it, inserted] = edge_owner.emplace(key, fi);
      if (!inserted && norm(geo[fi].normal - geo[it->second].normal) <= kMergeNormalTol) {
        parent[find(fi)] = find(it->second);
      }
    }
  }
  // Faces of zero area (collapsed slivers) do not count as geometric faces.
  const double min_area = std::pow(kPlaneRelTol * bbox_diagonal(p), 2);
  std::size_t count = 0;
  std::vector<double> group_area(nf, 0.0);
  for (std::size_t fi = 0; fi < nf; ++fi) group_area[find(fi)] += geo[fi].area;
  for (std::size_t fi = 0; fi < nf; ++fi) {
    if (find(fi) == fi && group_area[fi] > min_area) ++count;
  }
  return count;
}

bool contains(const ConvexPolytope& p, const Vec3& x, double tol) {
  if (p.empty()) return false;
  const auto geo = face_geometry(p);
  for (const auto& g : geo) {
    if (g.area <= 0.0) continue;
    if (dot(g.normal, x - g.center) > tol) return false;
  }
  return true;
}

double interior_depth(const ConvexPolytope& p, const Vec3& x) {
  if (p.empty()) throw GeometryError("interior depth of an empty polytope");
  double depth = std::numeric_limits<double>::infinity();
  for (const auto& g : face_geometry(p)) {
    if (g.area <= 0.0) continue;
    depth = std::min(depth, -dot(g.normal, x - g.center));
  }
  return depth;
}

void validate(const ConvexPolytope& p) {
  if (p.empty()) return;
  check_structure(p);
  for (const auto& v : p.vertices) {
    if (!is_finite(v)) throw GeometryError("non-finite vertex");
  }
  const double tol = kPlaneRelTol * std::max(diameter(p), 1e-300);
  const auto geo = face_geometry(p);
  for (std::size_t fi = 0; fi < p.faces.size(); ++fi) {
    if (!(geo[fi].area > 0.0)) throw GeometryError("face with zero area");
    for (int idx : p.faces[fi]) {
      if (std::abs(dot(geo[fi].normal, p.vertices[idx] - geo[fi].center)) > tol) {
        throw GeometryError("non-planar face");
      }
    }
    for (const auto& v : p.vertices) {
      if (dot(geo[fi].normal, v - geo[fi].center) > tol) throw GeometryError("polytope is not convex");
    }
  }
  std::map<std::pair<int, int>, int> edges;
  for (const auto& loop : p.faces) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      ++edges[std::minmax(loop[i], loop[(i + 1) % loop.size()])];
    }
  }
  for (const auto& [edge, uses] : edges) {
    if (uses != 2) throw GeometryError("edge not shared by exactly two faces");
  }
  const long euler = static_cast<long>(p.vertices.size()) - static_cast<long>(edges.size()) +
                     static_cast<long>(p.faces.size());
  if (euler != 2) throw GeometryError("Euler characteristic is not 2");
  if (!(moments(p, vertex_centroid(p)).volume > 0.0)) throw GeometryError("non-positive volume");
}

}  // namespace cvt3d
