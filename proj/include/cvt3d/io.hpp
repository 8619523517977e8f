#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvt3d/bounds.hpp"
#include "cvt3d/geom.hpp"
#include "cvt3d/gfunc.hpp"
#include "cvt3d/lloyd.hpp"
#include "cvt3d/voronoi.hpp"

namespace cvt3d {

using Json = nlohmann::ordered_json;

/// Round-trip decimal form (17 significant digits, '.' separator); "nan" and
/// "inf" for non-finite values.
std::string format_double(double x);

/// {"vertices": [[x,y,z], ...], "faces": [[i,j,k,...], ...]}
Json polytope_to_json(const ConvexPolytope& p);
ConvexPolytope polytope_from_json(const Json& j);

/// {"domain", "n", "energy", "generators", "cells"}; cells are polytope objects.
Json tessellation_to_json(const Tessellation& t);
/// Reads domain and generators and rebuilds the cells.
Tessellation tessellation_from_json(const Json& j);

/// One row per cell: index, volume, diameter, faces, second_moment, sigma.
std::string cells_csv(const Tessellation& t);

Json generators_to_json(std::span<const Vec3> gens);

std::string trace_csv(const std::vector<TraceRow>& trace);
std::string audit_csv(const AuditReport& rep);
Json constants_json();
std::string probe_csv(const std::vector<ProbeRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace cvt3d
