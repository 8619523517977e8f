#include "cvt3d/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cvt3d {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string format_long(long double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.15Lg", x);
  return buf;
}

Json vec_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const char* yes_no(bool b) { return b ? "1" : "0"; }

}  // namespace

Json polytope_to_json(const ConvexPolytope& p) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : p.vertices) j["vertices"].push_back(vec_json(v));
  j["faces"] = Json::array();
  for (const auto& f : p.faces) j["faces"].push_back(f);
  return j;
}

ConvexPolytope polytope_from_json(const Json& j) {
  ConvexPolytope p;
  for (const auto& v : j.at("vertices")) p.vertices.push_back(vec_from(v));
  for (const auto& f : j.at("faces")) {
    std::vector<int> face = f.get<std::vector<int>>();
    for (int i : face) {
      if (i < 0 || static_cast<std::size_t>(i) >= p.vertices.size()) {
        throw std::invalid_argument("polytope face index out of range");
      }
    }
    p.faces.push_back(std::move(face));
  }
  p.face_sources.assign(p.faces.size(), kNoSource);
  return p;
}

Json generators_to_json(std::span<const Vec3> gens) {
  Json j = Json::array();
  for (const auto& g : gens) j.push_back(vec_json(g));
  return j;
}

Json tessellation_to_json(const Tessellation& t) {
  Json j;
  j["domain"] = to_string(t.domain);
  j["n"] = t.size();
  j["energy"] = t.energy;
  j["generators"] = generators_to_json(t.generators);
  j["cells"] = Json::array();
  for (const auto& c : t.cells) j["cells"].push_back(polytope_to_json(c));
  return j;
}

Tessellation tessellation_from_json(const Json& j) {
  const Domain d = parse_domain(j.at("domain").get<std::string>());
  std::vector<Vec3> gens;
  for (const auto& g : j.at("generators")) gens.push_back(vec_from(g));
  return build_tessellation(gens, d);
}

std::string cells_csv(const Tessellation& t) {
  std::vector<double> sigma(t.size(), std::numeric_limits<double>::quiet_NaN());
  if (t.size() >= 2) sigma = nearest_neighbor_stats(t.generators, t.domain).sigma;
  std::ostringstream out;
  out << "index,volume,diameter,faces,second_moment,sigma\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& c = t.cells[k];
    out << k << ',' << format_double(volume(c)) << ',' << format_double(diameter(c)) << ',' << face_count(c) << ','
        << format_double(t.cell_energy[k]) << ',' << format_double(sigma[k]) << '\n';
  }
  return out.str();
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iter,energy,max_move\n";
  for (const auto& r : trace) {
    out << r.iter << ',' << format_double(r.energy) << ',' << format_double(r.max_move) << '\n';
  }
  return out.str();
}

std::string audit_csv(const AuditReport& rep) {
  std::ostringstream out;
  out << "row,volume_n,diam_n13,diam_nm2_13,faces,sigma_n13,n23E,ball_floor_slack,"
         "diam_low_ok,volume_low_ok,diam_high_ok,faces_ok\n";
  for (const auto& c : rep.cells) {
    out << c.index << ',' << format_double(c.volume_n) << ',' << format_double(c.diam_n13) << ','
        << format_double(c.diam_nm2_13) << ',' << c.faces << ',' << format_double(c.sigma_n13) << ','
        << format_double(c.energy_n53) << ',' << format_double(c.ball_floor_slack) << ',' << yes_no(c.diam_low_ok)
        << ',' << yes_no(c.volume_low_ok) << ',' << (c.diam_high_ok ? yes_no(*c.diam_high_ok) : "na") << ','
        << yes_no(c.faces_ok) << '\n';
  }
  out << "summary," << format_double(static_cast<double>(rep.n)) << ',' << format_double(rep.delone_max_ratio) << ','
      << "nan," << rep.max_faces << ',' << format_double(rep.delone_min_ratio) << ',' << format_double(rep.density)
      << ',' << format_double(rep.min_ball_floor_slack) << ',' << yes_no(rep.diam_low_pass) << ','
      << yes_no(rep.volume_low_pass) << ',' << (rep.diam_high_pass ? yes_no(*rep.diam_high_pass) : "na") << ','
      << yes_no(rep.faces_pass) << '\n';
  return out.str();
}

Json constants_json() {
  Json arr = Json::array();
  for (const auto& r : constant_report()) {
    Json j;
    j["name"] = r.name;
    j["formula_value"] = format_long(r.formula_value);
    j["paper_decimal"] = optional_number(r.paper_decimal);
    j["rel_deviation"] = optional_number(r.rel_deviation);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream out;
  out << "m,value,d1,d2,sigma,effective_faces,label\n";
  for (const auto& r : rows) {
    out << r.m << ',' << format_double(r.value) << ',' << format_double(r.d1) << ',' << format_double(r.d2) << ','
        << format_double(r.sigma) << ',' << r.effective_faces << ',' << r.label << '\n';
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace cvt3d
