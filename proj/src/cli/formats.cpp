#include "cli/formats.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slitmap/errors.hpp"

namespace slitmap::cli {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Measures
//
// {"atoms": [[x, w], ...],
//  "segments": [{"a":..,"b":..,"samples":[...]} |
//               {"a":..,"b":..,"samples":[...],"layout":"chebyshev"} |
//               {"a":..,"b":..,"formula":"arcsine"}],
//  "label": "...", "mass_tolerance": 1e-6}

Measure load_measure(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    std::vector<Atom> atoms;
    if (j.contains("atoms"))
      for (const auto& a : j.at("atoms"))
        atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    std::vector<DensitySegment> segments;
    if (j.contains("segments")) {
      for (const auto& s : j.at("segments")) {
        const double a = s.at("a").get<double>();
        const double b = s.at("b").get<double>();
        if (s.contains("formula")) {
          segments.push_back(formula_segment(s.at("formula").get<std::string>(), a, b,
                                             s.value("n", 0)));
        } else {
          const auto samples = s.at("samples").get<std::vector<double>>();
          const NodeLayout layout = s.value("layout", std::string("cartesian")) == "chebyshev"
                                        ? NodeLayout::ChebyshevAngles
                                        : NodeLayout::Cartesian;
          segments.emplace_back(a, b, samples, layout);
        }
      }
    }
    Measure m(std::move(atoms), std::move(segments), j.value("label", std::string{}));
    m.mass_tolerance = j.value("mass_tolerance", 1e-6);
    m.validate_probability();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const StructureError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_measure(const Measure& mu, const std::filesystem::path& path) {
  json j;
  j["atoms"] = json::array();
  for (const Atom& a : mu.atoms()) j["atoms"].push_back({a.position, a.weight});
  j["segments"] = json::array();
  for (const DensitySegment& s : mu.segments()) {
    json seg;
    seg["a"] = s.a();
    seg["b"] = s.b();
    seg["samples"] = s.values();
    seg["layout"] = s.layout() == NodeLayout::ChebyshevAngles ? "chebyshev" : "cartesian";
    if (s.layout() == NodeLayout::Cartesian) seg["nodes"] = s.nodes();
    j["segments"].push_back(std::move(seg));
  }
  if (!mu.label().empty()) j["label"] = mu.label();
  j["mass_tolerance"] = mu.mass_tolerance;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Levy triples: {"a": .., "sigma": .., "nu": {measure fields}}

LevyTriple load_levy(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    LevyTriple t;
    t.drift = j.value("a", 0.0);
    t.sigma = j.value("sigma", 0.0);
    if (j.contains("nu")) {
      const json& nu = j.at("nu");
      std::vector<Atom> atoms;
      if (nu.contains("atoms"))
        for (const auto& a : nu.at("atoms"))
          atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      std::vector<DensitySegment> segments;
      if (nu.contains("segments"))
        for (const auto& s : nu.at("segments")) {
          if (s.contains("formula"))
            segments.push_back(formula_segment(s.at("formula").get<std::string>(),
                                               s.at("a").get<double>(),
                                               s.at("b").get<double>(), s.value("n", 0)));
          else
            segments.emplace_back(s.at("a").get<double>(), s.at("b").get<double>(),
                                  s.at("samples").get<std::vector<double>>());
        }
      t.jump = Measure(std::move(atoms), std::move(segments));
    }
    t.validate();
    return t;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const StructureError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Slit polylines: [[re, im], ...] (or {"vertices": [[re, im], ...]})

SlitPolyline load_polyline(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    const json& verts = j.is_array() ? j : j.at("vertices");
    std::vector<std::complex<double>> v;
    for (const auto& p : verts)
      v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return SlitPolyline(std::move(v));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const GeometryError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_polyline(const SlitPolyline& slit, const std::filesystem::path& path) {
  json j = json::array();
  for (const auto& v : slit.vertices()) j.push_back({v.real(), v.imag()});
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Driving functions: CSV with header "t,value" (chordal) or "t,angle"
// (radial); rows in %.17g.

DrivingFile load_driving_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  bool radial;
  if (line == "t,value")
    radial = false;
  else if (line == "t,angle")
    radial = true;
  else
    throw ParseError(path.string() + ": expected header 't,value' or 't,angle'");

  std::vector<double> times, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double t, v;
    char comma;
    if (!(row >> t >> comma >> v) || comma != ',')
      throw ParseError(path.string() + ": malformed row '" + line + "'");
    times.push_back(t);
    values.push_back(v);
  }
  if (times.size() < 2) throw ParseError(path.string() + ": need at least two samples");

  DrivingFile out;
  try {
    if (radial) {
      std::vector<std::complex<double>> circle;
      circle.reserve(values.size());
      for (double ang : values) circle.push_back(std::polar(1.0, ang));
      out.driving = DrivingFunction::radial(times, circle);
    } else {
      out.driving = DrivingFunction::chordal(times, values);
    }
  } catch (const StructureError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  out.capacity.total = times.back() - times.front();
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    out.capacity.increments.push_back(times[i + 1] - times[i]);
  return out;
}

void save_driving_csv(const DrivingFunction& kappa, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << (kappa.mode() == DrivingMode::RadialCircle ? "t,angle" : "t,value") << "\n";
  for (std::size_t i = 0; i < kappa.times().size(); ++i)
    out << format_double(kappa.times()[i]) << "," << format_double(kappa.values()[i])
        << "\n";
}

// ---------------------------------------------------------------------------
// CSV outputs

void save_curve_csv(const std::vector<double>& param,
                    const std::vector<std::complex<double>>& points,
                    const std::vector<double>& err,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "param,re,im,err_est\n";
  for (std::size_t i = 0; i < param.size(); ++i)
    out << format_double(param[i]) << "," << format_double(points[i].real()) << ","
        << format_double(points[i].imag()) << ","
        << format_double(i < err.size() ? err[i] : 0.0) << "\n";
}

void save_transform_csv(const std::vector<std::complex<double>>& z,
                        const std::vector<std::complex<double>>& f,
                        const std::vector<double>& err,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "re_z,im_z,re_f,im_f,err_est\n";
  for (std::size_t i = 0; i < z.size(); ++i)
    out << format_double(z[i].real()) << "," << format_double(z[i].imag()) << ","
        << format_double(f[i].real()) << "," << format_double(f[i].imag()) << ","
        << format_double(i < err.size() ? err[i] : 0.0) << "\n";
}

void save_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

std::vector<std::complex<double>> load_points(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    std::vector<std::complex<double>> pts;
    for (const auto& p : j)
      pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return pts;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace slitmap::cli
