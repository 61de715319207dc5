#include "cli/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>

#include "cli/formats.hpp"
#include "json.hpp"
#include "slitmap/characterizer.hpp"
#include "slitmap/errors.hpp"
#include "slitmap/hilbert.hpp"
#include "slitmap/levy.hpp"
#include "slitmap/loewner.hpp"
#include "slitmap/monotone.hpp"

namespace slitmap::cli {

namespace {

using nlohmann::json;
using cx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::filesystem::path resolve_out(const std::filesystem::path& out) {
  if (out.is_absolute()) return out;
  if (const char* dir = std::getenv("SLITMAP_OUT_DIR")) {
    return std::filesystem::path(dir) / out;
  }
  return out;
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  std::filesystem::path p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

std::vector<double> eps_or_default(const JobSpec& job) {
  return job.eps_schedule.empty() ? default_eps_schedule() : job.eps_schedule;
}

HerglotzField load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    const std::string variant = j.at("variant").get<std::string>();
    auto parse_kappa = [](const json& spec) {
      std::vector<double> times;
      std::vector<cx> values;
      for (const auto& row : spec) {
        times.push_back(row.at(0).get<double>());
        values.push_back(std::polar(1.0, row.at(1).get<double>()));
      }
      return DrivingFunction::radial(std::move(times), std::move(values));
    };
    if (variant == "single") return HerglotzField::single(parse_kappa(j.at("kappa")));
    if (variant == "convex") {
      std::vector<HerglotzField::Component> comps;
      for (const auto& c : j.at("components"))
        comps.push_back({parse_kappa(c.at("kappa")), c.at("weight").get<double>()});
      return HerglotzField::convex(std::move(comps));
    }
    if (variant == "uniform") return HerglotzField::radial_uniform();
    throw ParseError(path.string() + ": unknown field variant '" + variant + "'");
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const StructureError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void require_inputs(const JobSpec& job, std::size_t n) {
  if (job.inputs.size() != n)
    throw ParseError(job.command + ": expected " + std::to_string(n) + " input file(s)");
  for (const auto& p : job.inputs)
    if (!std::filesystem::exists(p)) throw ParseError("input does not exist: " + p.string());
}

// ---------------------------------------------------------------------------

int cmd_encode(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const SlitPolyline slit = load_polyline(job.inputs[0]);
  const auto [kappa, capacity] = encode_slit(slit);
  save_driving_csv(kappa, out);
  json j;
  j["total_c"] = capacity.total;
  j["increments"] = capacity.increments;
  save_text(j.dump(2) + "\n", sibling(out, ".capacity.json"));
  return 0;
}

int cmd_decode(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const DrivingFile df = load_driving_csv(job.inputs[0]);
  const DecodedTrace trace = decode_driving(df.driving, df.capacity);
  save_polyline(trace.trace, out);
  json j;
  j["simple"] = trace.simple;
  if (trace.first_intersection_time)
    j["first_intersection_time"] = *trace.first_intersection_time;
  j["outcome"] = trace.simple ? "slit" : "non-slit";
  save_text(j.dump(2) + "\n", sibling(out, ".decode.json"));
  return 0;
}

int cmd_chain(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const HerglotzField field = load_field(job.inputs[0]);
  std::vector<cx> zs;
  if (!job.points_path.empty()) {
    zs = load_points(job.points_path);
  } else {
    for (int r = 1; r <= 5; ++r)
      for (int k = 0; k < 4; ++k)
        zs.push_back(std::polar(0.1 * r, kPi * k / 2.0));
  }
  ChainOptions copt;
  if (job.horizon > 0.0) copt.horizon_start = job.horizon;
  copt.tol = job.tol;
  const ChainResult res = chain_initial(field, job.at, zs, copt);
  std::vector<cx> vals;
  std::vector<double> errs;
  for (const ChainValue& v : res.values) {
    vals.push_back(v.value);
    errs.push_back(v.error_estimate);
  }
  save_transform_csv(zs, vals, errs, out);
  return 0;
}

int cmd_transform(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const Measure mu = load_measure(job.inputs[0]);
  if (job.points_path.empty()) throw ParseError("transform: --points required");
  const std::vector<cx> zs = load_points(job.points_path);
  const bool want_f = job.mode.empty() || job.mode == "F";
  if (!want_f && job.mode != "G") throw ParseError("transform: --kind must be F or G");
  std::vector<cx> vals;
  for (const cx& z : zs)
    vals.push_back(want_f ? f_transform(mu, z) : cauchy_transform(mu, z));
  save_transform_csv(zs, vals, {}, out);
  return 0;
}

int cmd_invert(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const Measure mu = load_measure(job.inputs[0]);
  std::vector<double> grid = job.x_values;
  if (grid.empty()) {
    const int n = job.grid_n > 0 ? job.grid_n : 401;
    const double lo = mu.support_min() - 1.0, hi = mu.support_max() + 1.0;
    for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));
  }
  const InversionResult inv = stieltjes_invert(mu, grid, eps_or_default(job));
  std::ofstream os(out);
  if (!os) throw ParseError("cannot write " + out.string());
  os << "x,density,err_est,converged\n";
  for (const InversionPoint& p : inv.points)
    os << format_double(p.x) << "," << format_double(p.density) << ","
       << format_double(p.error_estimate) << "," << (p.converged ? 1 : 0) << "\n";
  json j;
  j["atoms"] = json::array();
  for (const AtomCandidate& a : inv.atoms)
    j["atoms"].push_back({{"position", a.position},
                          {"weight", a.weight},
                          {"err_est", a.error_estimate}});
  save_text(j.dump(2) + "\n", sibling(out, ".atoms.json"));
  return 0;
}

json verdict_to_json(const SlitVerdict& verdict) {
  json j;
  j["case"] = verdict.kind == SlitCase::NonzeroC  ? "NonzeroC"
              : verdict.kind == SlitCase::ZeroC   ? "ZeroC"
                                                  : "Rejected";
  j["C"] = verdict.C;
  j["clauses"] = json::array();
  for (const ClauseReport& c : verdict.clauses)
    j["clauses"].push_back({{"name", c.name},
                            {"pass", c.pass},
                            {"evidence", c.evidence},
                            {"detail", c.detail}});
  if (verdict.welding) {
    j["welding"] = {{"fixed_point", verdict.welding->fixed_point},
                    {"max_residual", verdict.welding->max_residual},
                    {"a", verdict.welding->a},
                    {"b", verdict.welding->b}};
  }
  return j;
}

int cmd_check_slit(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const Measure mu = load_measure(job.inputs[0]);
  CharacterizerOptions opt;
  if (job.grid_n > 0) opt.grid_n = job.grid_n;
  if (!job.eps_schedule.empty()) opt.eps_schedule = job.eps_schedule;
  const SlitVerdict verdict = check_slit_conditions(mu, opt);
  save_text(verdict_to_json(verdict).dump(2) + "\n", out);
  return verdict.kind == SlitCase::Rejected ? 4 : 0;
}

int cmd_weld(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const Measure mu = load_measure(job.inputs[0]);
  CharacterizerOptions opt;
  if (job.grid_n > 0) opt.grid_n = job.grid_n;
  if (!job.eps_schedule.empty()) opt.eps_schedule = job.eps_schedule;
  try {
    const WeldingMap w = extract_welding(mu, opt);
    std::ofstream os(out);
    if (!os) throw ParseError("cannot write " + out.string());
    os << "x,h\n";
    for (const auto& [x, h] : w.samples)
      os << format_double(x) << "," << format_double(h) << "\n";
    json j;
    j["fixed_point"] = w.fixed_point;
    j["max_residual"] = w.max_residual;
    j["a"] = w.a;
    j["b"] = w.b;
    save_text(j.dump(2) + "\n", sibling(out, ".weld.json"));
    return 0;
  } catch (const NoWeldingError& e) {
    json j;
    j["error"] = "no-welding";
    j["location"] = e.location;
    j["residual"] = e.residual;
    j["detail"] = e.what();
    save_text(j.dump(2) + "\n", sibling(out, ".weld.json"));
    return 4;
  }
}

int cmd_convolve(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 2);
  const Measure mu = load_measure(job.inputs[0]);
  const Measure nu = load_measure(job.inputs[1]);
  if (job.mode == "monotone") {
    MonotoneOptions opt;
    if (job.grid_n > 0) opt.grid_n = job.grid_n;
    if (!job.eps_schedule.empty()) opt.eps_schedule = job.eps_schedule;
    const ConvolutionResult res = monotone_convolve(mu, nu, opt);
    save_measure(res.measure, out);
    json j;
    j["residual"] = res.residual;
    save_text(j.dump(2) + "\n", sibling(out, ".residual.json"));
  } else if (job.mode.empty() || job.mode == "classical") {
    save_measure(convolve_classical(mu, nu), out);
  } else {
    throw ParseError("convolve: --mode must be classical or monotone");
  }
  return 0;
}

int cmd_fourier(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const Measure mu = load_measure(job.inputs[0]);
  std::vector<double> xs = job.x_values;
  if (xs.empty())
    for (int i = 0; i < 201; ++i) xs.push_back(-10.0 + 20.0 * i / 200.0);
  std::ofstream os(out);
  if (!os) throw ParseError("cannot write " + out.string());
  os << "x,re,im\n";
  for (double x : xs) {
    const cx v = mu.fourier_transform(x);
    os << format_double(x) << "," << format_double(v.real()) << ","
       << format_double(v.imag()) << "\n";
  }
  return 0;
}

int cmd_levy(const JobSpec& job, const std::filesystem::path& out) {
  require_inputs(job, 1);
  const LevyTriple triple = load_levy(job.inputs[0]);
  std::vector<double> xs = job.x_values;
  if (xs.empty())
    for (int i = 0; i < 201; ++i) xs.push_back(-10.0 + 20.0 * i / 200.0);
  std::ofstream os(out);
  if (!os) throw ParseError("cannot write " + out.string());
  os << "x,re,im\n";
  for (double x : xs) {
    const cx v = levy_khintchine(triple, x);
    os << format_double(x) << "," << format_double(v.real()) << ","
       << format_double(v.imag()) << "\n";
  }
  if (job.check_embedding) {
    const NormalizedLevy norm = normalize_levy(triple);
    const EmbeddingVerdict v = unique_embedding(norm.triple);
    json j;
    j["unique"] = v.unique;
    j["shift"] = norm.shift;
    j["family"] = v.family == EmbeddingFamily::DiracAtZero  ? "dirac-at-zero"
                  : v.family == EmbeddingFamily::Gaussian   ? "gaussian"
                  : v.family == EmbeddingFamily::PoissonType ? "poisson-type"
                                                             : "none";
    j["detail"] = v.detail;
    save_text(j.dump(2) + "\n", sibling(out, ".embedding.json"));
  }
  return 0;
}

}  // namespace

int run(const JobSpec& job) {
  const std::filesystem::path out = resolve_out(job.out);
  try {
    if (job.out.empty()) throw ParseError("missing --out");
    if (job.command == "encode") return cmd_encode(job, out);
    if (job.command == "decode") return cmd_decode(job, out);
    if (job.command == "chain") return cmd_chain(job, out);
    if (job.command == "transform") return cmd_transform(job, out);
    if (job.command == "invert") return cmd_invert(job, out);
    if (job.command == "check-slit") return cmd_check_slit(job, out);
    if (job.command == "weld") return cmd_weld(job, out);
    if (job.command == "convolve") return cmd_convolve(job, out);
    if (job.command == "fourier") return cmd_fourier(job, out);
    if (job.command == "levy") return cmd_levy(job, out);
    std::cerr << "slitmap: unknown command '" << job.command << "'\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "slitmap: " << e.what() << "\n";
    return 2;
  } catch (const StructureError& e) {
    std::cerr << "slitmap: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "slitmap: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "slitmap: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "slitmap: " << e.what() << "\n";
    json j;
    j["error"] = "non-convergence";
    j["detail"] = e.what();
    try {
      save_text(j.dump(2) + "\n", sibling(out, ".diagnostic.json"));
    } catch (...) {
    }
    return 3;
  } catch (const QuadratureError& e) {
    std::cerr << "slitmap: " << e.what() << "\n";
    json j;
    j["error"] = "quadrature-failure";
    j["detail"] = e.what();
    try {
      save_text(j.dump(2) + "\n", sibling(out, ".diagnostic.json"));
    } catch (...) {
    }
    return 3;
  }
}

}  // namespace slitmap::cli
