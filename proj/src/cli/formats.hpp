#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "slitmap/cauchy.hpp"
#include "slitmap/driving.hpp"
#include "slitmap/levy.hpp"
#include "slitmap/measure.hpp"
#include "slitmap/zipper.hpp"

// File formats used by the command-line front end; the layouts are documented
// in docs/formats.md and kept bit-stable (numbers printed with %.17g).

namespace slitmap::cli {

/// Thrown on malformed input files; mapped to exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string format_double(double v);

Measure load_measure(const std::filesystem::path& path);
void save_measure(const Measure& mu, const std::filesystem::path& path);

LevyTriple load_levy(const std::filesystem::path& path);

SlitPolyline load_polyline(const std::filesystem::path& path);
void save_polyline(const SlitPolyline& slit, const std::filesystem::path& path);

struct DrivingFile {
  DrivingFunction driving;
  CapacityRecord capacity;  ///< increments reconstructed from the time grid
};

DrivingFile load_driving_csv(const std::filesystem::path& path);
void save_driving_csv(const DrivingFunction& kappa, const std::filesystem::path& path);

/// Curve rows (param, re, im, err_est).
void save_curve_csv(const std::vector<double>& param,
                    const std::vector<std::complex<double>>& points,
                    const std::vector<double>& err,
                    const std::filesystem::path& path);

/// Generic row output for transform evaluations: (re_z, im_z, re_f, im_f, err).
void save_transform_csv(const std::vector<std::complex<double>>& z,
                        const std::vector<std::complex<double>>& f,
                        const std::vector<double>& err,
                        const std::filesystem::path& path);

void save_text(const std::string& text, const std::filesystem::path& path);

std::vector<std::complex<double>> load_points(const std::filesystem::path& path);

}  // namespace slitmap::cli
