#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wlab/analysis.hpp"
#include "wlab/model.hpp"

namespace wlab {

// All files are plain CSV with a `# name,name,...` header line and full
// double precision (17 significant digits), so reruns are byte-identical.

std::string format_double(double v);

// Field snapshot: `# x,u` (scalar) or `# x,eta,u` (system).
void write_snapshot(const std::filesystem::path& path, const State& state);

struct LoadedSnapshot {
  State state;
  GridPtr grid;
};
LoadedSnapshot read_snapshot(const std::filesystem::path& path);

// Spectrum: `# k,abs_coeff` on the nonnegative-k half.
void write_spectrum(const std::filesystem::path& path,
                    const SpectralField& field);
void read_spectrum(const std::filesystem::path& path, std::vector<double>& k,
                   std::vector<double>& abs_coeff);

// Diagnostics series: `# t,linf,l2,dxl2,mass,momentum,energy,edrift,floor`.
void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<DiagnosticsRow>& rows);

// Fit series: `# t,delta,mu,residual`.
void write_fit_series(
    const std::filesystem::path& path,
    const std::vector<std::pair<double, SingularityFit>>& fits);

// Plain-text key = value report (manifest, breakdown report).
void write_keyvalues(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& kv);

// Minimal SVG line plot; y may be plotted on a log10 scale.
void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& x_label, const std::string& y_label,
                    bool log_y = false);

}  // namespace wlab
