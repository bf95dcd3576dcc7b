#include "wlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wlab/errors.hpp"

namespace wlab {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::vector<double>> read_csv(const fs::path& path,
                                          std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header.empty()) header = line;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_snapshot(const fs::path& path, const State& state) {
  std::ofstream out = open_out(path);
  const Grid& g = state.u.grid();
  std::vector<double> u = state.u.values();
  if (state.eta) {
    std::vector<double> e = state.eta->values();
    out << "# x,eta,u\n";
    for (int j = 0; j < g.size(); ++j)
      out << format_double(g.x()[j]) << ',' << format_double(e[j]) << ','
          << format_double(u[j]) << '\n';
  } else {
    out << "# x,u\n";
    for (int j = 0; j < g.size(); ++j)
      out << format_double(g.x()[j]) << ',' << format_double(u[j]) << '\n';
  }
}

LoadedSnapshot read_snapshot(const fs::path& path) {
  std::string header;
  auto rows = read_csv(path, header);
  if (rows.empty()) throw std::runtime_error("empty snapshot " + path.string());
  const bool system = header.find("eta") != std::string::npos;
  const int n = static_cast<int>(rows.size());
  const double L = -rows[0][0] / std::numbers::pi;
  GridPtr grid = Grid::make(n, L);
  std::vector<double> u(n), eta(n);
  for (int j = 0; j < n; ++j) {
    if (system) {
      eta[j] = rows[j][1];
      u[j] = rows[j][2];
    } else {
      u[j] = rows[j][1];
    }
  }
  LoadedSnapshot snap{system ? State::system(transform(eta, grid),
                                             transform(u, grid))
                             : State::scalar(transform(u, grid)),
                      grid};
  return snap;
}

void write_spectrum(const fs::path& path, const SpectralField& field) {
  std::ofstream out = open_out(path);
  out << "# k,abs_coeff\n";
  const Grid& g = field.grid();
  for (int m = 0; m <= g.size() / 2; ++m)
    out << format_double(m / g.half_width()) << ','
        << format_double(std::abs(field.coeffs()[m])) << '\n';
}

void read_spectrum(const fs::path& path, std::vector<double>& k,
                   std::vector<double>& abs_coeff) {
  std::string header;
  auto rows = read_csv(path, header);
  k.clear();
  abs_coeff.clear();
  for (const auto& row : rows) {
    if (row.size() < 2) continue;
    k.push_back(row[0]);
    abs_coeff.push_back(row[1]);
  }
}

void write_diagnostics(const fs::path& path,
                       const std::vector<DiagnosticsRow>& rows) {
  std::ofstream out = open_out(path);
  out << "# t,linf,l2,dxl2,mass,momentum,energy,edrift,floor\n";
  for (const auto& r : rows)
    out << format_double(r.t) << ',' << format_double(r.linf) << ','
        << format_double(r.l2) << ',' << format_double(r.dx_l2) << ','
        << format_double(r.mass) << ',' << format_double(r.momentum) << ','
        << format_double(r.energy) << ',' << format_double(r.energy_drift)
        << ',' << format_double(r.floor) << '\n';
}

void write_fit_series(
    const fs::path& path,
    const std::vector<std::pair<double, SingularityFit>>& fits) {
  std::ofstream out = open_out(path);
  out << "# t,delta,mu,residual\n";
  for (const auto& [t, fit] : fits)
    out << format_double(t) << ',' << format_double(fit.delta) << ','
        << format_double(fit.mu) << ',' << format_double(fit.rms_residual)
        << '\n';
}

void write_keyvalues(
    const fs::path& path,
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
}

void write_svg_plot(const fs::path& path, const std::vector<double>& x,
                    const std::vector<double>& y, const std::string& x_label,
                    const std::string& y_label, bool log_y) {
  const int W = 640, H = 420, ML = 70, MR = 20, MT = 20, MB = 50;
  std::vector<double> yy;
  yy.reserve(y.size());
  for (double v : y)
    yy.push_back(log_y ? std::log10(std::max(v, 1e-300)) : v);

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!x.empty()) {
    xmin = xmax = x[0];
    ymin = ymax = yy[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
      xmin = std::min(xmin, x[i]);
      xmax = std::max(xmax, x[i]);
      ymin = std::min(ymin, yy[i]);
      ymax = std::max(ymax, yy[i]);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  auto px = [&](double v) {
    return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR);
  };
  auto py = [&](double v) {
    return H - MB - (v - ymin) / (ymax - ymin) * (H - MT - MB);
  };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
      << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML
      << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
  char buf[64];
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(buf, sizeof(buf), "%.4g", xv);
    out << "<text x=\"" << px(xv) << "\" y=\"" << H - MB + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", yv);
    out << "<text x=\"" << ML - 6 << "\" y=\"" << py(yv) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << buf << "</text>\n";
  }
  out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << (MT + H - MB) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << (MT + H - MB) / 2 << ")\">" << y_label
      << (log_y ? " (log10)" : "") << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.2\" "
         "points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x[i]), py(yy[i]));
    out << buf;
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace wlab
