#include "wlab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wlab/errors.hpp"
#include "wlab/kernels.hpp"

namespace wlab {

std::string command_name(Command c) {
  switch (c) {
    case Command::solve_tw: return "solve-tw";
    case Command::sweep_branch: return "sweep-branch";
    case Command::evolve_run: return "evolve";
    case Command::sweep_critical_times: return "sweep-critical-times";
    case Command::compare_kdv: return "compare-kdv";
    case Command::fit_spectrum_cmd: return "fit-spectrum";
    case Command::stability_map_cmd: return "stability-map";
  }
  return "?";
}

std::optional<Command> command_from_name(const std::string& name) {
  for (Command c :
       {Command::solve_tw, Command::sweep_branch, Command::evolve_run,
        Command::sweep_critical_times, Command::compare_kdv,
        Command::fit_spectrum_cmd, Command::stability_map_cmd})
    if (command_name(c) == name) return c;
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_num(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    while (pos < v.size() && std::isspace((unsigned char)v[pos])) ++pos;
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "not a number: '" + v + "'");
  }
}

long parse_int(const std::string& v, int line) {
  const double x = parse_num(v, line);
  if (x != std::floor(x)) fail(line, "expected an integer, got '" + v + "'");
  return static_cast<long>(x);
}

// "a,b,c" or "start:step:end" (end inclusive up to a half-step slack)
std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    std::stringstream ss(v);
    std::string part;
    std::vector<double> abc;
    while (std::getline(ss, part, ':')) abc.push_back(parse_num(part, line));
    if (abc.size() != 3) fail(line, "range must be start:step:end");
    const double start = abc[0], step = abc[1], end = abc[2];
    if (step == 0.0) fail(line, "range step must be nonzero");
    const int n = static_cast<int>(std::floor((end - start) / step + 0.5)) + 1;
    if (n <= 0) fail(line, "empty range");
    for (int i = 0; i < n; ++i) out.push_back(start + i * step);
    return out;
  }
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_num(part, line));
  if (out.empty()) fail(line, "empty list");
  return out;
}

struct ExprParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit ExprParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }

  [[noreturn]] void fail_at(const std::string& msg) {
    throw ConfigError("initial-data expression: " + msg + " at position " +
                      std::to_string(pos) + " in '" + s + "'");
  }

  bool peek_number() {
    skip_ws();
    return pos < s.size() &&
           (std::isdigit((unsigned char)s[pos]) || s[pos] == '-' ||
            s[pos] == '+' || s[pos] == '.');
  }

  double number() {
    skip_ws();
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(s.substr(pos), &used);
    } catch (...) {
      fail_at("expected a number");
    }
    pos += used;
    return v;
  }

  std::string name() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum((unsigned char)s[pos]) || s[pos] == '-' ||
            s[pos] == '_'))
      ++pos;
    if (start == pos) fail_at("expected a name");
    return s.substr(start, pos - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      fail_at(std::string("expected '") + c + "'");
    ++pos;
  }

  std::shared_ptr<InitialExpr> expr() {
    auto node = std::make_shared<InitialExpr>();
    const std::string id = name();
    using K = InitialExpr::Kind;
    if (id == "zero") {
      node->kind = K::zero;
      return node;
    }
    expect('(');
    if (id == "gaussian" || id == "sine-gaussian") {
      node->kind = id == "gaussian" ? K::gaussian : K::sine_gaussian;
      node->p0 = number();
      expect(',');
      node->p1 = number();
    } else if (id == "soliton") {
      node->kind = K::soliton;
      node->p0 = number();
    } else if (id == "sum") {
      node->kind = K::sum;
      node->args.push_back(expr());
      expect(',');
      node->args.push_back(expr());
    } else if (id == "scale" || id == "shift") {
      node->kind = id == "scale" ? K::scale : K::shift;
      node->p0 = number();
      expect(',');
      node->args.push_back(expr());
    } else {
      fail_at("unknown function '" + id + "'");
    }
    expect(')');
    return node;
  }
};

}  // namespace

std::shared_ptr<InitialExpr> parse_initial_expr(const std::string& text) {
  ExprParser p(text);
  auto node = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail_at("trailing characters");
  node->text = text;
  return node;
}

namespace {

void apply_key(RunConfig& cfg, const std::string& section,
               const std::string& key, const std::string& value, int line) {
  auto is = [&](const char* s2, const char* k2) {
    return section == s2 && key == k2;
  };
  if (section.empty() && key == "command") {
    auto cmd = command_from_name(value);
    if (!cmd) fail(line, "unknown command '" + value + "'");
    cfg.command = *cmd;
  } else if (is("model", "family")) {
    if (value == "whitham") cfg.model.family = ModelFamily::whitham;
    else if (value == "kdv") cfg.model.family = ModelFamily::kdv;
    else if (value == "boussinesq") cfg.model.family = ModelFamily::boussinesq;
    else fail(line, "unknown family '" + value + "'");
  } else if (is("model", "epsilon")) {
    cfg.model.eps = parse_num(value, line);
  } else if (is("model", "beta")) {
    cfg.model.beta = parse_num(value, line);
  } else if (is("model", "c")) {
    cfg.model.c = parse_num(value, line);
  } else if (is("model", "time-scale")) {
    if (value == "t") cfg.model.scale = TimeScale::t;
    else if (value == "tau") cfg.model.scale = TimeScale::tau;
    else fail(line, "time-scale must be t or tau");
  } else if (is("grid", "N")) {
    cfg.grid_n = static_cast<int>(parse_int(value, line));
  } else if (is("grid", "L")) {
    cfg.grid_l = parse_num(value, line);
  } else if (is("initial", "u")) {
    cfg.initial_u = parse_initial_expr(value);
  } else if (is("initial", "eta")) {
    cfg.initial_eta = parse_initial_expr(value);
  } else if (is("evolve", "T-final")) {
    cfg.evolve.t_final = parse_num(value, line);
  } else if (is("evolve", "Nt")) {
    cfg.evolve.nt = parse_int(value, line);
  } else if (is("evolve", "stage-solver")) {
    if (value == "fixed-point") cfg.evolve.stage_solver = StageSolver::fixed_point;
    else if (value == "simplified-newton")
      cfg.evolve.stage_solver = StageSolver::simplified_newton;
    else fail(line, "stage-solver must be fixed-point or simplified-newton");
  } else if (is("evolve", "stage-tol")) {
    cfg.evolve.stage_tol = parse_num(value, line);
  } else if (is("evolve", "stage-max-iter")) {
    cfg.evolve.stage_max_iter = static_cast<int>(parse_int(value, line));
  } else if (is("evolve", "krasny-threshold")) {
    cfg.evolve.krasny_threshold = parse_num(value, line);
  } else if (is("evolve", "record-every")) {
    cfg.evolve.record_every = parse_int(value, line);
  } else if (is("evolve", "snapshot-every")) {
    cfg.evolve.snapshot_every = parse_int(value, line);
  } else if (is("solve", "newton-tol")) {
    cfg.newton.newton_tol = parse_num(value, line);
  } else if (is("solve", "max-newton")) {
    cfg.newton.max_newton = static_cast<int>(parse_int(value, line));
  } else if (is("solve", "gmres-tol")) {
    cfg.newton.gmres_tol = parse_num(value, line);
  } else if (is("solve", "gmres-restart")) {
    cfg.newton.gmres_restart = static_cast<int>(parse_int(value, line));
  } else if (is("sweep", "c-values")) {
    cfg.c_values = parse_list(value, line);
  } else if (is("sweep", "eps-values")) {
    cfg.eps_values = parse_list(value, line);
  } else if (is("fit", "window-kmin")) {
    if (!cfg.fit_window) cfg.fit_window = {0.0, 0.0};
    cfg.fit_window->first = parse_num(value, line);
  } else if (is("fit", "window-kmax")) {
    if (!cfg.fit_window) cfg.fit_window = {0.0, 0.0};
    cfg.fit_window->second = parse_num(value, line);
  } else if (is("fit", "input")) {
    cfg.fit_input = value;
  } else if (is("breakdown", "delta-tol")) {
    cfg.delta_tol = parse_num(value, line);
  } else if (is("compare", "j")) {
    cfg.compare_j = static_cast<int>(parse_int(value, line));
  } else if (is("compare", "horizon-multiple")) {
    cfg.horizon_multiple = parse_num(value, line);
  } else if (is("stability", "kmax")) {
    cfg.stability_kmax = parse_num(value, line);
  } else if (is("stability", "count")) {
    cfg.stability_count = static_cast<int>(parse_int(value, line));
  } else if (is("output", "dir")) {
    cfg.output_dir = value;
  } else {
    fail(line, "unknown key '" + (section.empty() ? key : section + "." + key) +
                   "'");
  }
}

void validate_config(const RunConfig& cfg) {
  cfg.model.validate();
  Grid::make(cfg.grid_n, cfg.grid_l);  // N power of two, L > 0
  cfg.evolve.validate();
  if (!(cfg.newton.newton_tol > 0.0) || !(cfg.newton.gmres_tol > 0.0))
    throw ConfigError("solver tolerances must be positive");
  if (cfg.newton.max_newton < 1 || cfg.newton.gmres_restart < 1)
    throw ConfigError("solver iteration limits must be >= 1");
  if (cfg.compare_j < 0 || cfg.compare_j > 2)
    throw ConfigError("compare j must be 0, 1 or 2");
  if (!(cfg.horizon_multiple > 0.0))
    throw ConfigError("horizon-multiple must be positive");
  if (cfg.fit_window && !(cfg.fit_window->first < cfg.fit_window->second))
    throw ConfigError("fit window needs window-kmin < window-kmax");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  cfg.evolve.krasny_threshold = 1e-12;  // documented default
  cfg.evolve.record_every = 0;          // resolved after Nt is known

  std::stringstream ss(text);
  std::string raw;
  std::string section;
  int line = 0;
  bool saw_command = false;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s2 = raw;
    if (auto hash = s2.find('#'); hash != std::string::npos) s2.resize(hash);
    auto b = s2.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = s2.find_last_not_of(" \t\r");
    s2 = s2.substr(b, e - b + 1);
    if (s2.front() == '[') {
      if (s2.back() != ']') fail(line, "unterminated section header");
      section = s2.substr(1, s2.size() - 2);
      continue;
    }
    auto eq = s2.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = s2.substr(0, eq);
    std::string value = s2.substr(eq + 1);
    key = key.substr(0, key.find_last_not_of(" \t") + 1);
    auto vb = value.find_first_not_of(" \t");
    value = vb == std::string::npos ? "" : value.substr(vb);
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    apply_key(cfg, section, key, value, line);
    if (section.empty() && key == "command") saw_command = true;
  }
  cfg.command_declared = saw_command;
  if (cfg.evolve.record_every == 0)
    cfg.evolve.record_every = std::max<long>(1, cfg.evolve.nt / 500);
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects section.key=value, got '" + assignment +
                      "'");
  std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  std::string section;
  if (auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  apply_key(cfg, section, key, value, 0);
  validate_config(cfg);
}

namespace {

SpectralField eval_expr(const InitialExpr& e, const RunConfig& cfg,
                        const GridPtr& grid, bool eta_component,
                        std::map<double, TravelingWave>& cache) {
  using K = InitialExpr::Kind;
  switch (e.kind) {
    case K::zero:
      return SpectralField::zero(grid);
    case K::gaussian: {
      std::vector<double> u(grid->size());
      for (int j = 0; j < grid->size(); ++j) {
        const double r = grid->x()[j] / e.p1;
        u[j] = e.p0 * std::exp(-r * r);
      }
      return transform(u, grid);
    }
    case K::sine_gaussian: {
      std::vector<double> u(grid->size());
      for (int j = 0; j < grid->size(); ++j) {
        const double x = grid->x()[j];
        u[j] = e.p0 * std::sin(e.p1 * x) * std::exp(-x * x);
      }
      return transform(u, grid);
    }
    case K::soliton: {
      auto it = cache.find(e.p0);
      if (it == cache.end()) {
        ModelSpec m = cfg.model;
        m.c = 0.0;
        it = cache.emplace(e.p0, resolve_soliton(m, e.p0, grid, cfg.newton))
                 .first;
      }
      const TravelingWave& w = it->second;
      if (eta_component) {
        if (!w.eta)
          throw ConfigError("soliton() has no eta component for this family");
        return *w.eta;
      }
      return w.u;
    }
    case K::sum: {
      SpectralField a = eval_expr(*e.args[0], cfg, grid, eta_component, cache);
      SpectralField b = eval_expr(*e.args[1], cfg, grid, eta_component, cache);
      std::vector<cplx> c(grid->size());
      kern::caxpy(a.coeffs().data(), 1.0, b.coeffs().data(), c.data(),
                  grid->size());
      return SpectralField(grid, std::move(c));
    }
    case K::scale: {
      SpectralField a = eval_expr(*e.args[0], cfg, grid, eta_component, cache);
      std::vector<cplx> c(grid->size());
      kern::cscale(a.coeffs().data(), e.p0, c.data(), grid->size());
      return SpectralField(grid, std::move(c));
    }
    case K::shift: {
      SpectralField a = eval_expr(*e.args[0], cfg, grid, eta_component, cache);
      return translate_field(a, e.p0);
    }
  }
  return SpectralField::zero(grid);
}

}  // namespace

State build_initial_state(const RunConfig& cfg, const GridPtr& grid) {
  std::map<double, TravelingWave> cache;
  if (cfg.model.is_system()) {
    SpectralField u = cfg.initial_u
                          ? eval_expr(*cfg.initial_u, cfg, grid, false, cache)
                          : SpectralField::zero(grid);
    SpectralField eta =
        cfg.initial_eta ? eval_expr(*cfg.initial_eta, cfg, grid, true, cache)
                        : SpectralField::zero(grid);
    return State::system(std::move(eta), std::move(u));
  }
  if (!cfg.initial_u)
    throw ConfigError("an evolve run needs [initial] u = <expression>");
  if (cfg.initial_eta)
    throw ConfigError("eta initial data is only valid for the boussinesq family");
  return State::scalar(eval_expr(*cfg.initial_u, cfg, grid, false, cache));
}

}  // namespace wlab
