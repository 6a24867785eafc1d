#include "epsh/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "epsh/norms.hpp"
#include "epsh/sheath1d.hpp"

namespace epsh {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "m", "R", "gamma", "u_plus", "theta_plus", "phi_b", "beta",
      "dim", "L1", "n1", "L2", "n2",
      "boundary.kind", "boundary.bumps",
      "cfl", "t_end", "diag_stride", "tol_steady", "snapshot_interval",
      "sigma_tol", "sponge_cells", "sponge_strength", "limiter",
      "check_positivity", "check_supersonic",
      "init.kind", "init.amplitude", "init.center", "init.width",
      "init.norm3",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<GaussBump> parse_bumps(const std::string& text) {
  std::vector<GaussBump> out;
  std::stringstream ss(text);
  std::string triple;
  while (std::getline(ss, triple, ';')) {
    triple = trim(triple);
    if (triple.empty()) continue;
    std::stringstream ts(triple);
    std::string tok;
    double vals[3];
    int n = 0;
    while (std::getline(ts, tok, ',')) {
      if (n >= 3) throw ConfigError("bump triple has too many entries: " + triple);
      try {
        vals[n++] = std::stod(trim(tok));
      } catch (...) {
        throw ConfigError("bad bump value '" + tok + "'");
      }
    }
    if (n != 3) throw ConfigError("bump needs a,c,w: " + triple);
    out.push_back({vals[0], vals[1], vals[2]});
  }
  if (out.empty()) throw ConfigError("boundary.bumps is empty");
  return out;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        " is not 'key = value': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
      throw ConfigError("unknown key '" + key + "'");
    if (val.empty()) throw ConfigError("key '" + key + "' has no value");
    if (c.kv_.count(key)) throw ConfigError("duplicate key '" + key + "'");
    c.kv_[key] = val;
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

double Config::num(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing key '" + key + "'");
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size())
      throw ConfigError("key '" + key + "' is not a number: " + it->second);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError("key '" + key + "' is not a number: " + it->second);
  }
}

double Config::num_or(const std::string& key, double fallback) const {
  return has(key) ? num(key) : fallback;
}

int Config::integer(const std::string& key) const {
  const double v = num(key);
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9)
    throw ConfigError("key '" + key + "' must be an integer");
  return i;
}

std::string Config::str(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = str(key);
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "' is not a boolean: " + v);
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

RunSetup RunSetup::from_config(const Config& c) {
  RunSetup s;
  // read in declaration order so the first missing key is reported
  const double m = c.num("m");
  const double R = c.num("R");
  const double gamma = c.num("gamma");
  const double u_plus = c.num("u_plus");
  const double theta_plus = c.num("theta_plus");
  const double phi_b = c.num("phi_b");
  s.params = PlasmaParams::make(m, R, gamma, u_plus, theta_plus, phi_b);

  const int dim = c.integer("dim");
  if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");

  const std::string kind =
      c.has("boundary.kind") ? c.str("boundary.kind") : "flat";
  if (kind == "flat") {
    s.boundary = BoundaryProfile::flat();
  } else if (kind == "gaussian-sum") {
    s.boundary = BoundaryProfile::gaussian_sum(parse_bumps(c.str("boundary.bumps")));
  } else {
    throw ConfigError("boundary.kind must be flat or gaussian-sum");
  }
  if (dim == 1 && kind != "flat")
    throw ConfigError("dim 1 runs use a flat boundary");

  double L1;
  if (c.has("L1")) {
    L1 = c.num("L1");
  } else {
    // default truncation depth 40 / alpha from a provisional half-line fit
    const auto prof = solve_stationary_halfline(s.params, 20.0, 4000);
    L1 = 40.0 / prof.alpha_fit;
  }
  const int n1 = c.integer("n1");
  if (dim == 1) {
    s.grid = Grid::line(L1, n1);
  } else {
    s.grid = Grid::strip(L1, n1, c.num("L2"), c.integer("n2"));
  }

  s.beta = c.num_or("beta", 0.0);
  if (c.has("beta") && !(s.beta > 0.0))
    throw ConfigError("beta must be positive");

  s.evolve.cfl = c.num_or("cfl", 0.4);
  s.evolve.t_end = c.num_or("t_end", 1.0);
  s.evolve.diag_stride = c.has("diag_stride") ? c.integer("diag_stride") : 10;
  s.evolve.tol_steady = c.num_or("tol_steady", 0.0);
  s.evolve.snapshot_interval = c.num_or("snapshot_interval", 0.0);
  s.evolve.sigma_tol = c.num_or("sigma_tol", 1e-10);
  s.evolve.sponge_cells = c.has("sponge_cells") ? c.integer("sponge_cells") : 5;
  s.evolve.sponge_strength = c.num_or("sponge_strength", 0.25);
  s.evolve.limiter = c.flag_or("limiter", false);
  s.evolve.check_positivity = c.flag_or("check_positivity", true);
  s.evolve.check_supersonic = c.flag_or("check_supersonic", true);
  return s;
}

FieldState initial_state(const Config& c, const SystemContext& ctx) {
  FieldState s = FieldState::zeros(ctx.grid);
  const std::string kind = c.has("init.kind") ? c.str("init.kind") : "zero";
  if (kind == "zero") return s;
  if (kind != "bump")
    throw ConfigError("init.kind must be zero or bump");

  const double amp = c.num("init.amplitude");
  const double center = c.num_or("init.center", 0.3 * ctx.grid.L1);
  const double width = c.num_or("init.width", 1.0);
  const Grid& g = ctx.grid;
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
      const double z = (g.y1(i) - center) / width;
      const double b = std::exp(-z * z);
      const std::size_t k = g.idx(i, j);
      s.psi[k] = amp * b;
      s.zeta[k] = -0.5 * amp * b;
    }
  for (int j = 0; j < static_cast<int>(g.cols()); ++j) {
    s.psi[g.idx(g.n1, j)] = 0.0;
    s.zeta[g.idx(g.n1, j)] = 0.0;
  }
  if (c.has("init.norm3")) {
    const double target = c.num("init.norm3");
    const double have = weighted_norm_state(s, 3, ctx.beta, g);
    if (!(have > 0.0)) throw ConfigError("init bump is identically zero");
    const double scale = target / have;
    for (auto* f : s.comps())
      if (f)
        for (auto& v : *f) v *= scale;
  }
  return s;
}

}  // namespace epsh
