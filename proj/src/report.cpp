#include "epsh/report.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "epsh/errors.hpp"
#include "epsh/sheath1d.hpp"

namespace epsh {

using nlohmann::json;

namespace {

json to_json(const RunRecord& r) {
  json j;
  j["schema"] = 1;
  j["t"] = r.t;
  j["dt"] = r.dt;
  j["step"] = r.step;
  j["psi_norm"] = r.psi_norm;
  j["sigma_norm"] = r.sigma_norm;
  j["energy"] = r.energy;
  j["sup_psi"] = r.sup_psi;
  j["sup_sigma"] = r.sup_sigma;
  j["wall_eig_F"] = r.wall_eig_F;
  j["wall_eig_normal"] = r.wall_eig_normal;
  j["bounds_margin_low"] = r.bounds_margin_low;
  j["bounds_margin_high"] = r.bounds_margin_high;
  j["rhs_norm"] = r.rhs_norm;
  j["n3_running"] = r.n3_running;
  return j;
}

RunRecord from_json(const json& j) {
  RunRecord r;
  r.t = j.at("t").get<double>();
  r.dt = j.value("dt", 0.0);
  r.step = j.value("step", std::uint64_t{0});
  const auto pn = j.at("psi_norm");
  for (int k = 0; k < 4; ++k) r.psi_norm[k] = pn.at(k).get<double>();
  const auto sn = j.at("sigma_norm");
  for (int k = 0; k < 3; ++k) r.sigma_norm[k] = sn.at(k).get<double>();
  r.energy = j.value("energy", 0.0);
  r.sup_psi = j.value("sup_psi", 0.0);
  r.sup_sigma = j.value("sup_sigma", 0.0);
  r.wall_eig_F = j.value("wall_eig_F", 0.0);
  r.wall_eig_normal = j.value("wall_eig_normal", 0.0);
  r.bounds_margin_low = j.value("bounds_margin_low", 0.0);
  r.bounds_margin_high = j.value("bounds_margin_high", 0.0);
  r.rhs_norm = j.value("rhs_norm", 0.0);
  r.n3_running = j.value("n3_running", 0.0);
  return r;
}

}  // namespace

std::string to_json_line(const RunRecord& r) { return to_json(r).dump(); }

NdjsonWriter::NdjsonWriter(const std::string& path)
    : out_(path, std::ios::out | std::ios::app) {
  if (!out_) throw ConfigError("cannot open " + path + " for writing");
}

void NdjsonWriter::write(const RunRecord& r) {
  if (!(r.t > last_t_) && last_t_ != -1e300)
    throw ConfigError("diagnostic records must have increasing time");
  for (double v : r.psi_norm)
    if (!std::isfinite(v) || v < 0.0)
      throw ConfigError("diagnostic norms must be finite and nonnegative");
  last_t_ = r.t;
  out_ << to_json_line(r) << '\n';
  out_.flush();
}

void NdjsonWriter::write_event(const std::string& kind,
                               const std::string& detail) {
  json j;
  j["schema"] = 1;
  j["event"] = kind;
  j["detail"] = detail;
  out_ << j.dump() << '\n';
  out_.flush();
}

std::vector<RunRecord> read_run_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);  // tolerate a torn tail line
    if (j.is_discarded()) continue;
    if (j.value("schema", 0) != 1) continue;
    if (j.contains("event")) continue;
    out.push_back(from_json(j));
  }
  return out;
}

std::vector<Finding> check_energy_monotone(const std::vector<RunRecord>& recs,
                                           double skip_fraction,
                                           double rel_slack) {
  std::vector<Finding> out;
  if (recs.size() < 3) return out;
  const double t0 = recs.front().t, t1 = recs.back().t;
  const double start = t0 + skip_fraction * (t1 - t0);
  const double slack = rel_slack * std::abs(recs.front().energy);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i - 1].t < start) continue;
    if (recs[i].energy > recs[i - 1].energy + slack)
      out.push_back({"energy increased between diagnostics", recs[i].t});
  }
  return out;
}

void render_report(const std::string& ndjson_path, const std::string& out_dir) {
  const auto recs = read_run_records(ndjson_path);
  if (recs.empty()) throw ConfigError("no records in " + ndjson_path);
  std::filesystem::create_directories(out_dir);

  const std::string csv_path = out_dir + "/report.csv";
  {
    std::ofstream csv(csv_path);
    csv << "t,psi0,psi1,psi2,psi3,sigma0,sigma1,sigma2,energy,sup_psi,"
           "sup_sigma,wall_eig_F,wall_eig_normal,rhs_norm,n3_running\n";
    csv << std::setprecision(17);
    for (const auto& r : recs) {
      csv << r.t;
      for (double v : r.psi_norm) csv << ',' << v;
      for (double v : r.sigma_norm) csv << ',' << v;
      csv << ',' << r.energy << ',' << r.sup_psi << ',' << r.sup_sigma << ','
          << r.wall_eig_F << ',' << r.wall_eig_normal << ',' << r.rhs_norm
          << ',' << r.n3_running << '\n';
    }
  }

  // decay rate of the base norm over the middle half of the window
  double lambda = 0.0;
  bool fitted = false;
  {
    std::vector<double> xs, ys;
    const double t0 = recs.front().t, t1 = recs.back().t;
    for (const auto& r : recs) {
      if (r.t < t0 + 0.25 * (t1 - t0) || r.t > t0 + 0.75 * (t1 - t0)) continue;
      if (r.psi_norm[0] <= 0.0) continue;
      xs.push_back(r.t);
      ys.push_back(-std::log(r.psi_norm[0]));
    }
    if (xs.size() >= 4 && xs.back() > xs.front()) {
      lambda = least_squares_slope(xs, ys);
      fitted = true;
    }
  }

  {
    std::ofstream txt(out_dir + "/summary.txt");
    txt << "records: " << recs.size() << "\n";
    txt << "time span: [" << recs.front().t << ", " << recs.back().t << "]\n";
    txt << std::setprecision(6);
    txt << "psi norm (0,beta): first " << recs.front().psi_norm[0] << " final "
        << recs.back().psi_norm[0] << "\n";
    txt << "energy: first " << recs.front().energy << " final "
        << recs.back().energy << "\n";
    txt << "sup |psi| final: " << recs.back().sup_psi << "\n";
    txt << "wall margins final: eig_F " << recs.back().wall_eig_F
        << "  normal " << recs.back().wall_eig_normal << "\n";
    txt << "rhs norm final: " << recs.back().rhs_norm << "\n";
    if (fitted) txt << "fitted decay rate of |psi|_0,beta: " << lambda << "\n";
    const auto findings = check_energy_monotone(recs);
    txt << "energy monotonicity findings: " << findings.size() << "\n";
    for (const auto& f : findings)
      txt << "  t = " << f.t << ": " << f.what << "\n";
  }

  {
    std::ofstream gp(out_dir + "/plot.gp");
    gp << "set datafile separator ','\n";
    gp << "set key autotitle columnhead\n";
    gp << "set logscale y\n";
    gp << "set xlabel 't'\n";
    gp << "set terminal pngcairo size 1000,700\n";
    gp << "set output 'norms.png'\n";
    gp << "plot 'report.csv' using 1:2 with lines title 'psi 0', \\\n";
    gp << "     'report.csv' using 1:5 with lines title 'psi 3', \\\n";
    gp << "     'report.csv' using 1:9 with lines title 'energy', \\\n";
    gp << "     'report.csv' using 1:14 with lines title 'rhs norm'\n";
    gp << "set output 'margins.png'\n";
    gp << "unset logscale y\n";
    gp << "plot 'report.csv' using 1:12 with lines title 'wall eig F', \\\n";
    gp << "     'report.csv' using 1:13 with lines title 'wall normal'\n";
  }
}

}  // namespace epsh
