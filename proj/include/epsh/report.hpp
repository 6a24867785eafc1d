#ifndef EPSH_REPORT_HPP
#define EPSH_REPORT_HPP

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace epsh {

// One diagnostic sample of a run; serialized as one NDJSON object per
// line with "schema": 1.
struct RunRecord {
  double t = 0.0;
  double dt = 0.0;
  std::uint64_t step = 0;
  std::array<double, 4> psi_norm{};    // ||Psi||_{k,beta}, k = 0..3
  std::array<double, 3> sigma_norm{};  // ||sigma||_{k,beta}, k = 0..2
  double energy = 0.0;
  double sup_psi = 0.0;
  double sup_sigma = 0.0;
  double wall_eig_F = 0.0;       // min eig of the wall flux form
  double wall_eig_normal = 0.0;  // min characteristic speed through the wall
  double bounds_margin_low = 0.0;
  double bounds_margin_high = 0.0;
  double rhs_norm = 0.0;         // ||dPsi/dt||_{0,beta}
  double n3_running = 0.0;       // running sup of ||Psi||_{3,beta}
};

std::string to_json_line(const RunRecord& r);

// Append-only NDJSON sink; every record is flushed so a crashed run
// still leaves a parseable file.
class NdjsonWriter {
public:
  explicit NdjsonWriter(const std::string& path);
  void write(const RunRecord& r);
  void write_event(const std::string& kind, const std::string& detail);

private:
  std::ofstream out_;
  double last_t_ = -1e300;
};

// Parses an NDJSON run file, skipping any trailing partial line.
std::vector<RunRecord> read_run_records(const std::string& path);

struct Finding {
  std::string what;
  double t = 0.0;
};

// Energy should not increase between diagnostic samples once the initial
// transient (first `skip_fraction` of the run) has passed; violations are
// reported, not fatal.
std::vector<Finding> check_energy_monotone(const std::vector<RunRecord>& recs,
                                           double skip_fraction = 0.05,
                                           double rel_slack = 1e-10);

// Renders records into a plain-text summary, a flat CSV, and a gnuplot
// script next to it. Pure file-to-file transformation.
void render_report(const std::string& ndjson_path, const std::string& out_dir);

}  // namespace epsh

#endif
