#include "fxtcore/trace.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fxtcore/errors.hpp"

namespace fxt {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_trace_csv: cannot open " + path);
  out << std::setprecision(17);

  const int nx = trace.rows.empty() ? 0 : static_cast<int>(trace.rows.front().x.size());
  const int nu = trace.rows.empty() ? 0 : static_cast<int>(trace.rows.front().u.size());
  const int np =
      trace.rows.empty() ? 0 : static_cast<int>(trace.rows.front().theta_hat.size());

  out << "t";
  for (int i = 0; i < nx; ++i) out << ",x" << i;
  for (int i = 0; i < nu; ++i) out << ",u" << i;
  for (int i = 0; i < np; ++i) out << ",theta_hat" << i;
  out << ",eta";
  for (const auto& name : trace.h_names) out << ",h_" << name;
  for (const auto& name : trace.h_names) out << ",hr_" << name;
  out << ",oracle/V,oracle/theta_err,oracle/theta_R_inf,oracle/M_theta_err,"
         "oracle/xi,sigma_min_M,qp_status,nullspace_ok,tracking_err\n";

  for (const auto& row : trace.rows) {
    out << row.t;
    for (int i = 0; i < nx; ++i) out << ',' << row.x(i);
    for (int i = 0; i < nu; ++i) out << ',' << row.u(i);
    for (int i = 0; i < np; ++i) out << ',' << row.theta_hat(i);
    out << ',' << row.eta;
    for (double v : row.h) out << ',' << v;
    for (double v : row.h_r) out << ',' << v;
    out << ',' << row.oracle_V << ',' << row.oracle_theta_err << ','
        << row.oracle_theta_R_inf << ',' << row.oracle_M_theta_err << ','
        << row.oracle_xi << ',' << row.sigma_min_M << ',' << row.qp_status << ','
        << (row.nullspace_ok ? 1 : 0) << ',' << row.tracking_err << '\n';
  }
}

SimulationTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("read_trace_csv: empty file");
  const auto header = split_csv_line(line);

  int nx = 0, nu = 0, np = 0;
  SimulationTrace trace;
  for (const auto& col : header) {
    if (col.rfind("x", 0) == 0 && col.size() > 1 && std::isdigit(col[1])) ++nx;
    if (col.rfind("u", 0) == 0 && col.size() > 1 && std::isdigit(col[1])) ++nu;
    if (col.rfind("theta_hat", 0) == 0) ++np;
    if (col.rfind("h_", 0) == 0) trace.h_names.push_back(col.substr(2));
  }
  const int nh = static_cast<int>(trace.h_names.size());

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != static_cast<int>(header.size()))
      throw ConfigError("read_trace_csv: ragged row");
    TraceRow row;
    int idx = 0;
    auto next = [&]() { return std::stod(fields[static_cast<std::size_t>(idx++)]); };
    row.t = next();
    row.x.resize(nx);
    for (int i = 0; i < nx; ++i) row.x(i) = next();
    row.u.resize(nu);
    for (int i = 0; i < nu; ++i) row.u(i) = next();
    row.theta_hat.resize(np);
    for (int i = 0; i < np; ++i) row.theta_hat(i) = next();
    row.eta = next();
    for (int i = 0; i < nh; ++i) row.h.push_back(next());
    for (int i = 0; i < nh; ++i) row.h_r.push_back(next());
    row.oracle_V = next();
    row.oracle_theta_err = next();
    row.oracle_theta_R_inf = next();
    row.oracle_M_theta_err = next();
    row.oracle_xi = next();
    row.sigma_min_M = next();
    row.qp_status = static_cast<int>(next());
    row.nullspace_ok = next() != 0.0;
    row.tracking_err = next();
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

std::string summary_to_json(const TraceSummary& s) {
  nlohmann::json j;
  j["converged"] = s.converged;
  j["convergence_time_s"] = s.convergence_time_s;
  j["theoretical_T_s"] = s.theoretical_T_s;
  j["min_h"] = s.min_h;
  j["min_h_r"] = s.min_h_r;
  j["sigma_lb_realized"] = s.sigma_lb_realized;
  j["tracking_rms"] = s.tracking_rms;
  j["max_xi"] = s.max_xi;
  j["max_disturbance"] = s.max_disturbance;
  j["final_goal_dist"] = s.final_goal_dist;
  j["qp_failures"] = s.qp_failures;
  j["nullspace_constant"] = s.nullspace_constant;
  return j.dump(2);
}

void write_summary_json(const TraceSummary& summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_summary_json: cannot open " + path);
  out << summary_to_json(summary) << '\n';
}

}  // namespace fxt
