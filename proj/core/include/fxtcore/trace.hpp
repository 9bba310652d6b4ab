#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace fxt {

/// One logged step of a closed-loop run. Oracle columns are ground-truth
/// diagnostics; they are written by the runner and never read back into
/// the controller or estimator.
struct TraceRow {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  Eigen::VectorXd theta_hat;
  double eta = 0.0;
  std::vector<double> h;
  std::vector<double> h_r;
  double oracle_V = 0.0;           // V(theta~_R)
  double oracle_theta_err = 0.0;   // ||theta~||
  double oracle_theta_R_inf = 0.0; // ||theta~_R||_inf
  double oracle_M_theta_err = 0.0; // ||M theta~||
  double oracle_xi = 0.0;          // ||e - W theta~|| (predictor runs)
  double sigma_min_M = 0.0;
  int qp_status = 0;               // 0 optimal, 1 infeasible, 2 max_iter
  bool nullspace_ok = true;
  double tracking_err = 0.0;       // position error vs reference, 0 for gap
};

struct TraceSummary {
  bool converged = false;
  double convergence_time_s = -1.0;
  double theoretical_T_s = 0.0;
  double min_h = 0.0;
  double min_h_r = 0.0;
  double sigma_lb_realized = 0.0;
  double tracking_rms = 0.0;
  double max_xi = 0.0;
  double max_disturbance = 0.0;
  double final_goal_dist = 0.0;
  int qp_failures = 0;
  bool nullspace_constant = true;
};

struct SimulationTrace {
  std::vector<std::string> h_names;
  std::vector<TraceRow> rows;
  TraceSummary summary;
};

/// CSV with a fixed, documented column order; one row per logged step.
void write_trace_csv(const SimulationTrace& trace, const std::string& path);
SimulationTrace read_trace_csv(const std::string& path);

std::string summary_to_json(const TraceSummary& summary);
void write_summary_json(const TraceSummary& summary, const std::string& path);

}  // namespace fxt
