#include "fxtcore/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fxtcore/errors.hpp"

namespace fxt {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vec_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_from_json(const json& arr) {
  if (arr.size() != static_cast<std::size_t>(N))
    throw ConfigError("config: expected array of length " + std::to_string(N));
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

std::string kind_name(ScenarioKind k) {
  return k == ScenarioKind::gap ? "gap" : "quadrotor";
}

std::string scheme_name(EstimatorScheme s) {
  switch (s) {
    case EstimatorScheme::rate: return "rate";
    case EstimatorScheme::predictor: return "predictor";
    default: return "none";
  }
}

std::string wind_name(WindKind w) {
  switch (w) {
    case WindKind::constant_wind: return "constant_wind";
    case WindKind::gusty_wind: return "gusty_wind";
    default: return "none";
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (dt_s <= 0.0) throw ConfigError("config: dt_s must be positive");
  if (horizon_s < dt_s) throw ConfigError("config: horizon_s must be >= dt_s");
  if (log_every < 1) throw ConfigError("config: log_every must be >= 1");
  if (substeps < 1) throw ConfigError("config: substeps must be >= 1");
  if (gain_mu <= 2.0) throw ConfigError("config: gain_mu must exceed 2");
  if (gamma_diag.size() == 0 || (gamma_diag.array() <= 0.0).any())
    throw ConfigError("config: gamma_diag must be strictly positive");
  if (theta_true.size() != theta_lo.size() || theta_lo.size() != theta_hi.size() ||
      theta_hat0.size() != theta_true.size())
    throw ConfigError("config: parameter vector sizes disagree");
  if ((theta_true.array() < theta_lo.array()).any() ||
      (theta_true.array() > theta_hi.array()).any())
    throw ConfigError("config: theta_true outside the admissible box");
  if ((theta_hat0.array() < theta_lo.array()).any() ||
      (theta_hat0.array() > theta_hi.array()).any())
    throw ConfigError("config: theta_hat0 outside the admissible box");
}

std::string config_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["kind"] = kind_name(c.kind);
  j["dt_s"] = c.dt_s;
  j["horizon_s"] = c.horizon_s;
  j["log_every"] = c.log_every;
  j["substeps"] = c.substeps;
  j["scheme"] = scheme_name(c.scheme);
  j["gamma_diag"] = vec_to_json(c.gamma_diag);
  j["gain_a"] = c.gain_a;
  j["gain_b"] = c.gain_b;
  j["gain_mu"] = c.gain_mu;
  j["gain_ke"] = c.gain_ke;
  j["warmup_s"] = c.warmup_s;
  j["sigma_lb_config"] = c.sigma_lb_config;
  j["exact_rate"] = c.exact_rate;
  j["robust_k"] = c.robust_k;
  j["theta_true"] = vec_to_json(c.theta_true);
  j["theta_lo"] = vec_to_json(c.theta_lo);
  j["theta_hi"] = vec_to_json(c.theta_hi);
  j["theta_hat0"] = vec_to_json(c.theta_hat0);
  j["full_rank"] = c.full_rank;
  j["K_delta"] = c.K_delta;
  j["f1_hz"] = c.f1_hz;
  j["f2_hz"] = c.f2_hz;
  j["rd_a"] = c.rd_a;
  j["start_m"] = vec_to_json(c.start);
  j["u_bar"] = c.u_bar;
  j["clf_KV"] = c.clf_KV;
  j["clf_c1"] = c.clf_c1;
  j["clf_c2"] = c.clf_c2;
  j["clf_mu"] = c.clf_mu;
  j["gap_q0"] = c.gap_q0;
  j["gap_pi"] = c.gap_pi;
  j["gap_delta_lb"] = c.gap_delta_lb;
  j["ellipse1_center_m"] = vec_to_json(c.ellipse1_center);
  j["ellipse2_center_m"] = vec_to_json(c.ellipse2_center);
  j["ellipse_axes_m"] = vec_to_json(c.ellipse_axes);
  j["goal_tol_m"] = c.goal_tol_m;
  j["mass_kg"] = c.mass_kg;
  j["J_kgm2"] = vec_to_json(c.J_kgm2);
  j["wind"] = wind_name(c.wind);
  j["wind_mps"] = vec_to_json(c.wind_mps);
  j["gust_tau_s"] = c.gust_tau_s;
  j["gust_sigma_mps"] = c.gust_sigma_mps;
  j["seed"] = c.seed;
  j["cz_m"] = c.cz_m;
  j["pz_m"] = c.pz_m;
  j["nz"] = c.nz;
  j["alpha_max_rad"] = c.alpha_max_rad;
  j["track_p1"] = c.track_p1;
  j["track_p2"] = c.track_p2;
  j["track_delta_lb"] = c.track_delta_lb;
  j["lemniscate_amp_m"] = c.lemniscate_amp_m;
  j["lemniscate_period_s"] = c.lemniscate_period_s;
  j["lemniscate_alt_m"] = c.lemniscate_alt_m;
  j["u_max"] = vec_to_json(c.u_max);
  j["conv_tol"] = c.conv_tol;
  return j.dump(2);
}

ScenarioConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "gap") c.kind = ScenarioKind::gap;
    else if (kind == "quadrotor") c.kind = ScenarioKind::quadrotor;
    else throw ConfigError("config: unknown kind " + kind);
    c.dt_s = j.at("dt_s").get<double>();
    c.horizon_s = j.at("horizon_s").get<double>();
    c.log_every = j.at("log_every").get<int>();
    c.substeps = j.at("substeps").get<int>();
    const auto scheme = j.at("scheme").get<std::string>();
    if (scheme == "rate") c.scheme = EstimatorScheme::rate;
    else if (scheme == "predictor") c.scheme = EstimatorScheme::predictor;
    else if (scheme == "none") c.scheme = EstimatorScheme::none;
    else throw ConfigError("config: unknown scheme " + scheme);
    c.gamma_diag = vec_from_json(j.at("gamma_diag"));
    c.gain_a = j.at("gain_a").get<double>();
    c.gain_b = j.at("gain_b").get<double>();
    c.gain_mu = j.at("gain_mu").get<double>();
    c.gain_ke = j.at("gain_ke").get<double>();
    c.warmup_s = j.at("warmup_s").get<double>();
    c.sigma_lb_config = j.at("sigma_lb_config").get<double>();
    c.exact_rate = j.at("exact_rate").get<bool>();
    c.robust_k = j.at("robust_k").get<double>();
    c.theta_true = vec_from_json(j.at("theta_true"));
    c.theta_lo = vec_from_json(j.at("theta_lo"));
    c.theta_hi = vec_from_json(j.at("theta_hi"));
    c.theta_hat0 = vec_from_json(j.at("theta_hat0"));
    c.full_rank = j.at("full_rank").get<bool>();
    c.K_delta = j.at("K_delta").get<double>();
    c.f1_hz = j.at("f1_hz").get<double>();
    c.f2_hz = j.at("f2_hz").get<double>();
    c.rd_a = j.at("rd_a").get<double>();
    c.start = fixed_from_json<2>(j.at("start_m"));
    c.u_bar = j.at("u_bar").get<double>();
    c.clf_KV = j.at("clf_KV").get<double>();
    c.clf_c1 = j.at("clf_c1").get<double>();
    c.clf_c2 = j.at("clf_c2").get<double>();
    c.clf_mu = j.at("clf_mu").get<double>();
    c.gap_q0 = j.at("gap_q0").get<double>();
    c.gap_pi = j.at("gap_pi").get<double>();
    c.gap_delta_lb = j.at("gap_delta_lb").get<double>();
    c.ellipse1_center = fixed_from_json<2>(j.at("ellipse1_center_m"));
    c.ellipse2_center = fixed_from_json<2>(j.at("ellipse2_center_m"));
    c.ellipse_axes = fixed_from_json<2>(j.at("ellipse_axes_m"));
    c.goal_tol_m = j.at("goal_tol_m").get<double>();
    c.mass_kg = j.at("mass_kg").get<double>();
    c.J_kgm2 = fixed_from_json<3>(j.at("J_kgm2"));
    const auto wind = j.at("wind").get<std::string>();
    if (wind == "none") c.wind = WindKind::none;
    else if (wind == "constant_wind") c.wind = WindKind::constant_wind;
    else if (wind == "gusty_wind") c.wind = WindKind::gusty_wind;
    else throw ConfigError("config: unknown wind " + wind);
    c.wind_mps = fixed_from_json<3>(j.at("wind_mps"));
    c.gust_tau_s = j.at("gust_tau_s").get<double>();
    c.gust_sigma_mps = j.at("gust_sigma_mps").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.cz_m = j.at("cz_m").get<double>();
    c.pz_m = j.at("pz_m").get<double>();
    c.nz = j.at("nz").get<int>();
    c.alpha_max_rad = j.at("alpha_max_rad").get<double>();
    c.track_p1 = j.at("track_p1").get<double>();
    c.track_p2 = j.at("track_p2").get<double>();
    c.track_delta_lb = j.at("track_delta_lb").get<double>();
    c.lemniscate_amp_m = j.at("lemniscate_amp_m").get<double>();
    c.lemniscate_period_s = j.at("lemniscate_period_s").get<double>();
    c.lemniscate_alt_m = j.at("lemniscate_alt_m").get<double>();
    c.u_max = fixed_from_json<4>(j.at("u_max"));
    c.conv_tol = j.at("conv_tol").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  c.validate();
  return c;
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("save_config: cannot open " + path);
  out << config_to_json(cfg) << '\n';
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace fxt
