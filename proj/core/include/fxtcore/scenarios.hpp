#pragma once

#include "fxtcore/config.hpp"
#include "fxtcore/controllers.hpp"
#include "fxtcore/systems.hpp"

namespace fxt {

/// Goal-reaching through the gap between two ellipses; rate-measurement
/// estimation with the fixed-time law.
ScenarioConfig shoot_the_gap_scenario(IntegratorVariant variant);

/// Lemniscate tracking in wind; state-predictor estimation. adaptation =
/// false freezes theta_hat for the comparison run.
ScenarioConfig quadrotor_scenario(WindKind wind, bool adaptation);

/// Gerono lemniscate x = A sin(wt), y = A sin(wt) cos(wt) at fixed altitude.
ReferencePoint lemniscate_reference(double t, double amplitude_m, double period_s,
                                    double altitude_m);

/// Model factories driven by the config.
SystemModel make_gap_model(const ScenarioConfig& cfg);
SystemModel make_quadrotor_model(const ScenarioConfig& cfg);
WindField make_wind_field(const ScenarioConfig& cfg);

}  // namespace fxt
