#pragma once

#include "fxtcore/config.hpp"
#include "fxtcore/trace.hpp"

namespace fxt {

/// Runs one closed-loop scenario to completion. Ground-truth quantities are
/// computed for the oracle columns only; the controller and estimator see
/// nothing derived from true_params.
SimulationTrace run_closed_loop(const ScenarioConfig& cfg);

}  // namespace fxt
