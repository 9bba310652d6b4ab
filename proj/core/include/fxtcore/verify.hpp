#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fxtcore/qp.hpp"

namespace fxt {

/// Outcome of one randomized property suite. The first violating instance,
/// if any, is serialized so a failure is reproducible from the report alone.
struct PropertyReport {
  std::string suite;
  int samples = 0;
  int violations = 0;
  std::string first_counterexample;  // JSON, empty when clean
};

/// Bound callbacks are injectable so tests can mutate them and confirm the
/// suites actually detect a wrong inequality.
using PairingBoundFn =
    std::function<double(double x_norm, double a, double b, double m, double B_y)>;
using SettlingBoundFn = std::function<double(double c1, double c2, double c3,
                                             double mu, double k, double V0)>;

/// Numerical oracle for the settling integral
///   I = int_{V0}^{1} dV / (-c1 V^{1+1/mu} - c2 V^{1-1/mu} + c3 V)
/// via adaptive Simpson quadrature.
double integrate_settling(double c1, double c2, double c3, double mu, double V0,
                          double rel_tol = 1e-10);

/// Brute-force QP oracle: enumerates every active subset of the stacked
/// inequality rows (including finite bounds) and returns the best feasible
/// KKT point. Intended for small random instances only.
QpSolution solve_qp_enumeration(const QuadraticProgram& qp, double tol = 1e-8);

PropertyReport verify_lemmas(int samples, std::uint64_t seed,
                             PairingBoundFn pairing_bound = {},
                             SettlingBoundFn settling_bound = {});
PropertyReport verify_envelopes(int samples, std::uint64_t seed);
PropertyReport verify_qp(int samples, std::uint64_t seed);

std::string report_to_json(const PropertyReport& report);

}  // namespace fxt
