#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dampflow/params.hpp"

namespace dampflow::checks {

/// One asserted property: pass iff value <= threshold, unless noted.
struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::vector<std::pair<std::string, double>> details;
};

/// Max over t of |mass(t) - M| / M, with mass by per-cell quadrature of the
/// profile over 400 cells spanning the support. Threshold 1e-8.
CheckResult barenblatt_mass(const GasModel& model, double mass, const std::vector<double>& times);

/// Observed orders of the PME residual for h = 1e-2, 5e-3, 2.5e-3 at time t.
/// value is the largest |order - 2|, threshold 0.2.
CheckResult pme_order(const GasModel& model, double mass, double t);

/// Max relative gap between rho u and the Darcy momentum at 100 interior
/// points for each time. Threshold 1e-6.
CheckResult darcy_identity(const GasModel& model, double mass, const std::vector<double>& times);

/// Second normalized moment of (1 - z^2)^lambda against (gamma - 1)/(2 gamma).
/// Threshold 1e-10.
CheckResult second_moment(const GasModel& model);

/// Quadratic-weight entropy pair against the mechanical energy on a 50 x 50
/// grid of (rho, u) in (0, 2] x [-2, 2], relative to max(1, |eta_e|).
/// Threshold 1e-8.
CheckResult energy_identity(const GasModel& model);

/// Fitted log-log slopes of the weighted norms against the closed-form
/// exponents: (1, 0, 1), (0, 2, (gamma+1)/gamma) and the acceleration norm
/// with delta = 0, p = 2 and delta = 1, p = 1. Threshold 1e-3.
CheckResult norm_slopes(const GasModel& model, double mass);

}  // namespace dampflow::checks
