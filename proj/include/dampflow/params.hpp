#pragma once

#include <memory>
#include <vector>

#include "dampflow/quadrature.hpp"

namespace dampflow {

/// Precomputed rules for integrals against (1 - z^2)^lambda on [-1, 1].
struct WeightQuadrature {
    /// Kinked integrals; exponents {0, lambda, 2 lambda, 2/(g-1), 2g/(g-1)}.
    quad::PiecewiseJacobi kinked;
    /// Gauss-Gegenbauer rules of increasing order for smooth integrands.
    std::vector<quad::Rule> symmetric;
};

/// One gas and damping configuration with every derived constant.
struct GasModel {
    double gamma = 0.0;
    double nu = 0.0;
    double kappa = 0.0;
    double alpha = 0.0;
    double theta = 0.0;
    double lambda = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    /// Integral of (1 - z^2)^lambda over [-1, 1].
    double weight_mass = 0.0;
    std::shared_ptr<const WeightQuadrature> quadrature;

    /// 2 / (gamma - 1), the exponent of h.
    double h_exponent() const { return 2.0 / (gamma - 1.0); }
    /// 2 gamma / (gamma - 1), the exponent of the power entropy weight.
    double power_exponent() const { return 2.0 * gamma / (gamma - 1.0); }
    double pressure(double rho) const;
    double sound_speed(double rho) const;
};

/// Throws DomainError unless gamma > 1 and 0 <= nu < 1.
GasModel derive_gas_model(double gamma, double nu, int quad_order = 64);

/// Smooth integral of f(z) (1 - z^2)^lambda, Gegenbauer order doubled from the
/// first rule until successive values agree to rel_tol.
double weighted_integral(const GasModel& model, const std::function<double(double)>& f,
                         double rel_tol = 1e-10);

struct RateTable {
    double k = 0.0;
    /// Lgamma exponent with the sign of epsilon as printed (+epsilon).
    double mu = 0.0;
    /// Lgamma exponent with -epsilon, used as the acceptance target.
    double mu_target = 0.0;
    double phi = 0.0;
    double mu_star = 0.0;
    double theta_star = 0.0;
    double omega = 0.0;
    double epsilon = 0.0;
};

/// First branch applies for nu <= gamma / (gamma + 2).
RateTable rate_table(const GasModel& model, double epsilon = 1e-3);

double rate_breakpoint(double gamma);

}  // namespace dampflow
