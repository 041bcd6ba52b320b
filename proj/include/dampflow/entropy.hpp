#pragma once

#include <functional>

#include "dampflow/params.hpp"

namespace dampflow::entropy {

enum class WeightKind { quadratic, power, custom };

/// Generating function g of a weak entropy pair.
struct EntropyWeight {
    WeightKind kind = WeightKind::quadratic;
    std::function<double(double)> g;
    /// Divide by the mass of (1 - z^2)^lambda.
    bool normalized = true;

    /// g = xi^2 / 2, normalized measure.
    static EntropyWeight quadratic();
    /// g = |xi|^{2 gamma / (gamma - 1)}, raw measure.
    static EntropyWeight power();
    static EntropyWeight custom(std::function<double(double)> g, bool normalized = false);
};

struct EntropyPair {
    double eta = 0.0;
    double q = 0.0;
};

/// (rho^{gamma-1} - (xi - u)^2)_+^lambda; zero at vacuum.
double chi(const GasModel& model, double xi, double rho, double u);

/// Throws DomainError for rho < 0 or vacuum with m != 0.
EntropyPair entropy_pair(const GasModel& model, const EntropyWeight& weight, double rho,
                         double m);

double mechanical_energy(const GasModel& model, double rho, double m);
double mechanical_energy_flux(const GasModel& model, double rho, double m);

/// x^g - y^g - g y^{g-1} (x - y) for x, y >= 0, without cancellation near x = y.
double bregman_power(double g, double x, double y);

struct RelativeEntropyValue {
    double eta_star = 0.0;
    double p_star = 0.0;
    double q_star_flux = 0.0;
    double q_quad = 0.0;
};

/// Relative mechanical energy of (rho, m) with respect to (rho_bar, m_bar).
/// Velocities at vacuum are taken as 0. Throws DomainError when a vacuum
/// state carries momentum.
RelativeEntropyValue relative_entropy(const GasModel& model, double rho, double m,
                                      double rho_bar, double m_bar);

/// eta_e(v) - eta_e(vbar) - grad eta_e(vbar) (v - vbar), evaluated literally.
double relative_entropy_definitional(const GasModel& model, double rho, double m,
                                     double rho_bar, double m_bar);

/// Integral of |b + z|^{2/(gamma-1)} (1 - z^2)^lambda over [-1, 1].
double h_function(const GasModel& model, double b);

/// rho a times the integral of sign(a + z) |a + z|^{(3-gamma)/(gamma-1)} (1 - z^2)^lambda.
double h1_function(const GasModel& model, double rho, double a);

/// Remainder of the power entropy after C1 rho^{gamma+1} + C2 m^2; zero at vacuum.
double B_function(const GasModel& model, double rho, double m);

/// The same remainder by subtraction from the power entropy pair.
double B_by_subtraction(const GasModel& model, double rho, double m);

}  // namespace dampflow::entropy
