#include "dampflow/params.hpp"

#include <array>
#include <cmath>

#include "dampflow/errors.hpp"

namespace dampflow {

double GasModel::pressure(double rho) const { return kappa * std::pow(rho, gamma); }

double GasModel::sound_speed(double rho) const { return theta * std::pow(rho, theta); }

GasModel derive_gas_model(double gamma, double nu, int quad_order) {
    if (!(gamma > 1.0) || !std::isfinite(gamma))
        throw DomainError("gamma must be finite and greater than 1");
    if (!(nu >= 0.0 && nu < 1.0)) throw DomainError("nu must lie in [0, 1)");
    if (quad_order < 2) throw DomainError("quadrature order must be at least 2");

    GasModel m;
    m.gamma = gamma;
    m.nu = nu;
    m.kappa = (gamma - 1.0) * (gamma - 1.0) / (4.0 * gamma);
    m.alpha = m.kappa;
    m.theta = 0.5 * (gamma - 1.0);
    m.lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
    m.weight_mass = quad::jacobi_mass(m.lambda, m.lambda);

    const double p = m.power_exponent();
    const double q = m.h_exponent();
    auto wq = std::make_shared<WeightQuadrature>(WeightQuadrature{
        quad::PiecewiseJacobi({0.0, m.lambda, 2.0 * m.lambda, q, p}, {16, 32, 64, 128}), {}});
    for (int order = quad_order; order <= std::max(512, quad_order); order *= 2)
        wq->symmetric.push_back(quad::gauss_jacobi(order, m.lambda, m.lambda));
    m.quadrature = wq;

    const std::array<quad::PowerFactor, 3> factors{
        {{-1.0, m.lambda, false}, {0.0, p, false}, {1.0, m.lambda, false}}};
    m.c1 = m.quadrature->kinked.integrate_adaptive(-1.0, 1.0, factors,
                                                   [](double) { return 1.0; }, 1e-14);
    m.c2 = 2.0 * gamma * (gamma + 1.0) / ((gamma - 1.0) * (gamma - 1.0)) * m.c1;
    return m;
}

double weighted_integral(const GasModel& model, const std::function<double(double)>& f,
                         double rel_tol) {
    auto apply = [&f](const quad::Rule& rule) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
        return s;
    };
    const auto& rules = model.quadrature->symmetric;
    double previous = apply(rules.front());
    for (std::size_t k = 1; k < rules.size(); ++k) {
        const double current = apply(rules[k]);
        if (std::abs(current - previous) <= rel_tol * std::abs(current)) return current;
        previous = current;
    }
    return previous;
}

double rate_breakpoint(double gamma) { return gamma / (gamma + 2.0); }

RateTable rate_table(const GasModel& model, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.01)) throw DomainError("epsilon must lie in (0, 0.01)");
    const double g = model.gamma;
    const double nu = model.nu;
    const double g1 = g + 1.0;
    const bool first = nu <= rate_breakpoint(g);

    RateTable r;
    r.epsilon = epsilon;
    double mu0;
    if (first) {
        r.k = g * (1.0 + nu) / (2.0 * g1 * g1) - epsilon;
        mu0 = (g * g + g - 1.0) * (1.0 + nu) / (g1 * g1);
        r.mu_star = 1.0 + nu - (nu + 1.0) / (2.0 * g1) - epsilon;
        r.theta_star = nu;
    } else {
        r.k = g * (1.0 - nu) / (2.0 * g1) - epsilon;
        mu0 = (2.0 * g - 1.0 - nu) / g1;
        r.mu_star = 1.5 + 0.5 * nu - (nu + 1.0) / g1 - epsilon;
        r.theta_star = (g - nu) / g1;
    }
    r.mu = mu0 + epsilon;
    r.mu_target = mu0 - epsilon;
    r.phi = mu0 - epsilon;
    r.omega = (g - 1.0) * (nu + 1.0) / g1 - epsilon;
    return r;
}

}  // namespace dampflow
