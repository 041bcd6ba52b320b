#include "dampflow/entropy.hpp"

#include <array>
#include <cmath>

#include "dampflow/errors.hpp"

namespace dampflow::entropy {

namespace {

constexpr double kRelTol = 1e-12;

void check_state(double rho, double m) {
    if (!(rho >= 0.0)) throw DomainError("density must be nonnegative");
    if (rho == 0.0 && m != 0.0) throw DomainError("vacuum state with nonzero momentum");
}

double weighted_kink(const GasModel& model, double point, double exponent, bool odd,
                     const std::function<double(double)>& smooth) {
    const std::array<quad::PowerFactor, 3> factors{
        {{-1.0, model.lambda, false}, {1.0, model.lambda, false}, {point, exponent, odd}}};
    return model.quadrature->kinked.integrate_adaptive(-1.0, 1.0, factors, smooth, kRelTol,
                                                       1e-300);
}

const quad::Rule& legendre_s() {
    static const quad::Rule rule = quad::gauss_legendre(32);
    return rule;
}

}  // namespace

EntropyWeight EntropyWeight::quadratic() {
    return {WeightKind::quadratic, [](double xi) { return 0.5 * xi * xi; }, true};
}

EntropyWeight EntropyWeight::power() { return {WeightKind::power, nullptr, false}; }

EntropyWeight EntropyWeight::custom(std::function<double(double)> g, bool normalized) {
    return {WeightKind::custom, std::move(g), normalized};
}

double chi(const GasModel& model, double xi, double rho, double u) {
    if (!(rho > 0.0)) return 0.0;
    const double d = xi - u;
    const double base = std::pow(rho, model.gamma - 1.0) - d * d;
    if (base <= 0.0) return 0.0;
    return std::pow(base, model.lambda);
}

EntropyPair entropy_pair(const GasModel& model, const EntropyWeight& weight, double rho,
                         double m) {
    check_state(rho, m);
    if (rho == 0.0) return {};
    const double u = m / rho;
    const double c = std::pow(rho, model.theta);
    const double norm = weight.normalized ? model.weight_mass : 1.0;

    EntropyPair out;
    if (weight.kind == WeightKind::power) {
        const double p = model.power_exponent();
        const double a = u / c;
        const double scale = std::pow(rho, model.gamma + 1.0);
        out.eta = scale * weighted_kink(model, -a, p, false, [](double) { return 1.0; }) / norm;
        out.q = scale * c *
                weighted_kink(model, -a, p, false,
                              [&](double z) { return a + model.theta * z; }) /
                norm;
        return out;
    }
    const auto& g = weight.g;
    out.eta = rho * weighted_integral(model, [&](double z) { return g(u + z * c); }) / norm;
    out.q = rho *
            weighted_integral(model,
                              [&](double z) { return g(u + z * c) * (u + model.theta * z * c); }) /
            norm;
    return out;
}

double mechanical_energy(const GasModel& model, double rho, double m) {
    if (!(rho > 0.0)) return 0.0;
    return 0.5 * m * m / rho + model.kappa / (model.gamma - 1.0) * std::pow(rho, model.gamma);
}

double mechanical_energy_flux(const GasModel& model, double rho, double m) {
    if (!(rho > 0.0)) return 0.0;
    const double u = m / rho;
    return 0.5 * m * u * u +
           model.kappa * model.gamma / (model.gamma - 1.0) * std::pow(rho, model.gamma) * u;
}

double bregman_power(double g, double x, double y) {
    if (y == 0.0) return std::pow(x, g);
    if (x == 0.0) return (g - 1.0) * std::pow(y, g);
    const double d = (x - y) / y;
    const double yg = std::pow(y, g);
    if (std::abs(d) < 0.25) {
        double coef = g * (g - 1.0) / 2.0;
        double dk = d * d;
        double sum = 0.0;
        for (int k = 2; k < 400; ++k) {
            const double term = coef * dk;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            coef *= (g - k) / (k + 1.0);
            dk *= d;
        }
        return yg * sum;
    }
    return yg * (std::pow(1.0 + d, g) - 1.0 - g * d);
}

RelativeEntropyValue relative_entropy(const GasModel& model, double rho, double m,
                                      double rho_bar, double m_bar) {
    check_state(rho, m);
    check_state(rho_bar, m_bar);
    const double g = model.gamma;
    const double u = rho > 0.0 ? m / rho : 0.0;
    const double ub = rho_bar > 0.0 ? m_bar / rho_bar : 0.0;

    RelativeEntropyValue r;
    r.p_star = bregman_power(g, rho, rho_bar);
    const double du = u - ub;
    r.q_quad = rho * du * du;
    r.eta_star = 0.5 * r.q_quad + model.kappa / (g - 1.0) * r.p_star;

    const double grad_rho =
        -0.5 * ub * ub + model.kappa * g / (g - 1.0) * std::pow(rho_bar, g - 1.0);
    const double f1 = m - m_bar;
    const double f2 = (m * u + model.pressure(rho)) - (m_bar * ub + model.pressure(rho_bar));
    r.q_star_flux = mechanical_energy_flux(model, rho, m) -
                    mechanical_energy_flux(model, rho_bar, m_bar) - grad_rho * f1 - ub * f2;
    return r;
}

double relative_entropy_definitional(const GasModel& model, double rho, double m,
                                     double rho_bar, double m_bar) {
    check_state(rho, m);
    check_state(rho_bar, m_bar);
    const double g = model.gamma;
    const double ub = rho_bar > 0.0 ? m_bar / rho_bar : 0.0;
    const double grad_rho =
        -0.5 * ub * ub + model.kappa * g / (g - 1.0) * std::pow(rho_bar, g - 1.0);
    return mechanical_energy(model, rho, m) - mechanical_energy(model, rho_bar, m_bar) -
           grad_rho * (rho - rho_bar) - ub * (m - m_bar);
}

double h_function(const GasModel& model, double b) {
    return weighted_kink(model, -b, model.h_exponent(), false, [](double) { return 1.0; });
}

double h1_function(const GasModel& model, double rho, double a) {
    const double integral =
        weighted_kink(model, -a, model.h_exponent() - 1.0, true, [](double) { return 1.0; });
    return rho * a * integral;
}

double B_function(const GasModel& model, double rho, double m) {
    check_state(rho, m);
    if (rho == 0.0 || m == 0.0) return 0.0;
    const double g = model.gamma;
    const double a = m / std::pow(rho, 1.0 + model.theta);
    const double h0 = h_function(model, 0.0);
    const double k = 2.0 * g * (g + 1.0) / ((g - 1.0) * (g - 1.0));

    // h(s a) loses smoothness where s a crosses +-1
    std::array<double, 3> cuts{0.0, 1.0, 1.0};
    int n_cuts = 2;
    if (std::abs(a) > 1.0) {
        cuts = {0.0, 1.0 / std::abs(a), 1.0};
        n_cuts = 3;
    }
    const quad::Rule& rule = legendre_s();
    double total = 0.0;
    for (int piece = 0; piece + 1 < n_cuts; ++piece) {
        const double lo = cuts[piece];
        const double half = 0.5 * (cuts[piece + 1] - lo);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = lo + (rule.nodes[i] + 1.0) * half;
            total += half * rule.weights[i] * (1.0 - s) * (h_function(model, s * a) - h0);
        }
    }
    return m * m * k * total;
}

double B_by_subtraction(const GasModel& model, double rho, double m) {
    check_state(rho, m);
    if (rho == 0.0) return 0.0;
    const EntropyPair pw = entropy_pair(model, EntropyWeight::power(), rho, m);
    return pw.eta - model.c1 * std::pow(rho, model.gamma + 1.0) - model.c2 * m * m;
}

}  // namespace dampflow::entropy
