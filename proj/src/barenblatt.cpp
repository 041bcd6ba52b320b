#include "dampflow/barenblatt.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dampflow/errors.hpp"

namespace dampflow::barenblatt {

namespace {

double y_moment(double e, double k) {
    // integral over [-1, 1] of (1 - y^2)^e |y|^k
    return quad::beta_function(0.5 * (k + 1.0), e + 1.0);
}

const quad::Rule& legendre20() {
    static const quad::Rule rule = quad::gauss_legendre(20);
    return rule;
}

}  // namespace

Profile calibrate(const GasModel& model, double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
    Profile p;
    p.model = model;
    p.mass = mass;
    const double g = model.gamma;
    p.b0 = (g - 1.0) * (1.0 + model.nu) / (2.0 * g * (g + 1.0));
    const double shape = quad::jacobi_mass(1.0 / (g - 1.0), 1.0 / (g - 1.0));
    p.a0 = std::pow(mass * std::sqrt(p.b0) / shape, 2.0 * (g - 1.0) / (g + 1.0));
    return p;
}

double density(const Profile& p, double x, double t) {
    const double scale = std::pow(1.0 + t, -p.spread());
    const double xi = x * scale;
    const double base = p.a0 - p.b0 * xi * xi;
    if (base <= 0.0) return 0.0;
    return scale * std::pow(base, 1.0 / (p.model.gamma - 1.0));
}

double support_edge(const Profile& p, double t) {
    return std::sqrt(p.a0 / p.b0) * std::pow(1.0 + t, p.spread());
}

double velocity(const Profile& p, double x, double t) {
    if (std::abs(x) >= support_edge(p, t)) return 0.0;
    return p.spread() * x / (1.0 + t);
}

double momentum(const Profile& p, double x, double t) {
    return density(p, x, t) * velocity(p, x, t);
}

double darcy_momentum(const Profile& p, double x, double t) {
    const double g = p.model.gamma;
    const double scale = std::pow(1.0 + t, -p.spread());
    const double xi = x * scale;
    const double base = p.a0 - p.b0 * xi * xi;
    if (base <= 0.0) return 0.0;
    const double d_power = std::pow(scale, g) * g / (g - 1.0) * std::pow(base, 1.0 / (g - 1.0)) *
                           (-2.0 * p.b0 * xi) * scale;
    return -std::pow(1.0 + t, p.model.nu) * d_power;
}

double acceleration_ratio(const Profile& p, double x, double t) {
    if (std::abs(x) >= support_edge(p, t)) return 0.0;
    const double g = p.model.gamma;
    const double nu = p.model.nu;
    return -(1.0 + nu) * (g - nu) * x / ((1.0 + t) * (1.0 + t) * (g + 1.0) * (g + 1.0));
}

double weighted_lp_norm(const Profile& p, double beta1, double beta2, double lp, double t) {
    if (!(lp >= 1.0)) throw DomainError("p must be at least 1");
    if (!(beta2 >= 0.0)) throw DomainError("beta2 must be nonnegative");
    const double g = p.model.gamma;
    const double e = beta1 * lp / (g - 1.0);
    if (!(e > -1.0)) throw DomainError("weighted norm diverges: need beta1 > -(gamma-1)/p");
    const double a = p.spread();
    const double k = beta2 * lp;
    const double edge0 = std::sqrt(p.a0 / p.b0);
    // x = xi (1+t)^a, xi = edge0 y
    const double y_part = y_moment(e, k);
    const double amplitude = std::pow(p.a0, e) * std::pow(edge0, 1.0 + k) * std::pow(a, k);
    const double time = std::pow(1.0 + t, a - a * beta1 * lp + (a - 1.0) * k);
    return std::pow(amplitude * y_part * time, 1.0 / lp);
}

double accel_lp_norm(const Profile& p, double delta, double lp, double t) {
    if (!(lp >= 1.0)) throw DomainError("p must be at least 1");
    if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
    const double g = p.model.gamma;
    const double nu = p.model.nu;
    const double e = delta * lp / (g - 1.0);
    const double a = p.spread();
    const double c = (1.0 + nu) * (g - nu) / ((g + 1.0) * (g + 1.0));
    const double edge0 = std::sqrt(p.a0 / p.b0);
    const double y_part = y_moment(e, lp);
    const double amplitude = std::pow(p.a0, e) * std::pow(edge0, 1.0 + lp) * std::pow(c, lp);
    const double time = std::pow(1.0 + t, a - a * delta * lp + (a - 2.0) * lp);
    return std::pow(amplitude * y_part * time, 1.0 / lp);
}

double weighted_lp_slope(const Profile& p, double beta1, double beta2, double lp) {
    const double a = p.spread();
    return -a * beta1 + (a - 1.0) * beta2 + a / lp;
}

double accel_lp_slope(const Profile& p, double delta, double lp) {
    const double a = p.spread();
    return -a * delta + a - 2.0 + a / lp;
}

double pme_residual_at(const std::function<double(double, double)>& f, double gamma, double nu,
                       double x, double t, double h) {
    double ft;
    if (t >= h) {
        ft = (f(x, t + h) - f(x, t - h)) / (2.0 * h);
    } else {
        ft = (-3.0 * f(x, t) + 4.0 * f(x, t + h) - f(x, t + 2.0 * h)) / (2.0 * h);
    }
    auto fg = [&](double xx) { return std::pow(f(xx, t), gamma); };
    const double fxx = (fg(x + h) - 2.0 * fg(x) + fg(x - h)) / (h * h);
    return ft - std::pow(1.0 + t, nu) * fxx;
}

double pme_residual(const Profile& p, double h, double t) {
    if (!(h > 0.0)) throw DomainError("step must be positive");
    const double edge = support_edge(p, t);
    const double reach = std::min(0.9 * edge, edge - 5.0 * h);
    if (!(reach > 0.0)) throw DomainError("step too large for the support");
    auto f = [&p](double x, double s) { return density(p, x, s); };
    double worst = 0.0;
    for (int j = -20; j <= 20; ++j) {
        const double x = reach * j / 20.0;
        worst = std::max(worst, std::abs(pme_residual_at(f, p.model.gamma, p.model.nu, x, t, h)));
    }
    return worst;
}

CellAverage cell_average(const Profile& p, double x_lo, double x_hi, double t) {
    const double edge = support_edge(p, t);
    const double lo = std::max(x_lo, -edge);
    const double hi = std::min(x_hi, edge);
    CellAverage avg;
    if (!(hi > lo)) return avg;

    // Split at the edges, where the density loses smoothness; on a piece
    // touching the edge the Jacobi weight carries (edge - |x|)^{1/(gamma-1)}.
    const double e = 1.0 / (p.model.gamma - 1.0);
    const double sr = std::pow(1.0 + t, -p.spread());
    const double u_coef = p.spread() / (1.0 + t);
    auto smooth_part = [&](double x, bool at_lo, bool at_hi) {
        const double xi = x * sr;
        const double base = p.a0 - p.b0 * xi * xi;
        if (base <= 0.0) return 0.0;
        double r = sr * std::pow(base, e);
        // divide out the factor that the weight carries
        if (at_lo) r /= std::pow(x + edge, e);
        if (at_hi) r /= std::pow(edge - x, e);
        return r;
    };
    const bool at_lo = (lo == -edge);
    const bool at_hi = (hi == edge);
    const quad::Rule* rule = &legendre20();
    quad::Rule local;
    if (at_lo || at_hi) {
        local = quad::gauss_jacobi(20, at_hi ? e : 0.0, at_lo ? e : 0.0);
        rule = &local;
    }
    const double half = 0.5 * (hi - lo);
    double s_rho = 0.0;
    double s_mom = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
        const double x = lo + (rule->nodes[i] + 1.0) * half;
        const double r = smooth_part(x, at_lo, at_hi);
        s_rho += rule->weights[i] * r;
        s_mom += rule->weights[i] * r * u_coef * x;
    }
    const double jac = std::pow(half, 1.0 + (at_lo ? e : 0.0) + (at_hi ? e : 0.0));
    avg.rho = jac * s_rho / (x_hi - x_lo);
    avg.mom = jac * s_mom / (x_hi - x_lo);
    return avg;
}

}  // namespace dampflow::barenblatt
