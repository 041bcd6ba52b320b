#include "dampflow/checks.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "dampflow/barenblatt.hpp"
#include "dampflow/entropy.hpp"

namespace dampflow::checks {

namespace {

CheckResult finish(std::string name, double value, double threshold) {
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.threshold = threshold;
    r.pass = std::isfinite(value) && value <= threshold;
    return r;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

}  // namespace

CheckResult barenblatt_mass(const GasModel& model, double mass, const std::vector<double>& times) {
    const auto p = barenblatt::calibrate(model, mass);
    double worst = 0.0;
    std::vector<std::pair<std::string, double>> details;
    for (double t : times) {
        const double e = barenblatt::support_edge(p, t);
        const int n = 400;
        const double lo = -1.05 * e;
        const double dx = 2.1 * e / n;
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            total += barenblatt::cell_average(p, lo + i * dx, lo + (i + 1) * dx, t).rho * dx;
        const double err = std::abs(total - mass) / mass;
        details.emplace_back(fmt::format("rel_error_t={:g}", t), err);
        worst = std::max(worst, err);
    }
    auto r = finish("barenblatt_mass", worst, 1e-8);
    r.details = std::move(details);
    return r;
}

CheckResult pme_order(const GasModel& model, double mass, double t) {
    const auto p = barenblatt::calibrate(model, mass);
    const double hs[] = {1e-2, 5e-3, 2.5e-3};
    double res[3];
    for (int i = 0; i < 3; ++i) res[i] = barenblatt::pme_residual(p, hs[i], t);
    const double o1 = std::log(res[0] / res[1]) / std::log(2.0);
    const double o2 = std::log(res[1] / res[2]) / std::log(2.0);
    auto r = finish("pme_order", std::max(std::abs(o1 - 2.0), std::abs(o2 - 2.0)), 0.2);
    r.details = {{"residual_h1", res[0]}, {"residual_h2", res[1]}, {"residual_h3", res[2]},
                 {"order_12", o1}, {"order_23", o2}};
    return r;
}

CheckResult darcy_identity(const GasModel& model, double mass, const std::vector<double>& times) {
    const auto p = barenblatt::calibrate(model, mass);
    double worst = 0.0;
    for (double t : times) {
        const double e = barenblatt::support_edge(p, t);
        for (int i = 0; i < 100; ++i) {
            // avoid x = 0 where both sides vanish
            const double x = e * (-0.99 + 1.98 * (i + 0.5) / 100.0);
            const double a = barenblatt::momentum(p, x, t);
            const double b = barenblatt::darcy_momentum(p, x, t);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
    }
    return finish("darcy_identity", worst, 1e-6);
}

CheckResult second_moment(const GasModel& model) {
    const double m0 = weighted_integral(model, [](double) { return 1.0; });
    const double m2 = weighted_integral(model, [](double z) { return z * z; });
    const double target = (model.gamma - 1.0) / (2.0 * model.gamma);
    auto r = finish("second_moment", std::abs(m2 / m0 - target), 1e-10);
    r.details = {{"ratio", m2 / m0}, {"target", target}};
    return r;
}

CheckResult energy_identity(const GasModel& model) {
    double worst = 0.0;
    const auto w = entropy::EntropyWeight::quadratic();
    for (int i = 1; i <= 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double rho = 2.0 * i / 50.0;
            const double u = -2.0 + 4.0 * j / 49.0;
            const double eta = entropy::entropy_pair(model, w, rho, rho * u).eta;
            const double e = entropy::mechanical_energy(model, rho, rho * u);
            worst = std::max(worst, std::abs(eta - e) / std::max(1.0, std::abs(e)));
        }
    return finish("energy_identity", worst, 1e-8);
}

CheckResult norm_slopes(const GasModel& model, double mass) {
    const auto p = barenblatt::calibrate(model, mass);
    const double g = model.gamma;
    std::vector<double> lx;
    for (int i = 0; i <= 20; ++i) lx.push_back(std::log1p(std::pow(10.0, 1.0 + 0.15 * i)));
    auto fitted = [&](auto&& norm) {
        std::vector<double> ly;
        for (double x : lx) ly.push_back(std::log(norm(std::expm1(x))));
        return fit_slope(lx, ly);
    };
    struct Case {
        std::string label;
        double fit;
        double closed;
    };
    const std::vector<Case> cases = {
        {"rho_l1", fitted([&](double t) { return barenblatt::weighted_lp_norm(p, 1.0, 0.0, 1.0, t); }),
         barenblatt::weighted_lp_slope(p, 1.0, 0.0, 1.0)},
        {"u2_lp", fitted([&](double t) { return barenblatt::weighted_lp_norm(p, 0.0, 2.0, (g + 1) / g, t); }),
         barenblatt::weighted_lp_slope(p, 0.0, 2.0, (g + 1) / g)},
        {"accel_delta0", fitted([&](double t) { return barenblatt::accel_lp_norm(p, 0.0, 2.0, t); }),
         barenblatt::accel_lp_slope(p, 0.0, 2.0)},
        {"accel_delta1", fitted([&](double t) { return barenblatt::accel_lp_norm(p, 1.0, 1.0, t); }),
         barenblatt::accel_lp_slope(p, 1.0, 1.0)},
    };
    double worst = 0.0;
    std::vector<std::pair<std::string, double>> details;
    for (const auto& c : cases) {
        worst = std::max(worst, std::abs(c.fit - c.closed));
        details.emplace_back(c.label + "_fit", c.fit);
        details.emplace_back(c.label + "_closed", c.closed);
    }
    auto r = finish("norm_slopes", worst, 1e-3);
    r.details = std::move(details);
    return r;
}

}  // namespace dampflow::checks
