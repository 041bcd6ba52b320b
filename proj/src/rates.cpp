#include "dampflow/rates.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "dampflow/entropy.hpp"
#include "dampflow/errors.hpp"

namespace dampflow::rates {

const std::vector<Quantity>& all_quantities() {
    static const std::vector<Quantity> all = {
        Quantity::l1_density, Quantity::lgamma_density, Quantity::lgamma1_density,
        Quantity::eta_star_integral, Quantity::y_l2, Quantity::energy_eta_e,
        Quantity::dissipation,
    };
    return all;
}

std::string quantity_name(Quantity q) {
    switch (q) {
        case Quantity::l1_density: return "l1_density";
        case Quantity::lgamma_density: return "lgamma_density";
        case Quantity::lgamma1_density: return "lgamma1_density";
        case Quantity::eta_star_integral: return "eta_star_integral";
        case Quantity::y_l2: return "y_l2";
        case Quantity::energy_eta_e: return "energy_eta_e";
        case Quantity::dissipation: return "dissipation";
    }
    return "unknown";
}

Quantity parse_quantity(std::string_view name) {
    for (Quantity q : all_quantities())
        if (quantity_name(q) == name) return q;
    throw DomainError(fmt::format("unknown quantity '{}'", name));
}

double Distances::value(Quantity q) const {
    switch (q) {
        case Quantity::l1_density: return l1;
        case Quantity::lgamma_density: return lgamma;
        case Quantity::lgamma1_density: return lgamma1;
        case Quantity::eta_star_integral: return eta_star;
        case Quantity::y_l2: return y_l2;
        case Quantity::energy_eta_e: return energy;
        case Quantity::dissipation: return dissipation;
    }
    return 0.0;
}

Distances distances(const GasModel& model, const barenblatt::Profile& profile,
                    const fv::Grid1D& grid, const fv::FluidState& state, bool check_y) {
    const int n = grid.n_cells;
    if (static_cast<int>(state.rho.size()) != n || static_cast<int>(state.mom.size()) != n)
        throw DomainError("snapshot does not match the grid");
    const double dx = grid.dx();
    const double t = state.time;
    const double mass = fv::total_mass(grid, state);
    if (std::abs(mass - profile.mass) > 1e-6 * profile.mass)
        throw DomainError(fmt::format("snapshot mass {:.17g} differs from reference mass {:.17g}",
                                      mass, profile.mass));

    Distances d;
    d.time = t;
    double y = 0.0;
    double kinetic = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lo = grid.x_min + i * dx;
        const auto ref = barenblatt::cell_average(profile, lo, lo + dx, t);
        const double rho = state.rho[i];
        const double m = state.mom[i];
        const double diff = std::abs(rho - ref.rho);
        d.l1 += diff;
        d.lgamma += std::pow(diff, model.gamma);
        d.lgamma1 += std::pow(diff, model.gamma + 1.0);
        if (rho > 0.0 || ref.rho > 0.0)
            d.eta_star += entropy::relative_entropy(model, rho, m, ref.rho, ref.mom).eta_star;
        if (rho > 0.0) {
            d.energy += entropy::mechanical_energy(model, rho, m);
            kinetic += m * m / rho;
        }
        // y at the right edge of cell i
        y -= (rho - ref.rho) * dx;
        d.y_l2 += y * y;
    }
    d.l1 *= dx;
    d.lgamma *= dx;
    d.lgamma1 *= dx;
    d.eta_star *= dx;
    d.y_l2 *= dx;
    d.energy *= dx;
    d.dissipation = model.alpha * std::pow(1.0 + t, -model.nu) * kinetic * dx;
    d.y_end = y;
    if (check_y && std::abs(y) > 1e-8 * profile.mass)
        throw DomainError(fmt::format("y(x_max) = {:.3g} at t = {:.6g}; masses do not match", y, t));
    return d;
}

std::vector<RateSeries> all_series(const GasModel& model, const barenblatt::Profile& profile,
                                   const fv::Grid1D& grid,
                                   const std::vector<fv::FluidState>& snapshots) {
    std::vector<RateSeries> out;
    for (Quantity q : all_quantities()) out.push_back({q, {}, {}});
    double last = -1.0;
    for (const auto& s : snapshots) {
        if (!(s.time > last)) throw DomainError("snapshot times must increase strictly");
        last = s.time;
        const Distances d = distances(model, profile, grid, s);
        for (auto& series : out) {
            series.times.push_back(s.time);
            series.values.push_back(d.value(series.quantity));
        }
    }
    return out;
}

RateSeries distance_series(const GasModel& model, const barenblatt::Profile& profile,
                           const fv::Grid1D& grid, const std::vector<fv::FluidState>& snapshots,
                           Quantity quantity) {
    RateSeries out{quantity, {}, {}};
    double last = -1.0;
    for (const auto& s : snapshots) {
        if (!(s.time > last)) throw DomainError("snapshot times must increase strictly");
        last = s.time;
        out.times.push_back(s.time);
        out.values.push_back(
            distances(model, profile, grid, s, quantity == Quantity::y_l2).value(quantity));
    }
    return out;
}

Window default_window(double end_time) { return {std::max(10.0, end_time / 100.0), end_time}; }

SlopeFit fit_slope(const RateSeries& series, Window window) {
    if (window.t_lo < 1.0) throw DomainError("fit window must start at t >= 1");
    if (!(window.t_hi > window.t_lo)) throw DomainError("empty fit window");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t < window.t_lo * (1 - 1e-12) || t > window.t_hi * (1 + 1e-12)) continue;
        const double v = series.values[i];
        if (!(v > 0.0))
            throw DomainError(fmt::format("{} is not positive at t = {:.6g}",
                                          quantity_name(series.quantity), t));
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(v));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 5)
        throw DomainError(fmt::format("{} samples in [{:.6g}, {:.6g}]; at least 5 needed", n,
                                      window.t_lo, window.t_hi));
    double mx = 0.0;
    double my = 0.0;
    for (int i = 0; i < n; ++i) mx += xs[i], my += ys[i];
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.quantity = series.quantity;
    fit.window = window;
    fit.n_points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - fit.intercept - fit.slope * xs[i];
        ssr += r * r;
    }
    fit.std_error = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    return fit;
}

std::optional<double> theory_rate(const GasModel& model, const RateTable& table, Quantity q) {
    switch (q) {
        case Quantity::l1_density: return table.k;
        case Quantity::lgamma_density:
            if (model.gamma >= 2.0) return table.mu_target;
            return std::nullopt;
        case Quantity::lgamma1_density: return table.mu_star;
        case Quantity::eta_star_integral: return table.phi;
        case Quantity::energy_eta_e: return table.omega;
        case Quantity::y_l2:
        case Quantity::dissipation: return std::nullopt;
    }
    return std::nullopt;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "CONSISTENT";
        case Verdict::inconsistent: return "INCONSISTENT";
        case Verdict::not_applicable: return "N/A";
    }
    return "N/A";
}

Verdict judge(double slope, double rate, double margin) {
    return slope <= -(1.0 - margin) * rate ? Verdict::consistent : Verdict::inconsistent;
}

std::vector<Comparison> compare_to_theory(const GasModel& model, const RateTable& table,
                                          const std::vector<SlopeFit>& fits, double margin) {
    if (!(margin >= 0.0 && margin < 1.0)) throw DomainError("margin must lie in [0, 1)");
    std::vector<Comparison> out;
    for (const auto& f : fits) {
        Comparison c;
        c.fit = f;
        c.theory = theory_rate(model, table, f.quantity);
        c.verdict = c.theory ? judge(f.slope, *c.theory, margin) : Verdict::not_applicable;
        out.push_back(c);
    }
    return out;
}

WeightedBound weighted_bound(const RateSeries& series, double rate, double tol) {
    if (series.times.empty()) throw DomainError("empty series");
    WeightedBound b;
    b.quantity = series.quantity;
    b.rate = rate;
    const double end = series.times.back();
    double sup = 0.0;
    bool have_decade = false;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        sup = std::max(sup, std::pow(1.0 + t, rate) * series.values[i]);
        b.running_sup.push_back(sup);
        if (t <= end / 10.0 * (1 + 1e-12)) {
            b.sup_decade = sup;
            have_decade = true;
        }
    }
    if (!have_decade) throw DomainError("series does not reach back one decade from its end");
    b.sup_final = sup;
    b.growth = b.sup_decade > 0.0 ? b.sup_final / b.sup_decade - 1.0 : 0.0;
    b.bounded = b.growth < tol;
    return b;
}

std::vector<WeightedBound> weighted_estimate_monitor(const RateTable& table,
                                                     const std::vector<RateSeries>& series,
                                                     double tol) {
    std::vector<WeightedBound> out;
    for (const auto& s : series) {
        if (s.quantity == Quantity::lgamma1_density) out.push_back(weighted_bound(s, table.mu_star, tol));
        if (s.quantity == Quantity::energy_eta_e) out.push_back(weighted_bound(s, table.omega, tol));
    }
    return out;
}

RateSeries cumulative_integral(const RateSeries& series) {
    RateSeries out{series.quantity, series.times, {}};
    double acc = 0.0;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (i > 0)
            acc += 0.5 * (series.values[i] + series.values[i - 1]) *
                   (series.times[i] - series.times[i - 1]);
        out.values.push_back(acc);
    }
    return out;
}

WindowStability window_stability(const RateSeries& series, double end_time) {
    WindowStability w;
    w.early = fit_slope(series, {end_time / 100.0, end_time / 10.0});
    w.late = fit_slope(series, {end_time / 10.0, end_time});
    w.difference = std::abs(w.early.slope - w.late.slope);
    return w;
}

std::vector<double> log_times(double end_time, int per_decade) {
    if (!(end_time > 0.0) || per_decade < 1) throw DomainError("log_times needs T > 0 and n >= 1");
    std::vector<double> out;
    const double decades = std::log10(end_time);
    const int steps = static_cast<int>(std::floor(decades * per_decade + 1e-9));
    for (int k = 0; k <= steps; ++k) out.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
    if (out.empty() || out.back() < end_time * (1 - 1e-12)) out.push_back(end_time);
    else out.back() = end_time;
    return out;
}

}  // namespace dampflow::rates
