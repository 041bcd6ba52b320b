#include "dampflow/fv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dampflow/entropy.hpp"
#include "dampflow/errors.hpp"

namespace dampflow::fv {

namespace {

constexpr double kTiny = 1e-30;
constexpr double kVacuum = 1e-150;
constexpr int kMoodIterations = 20;

struct Cons {
    double r = 0.0;
    double m = 0.0;
};

struct Physics {
    double gamma;
    double kappa;
    double theta;
    double speed_coef;

    explicit Physics(const GasModel& model)
        : gamma(model.gamma),
          kappa(model.kappa),
          theta(model.theta),
          speed_coef(std::max(1.0, model.theta)) {}

    double root(double r) const { return r > 0.0 ? std::pow(r, theta) : 0.0; }
    double speed(const Cons& c) const {
        if (c.r <= 0.0) return 0.0;
        return std::abs(c.m / c.r) + speed_coef * root(c.r);
    }
    Cons flux(const Cons& c) const {
        const double u = c.m / std::max(c.r, kTiny);
        return {c.m, c.m * u + (c.r > 0.0 ? kappa * std::pow(c.r, gamma) : 0.0)};
    }
};

Cons reflect(const Cons& c) { return {c.r, -c.m}; }

double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

struct Bounds {
    double w = -std::numeric_limits<double>::infinity();
    double z = std::numeric_limits<double>::infinity();
    void add(const Physics& ph, const Cons& c) {
        if (c.r <= 0.0) return;
        const double u = c.m / c.r;
        const double s = ph.root(c.r);
        w = std::max(w, u + s);
        z = std::min(z, u - s);
    }
    bool contains(const Physics& ph, const Cons& c, double tol) const {
        if (c.r < 0.0) return false;
        if (c.r == 0.0) return c.m == 0.0;
        const double u = c.m / c.r;
        const double s = ph.root(c.r);
        return u + s <= w + tol && u - s >= z - tol;
    }
};

/// One forward-Euler stage of the Rusanov/MUSCL scheme with a posteriori
/// first-order fallback. Returns the largest a dt / dx seen.
class Stage {
public:
    Stage(const Physics& ph, int n, double lambda, Limiter limiter)
        : ph_(ph), n_(n), lambda_(lambda), limiter_(limiter) {}

    double apply(const std::vector<double>& rho, const std::vector<double>& mom,
                 std::vector<double>& rho_out, std::vector<double>& mom_out,
                 std::int64_t* fallback) {
        rho_out = rho;
        mom_out = mom;
        int lo = -1;
        int hi = -1;
        for (int i = 0; i < n_; ++i)
            if (rho[i] > 0.0) {
                if (lo < 0) lo = i;
                hi = i;
            }
        if (lo < 0) return 0.0;
        c0_ = std::max(lo - 2, 0);
        c1_ = std::min(hi + 2, n_ - 1);
        const int cells = c1_ - c0_ + 1;

        u_.assign(cells, {});
        slope_.assign(cells, {});
        bounds_.assign(cells, {});
        for (int i = c0_; i <= c1_; ++i) u_[i - c0_] = {rho[i], mom[i]};

        for (int i = c0_; i <= c1_; ++i) {
            const Cons c = cell(i);
            const Cons l = neighbour(i - 1);
            const Cons r = neighbour(i + 1);
            Bounds& b = bounds_[i - c0_];
            b.add(ph_, l);
            b.add(ph_, c);
            b.add(ph_, r);
            if (limiter_ == Limiter::none) continue;
            Cons s{minmod(c.r - l.r, r.r - c.r), minmod(c.m - l.m, r.m - c.m)};
            const Cons minus{c.r - 0.5 * s.r, c.m - 0.5 * s.m};
            const Cons plus{c.r + 0.5 * s.r, c.m + 0.5 * s.m};
            if (b.contains(ph_, minus, 0.0) && b.contains(ph_, plus, 0.0)) slope_[i - c0_] = s;
        }

        first_order_.assign(cells + 1, 0);
        flux_.assign(cells + 1, {});
        double courant = 0.0;
        for (int f = c0_; f <= c1_ + 1; ++f) courant = std::max(courant, face_flux(f));
        for (int i = c0_; i <= c1_; ++i) update(i, rho_out, mom_out);

        for (int iter = 0; iter < kMoodIterations; ++iter) {
            bool changed = false;
            for (int i = c0_; i <= c1_; ++i) {
                const Cons v{rho_out[i], mom_out[i]};
                const Bounds& b = bounds_[i - c0_];
                const double tol = 1e-12 * std::max(std::abs(b.w), std::abs(b.z));
                if (b.contains(ph_, v, tol)) continue;
                for (int f : {i, i + 1}) {
                    if (!first_order_[f - c0_]) {
                        first_order_[f - c0_] = 1;
                        courant = std::max(courant, face_flux(f));
                        if (fallback) ++*fallback;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
            for (int i = c0_; i <= c1_; ++i) update(i, rho_out, mom_out);
        }
        for (int i = c0_; i <= c1_; ++i)
            if (rho_out[i] < 0.0)
                throw SolverError(fmt::format("negative density {:.6g} in cell {} after fallback",
                                              rho_out[i], i));
        return courant;
    }

private:
    Cons cell(int i) const {
        if (i < c0_ || i > c1_) return {};
        return u_[i - c0_];
    }
    Cons neighbour(int i) const {
        if (i < 0) return reflect(cell(-1 - i));
        if (i >= n_) return reflect(cell(2 * n_ - 1 - i));
        return cell(i);
    }
    Cons face_value(int i, double side, bool first) const {
        const Cons c = cell(i);
        if (first || i < c0_ || i > c1_) return c;
        const Cons& s = slope_[i - c0_];
        return {c.r + side * 0.5 * s.r, c.m + side * 0.5 * s.m};
    }
    double face_flux(int f) {
        const bool first = first_order_[f - c0_] != 0;
        Cons left;
        Cons right;
        if (f == 0) {
            right = face_value(0, -1.0, first);
            left = reflect(right);
        } else if (f == n_) {
            left = face_value(n_ - 1, 1.0, first);
            right = reflect(left);
        } else {
            left = face_value(f - 1, 1.0, first);
            right = face_value(f, -1.0, first);
        }
        const double a = std::max(ph_.speed(left), ph_.speed(right));
        const Cons fl = ph_.flux(left);
        const Cons fr = ph_.flux(right);
        Cons& out = flux_[f - c0_];
        out.r = 0.5 * (fl.r + fr.r) - 0.5 * a * (right.r - left.r);
        out.m = 0.5 * (fl.m + fr.m) - 0.5 * a * (right.m - left.m);
        if (f == 0 || f == n_) out.r = 0.0;
        return a * lambda_;
    }
    void update(int i, std::vector<double>& rho_out, std::vector<double>& mom_out) const {
        const Cons& fl = flux_[i - c0_];
        const Cons& fr = flux_[i + 1 - c0_];
        const Cons c = cell(i);
        double r = c.r - lambda_ * (fr.r - fl.r);
        double m = c.m - lambda_ * (fr.m - fl.m);
        // rounding-level negatives next to vacuum
        const double scale = c.r + lambda_ * (std::abs(fr.r) + std::abs(fl.r));
        if (r < 0.0 && r >= -1e-13 * scale) r = 0.0;
        if (r == 0.0) m = 0.0;
        rho_out[i] = r;
        mom_out[i] = m;
    }

    const Physics& ph_;
    int n_;
    double lambda_;
    Limiter limiter_;
    int c0_ = 0;
    int c1_ = -1;
    std::vector<Cons> u_;
    std::vector<Cons> slope_;
    std::vector<Bounds> bounds_;
    std::vector<char> first_order_;
    std::vector<Cons> flux_;
};

void cut_vacuum(FluidState& s, double threshold, double dx, double* removed) {
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        if (s.rho[i] < threshold) {
            if (removed) *removed += s.rho[i] * dx;
            s.rho[i] = 0.0;
            s.mom[i] = 0.0;
        }
    }
}

double energy(const GasModel& model, const Grid1D& grid, const FluidState& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.rho.size(); ++i)
        if (s.rho[i] > 0.0) e += entropy::mechanical_energy(model, s.rho[i], s.mom[i]);
    return e * grid.dx();
}

double kinetic_dissipation(const Grid1D& grid, const FluidState& s) {
    double d = 0.0;
    for (std::size_t i = 0; i < s.rho.size(); ++i)
        if (s.rho[i] > 0.0) d += s.mom[i] * s.mom[i] / s.rho[i];
    return d * grid.dx();
}

void check_step(const GasModel& model, const Grid1D& grid, const FluidState& s, double dt,
                double alpha_weight, Monitor& mon) {
    const int n = grid.n_cells;
    const double mass = total_mass(grid, s);
    mon.max_mass_drift = std::max(mon.max_mass_drift, std::abs(mass - mon.mass0) / mon.mass0);
    double ratio = 0.0;
    double min_rho = std::numeric_limits<double>::infinity();
    int worst = -1;
    for (int i = 0; i < n; ++i) {
        min_rho = std::min(min_rho, s.rho[i]);
        if (s.rho[i] > 0.0) {
            const double r = std::abs(s.mom[i]) / s.rho[i];
            if (r > ratio) ratio = r, worst = i;
        }
    }
    mon.min_rho = std::min(mon.min_rho, min_rho);
    mon.max_speed_ratio = std::max(mon.max_speed_ratio, ratio);
    if (min_rho < 0.0) throw SolverError(fmt::format("negative density at t = {:.6g}", s.time));
    if (ratio > mon.c_inv + 1e-8)
        throw SolverError(fmt::format(
            "invariant region violated at t = {:.6g}: |m|/rho = {:.17g} > C = {:.17g} in cell {} "
            "(rho = {:.6g})",
            s.time, ratio, mon.c_inv, worst, s.rho[worst]));
    const double outer = (s.rho[0] + s.rho[1] + s.rho[n - 2] + s.rho[n - 1]) * grid.dx();
    if (outer > 1e-13 * mon.mass0)
        throw SolverError(fmt::format(
            "support reached the domain boundary at t = {:.6g}; enlarge x_max beyond {:.6g}",
            s.time, grid.x_max));

    const double e = energy(model, grid, s);
    const double d = alpha_weight * kinetic_dissipation(grid, s);
    const double residual = (e - mon.last_energy) / dt + d;
    mon.max_energy_residual = std::max(mon.max_energy_residual, residual);
    if (d > 0.0) mon.max_energy_residual_rel = std::max(mon.max_energy_residual_rel, residual / d);
    mon.last_energy = e;
}

}  // namespace

Grid1D make_grid(double x_min, double x_max, int n_cells) {
    if (n_cells < 4) throw DomainError("grid needs at least 4 cells");
    if (!(x_max > x_min)) throw DomainError("grid needs x_max > x_min");
    return {x_min, x_max, n_cells};
}

Grid1D default_grid(const barenblatt::Profile& profile, double end_time, int n_cells) {
    const double half = std::max(1.25 * barenblatt::support_edge(profile, end_time), 1.2);
    return make_grid(-half, half, n_cells);
}

double total_mass(const Grid1D& grid, const FluidState& state) {
    double m = 0.0;
    for (double r : state.rho) m += r;
    return m * grid.dx();
}

FluidState initialize(const GasModel& model, const Grid1D& grid, const SolverConfig& config,
                      double mass) {
    const barenblatt::Profile profile = barenblatt::calibrate(model, mass);
    const double need = 1.2 * barenblatt::support_edge(profile, config.end_time);
    if (grid.x_max < need || grid.x_min > -need)
        throw DomainError(fmt::format(
            "domain too small: need x_max >= {:.17g} and x_min <= {:.17g} for end time {:.6g}", need,
            -need, config.end_time));
    if (!(config.cfl > 0.0 && config.cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
    if (!(config.density_floor >= 0.0)) throw DomainError("density floor must be nonnegative");

    const int n = grid.n_cells;
    const double dx = grid.dx();
    FluidState s;
    s.rho.assign(n, 0.0);
    s.mom.assign(n, 0.0);

    switch (config.initial_data) {
        case InitialKind::box: {
            const double half = config.box_half_width > 0.0 ? config.box_half_width
                                                            : barenblatt::support_edge(profile, 0.0);
            // exact overlap of each cell with [-half, half]
            for (int i = 0; i < n; ++i) {
                const double a = grid.x_min + i * dx;
                const double overlap = std::max(0.0, std::min(a + dx, half) - std::max(a, -half));
                s.rho[i] = mass / (2.0 * half) * overlap / dx;
            }
            break;
        }
        case InitialKind::barenblatt_perturbed: {
            const double edge = barenblatt::support_edge(profile, 0.0);
            for (int i = 0; i < n; ++i) {
                const double x = grid.center(i);
                const auto avg = barenblatt::cell_average(profile, x - 0.5 * dx, x + 0.5 * dx, 0.0);
                s.rho[i] = avg.rho * (1.0 + 0.1 * std::sin(std::numbers::pi * x / edge));
            }
            double total = 0.0;
            for (double r : s.rho) total += r * dx;
            for (int i = 0; i < n; ++i) {
                s.rho[i] *= mass / total;
                s.mom[i] = s.rho[i] * barenblatt::velocity(profile, grid.center(i), 0.0);
            }
            break;
        }
        case InitialKind::custom: {
            const auto& c = config.custom;
            if (c.x.size() < 2 || c.rho.size() != c.x.size() || c.mom.size() != c.x.size())
                throw DomainError("custom data need at least two samples of x, rho, mom");
            for (std::size_t k = 0; k < c.x.size(); ++k) {
                if (!(c.rho[k] >= 0.0)) throw DomainError("custom data contain negative density");
                if (k > 0 && !(c.x[k] > c.x[k - 1]))
                    throw DomainError("custom sample positions must increase");
                if (c.rho[k] == 0.0 && c.mom[k] != 0.0)
                    throw DomainError("custom data carry momentum in vacuum");
            }
            for (int i = 0; i < n; ++i) {
                const double x = grid.center(i);
                if (x < c.x.front() || x > c.x.back()) continue;
                const auto it = std::upper_bound(c.x.begin(), c.x.end(), x);
                const std::size_t k = std::min<std::size_t>(it - c.x.begin(), c.x.size() - 1);
                const double t = (x - c.x[k - 1]) / (c.x[k] - c.x[k - 1]);
                s.rho[i] = (1 - t) * c.rho[k - 1] + t * c.rho[k];
                s.mom[i] = (1 - t) * c.mom[k - 1] + t * c.mom[k];
            }
            double total = 0.0;
            for (double r : s.rho) total += r * dx;
            if (!(total > 0.0)) throw DomainError("custom data carry no mass on the grid");
            for (int i = 0; i < n; ++i) {
                s.rho[i] *= mass / total;
                s.mom[i] *= mass / total;
            }
            break;
        }
    }
    cut_vacuum(s, std::max(config.density_floor, kVacuum), dx, nullptr);
    return s;
}

Monitor make_monitor(const GasModel& model, const Grid1D& grid, const FluidState& state) {
    Monitor mon;
    mon.mass0 = total_mass(grid, state);
    const Physics ph(model);
    for (std::size_t i = 0; i < state.rho.size(); ++i)
        if (state.rho[i] > 0.0)
            mon.c_inv = std::max(mon.c_inv, std::abs(state.mom[i] / state.rho[i]) + ph.root(state.rho[i]));
    mon.min_rho = *std::min_element(state.rho.begin(), state.rho.end());
    mon.max_speed_ratio = 0.0;
    mon.last_energy = energy(model, grid, state);
    return mon;
}

double max_wave_speed(const GasModel& model, const FluidState& state) {
    const Physics ph(model);
    double s = 0.0;
    for (std::size_t i = 0; i < state.rho.size(); ++i)
        s = std::max(s, ph.speed({state.rho[i], state.mom[i]}));
    return s;
}

FluidState hyperbolic_step(const GasModel& model, const Grid1D& grid, const FluidState& state,
                           double dt, Limiter limiter, double cfl_limit,
                           std::int64_t* fallback_faces) {
    if (!(dt >= 0.0)) throw DomainError("time step must be nonnegative");
    if (dt == 0.0) return state;
    const Physics ph(model);
    const double lambda = dt / grid.dx();
    const double pre = max_wave_speed(model, state) * lambda;
    if (pre > cfl_limit * (1.0 + 1e-12))
        throw SolverError(fmt::format("CFL violation: a dt/dx = {:.6g} exceeds {:.6g}", pre, cfl_limit));

    Stage stage(ph, grid.n_cells, lambda, limiter);
    FluidState one;
    FluidState two;
    const double c1 = stage.apply(state.rho, state.mom, one.rho, one.mom, fallback_faces);
    const double c2 = stage.apply(one.rho, one.mom, two.rho, two.mom, fallback_faces);
    const double worst = std::max(c1, c2);
    if (worst > cfl_limit * (1.0 + 1e-12))
        throw SolverError(fmt::format("CFL violation inside the step: a dt/dx = {:.6g}", worst));

    FluidState out;
    out.time = state.time + dt;
    out.rho.resize(state.rho.size());
    out.mom.resize(state.mom.size());
    for (std::size_t i = 0; i < state.rho.size(); ++i) {
        out.rho[i] = 0.5 * (state.rho[i] + two.rho[i]);
        out.mom[i] = out.rho[i] == 0.0 ? 0.0 : 0.5 * (state.mom[i] + two.mom[i]);
    }
    return out;
}

double damping_factor(const GasModel& model, double t, double dt) {
    const double nu = model.nu;
    if (nu == 0.0) return std::exp(-model.alpha * dt);
    const double base = 1.0 + t;
    const double integral =
        std::pow(base, 1.0 - nu) * std::expm1((1.0 - nu) * std::log1p(dt / base)) / (1.0 - nu);
    return std::exp(-model.alpha * integral);
}

FluidState damping_step(const GasModel& model, const FluidState& state, double t, double dt) {
    if (!(dt > 0.0)) throw DomainError("damping step needs dt > 0");
    FluidState out = state;
    const double f = damping_factor(model, t, dt);
    for (double& m : out.mom) m *= f;
    return out;
}

FluidState advance(const GasModel& model, const Grid1D& grid, const FluidState& state,
                   const SolverConfig& config, double to_time, Monitor* monitor) {
    if (to_time < state.time) throw DomainError("cannot advance backwards in time");
    FluidState cur = state;
    const double dx = grid.dx();
    const double threshold = std::max(config.density_floor, kVacuum);
    while (cur.time < to_time) {
        const double speed = max_wave_speed(model, cur);
        double dt = speed > 0.0 ? config.cfl * dx / speed : to_time - cur.time;
        bool last = false;
        if (cur.time + dt >= to_time) {
            dt = to_time - cur.time;
            last = true;
        }
        const double t0 = cur.time;
        cur = damping_step(model, cur, t0, 0.5 * dt);
        cur = hyperbolic_step(model, grid, cur, dt, config.limiter, std::max(config.cfl, 0.5),
                              monitor ? &monitor->fallback_faces : nullptr);
        cur = damping_step(model, cur, t0 + 0.5 * dt, 0.5 * dt);
        cur.time = last ? to_time : t0 + dt;
        cut_vacuum(cur, threshold, dx, monitor ? &monitor->mass_cut : nullptr);
        if (monitor) {
            ++monitor->steps;
            const double weight = model.alpha / std::pow(1.0 + t0 + 0.5 * dt, model.nu);
            check_step(model, grid, cur, dt, weight, *monitor);
        }
    }
    return cur;
}

std::vector<FluidState> run(const GasModel& model, const Grid1D& grid, const SolverConfig& config,
                            double mass, Monitor& monitor) {
    std::vector<double> times = config.output_times;
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (t < 0.0 || t > config.end_time) throw DomainError("output times must lie in [0, end_time]");
    FluidState cur = initialize(model, grid, config, mass);
    monitor = make_monitor(model, grid, cur);
    std::vector<FluidState> snaps;
    for (double t : times) {
        cur = advance(model, grid, cur, config, t, &monitor);
        snaps.push_back(cur);
    }
    if (cur.time < config.end_time) cur = advance(model, grid, cur, config, config.end_time, &monitor);
    return snaps;
}

}  // namespace dampflow::fv
