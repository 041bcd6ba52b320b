#include <gtest/gtest.h>

#include <cmath>

#include "dampflow/barenblatt.hpp"
#include "dampflow/errors.hpp"
#include "dampflow/fv.hpp"

using namespace dampflow;
namespace bb = dampflow::barenblatt;

namespace {

fv::FluidState uniform(int n, double rho, double mom) {
    fv::FluidState s;
    s.rho.assign(n, rho);
    s.mom.assign(n, mom);
    return s;
}

double l1_diff(const fv::Grid1D& g, const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d * g.dx();
}

// Cell averages of a fine solution over the cells of a coarser grid.
std::vector<double> restrict_to(const std::vector<double>& fine, int factor) {
    std::vector<double> out(fine.size() / factor, 0.0);
    for (std::size_t i = 0; i < fine.size(); ++i) out[i / factor] += fine[i] / factor;
    return out;
}

fv::FluidState run_to(const GasModel& m, int n, double t_end, fv::Monitor* mon = nullptr) {
    const auto p = bb::calibrate(m, 1.0);
    fv::SolverConfig cfg;
    cfg.end_time = 10.0;
    const auto grid = fv::default_grid(p, cfg.end_time, n);
    auto s = fv::initialize(m, grid, cfg, 1.0);
    fv::Monitor local;
    if (!mon) mon = &local;
    *mon = fv::make_monitor(m, grid, s);
    return fv::advance(m, grid, s, cfg, t_end, mon);
}

}  // namespace

TEST(FiniteVolume, UniformStateAtRest) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    const auto g = fv::make_grid(-1.0, 1.0, 50);
    const auto s = uniform(50, 0.7, 0.0);
    const double dt = 0.4 * g.dx() / fv::max_wave_speed(m, s);
    auto out = s;
    for (int k = 0; k < 20; ++k) out = fv::hyperbolic_step(m, g, out, dt);
    for (int i = 0; i < 50; ++i) {
        EXPECT_NEAR(out.rho[i], 0.7, 1e-14);
        EXPECT_NEAR(out.mom[i], 0.0, 1e-14);
    }
}

TEST(FiniteVolume, MassConservedPerStep) {
    const GasModel m = derive_gas_model(1.4, 0.3);
    const auto p = bb::calibrate(m, 1.0);
    fv::SolverConfig cfg;
    cfg.end_time = 2.0;
    const auto g = fv::default_grid(p, cfg.end_time, 300);
    auto s = fv::initialize(m, g, cfg, 1.0);
    EXPECT_NEAR(fv::total_mass(g, s), 1.0, 1e-14);
    for (int k = 0; k < 50; ++k) {
        const double before = fv::total_mass(g, s);
        const double dt = 0.45 * g.dx() / fv::max_wave_speed(m, s);
        s = fv::hyperbolic_step(m, g, s, dt);
        EXPECT_NEAR(fv::total_mass(g, s), before, 1e-14);
    }
}

TEST(FiniteVolume, SymmetricSpreading) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    fv::Monitor mon;
    const auto s = run_to(m, 200, 1.0, &mon);
    const int n = static_cast<int>(s.rho.size());
    for (int i = 0; i < n / 2; ++i) {
        EXPECT_NEAR(s.rho[i], s.rho[n - 1 - i], 1e-12);
        EXPECT_NEAR(s.mom[i], -s.mom[n - 1 - i], 1e-12);
    }
    // box data spread: mass leaves the box
    const auto p = bb::calibrate(m, 1.0);
    const auto grid = fv::default_grid(p, 10.0, 200);
    const double edge0 = bb::support_edge(p, 0.0);
    double outside = 0.0;
    for (int i = 0; i < n; ++i)
        if (std::abs(grid.center(i)) > edge0 + grid.dx()) outside += s.rho[i] * grid.dx();
    EXPECT_GT(outside, 1e-3);
    EXPECT_LT(mon.max_mass_drift, 1e-13);
    EXPECT_GE(mon.min_rho, 0.0);
    EXPECT_LE(mon.max_speed_ratio, mon.c_inv + 1e-8);
}

TEST(FiniteVolume, DampingFactor) {
    const GasModel m = derive_gas_model(2.0, 0.5);
    // alpha = 1/8, int_1^3 (1+s)^{-1/2} ds = 2 (2 - sqrt 2)
    EXPECT_NEAR(fv::damping_factor(m, 1.0, 2.0), std::exp(-0.125 * 2.0 * (2.0 - std::sqrt(2.0))), 1e-15);
    const GasModel m0 = derive_gas_model(1.5, 0.0);
    EXPECT_DOUBLE_EQ(fv::damping_factor(m0, 5.0, 0.3), std::exp(-m0.alpha * 0.3));
    EXPECT_NEAR(fv::damping_factor(m, 0.0, 1.0), 0.90163, 1e-5);
    EXPECT_NEAR(fv::damping_factor(m, 0.0, 1.0), std::exp(-0.125 * 2.0 * (std::sqrt(2.0) - 1.0)), 1e-15);
    const double dt = 1e-6;
    EXPECT_NEAR(-std::log(fv::damping_factor(m, 4.0, dt)) / dt, m.alpha / std::sqrt(5.0), 1e-8);
    fv::FluidState s;
    s.rho = {1.0, 2.0};
    s.mom = {0.0, 0.5};
    const auto d = fv::damping_step(m, s, 0.0, 1.0);
    EXPECT_EQ(d.rho, s.rho);
    EXPECT_EQ(d.mom[0], 0.0);
    EXPECT_DOUBLE_EQ(d.mom[1], 0.5 * fv::damping_factor(m, 0.0, 1.0));
}

TEST(FiniteVolume, AdvanceIdentityAndSplitting) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    const auto p = bb::calibrate(m, 1.0);
    fv::SolverConfig cfg;
    cfg.end_time = 2.0;
    const auto g = fv::default_grid(p, cfg.end_time, 800);
    const auto s = fv::initialize(m, g, cfg, 1.0);
    const auto same = fv::advance(m, g, s, cfg, 0.0);
    EXPECT_EQ(same.rho, s.rho);
    EXPECT_EQ(same.mom, s.mom);
    const auto full = fv::advance(m, g, s, cfg, 1.0);
    const auto half = fv::advance(m, g, fv::advance(m, g, s, cfg, 0.5), cfg, 1.0);
    EXPECT_DOUBLE_EQ(full.time, 1.0);
    EXPECT_DOUBLE_EQ(half.time, 1.0);
    EXPECT_LT(l1_diff(g, full.rho, half.rho), 1e-4);
    EXPECT_THROW(fv::advance(m, g, full, cfg, 0.5), DomainError);
}

TEST(FiniteVolume, CflViolationThrows) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    const auto g = fv::make_grid(-1.0, 1.0, 40);
    const auto s = uniform(40, 1.0, 0.0);
    const double dt = 0.6 * g.dx() / fv::max_wave_speed(m, s);
    EXPECT_THROW(fv::hyperbolic_step(m, g, s, dt), SolverError);
}

TEST(FiniteVolume, InvariantRegionAndVacuum) {
    // expansion into vacuum from a box with outward momentum
    const GasModel m = derive_gas_model(1.4, 0.0);
    fv::SolverConfig cfg;
    cfg.end_time = 1.0;
    cfg.initial_data = fv::InitialKind::custom;
    cfg.custom.x = {-1.0, -0.5, 0.0, 0.5, 1.0};
    cfg.custom.rho = {0.0, 1.0, 1.0, 1.0, 0.0};
    cfg.custom.mom = {0.0, -0.3, 0.0, 0.3, 0.0};
    const auto g = fv::make_grid(-6.0, 6.0, 400);
    auto s = fv::initialize(m, g, cfg, 1.0);
    auto mon = fv::make_monitor(m, g, s);
    s = fv::advance(m, g, s, cfg, 1.0, &mon);
    EXPECT_GE(mon.min_rho, 0.0);
    EXPECT_LE(mon.max_speed_ratio, mon.c_inv + 1e-8);
    EXPECT_LT(mon.max_mass_drift, 1e-13);
    for (std::size_t i = 0; i < s.rho.size(); ++i)
        if (s.rho[i] == 0.0) EXPECT_EQ(s.mom[i], 0.0);
}

TEST(FiniteVolume, RejectsBadData) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    fv::SolverConfig cfg;
    cfg.end_time = 1.0;
    cfg.initial_data = fv::InitialKind::custom;
    cfg.custom.x = {-1.0, 0.0, 1.0};
    cfg.custom.rho = {0.5, -0.1, 0.5};
    cfg.custom.mom = {0.0, 0.0, 0.0};
    const auto g = fv::make_grid(-8.0, 8.0, 100);
    EXPECT_THROW(fv::initialize(m, g, cfg, 1.0), DomainError);

    fv::SolverConfig far;
    far.end_time = 1e4;
    try {
        fv::initialize(m, g, far, 1.0);
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("x_max"), std::string::npos);
    }
}

TEST(FiniteVolume, PerturbedBarenblattData) {
    const GasModel m = derive_gas_model(2.0, 0.3);
    const auto p = bb::calibrate(m, 1.0);
    fv::SolverConfig cfg;
    cfg.end_time = 1.0;
    cfg.initial_data = fv::InitialKind::barenblatt_perturbed;
    const auto g = fv::default_grid(p, cfg.end_time, 400);
    const auto s = fv::initialize(m, g, cfg, 1.0);
    EXPECT_NEAR(fv::total_mass(g, s), 1.0, 1e-14);
    const int i = 250;
    EXPECT_NEAR(s.mom[i] / s.rho[i], bb::velocity(p, g.center(i), 0.0), 1e-14);
}

TEST(FiniteVolume, SingleCellPulse) {
    const GasModel m = derive_gas_model(1.4, 0.0);
    const auto g = fv::make_grid(-1.0, 1.0, 101);
    fv::FluidState s = uniform(101, 0.0, 0.0);
    s.rho[50] = 1.0;
    const double dt = 0.45 * g.dx() / fv::max_wave_speed(m, s);
    for (int k = 0; k < 10; ++k) s = fv::hyperbolic_step(m, g, s, dt);
    EXPECT_GT(s.rho[45], 0.0);
    for (int i = 0; i < 50; ++i) {
        EXPECT_EQ(s.rho[i], s.rho[100 - i]);
        EXPECT_EQ(s.mom[i], -s.mom[100 - i]);
    }
    EXPECT_EQ(s.mom[50], 0.0);
}

TEST(FiniteVolume, RefinementAtTimeTen) {
    const GasModel m = derive_gas_model(2.0, 0.0);
    const auto a = run_to(m, 200, 10.0);
    const auto b = run_to(m, 400, 10.0);
    const auto c = run_to(m, 800, 10.0);
    const auto p = bb::calibrate(m, 1.0);
    const auto ga = fv::default_grid(p, 10.0, 200);
    const auto gb = fv::default_grid(p, 10.0, 400);
    const double coarse = l1_diff(ga, a.rho, restrict_to(b.rho, 2));
    const double fine = l1_diff(gb, b.rho, restrict_to(c.rho, 2));
    EXPECT_GE(coarse / fine, 1.5) << coarse << " " << fine;
}
