#pragma once

#include <cstdint>
#include <vector>

#include "dampflow/barenblatt.hpp"
#include "dampflow/params.hpp"

namespace dampflow::fv {

struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    int n_cells = 0;

    double dx() const { return (x_max - x_min) / n_cells; }
    double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

Grid1D make_grid(double x_min, double x_max, int n_cells);

/// Symmetric grid with x_max = max(1.25 edge(end_time), 1.2).
Grid1D default_grid(const barenblatt::Profile& profile, double end_time, int n_cells);

enum class Limiter { none, minmod };
enum class InitialKind { box, barenblatt_perturbed, custom };

/// Point samples, linearly interpolated to cell centres and zero outside.
struct CustomSamples {
    std::vector<double> x;
    std::vector<double> rho;
    std::vector<double> mom;
};

struct SolverConfig {
    double cfl = 0.45;
    Limiter limiter = Limiter::minmod;
    /// Cells with density below max(density_floor, 1e-150) become vacuum.
    double density_floor = 0.0;
    double end_time = 0.0;
    std::vector<double> output_times;
    InitialKind initial_data = InitialKind::box;
    /// Half width of the box; 0 selects the reference support edge at t = 0.
    double box_half_width = 0.0;
    CustomSamples custom;
};

struct FluidState {
    double time = 0.0;
    std::vector<double> rho;
    std::vector<double> mom;
};

/// Run-time checks and diagnostics.
struct Monitor {
    double mass0 = 0.0;
    /// max |u| + rho^theta of the initial data; bounds |m| / rho.
    double c_inv = 0.0;
    double max_mass_drift = 0.0;
    double min_rho = 0.0;
    double max_speed_ratio = 0.0;
    std::int64_t steps = 0;
    std::int64_t fallback_faces = 0;
    double mass_cut = 0.0;
    /// max over steps of dE/dt + D, with E = int eta_e and D the damping integral.
    double max_energy_residual = 0.0;
    /// Same residual divided by D.
    double max_energy_residual_rel = 0.0;
    double last_energy = 0.0;
};

/// Throws DomainError when the grid cannot hold the reference support at
/// end_time plus 20 percent, or when custom data are inadmissible.
FluidState initialize(const GasModel& model, const Grid1D& grid, const SolverConfig& config,
                      double mass);

Monitor make_monitor(const GasModel& model, const Grid1D& grid, const FluidState& state);

double total_mass(const Grid1D& grid, const FluidState& state);

/// Largest |u| + max(1, theta) rho^theta, which bounds every wave speed
/// including the vacuum front u +- rho^theta.
double max_wave_speed(const GasModel& model, const FluidState& state);

/// One SSP-RK2 step of the undamped system with Rusanov fluxes and reflective
/// walls. Throws SolverError when either stage exceeds cfl_limit.
FluidState hyperbolic_step(const GasModel& model, const Grid1D& grid, const FluidState& state,
                           double dt, Limiter limiter = Limiter::minmod, double cfl_limit = 0.5,
                           std::int64_t* fallback_faces = nullptr);

/// exp(-alpha int_t^{t+dt} (1+s)^{-nu} ds).
double damping_factor(const GasModel& model, double t, double dt);

FluidState damping_step(const GasModel& model, const FluidState& state, double t, double dt);

/// Strang splitting up to to_time; checks positivity, the invariant region,
/// conservation and domain overflow after every step.
FluidState advance(const GasModel& model, const Grid1D& grid, const FluidState& state,
                   const SolverConfig& config, double to_time, Monitor* monitor = nullptr);

/// Initializes and advances through the sorted output times.
std::vector<FluidState> run(const GasModel& model, const Grid1D& grid, const SolverConfig& config,
                            double mass, Monitor& monitor);

}  // namespace dampflow::fv
