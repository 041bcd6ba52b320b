#include "dampflow/pipeline.hpp"

#include <fmt/format.h>

#include <cmath>

#include "dampflow/errors.hpp"

namespace dampflow {

void validate(const PipelineConfig& c) {
    if (!(c.gamma > 1.0)) throw DomainError("gamma must exceed 1");
    if (!(c.nu >= 0.0 && c.nu < 1.0)) throw DomainError("nu must lie in [0, 1)");
    if (!(c.mass > 0.0)) throw DomainError("mass must be positive");
    if (!(c.epsilon > 0.0 && c.epsilon < 0.01)) throw DomainError("epsilon must lie in (0, 0.01)");
    if (c.n_cells < 4) throw DomainError("at least 4 cells are needed");
    if (!(c.solver.end_time > 0.0)) throw DomainError("end time must be positive");
    if (!(c.solver.cfl > 0.0 && c.solver.cfl <= 0.5)) throw DomainError("cfl must lie in (0, 0.5]");
    if (c.per_decade < 1) throw DomainError("per_decade must be positive");
    if (!(c.margin >= 0.0 && c.margin < 1.0)) throw DomainError("margin must lie in [0, 1)");
    if (!(c.bounded_tol > 0.0)) throw DomainError("bounded tolerance must be positive");
    if (c.x_max < 0.0) throw DomainError("x_max must be nonnegative");
}

fv::Grid1D pipeline_grid(const PipelineConfig& c, const barenblatt::Profile& profile) {
    if (c.x_max > 0.0) return fv::make_grid(-c.x_max, c.x_max, c.n_cells);
    return fv::default_grid(profile, c.solver.end_time, c.n_cells);
}

PipelineResult simulate(const PipelineConfig& config) {
    validate(config);
    PipelineResult r;
    r.model = derive_gas_model(config.gamma, config.nu);
    r.table = rate_table(r.model, config.epsilon);
    r.profile = barenblatt::calibrate(r.model, config.mass);
    r.grid = pipeline_grid(config, r.profile);
    fv::SolverConfig solver = config.solver;
    if (solver.output_times.empty())
        solver.output_times = rates::log_times(solver.end_time, config.per_decade);
    r.snapshots = fv::run(r.model, r.grid, solver, config.mass, r.monitor);
    return r;
}

void analyse(const PipelineConfig& config, PipelineResult& r) {
    r.series = rates::all_series(r.model, r.profile, r.grid, r.snapshots);
    const rates::Window window = rates::default_window(config.solver.end_time);
    std::vector<rates::SlopeFit> fits;
    for (const auto& s : r.series) fits.push_back(rates::fit_slope(s, window));
    r.comparisons = rates::compare_to_theory(r.model, r.table, fits, config.margin);
    r.weighted = rates::weighted_estimate_monitor(r.table, r.series, config.bounded_tol);
    r.cumulative.clear();
    for (const auto& s : r.series) r.cumulative.push_back(rates::cumulative_integral(s));
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult r = simulate(config);
    analyse(config, r);
    return r;
}

}  // namespace dampflow
