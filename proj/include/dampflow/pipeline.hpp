#pragma once

#include <vector>

#include "dampflow/barenblatt.hpp"
#include "dampflow/fv.hpp"
#include "dampflow/params.hpp"
#include "dampflow/rates.hpp"

namespace dampflow {

struct PipelineConfig {
    double gamma = 2.0;
    double nu = 0.0;
    double mass = 1.0;
    double epsilon = 1e-3;
    int n_cells = 4000;
    /// 0 selects the default half width max(1.25 edge(T), 1.2).
    double x_max = 0.0;
    fv::SolverConfig solver;
    /// Snapshots per decade of t in [1, T].
    int per_decade = 10;
    double margin = 0.1;
    double bounded_tol = 0.01;
};

struct PipelineResult {
    GasModel model;
    RateTable table;
    barenblatt::Profile profile;
    fv::Grid1D grid;
    fv::Monitor monitor;
    std::vector<fv::FluidState> snapshots;
    std::vector<rates::RateSeries> series;
    std::vector<rates::Comparison> comparisons;
    std::vector<rates::WeightedBound> weighted;
    std::vector<rates::RateSeries> cumulative;
};

/// Throws DomainError for invalid configurations before any time stepping.
void validate(const PipelineConfig& config);

fv::Grid1D pipeline_grid(const PipelineConfig& config, const barenblatt::Profile& profile);

/// Simulation only; snapshots at the configured log-spaced times.
PipelineResult simulate(const PipelineConfig& config);

/// Distances, fits on the default window, theory comparison and the weighted
/// monitors for an already simulated result.
void analyse(const PipelineConfig& config, PipelineResult& result);

PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace dampflow
