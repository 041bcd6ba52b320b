#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dampflow/barenblatt.hpp"
#include "dampflow/fv.hpp"
#include "dampflow/params.hpp"

namespace dampflow::rates {

enum class Quantity {
    l1_density,
    lgamma_density,
    lgamma1_density,
    eta_star_integral,
    y_l2,
    energy_eta_e,
    dissipation,
};

const std::vector<Quantity>& all_quantities();
std::string quantity_name(Quantity q);
/// Throws DomainError for unknown names.
Quantity parse_quantity(std::string_view name);

struct RateSeries {
    Quantity quantity = Quantity::l1_density;
    std::vector<double> times;
    std::vector<double> values;
};

/// All quantities for one snapshot. Distances are taken against exact cell
/// averages of the reference profile; energy and dissipation are those of the
/// snapshot itself.
struct Distances {
    double time = 0.0;
    double l1 = 0.0;           // int |rho - rho_bar|
    double lgamma = 0.0;       // int |rho - rho_bar|^gamma
    double lgamma1 = 0.0;      // int |rho - rho_bar|^{gamma+1}
    double eta_star = 0.0;     // int eta*
    double y_l2 = 0.0;         // int y^2
    double energy = 0.0;       // int eta_e
    double dissipation = 0.0;  // alpha (1+t)^{-nu} int m^2 / rho
    double y_end = 0.0;

    double value(Quantity q) const;
};

/// Throws DomainError when the snapshot mass differs from the profile mass by
/// more than 1e-6 relative, or, with check_y, when |y(x_max)| > 1e-8 M.
Distances distances(const GasModel& model, const barenblatt::Profile& profile,
                    const fv::Grid1D& grid, const fv::FluidState& state, bool check_y = true);

RateSeries distance_series(const GasModel& model, const barenblatt::Profile& profile,
                           const fv::Grid1D& grid, const std::vector<fv::FluidState>& snapshots,
                           Quantity quantity);

/// One series per quantity, in all_quantities() order. Asserts the y bound.
std::vector<RateSeries> all_series(const GasModel& model, const barenblatt::Profile& profile,
                                   const fv::Grid1D& grid,
                                   const std::vector<fv::FluidState>& snapshots);

struct Window {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

/// [max(10, T/100), T].
Window default_window(double end_time);

struct SlopeFit {
    Quantity quantity = Quantity::l1_density;
    Window window;
    double slope = 0.0;
    double intercept = 0.0;
    double std_error = 0.0;
    int n_points = 0;
};

/// Least squares of log(value) against log(1 + t) over the samples inside the
/// window. Throws DomainError when t_lo < 1, fewer than 5 samples fall inside,
/// or a value there is not positive.
SlopeFit fit_slope(const RateSeries& series, Window window);

/// Decay exponent the theory guarantees for a quantity, if any. The Lgamma
/// bound is only available for gamma >= 2.
std::optional<double> theory_rate(const GasModel& model, const RateTable& table, Quantity q);

enum class Verdict { consistent, inconsistent, not_applicable };
std::string verdict_name(Verdict v);

struct Comparison {
    SlopeFit fit;
    std::optional<double> theory;
    Verdict verdict = Verdict::not_applicable;
};

/// CONSISTENT when slope <= -(1 - margin) rate.
Verdict judge(double slope, double rate, double margin = 0.1);

std::vector<Comparison> compare_to_theory(const GasModel& model, const RateTable& table,
                                          const std::vector<SlopeFit>& fits, double margin = 0.1);

struct WeightedBound {
    Quantity quantity = Quantity::l1_density;
    double rate = 0.0;
    /// Running sup of (1+t)^rate value at each sample.
    std::vector<double> running_sup;
    double sup_final = 0.0;
    double sup_decade = 0.0;
    /// sup_final / sup_decade - 1.
    double growth = 0.0;
    bool bounded = false;
};

/// Bounded when the running sup grows by less than tol over [T/10, T].
WeightedBound weighted_bound(const RateSeries& series, double rate, double tol = 0.01);

/// The |rho - rho_bar|^{gamma+1} series against mu* and the energy series
/// against omega.
std::vector<WeightedBound> weighted_estimate_monitor(const RateTable& table,
                                                     const std::vector<RateSeries>& series,
                                                     double tol = 0.01);

/// Trapezoidal int_0^t value ds at each sample time, starting from the first sample.
RateSeries cumulative_integral(const RateSeries& series);

struct WindowStability {
    SlopeFit early;
    SlopeFit late;
    double difference = 0.0;
};

/// Slopes on [T/100, T/10] and [T/10, T].
WindowStability window_stability(const RateSeries& series, double end_time);

/// n log-spaced times per decade from 1 to end_time, with 0 < t < 1 excluded
/// and end_time always included.
std::vector<double> log_times(double end_time, int per_decade);

}  // namespace dampflow::rates
