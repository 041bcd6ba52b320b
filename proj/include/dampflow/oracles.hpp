#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dampflow/params.hpp"

namespace dampflow::oracles {

struct Witness {
    double rho = 0.0;
    double rho_bar = 0.0;
};

/// Outcome of one sampled inequality check.
struct InequalityReport {
    std::string check_id;
    double sampled_infimum = 0.0;
    Witness witness;
    double sampled_supremum = 0.0;
    Witness sup_witness;
    std::optional<double> target_constant;
    double tolerance = 0.0;
    bool pass = false;
    std::int64_t sample_count = 0;
    std::uint64_t seed = 0;
    /// Named side values, e.g. boundary-row errors.
    std::vector<std::pair<std::string, double>> extras;
};

enum class Region { Omega1, Omega2 };

Region classify_region(double rho, double rho_bar);

/// Deterministic sample of [0, C]^2: a uniform grid, log-spaced points near
/// both axes, near-diagonal pairs rho = rho_bar (1 +- 10^-j) for j = 1..12, the
/// exact axes, and seeded uniform points in blocks of 65536 filling up to
/// `samples`. Block b draws from mt19937_64 seeded with (seed, b).
std::vector<Witness> sample_pairs(double cap, std::int64_t samples, std::uint64_t seed);

/// Ratio of the (gamma+1) Bregman gap to the gamma gap raised to (gamma+1)/gamma.
/// Passes when the infimum is positive and the rho_bar = 0 row (ratio 1) and
/// rho = 0 column (gamma / (gamma-1)^{(gamma+1)/gamma}) match to 1e-10.
InequalityReport check_power_gap(const GasModel& model, double cap, std::int64_t samples,
                          std::uint64_t seed = 7);

/// Reports the |rho - rho_bar|^{gamma+1} lower bound, the d1 lower ratio and
/// the d2 upper ratio, in that order.
std::vector<InequalityReport> check_pressure_gap(const GasModel& model, double cap, std::int64_t samples,
                                       std::uint64_t seed = 7);

/// Omega1 and Omega2 branches. The Omega2 ratio is P* / (rho_bar^{gamma-2} |rho - rho_bar|^2),
/// the form the Taylor bound establishes; the |.|^gamma reading is attached as
/// an extra. Throws DomainError unless 1 < gamma < 2.
std::pair<InequalityReport, InequalityReport> check_region_split(const GasModel& model, double cap,
                                                  std::int64_t samples, std::uint64_t seed = 7);

/// Both sides of the Taylor identity for f = |xi|^k at one point.
std::pair<double, double> taylor_sides(double k, int n, double u, double z);

/// Ratio of the two sides over sampled (u, z) in [-2, 2]^2. When f^{(n+1)}
/// is not locally integrable, segments within 1e-3 of 0 are skipped.
InequalityReport check_taylor_remainder(double k, int n, std::int64_t samples, std::uint64_t seed = 7);

/// Properties of h and B: evenness of h, h(a) >= h(0) on [0, 5] with the
/// closed-form h(0), B >= 0, and m dB/dm - 2B >= -1e-6 scale over `samples`
/// states with rho in (0.01, 2], |m| <= 2 rho. dB/dm by centred differences.
/// Witnesses hold (a, 0) for the h checks and (rho, m) for the B checks.
std::vector<InequalityReport> check_h_properties(const GasModel& model, std::int64_t samples,
                                                 std::uint64_t seed = 7);

}  // namespace dampflow::oracles
