#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dampflow/fv.hpp"
#include "dampflow/rates.hpp"

namespace dampflow::io {

/// 17 significant digits.
std::string num(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a(std::string_view data);
/// 16 lowercase hex digits of fnv1a.
std::string hash_hex(std::string_view data);

/// Columns x, rho, mom.
std::string snapshot_csv(const fv::Grid1D& grid, const fv::FluidState& state);

struct SnapshotColumns {
    std::vector<double> x;
    std::vector<double> rho;
    std::vector<double> mom;
};

/// Throws DomainError on a malformed file.
SnapshotColumns parse_snapshot_csv(std::string_view text);

/// Columns quantity, t_lo, t_hi, slope, stderr, theory_rate, verdict.
std::string rates_csv(const std::vector<rates::Comparison>& comparisons);

/// Columns t followed by one column per series.
std::string series_csv(const std::vector<rates::RateSeries>& series);

}  // namespace dampflow::io
