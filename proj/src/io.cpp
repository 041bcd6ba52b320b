#include "dampflow/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "dampflow/errors.hpp"

namespace dampflow::io {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot open {}", tmp.string()));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error(fmt::format("write to {} failed", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError(fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::string_view data) { return fmt::format("{:016x}", fnv1a(data)); }

std::string snapshot_csv(const fv::Grid1D& grid, const fv::FluidState& state) {
    std::string out = "x,rho,mom\n";
    out.reserve(64 * state.rho.size());
    for (std::size_t i = 0; i < state.rho.size(); ++i)
        out += fmt::format("{:.17g},{:.17g},{:.17g}\n", grid.center(static_cast<int>(i)),
                           state.rho[i], state.mom[i]);
    return out;
}

namespace {

double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError(fmt::format("line {}: cannot parse '{}'", line, s));
    return v;
}

}  // namespace

SnapshotColumns parse_snapshot_csv(std::string_view text) {
    SnapshotColumns c;
    std::size_t pos = 0;
    std::size_t line = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view row = text.substr(pos, end - pos);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        pos = end + 1;
        ++line;
        if (line == 1) {
            if (row != "x,rho,mom") throw DomainError("snapshot header must be x,rho,mom");
            continue;
        }
        if (row.empty()) continue;
        const std::size_t a = row.find(',');
        const std::size_t b = a == std::string_view::npos ? a : row.find(',', a + 1);
        if (b == std::string_view::npos || row.find(',', b + 1) != std::string_view::npos)
            throw DomainError(fmt::format("line {}: expected three columns", line));
        c.x.push_back(parse_double(row.substr(0, a), line));
        c.rho.push_back(parse_double(row.substr(a + 1, b - a - 1), line));
        c.mom.push_back(parse_double(row.substr(b + 1), line));
    }
    if (line == 0) throw DomainError("empty snapshot file");
    return c;
}

std::string rates_csv(const std::vector<rates::Comparison>& comparisons) {
    std::string out = "quantity,t_lo,t_hi,slope,stderr,theory_rate,verdict\n";
    for (const auto& c : comparisons)
        out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n",
                           rates::quantity_name(c.fit.quantity), c.fit.window.t_lo,
                           c.fit.window.t_hi, c.fit.slope, c.fit.std_error,
                           c.theory ? num(*c.theory) : std::string(), rates::verdict_name(c.verdict));
    return out;
}

std::string series_csv(const std::vector<rates::RateSeries>& series) {
    std::string out = "t";
    for (const auto& s : series) out += "," + rates::quantity_name(s.quantity);
    out += "\n";
    if (series.empty()) return out;
    for (std::size_t i = 0; i < series.front().times.size(); ++i) {
        out += num(series.front().times[i]);
        for (const auto& s : series) out += "," + num(s.values[i]);
        out += "\n";
    }
    return out;
}

}  // namespace dampflow::io
