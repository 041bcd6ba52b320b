#include "dampflow/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <ostream>

#include "dampflow/barenblatt.hpp"
#include "dampflow/checks.hpp"
#include "dampflow/errors.hpp"
#include "dampflow/io.hpp"
#include "dampflow/oracles.hpp"
#include "dampflow/pipeline.hpp"

namespace dampflow::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    double gamma = 2.0;
    double nu = 0.0;
    double mass = 1.0;
    double epsilon = 1e-3;
    int cells = 4000;
    double end_time = 1e4;
    double cfl = 0.45;
    std::string limiter = "minmod";
    std::string initial = "box";
    double box_half_width = 0.0;
    std::string custom_data;
    double x_max = 0.0;
    double density_floor = 0.0;
    std::vector<double> output_times;
    int per_decade = 10;
    double margin = 0.1;
    double bounded_tol = 0.01;
    double cap = 2.0;
    std::int64_t samples = 1000000;
    std::int64_t h_samples = 10000;
    std::uint64_t seed = 7;
    std::string out = "runs";
    std::string run_dir;
};

json to_json(const Options& o) {
    return json{{"gamma", o.gamma},
                {"nu", o.nu},
                {"mass", o.mass},
                {"epsilon", o.epsilon},
                {"cells", o.cells},
                {"end_time", o.end_time},
                {"cfl", o.cfl},
                {"limiter", o.limiter},
                {"initial", o.initial},
                {"box_half_width", o.box_half_width},
                {"custom_data", o.custom_data},
                {"x_max", o.x_max},
                {"density_floor", o.density_floor},
                {"output_times", o.output_times},
                {"per_decade", o.per_decade},
                {"margin", o.margin},
                {"bounded_tol", o.bounded_tol},
                {"cap", o.cap},
                {"samples", o.samples},
                {"h_samples", o.h_samples},
                {"seed", o.seed}};
}

template <class T>
void take(const json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

void apply_json(const json& j, Options& o) {
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    static const std::vector<std::string> known = {
        "gamma", "nu", "mass", "epsilon", "cells", "end_time", "cfl", "limiter", "initial",
        "box_half_width", "custom_data", "x_max", "density_floor", "output_times", "per_decade",
        "margin", "bounded_tol", "cap", "samples", "h_samples", "seed", "out", "run"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw UsageError(fmt::format("unknown config key '{}'", key));
    try {
        take(j, "gamma", o.gamma);
        take(j, "nu", o.nu);
        take(j, "mass", o.mass);
        take(j, "epsilon", o.epsilon);
        take(j, "cells", o.cells);
        take(j, "end_time", o.end_time);
        take(j, "cfl", o.cfl);
        take(j, "limiter", o.limiter);
        take(j, "initial", o.initial);
        take(j, "box_half_width", o.box_half_width);
        take(j, "custom_data", o.custom_data);
        take(j, "x_max", o.x_max);
        take(j, "density_floor", o.density_floor);
        take(j, "output_times", o.output_times);
        take(j, "per_decade", o.per_decade);
        take(j, "margin", o.margin);
        take(j, "bounded_tol", o.bounded_tol);
        take(j, "cap", o.cap);
        take(j, "samples", o.samples);
        take(j, "h_samples", o.h_samples);
        take(j, "seed", o.seed);
        take(j, "out", o.out);
        take(j, "run", o.run_dir);
    } catch (const json::exception& e) {
        throw UsageError(fmt::format("bad config value: {}", e.what()));
    }
}

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

PipelineConfig pipeline_config(const Options& o) {
    PipelineConfig c;
    c.gamma = o.gamma;
    c.nu = o.nu;
    c.mass = o.mass;
    c.epsilon = o.epsilon;
    c.n_cells = o.cells;
    c.x_max = o.x_max;
    c.per_decade = o.per_decade;
    c.margin = o.margin;
    c.bounded_tol = o.bounded_tol;
    c.solver.cfl = o.cfl;
    c.solver.end_time = o.end_time;
    c.solver.density_floor = o.density_floor;
    c.solver.box_half_width = o.box_half_width;
    c.solver.output_times = o.output_times;
    if (o.limiter == "minmod") c.solver.limiter = fv::Limiter::minmod;
    else if (o.limiter == "none") c.solver.limiter = fv::Limiter::none;
    else throw UsageError(fmt::format("unknown limiter '{}'", o.limiter));
    if (o.initial == "box") {
        c.solver.initial_data = fv::InitialKind::box;
    } else if (o.initial == "barenblatt_perturbed") {
        c.solver.initial_data = fv::InitialKind::barenblatt_perturbed;
    } else if (o.initial == "custom") {
        if (o.custom_data.empty()) throw UsageError("--initial custom needs --custom-data");
        const auto cols = io::parse_snapshot_csv(io::read_file(o.custom_data));
        c.solver.initial_data = fv::InitialKind::custom;
        c.solver.custom = {cols.x, cols.rho, cols.mom};
    } else {
        throw UsageError(fmt::format("unknown initial data '{}'", o.initial));
    }
    for (double t : o.output_times)
        if (!(t >= 0.0 && t <= o.end_time)) throw UsageError("output times must lie in [0, end_time]");
    validate(c);
    return c;
}

fs::path run_directory(const Options& o, const std::string& sub) {
    const json cfg = to_json(o);
    return fs::path(o.out) / fmt::format("{}-{}", sub, io::hash_hex(sub + cfg.dump()));
}

void emit(std::ostream& out, const json& report) { out << report.dump(2) << "\n"; }

json report_json(const oracles::InequalityReport& r) {
    json extras = json::object();
    for (const auto& [k, v] : r.extras) extras[k] = v;
    return json{{"check_id", r.check_id},
                {"sampled_infimum", r.sampled_infimum},
                {"witness", {{"rho", r.witness.rho}, {"rho_bar", r.witness.rho_bar}}},
                {"sampled_supremum", r.sampled_supremum},
                {"sup_witness", {{"rho", r.sup_witness.rho}, {"rho_bar", r.sup_witness.rho_bar}}},
                {"target_constant", r.target_constant ? json(*r.target_constant) : json(nullptr)},
                {"tolerance", r.tolerance},
                {"pass", r.pass},
                {"sample_count", r.sample_count},
                {"seed", r.seed},
                {"extras", extras}};
}

json check_json(const checks::CheckResult& c) {
    json details = json::object();
    for (const auto& [k, v] : c.details) details[k] = v;
    return json{{"name", c.name},
                {"value", c.value},
                {"threshold", c.threshold},
                {"pass", c.pass},
                {"details", details}};
}

int cmd_constants(const Options& o, std::ostream& out) {
    if (!(o.mass > 0.0)) throw DomainError("mass must be positive");
    const GasModel m = derive_gas_model(o.gamma, o.nu);
    const RateTable t = rate_table(m, o.epsilon);
    const auto p = barenblatt::calibrate(m, o.mass);
    emit(out, json{{"gamma", m.gamma},
                   {"nu", m.nu},
                   {"mass", o.mass},
                   {"epsilon", t.epsilon},
                   {"kappa", m.kappa},
                   {"alpha", m.alpha},
                   {"theta", m.theta},
                   {"lambda", m.lambda},
                   {"C1", m.c1},
                   {"C2", m.c2},
                   {"A0", p.a0},
                   {"B0", p.b0},
                   {"k", t.k},
                   {"mu", t.mu},
                   {"mu_target", t.mu_target},
                   {"phi", t.phi},
                   {"mu_star", t.mu_star},
                   {"theta_star", t.theta_star},
                   {"omega", t.omega}});
    return 0;
}

int finish_report(const Options& o, const std::string& sub, json report, bool all_pass,
                  std::ostream& out) {
    report["subcommand"] = sub;
    report["config"] = to_json(o);
    const fs::path dir = run_directory(o, sub);
    io::write_atomic(dir / "report.json", report.dump(2) + "\n");
    emit(out, report);
    return all_pass ? 0 : 2;
}

int cmd_barenblatt(const Options& o, std::ostream& out) {
    const GasModel m = derive_gas_model(o.gamma, o.nu);
    const std::vector<checks::CheckResult> results = {
        checks::barenblatt_mass(m, o.mass, {0.0, 1.0, 1e2, 1e4}),
        checks::pme_order(m, o.mass, 1.0),
        checks::darcy_identity(m, o.mass, {0.5, 10.0, 1e3}),
        checks::norm_slopes(m, o.mass),
    };
    json report;
    json verdicts = json::object();
    bool all = true;
    for (const auto& r : results) {
        report["checks"].push_back(check_json(r));
        verdicts[r.name] = verdict(r.pass);
        all = all && r.pass;
    }
    report["verdicts"] = verdicts;
    return finish_report(o, "barenblatt-check", report, all, out);
}

int cmd_lemma(const Options& o, std::ostream& out) {
    if (!(o.cap > 0.0)) throw DomainError("cap must be positive");
    if (o.samples < 10000) throw DomainError("at least 10000 samples are needed");
    const GasModel m = derive_gas_model(o.gamma, o.nu);
    std::vector<oracles::InequalityReport> reps;
    reps.push_back(oracles::check_power_gap(m, o.cap, o.samples, o.seed));
    for (auto& r : oracles::check_pressure_gap(m, o.cap, o.samples, o.seed)) reps.push_back(r);
    if (o.gamma < 2.0) {
        auto [one, two] = oracles::check_region_split(m, o.cap, o.samples, o.seed);
        reps.push_back(one);
        reps.push_back(two);
    }
    for (auto& r : oracles::check_h_properties(m, o.h_samples, o.seed)) reps.push_back(r);
    const double k = 2.0 * o.gamma / (o.gamma - 1.0);
    reps.push_back(oracles::check_taylor_remainder(k, 1, std::min<std::int64_t>(o.samples, 100000), o.seed));

    json report;
    json verdicts = json::object();
    bool all = true;
    for (const auto& r : reps) {
        report["reports"].push_back(report_json(r));
        verdicts[r.check_id] = verdict(r.pass);
        all = all && r.pass;
    }
    report["verdicts"] = verdicts;
    return finish_report(o, "lemma-check", report, all, out);
}

json monitor_json(const fv::Monitor& m) {
    return json{{"mass0", m.mass0},
                {"c_inv", m.c_inv},
                {"max_mass_drift", m.max_mass_drift},
                {"min_rho", m.min_rho},
                {"max_speed_ratio", m.max_speed_ratio},
                {"steps", m.steps},
                {"fallback_faces", m.fallback_faces},
                {"mass_cut", m.mass_cut},
                {"max_energy_residual", m.max_energy_residual},
                {"max_energy_residual_rel", m.max_energy_residual_rel}};
}

json solver_verdicts(const fv::Monitor& m) {
    return json{{"mass_conservation", verdict(m.max_mass_drift < 1e-10)},
                {"positivity", verdict(m.min_rho >= 0.0)},
                {"invariant_region", verdict(m.max_speed_ratio <= m.c_inv + 1e-8)}};
}

bool all_pass(const json& verdicts) {
    for (const auto& [_, v] : verdicts.items()) {
        const auto s = v.get<std::string>();
        if (s == "FAIL" || s == "INCONSISTENT" || s == "UNBOUNDED") return false;
    }
    return true;
}

// Writes snapshots and the manifest; returns the manifest.
json write_simulation(const Options& o, const fs::path& dir, const PipelineResult& r,
                      const std::string& sub) {
    json snaps = json::array();
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
        const std::string file = fmt::format("snapshot_{:04d}.csv", i);
        io::write_atomic(dir / file, io::snapshot_csv(r.grid, r.snapshots[i]));
        snaps.push_back({{"index", i}, {"time", r.snapshots[i].time}, {"file", file}});
    }
    json manifest{{"subcommand", sub},
                  {"config", to_json(o)},
                  {"grid", {{"x_min", r.grid.x_min}, {"x_max", r.grid.x_max}, {"n_cells", r.grid.n_cells}}},
                  {"snapshots", snaps},
                  {"diagnostics", monitor_json(r.monitor)},
                  {"verdicts", solver_verdicts(r.monitor)}};
    io::write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

json write_rates(const fs::path& dir, const PipelineConfig& c, const PipelineResult& r) {
    io::write_atomic(dir / "rates.csv", io::rates_csv(r.comparisons));
    io::write_atomic(dir / "series.csv", io::series_csv(r.series));
    io::write_atomic(dir / "cumulative.csv", io::series_csv(r.cumulative));
    json fits = json::array();
    json verdicts = json::object();
    for (const auto& cmp : r.comparisons) {
        const std::string name = rates::quantity_name(cmp.fit.quantity);
        fits.push_back({{"quantity", name},
                        {"t_lo", cmp.fit.window.t_lo},
                        {"t_hi", cmp.fit.window.t_hi},
                        {"slope", cmp.fit.slope},
                        {"stderr", cmp.fit.std_error},
                        {"n_points", cmp.fit.n_points},
                        {"theory_rate", cmp.theory ? json(*cmp.theory) : json(nullptr)},
                        {"verdict", rates::verdict_name(cmp.verdict)}});
        if (cmp.theory) verdicts[name] = rates::verdict_name(cmp.verdict);
    }
    json weighted = json::array();
    for (const auto& w : r.weighted) {
        const std::string name = "weighted_" + rates::quantity_name(w.quantity);
        weighted.push_back({{"quantity", rates::quantity_name(w.quantity)},
                            {"rate", w.rate},
                            {"sup_final", w.sup_final},
                            {"sup_decade", w.sup_decade},
                            {"growth", w.growth},
                            {"verdict", w.bounded ? "BOUNDED" : "UNBOUNDED"}});
        verdicts[name] = w.bounded ? "BOUNDED" : "UNBOUNDED";
    }
    json stability = json::array();
    for (const auto& s : r.series) {
        try {
            const auto ws = rates::window_stability(s, c.solver.end_time);
            stability.push_back({{"quantity", rates::quantity_name(s.quantity)},
                                 {"early_slope", ws.early.slope},
                                 {"late_slope", ws.late.slope},
                                 {"difference", ws.difference}});
        } catch (const DomainError&) {
            // too few samples per window
        }
    }
    json cumulative = json::object();
    for (const auto& s : r.cumulative)
        if (!s.values.empty()) cumulative[rates::quantity_name(s.quantity)] = s.values.back();
    json summary{{"fits", fits},
                 {"weighted", weighted},
                 {"window_stability", stability},
                 {"cumulative_final", cumulative},
                 {"margin", c.margin},
                 {"verdicts", verdicts}};
    io::write_atomic(dir / "rates.json", summary.dump(2) + "\n");
    return summary;
}

int cmd_simulate(const Options& o, std::ostream& out, bool with_rates) {
    const PipelineConfig c = pipeline_config(o);
    const std::string sub = with_rates ? "full-pipeline" : "simulate";
    const fs::path dir = run_directory(o, sub);
    PipelineResult r;
    try {
        r = simulate(c);
    } catch (const SolverError& e) {
        json failure{{"subcommand", sub},
                     {"config", to_json(o)},
                     {"error", e.what()},
                     {"verdicts", {{"solver", "FAIL"}}}};
        io::write_atomic(dir / "manifest.json", failure.dump(2) + "\n");
        emit(out, failure);
        return 2;
    }
    json manifest = write_simulation(o, dir, r, sub);
    json verdicts = manifest["verdicts"];
    json summary{{"run_directory", dir.string()}, {"manifest", manifest}};
    if (with_rates) {
        analyse(c, r);
        const json rs = write_rates(dir, c, r);
        for (const auto& [k, v] : rs["verdicts"].items()) verdicts[k] = v;
        summary["rates"] = rs;
    }
    summary["verdicts"] = verdicts;
    emit(out, summary);
    return all_pass(verdicts) ? 0 : 2;
}

int cmd_rates(const Options& cli_opts, std::ostream& out) {
    if (cli_opts.run_dir.empty()) throw UsageError("rates needs --run DIR");
    const fs::path dir = cli_opts.run_dir;
    json manifest;
    try {
        manifest = json::parse(io::read_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw UsageError(fmt::format("cannot parse manifest: {}", e.what()));
    }
    if (!manifest.contains("snapshots")) throw UsageError("manifest holds no snapshots");
    Options o;
    apply_json(manifest.at("config"), o);
    // analysis settings may be overridden on the command line
    o.margin = cli_opts.margin;
    o.bounded_tol = cli_opts.bounded_tol;
    o.epsilon = cli_opts.epsilon;
    PipelineConfig c = pipeline_config(o);

    PipelineResult r;
    r.model = derive_gas_model(c.gamma, c.nu);
    r.table = rate_table(r.model, c.epsilon);
    r.profile = barenblatt::calibrate(r.model, c.mass);
    const auto& g = manifest.at("grid");
    r.grid = fv::make_grid(g.at("x_min").get<double>(), g.at("x_max").get<double>(),
                           g.at("n_cells").get<int>());
    for (const auto& s : manifest.at("snapshots")) {
        const auto cols = io::parse_snapshot_csv(io::read_file(dir / s.at("file").get<std::string>()));
        if (static_cast<int>(cols.x.size()) != r.grid.n_cells)
            throw DomainError(fmt::format("{} does not match the grid", s.at("file").get<std::string>()));
        for (int i = 0; i < r.grid.n_cells; ++i)
            if (std::abs(cols.x[i] - r.grid.center(i)) > 1e-9 * r.grid.dx())
                throw DomainError("snapshot cell centres do not match the grid");
        fv::FluidState st;
        st.time = s.at("time").get<double>();
        st.rho = cols.rho;
        st.mom = cols.mom;
        r.snapshots.push_back(std::move(st));
    }
    analyse(c, r);
    const json rs = write_rates(dir, c, r);
    emit(out, rs);
    return all_pass(rs["verdicts"]) ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Damped Euler flows and their Barenblatt asymptotics"};
    app.require_subcommand(1);

    Options flags;
    std::string config_file;
    std::vector<std::function<void(Options&)>> overrides;

    auto bind = [&](CLI::App* sub, const std::string& name, auto Options::*field,
                    const std::string& help) {
        using T = std::remove_reference_t<decltype(flags.*field)>;
        sub->add_option_function<T>(
            name, [&overrides, field](const T& v) { overrides.push_back([field, v](Options& o) { o.*field = v; }); },
            help);
    };
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "JSON config file; flags override it")->check(CLI::ExistingFile);
        bind(sub, "--gamma", &Options::gamma, "adiabatic exponent");
        bind(sub, "--nu", &Options::nu, "damping exponent");
        bind(sub, "--mass", &Options::mass, "total mass");
        bind(sub, "--epsilon", &Options::epsilon, "rate loss epsilon");
        bind(sub, "--out", &Options::out, "output root directory");
    };
    auto solver_opts = [&](CLI::App* sub) {
        bind(sub, "--cells", &Options::cells, "number of cells");
        bind(sub, "--end-time", &Options::end_time, "final time");
        bind(sub, "--cfl", &Options::cfl, "CFL number");
        bind(sub, "--limiter", &Options::limiter, "minmod or none");
        bind(sub, "--initial", &Options::initial, "box, barenblatt_perturbed or custom");
        bind(sub, "--box-half-width", &Options::box_half_width, "box half width (0: reference edge)");
        bind(sub, "--custom-data", &Options::custom_data, "CSV with x,rho,mom samples");
        bind(sub, "--x-max", &Options::x_max, "domain half width (0: automatic)");
        bind(sub, "--density-floor", &Options::density_floor, "vacuum threshold");
        bind(sub, "--output-times", &Options::output_times, "snapshot times");
        bind(sub, "--per-decade", &Options::per_decade, "snapshots per decade when no times are given");
    };
    auto analysis_opts = [&](CLI::App* sub) {
        bind(sub, "--margin", &Options::margin, "relative margin on theory rates");
        bind(sub, "--bounded-tol", &Options::bounded_tol, "allowed growth of weighted sups");
    };

    auto* constants = app.add_subcommand("constants", "gas constants and rate table as JSON");
    common(constants);
    auto* bcheck = app.add_subcommand("barenblatt-check", "mass, PME residual, Darcy law and norm slopes");
    common(bcheck);
    auto* lcheck = app.add_subcommand("lemma-check", "sampled inequality oracles");
    common(lcheck);
    bind(lcheck, "--cap", &Options::cap, "sample box [0, cap]^2");
    bind(lcheck, "--samples", &Options::samples, "number of sample pairs");
    bind(lcheck, "--h-samples", &Options::h_samples, "states for the B checks");
    bind(lcheck, "--seed", &Options::seed, "sampling seed");
    auto* sim = app.add_subcommand("simulate", "run the finite volume solver");
    common(sim);
    solver_opts(sim);
    auto* rts = app.add_subcommand("rates", "fit decay rates for a simulated run");
    common(rts);
    analysis_opts(rts);
    bind(rts, "--run", &Options::run_dir, "run directory holding manifest.json");
    auto* full = app.add_subcommand("full-pipeline", "simulate and fit rates");
    common(full);
    solver_opts(full);
    analysis_opts(full);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        Options o;
        if (!config_file.empty()) {
            json j;
            try {
                j = json::parse(io::read_file(config_file));
            } catch (const json::exception& e) {
                throw UsageError(fmt::format("cannot parse {}: {}", config_file, e.what()));
            }
            apply_json(j, o);
        }
        for (auto& f : overrides) f(o);

        if (*constants) return cmd_constants(o, out);
        if (*bcheck) return cmd_barenblatt(o, out);
        if (*lcheck) return cmd_lemma(o, out);
        if (*sim) return cmd_simulate(o, out, false);
        if (*full) return cmd_simulate(o, out, true);
        if (*rts) return cmd_rates(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace dampflow::cli
