// Command-line front end: single-point expectations, optimal claims,
// simulation, sweeps, pit analysis, and figure data export.
//
// Exit codes: 0 success, 1 unexpected failure, 2 invalid input,
// 3 degenerate model, 4 I/O failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vise/io.hpp"
#include "vise/version.hpp"
#include "vise/vise.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { ok = 0, failure = 1, invalid = 2, degenerate = 3, io_failure = 4 };

#ifndef VISE_DEFAULT_PRESETS
#define VISE_DEFAULT_PRESETS "config/figure_presets.json"
#endif

/// Shared model flags.
struct ModelFlags {
    std::int64_t n = 100;
    std::optional<std::int64_t> ell;
    std::optional<double> delta;
    double alpha = 0.5;
    double mu = 0.0;
    double sigma = 1.0;
    std::optional<double> t;
    bool t_opt = false;
};

struct Common {
    std::string out_dir;
    bool json_out = false;
};

void add_model_flags(CLI::App* app, ModelFlags& m, bool with_t) {
    app->add_option("--n", m.n, "society size (participants)")->capture_default_str();
    auto* ell = app->add_option("--ell", m.ell, "number of egoists (participants)");
    auto* delta = app->add_option("--delta", m.delta, "share of egoists, rounded to the nearest ell (fraction)");
    ell->excludes(delta);
    delta->excludes(ell);
    app->add_option("--alpha", m.alpha, "majority threshold; accepted iff yes share > alpha (fraction)")
        ->capture_default_str();
    app->add_option("--mu", m.mu, "mean proposal increment (capital units)")->capture_default_str();
    app->add_option("--sigma", m.sigma, "proposal standard deviation (capital units)")->capture_default_str();
    if (with_t) {
        auto* t = app->add_option("--t", m.t, "group claims threshold (capital units); default 0");
        auto* topt = app->add_flag("--t-opt", m.t_opt, "use the optimal claims threshold t0");
        t->excludes(topt);
        topt->excludes(t);
    }
}

void add_common_flags(CLI::App* app, Common& c) {
    app->add_option("--out-dir", c.out_dir,
                    "directory for outputs and the run manifest (default $VISE_OUTPUT_DIR, else .)");
    app->add_flag("--json", c.json_out, "print the result as JSON");
}

std::int64_t resolve_ell(const ModelFlags& m) {
    if (m.ell) return *m.ell;
    if (m.delta) return vise::egoists_for_share(*m.delta, m.n);
    throw vise::ValidationError("ell", "give --ell or --delta");
}

/// Society with t resolved: explicit, optimal, or 0.
vise::Configuration resolve_config(const ModelFlags& m, std::optional<vise::OptimalThresholdResult>* opt = nullptr) {
    const auto base = vise::validate({m.n, resolve_ell(m), m.alpha, m.t.value_or(0.0)}, {m.mu, m.sigma});
    if (!m.t_opt) return base;
    const auto r = vise::optimal_threshold(base);
    if (opt) *opt = r;
    return base.with_t(r.t0);
}

json model_json(const vise::Configuration& c) {
    return {{"n", c.n()},   {"ell", c.ell()},     {"delta", c.delta()}, {"alpha", c.alpha()},
            {"mu", c.mu()}, {"sigma", c.sigma()}, {"t", c.t()}};
}

fs::path output_dir(const Common& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("VISE_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw vise::IoError("cannot create output directory " + dir.string());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vise::IoError("cannot open " + path.string() + " for writing");
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    out.close();
    if (!out) throw vise::IoError("failed writing " + path.string());
}

/// Records what was run so every output can be regenerated.
class Manifest {
public:
    explicit Manifest(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

    json parameters = json::object();
    std::optional<std::uint64_t> seed;
    std::vector<fs::path> outputs;

    void write(const fs::path& dir, const std::string& stem) const {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json outs = json::array();
        for (const auto& p : outputs) outs.push_back(p.string());
        const json doc{{"command", command_},
                       {"parameters", parameters},
                       {"seed", seed ? json(*seed) : json(nullptr)},
                       {"version", vise::version},
                       {"outputs", outs},
                       {"wall_clock_seconds", seconds}};
        ensure_dir(dir);
        write_text(dir / (stem + ".manifest.json"), doc.dump(2) + "\n");
    }

private:
    std::string command_;
    std::chrono::steady_clock::time_point start_;
};

void print_kv(const std::string& key, const std::string& value) { std::cout << key << " = " << value << '\n'; }

std::string opt_str(const std::optional<double>& x) { return x ? vise::format_number(*x) : "undefined"; }

// ---- expect ---------------------------------------------------------------

int cmd_expect(const ModelFlags& m, const Common& c) {
    Manifest manifest("expect");
    std::optional<vise::OptimalThresholdResult> opt;
    const auto config = resolve_config(m, &opt);
    const auto report = vise::expected_society_increment(config);
    manifest.parameters = model_json(config);
    manifest.parameters["t_opt"] = m.t_opt;

    json doc = model_json(config);
    doc["report"] = vise::to_json(report);
    if (opt) doc["optimal"] = vise::to_json(*opt);
    if (c.json_out) {
        std::cout << doc.dump(2) << '\n';
    } else {
        if (opt) print_kv("t0", vise::format_number(opt->t0) + " (" + std::string(vise::to_string(opt->case_tag)) + ")");
        print_kv("t", vise::format_number(config.t()));
        print_kv("egoist", opt_str(report.egoist));
        print_kv("group_member", opt_str(report.group_member));
        print_kv("society", vise::format_number(report.society));
        print_kv("support_prob", report.support_prob ? vise::format_number(report.support_prob->value()) : "undefined");
        print_kv("t_tilde", opt_str(report.t_tilde));
    }
    manifest.write(output_dir(c), "expect");
    return ok;
}

// ---- optimal-t ------------------------------------------------------------

int cmd_optimal(const ModelFlags& m, const Common& c, bool check) {
    Manifest manifest("optimal-t");
    const auto config = vise::validate({m.n, resolve_ell(m), m.alpha, 0.0}, {m.mu, m.sigma});
    manifest.parameters = model_json(config);
    manifest.parameters.erase("t");
    manifest.parameters["check"] = check;
    const auto r = vise::optimal_threshold(config);
    json doc = vise::to_json(r);
    if (check) {
        const auto num = vise::numeric_argmax_t(config);
        const auto st = vise::stationarity_check(config, r.t0);
        doc["numeric_argmax"] = {{"t", num.t}, {"value", num.value}, {"lo", num.lo}, {"hi", num.hi},
                                 {"used_grid_fallback", num.used_grid_fallback}};
        doc["stationarity"] = {{"first_derivative", st.first_derivative},
                               {"second_derivative", st.second_derivative},
                               {"stationary", st.stationary},
                               {"maximum", st.maximum}};
    }
    if (c.json_out) {
        std::cout << doc.dump(2) << '\n';
    } else {
        print_kv("t0", vise::format_number(r.t0));
        print_kv("case", std::string(vise::to_string(r.case_tag)));
        if (r.special_case_t0) print_kv("special_case_t0", vise::format_number(*r.special_case_t0));
        print_kv("society_at_t0", vise::format_number(r.society_value_at_t0));
        print_kv("beta", vise::format_number(r.beta));
        print_kv("f_gamma", vise::format_number(r.f_gamma));
        print_kv("f_alpha", vise::format_number(r.f_alpha));
        if (check) {
            print_kv("numeric_argmax", vise::format_number(doc["numeric_argmax"]["t"].get<double>()));
            print_kv("stationary", doc["stationarity"]["stationary"].get<bool>() ? "yes" : "no");
            print_kv("maximum", doc["stationarity"]["maximum"].get<bool>() ? "yes" : "no");
        }
    }
    manifest.write(output_dir(c), "optimal-t");
    return ok;
}

// ---- simulate -------------------------------------------------------------

struct SimFlags {
    std::int64_t steps = 100000;
    std::int64_t replications = 8;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string trajectory;
};

int cmd_simulate(const ModelFlags& m, const Common& c, const SimFlags& f) {
    Manifest manifest("simulate");
    const auto config = resolve_config(m);
    vise::SimulationConfig sim;
    sim.society = config.society();
    sim.env = config.env();
    sim.steps = f.steps;
    sim.replications = f.replications;
    sim.seed = f.seed;
    sim.workers = f.workers;
    manifest.parameters = model_json(config);
    manifest.parameters["t_opt"] = m.t_opt;
    manifest.parameters["steps"] = f.steps;
    manifest.parameters["replications"] = f.replications;
    manifest.seed = f.seed;

    const auto stats = vise::run(sim);
    const auto analytic = vise::expected_society_increment(config);
    json doc = model_json(config);
    doc["steps"] = f.steps;
    doc["replications"] = f.replications;
    doc["seed"] = f.seed;
    doc["simulation"] = vise::to_json(stats);
    doc["analytic"] = vise::to_json(analytic);

    const fs::path dir = output_dir(c);
    ensure_dir(dir);
    const fs::path summary = dir / "simulate.json";
    write_text(summary, doc.dump(2) + "\n");
    manifest.outputs.push_back(summary);
    if (!f.trajectory.empty()) {
        const fs::path path = dir / f.trajectory;
        auto out = open_out(path);
        vise::write_trajectory_csv(out, sim, 0);
        manifest.outputs.push_back(path);
    }

    if (c.json_out) {
        std::cout << doc.dump(2) << '\n';
    } else {
        auto line = [](const char* name, const std::optional<vise::Estimate>& e, const std::optional<double>& ref) {
            if (!e) return;
            std::cout << name << " = " << vise::format_number(e->mean) << " +- " << vise::format_number(e->se)
                      << "  (analytic " << opt_str(ref) << ")\n";
        };
        line("egoist", stats.mean_egoist_step, analytic.egoist);
        line("group_member", stats.mean_group_step, analytic.group_member);
        line("society", stats.mean_society_step, analytic.society);
        print_kv("acceptance_rate", vise::format_number(stats.acceptance_rate));
        print_kv("step_samples", std::to_string(stats.step_samples));
    }
    manifest.write(dir, "simulate");
    return ok;
}

// ---- sweep ----------------------------------------------------------------

vise::AxisRange parse_axis_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4) throw vise::ValidationError("axis", "expected name:lo:hi:step, got '" + text + "'");
    const auto axis = vise::parse_axis(parts[0]);
    if (!axis) throw vise::ValidationError("axis", "unknown axis '" + parts[0] + "'");
    try {
        return {*axis, std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3])};
    } catch (const std::exception&) {
        throw vise::ValidationError("axis", "bounds must be numbers in '" + text + "'");
    }
}

vise::TMode parse_t_mode(const std::string& s) {
    if (s == "fixed") return vise::TMode::fixed;
    if (s == "optimal") return vise::TMode::optimal;
    throw vise::ValidationError("t-mode", "expected fixed or optimal");
}

/// Runs a sweep and writes `<stem>.csv` plus `<stem>.json`.
std::vector<fs::path> write_sweep(const vise::SweepSpec& spec, const fs::path& dir, const std::string& stem) {
    const auto table = vise::sweep(spec);
    ensure_dir(dir);
    const fs::path csv = dir / (stem + ".csv");
    auto out = open_out(csv);
    vise::write_sweep_csv(out, table);
    out.close();
    const fs::path js = dir / (stem + ".json");
    write_text(js, vise::sweep_summary_json(table).dump(2) + "\n");
    return {csv, js};
}

struct SweepFlags {
    std::vector<std::string> axes;
    std::string t_mode = "fixed";
    std::string stem = "sweep";
    unsigned workers = 0;
};

int cmd_sweep(CLI::App* app, const ModelFlags& m, const Common& c, const SweepFlags& f) {
    Manifest manifest("sweep");
    vise::SweepSpec spec;
    spec.n = m.n;
    spec.ell = m.ell;
    spec.delta = m.delta;
    if (app->count("--alpha")) spec.alpha = m.alpha;
    if (app->count("--mu")) spec.mu = m.mu;
    spec.sigma = m.sigma;
    spec.t = m.t;
    spec.t_mode = parse_t_mode(f.t_mode);
    spec.workers = f.workers;
    for (const auto& a : f.axes) spec.axes.push_back(parse_axis_range(a));
    const fs::path dir = output_dir(c);
    manifest.outputs = write_sweep(spec, dir, f.stem);
    const json summary = vise::sweep_summary_json({spec, {}});
    manifest.parameters = summary;
    manifest.parameters.erase("rows");
    manifest.parameters.erase("flagged_rows");
    if (c.json_out) {
        std::ifstream in(manifest.outputs[1]);
        std::cout << in.rdbuf();
    } else {
        for (const auto& p : manifest.outputs) std::cout << "wrote " << p.string() << '\n';
    }
    manifest.write(dir, "sweep");
    return ok;
}

// ---- pit ------------------------------------------------------------------

struct PitFlags {
    double alpha = 0.5;
    std::int64_t n = 100;
    std::string t_mode = "optimal";
    double mu_lo = -0.99;
    double mu_hi = 0.0;
    double mu_step = 0.01;
    std::string stem;
    unsigned workers = 0;
};

std::vector<fs::path> write_pit(const vise::PitResult& pit, const fs::path& dir, const std::string& stem) {
    ensure_dir(dir);
    const fs::path csv = dir / (stem + ".csv");
    auto out = open_out(csv);
    vise::write_pit_csv(out, pit);
    out.close();
    const fs::path js = dir / (stem + ".json");
    write_text(js, vise::pit_summary_json(pit).dump(2) + "\n");
    return {csv, js};
}

int cmd_pit(const PitFlags& f, const Common& c) {
    Manifest manifest("pit");
    const auto mode = parse_t_mode(f.t_mode);
    const auto pit = vise::pit_region(f.alpha, f.n, mode, vise::grid_values(f.mu_lo, f.mu_hi, f.mu_step), {}, f.workers);
    const std::string stem = f.stem.empty() ? "pit" : f.stem;
    const fs::path dir = output_dir(c);
    manifest.outputs = write_pit(pit, dir, stem);
    manifest.parameters = {{"alpha", f.alpha},     {"n", f.n},         {"t_mode", f.t_mode},
                           {"mu_over_sigma_lo", f.mu_lo}, {"mu_over_sigma_hi", f.mu_hi}, {"mu_over_sigma_step", f.mu_step}};
    const json summary = vise::pit_summary_json(pit);
    if (c.json_out) {
        std::cout << summary.dump(2) << '\n';
    } else {
        print_kv("delta_max", pit.delta_max ? vise::format_number(*pit.delta_max) : "none");
        print_kv("pit_cells", std::to_string(summary["pit_cells"].get<std::size_t>()));
        print_kv("flagged_cells", std::to_string(summary["flagged_cells"].get<std::size_t>()));
    }
    manifest.write(dir, stem);
    return ok;
}

// ---- figure ---------------------------------------------------------------

json read_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vise::IoError("cannot read presets file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw vise::IoError("malformed presets file " + path + ": " + e.what());
    }
}

template <class T>
T need(const json& j, const char* key) {
    if (!j.contains(key)) throw vise::ValidationError(key, "missing from figure preset");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw vise::ValidationError(key, "has the wrong type in figure preset");
    }
}

template <class T>
std::optional<T> maybe(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return need<T>(j, key);
}

vise::SweepSpec preset_sweep(const json& j) {
    vise::SweepSpec s;
    s.n = need<std::int64_t>(j, "n");
    s.ell = maybe<std::int64_t>(j, "ell");
    s.delta = maybe<double>(j, "delta");
    s.alpha = maybe<double>(j, "alpha");
    s.mu = maybe<double>(j, "mu");
    s.sigma = j.value("sigma", 1.0);
    s.t = maybe<double>(j, "t");
    s.t_mode = parse_t_mode(j.value("t_mode", std::string("fixed")));
    for (const auto& a : need<json>(j, "axes")) {
        const auto name = need<std::string>(a, "axis");
        const auto axis = vise::parse_axis(name);
        if (!axis) throw vise::ValidationError("axis", "unknown axis '" + name + "' in figure preset");
        s.axes.push_back({*axis, need<double>(a, "lo"), need<double>(a, "hi"), need<double>(a, "step")});
    }
    return s;
}

/// Columns t, egoist, group, society over a claims-threshold grid.
fs::path write_t_curve(const json& j, const fs::path& dir, const std::string& file) {
    const auto config = vise::validate(
        {need<std::int64_t>(j, "n"), need<std::int64_t>(j, "ell"), need<double>(j, "alpha"), 0.0},
        {need<double>(j, "mu"), need<double>(j, "sigma")});
    const auto& grid = need<json>(j, "t");
    const vise::VotingTerms terms(config);
    std::ostringstream csv;
    csv << "t,egoist,group,society\n";
    for (double t : vise::grid_values(need<double>(grid, "lo"), need<double>(grid, "hi"), need<double>(grid, "step"))) {
        const auto r = vise::report_at(terms, t);
        csv << vise::format_number(t) << ',' << opt_str(r.egoist) << ',' << opt_str(r.group_member) << ','
            << vise::format_number(r.society) << '\n';
    }
    const fs::path path = dir / file;
    write_text(path, csv.str());
    return path;
}

fs::path write_delta_max(const json& j, const fs::path& dir, const std::string& file, unsigned workers) {
    std::ostringstream csv;
    csv << "n,alpha,delta_max\n";
    for (const auto& curve : need<json>(j, "curves")) {
        const auto n = need<std::int64_t>(curve, "n");
        const auto alphas = vise::grid_values(need<double>(curve, "alpha_lo"), need<double>(curve, "alpha_hi"),
                                              need<double>(curve, "alpha_step"));
        for (const auto& p : vise::max_delta_curve(n, alphas, workers)) {
            csv << n << ',' << vise::format_number(p.alpha) << ','
                << (p.delta_max ? vise::format_number(*p.delta_max) : "nan") << '\n';
        }
    }
    const fs::path path = dir / file;
    write_text(path, csv.str());
    return path;
}

void apply_overrides(json& output, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw vise::ValidationError("set", "expected key=value, got '" + o + "'");
        const std::string key = o.substr(0, eq);
        json value;
        try {
            value = json::parse(o.substr(eq + 1));
        } catch (const json::exception&) {
            value = o.substr(eq + 1);
        }
        if (output.contains(key)) output[key] = value;
    }
}

int cmd_figure(const std::string& id, const std::string& presets_path, const std::vector<std::string>& overrides,
               const Common& c, unsigned workers) {
    Manifest manifest("figure");
    const json presets = read_presets(presets_path);
    const auto& figures = need<json>(presets, "figures");
    if (!figures.contains(id)) {
        std::string known;
        for (const auto& [key, _] : figures.items()) known += (known.empty() ? "" : ", ") + key;
        throw vise::ValidationError("id", "unknown figure '" + id + "' (known: " + known + ")");
    }
    json figure = figures.at(id);
    const fs::path dir = output_dir(c);
    ensure_dir(dir);
    for (auto& output : figure.at("outputs")) {
        apply_overrides(output, overrides);
        const auto kind = need<std::string>(output, "kind");
        const auto file = need<std::string>(output, "file");
        if (kind == "t_curve") {
            manifest.outputs.push_back(write_t_curve(output, dir, file));
        } else if (kind == "sweep") {
            auto spec = preset_sweep(output);
            spec.workers = workers;
            for (auto& p : write_sweep(spec, dir, file)) manifest.outputs.push_back(p);
        } else if (kind == "pit") {
            const auto pit = vise::pit_region(
                need<double>(output, "alpha"), need<std::int64_t>(output, "n"),
                parse_t_mode(need<std::string>(output, "t_mode")),
                vise::grid_values(need<double>(output, "mu_over_sigma_lo"), need<double>(output, "mu_over_sigma_hi"),
                                  need<double>(output, "mu_over_sigma_step")),
                {}, workers);
            for (auto& p : write_pit(pit, dir, file)) manifest.outputs.push_back(p);
        } else if (kind == "delta_max") {
            manifest.outputs.push_back(write_delta_max(output, dir, file, workers));
        } else {
            throw vise::ValidationError("kind", "unknown output kind '" + kind + "' in figure preset");
        }
    }
    manifest.parameters = {{"id", id}, {"presets", presets_path}, {"preset", figure}, {"overrides", overrides}};
    if (c.json_out) {
        json outs = json::array();
        for (const auto& p : manifest.outputs) outs.push_back(p.string());
        std::cout << json{{"figure", id}, {"outputs", outs}}.dump(2) << '\n';
    } else {
        for (const auto& p : manifest.outputs) std::cout << "wrote " << p.string() << '\n';
    }
    manifest.write(dir, "figure" + id);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Voting in a stochastic environment: egoists plus one group with a claims threshold"};
    app.require_subcommand(1);
    app.set_version_flag("--version", vise::version);

    ModelFlags model;
    Common common;

    auto* expect = app.add_subcommand("expect", "expected one-step capital increments at one point");
    add_model_flags(expect, model, true);
    add_common_flags(expect, common);

    bool check = false;
    auto* optimal = app.add_subcommand("optimal-t", "optimal group claims threshold t0");
    add_model_flags(optimal, model, false);
    add_common_flags(optimal, common);
    optimal->add_flag("--check", check, "also run the numeric maximizer and a finite-difference check");

    SimFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of voting trajectories");
    add_model_flags(simulate, model, true);
    add_common_flags(simulate, common);
    simulate->add_option("--steps", sim.steps, "steps per replication")->capture_default_str();
    simulate->add_option("--replications", sim.replications, "independent trajectories")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
    simulate->add_option("--workers", sim.workers, "threads, 0 = all cores; never changes results")
        ->capture_default_str();
    simulate->add_option("--trajectory", sim.trajectory, "also dump replication 0 step by step to this CSV file");

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "evaluate expectations over a 1-2 axis grid");
    add_model_flags(sweep, model, false);
    add_common_flags(sweep, common);
    sweep->add_option("--t", model.t, "fixed claims threshold (capital units)");
    sweep->add_option("--axis", sweep_flags.axes,
                      "swept axis name:lo:hi:step; name is t_over_sigma, delta, alpha or mu_over_sigma (given once "
                      "or twice; the first varies slowest)")
        ->required();
    sweep->add_option("--t-mode", sweep_flags.t_mode, "fixed, or optimal to use t0 at every point")
        ->capture_default_str();
    sweep->add_option("--name", sweep_flags.stem, "output file stem (writes <name>.csv and <name>.json)")
        ->capture_default_str();
    sweep->add_option("--workers", sweep_flags.workers, "threads, 0 = all cores")->capture_default_str();

    PitFlags pit_flags;
    auto* pit = app.add_subcommand("pit", "locate the pit of losses on the (mu/sigma, delta) grid");
    add_common_flags(pit, common);
    pit->add_option("--alpha", pit_flags.alpha, "majority threshold (fraction)")->capture_default_str();
    pit->add_option("--n", pit_flags.n, "society size (participants)")->capture_default_str();
    pit->add_option("--t-mode", pit_flags.t_mode, "fixed (t = 0) or optimal (t = t0)")->capture_default_str();
    pit->add_option("--mu-lo", pit_flags.mu_lo, "lowest mu/sigma (dimensionless)")->capture_default_str();
    pit->add_option("--mu-hi", pit_flags.mu_hi, "highest mu/sigma (dimensionless)")->capture_default_str();
    pit->add_option("--mu-step", pit_flags.mu_step, "mu/sigma grid step (dimensionless)")->capture_default_str();
    pit->add_option("--name", pit_flags.stem, "output file stem (default pit)");
    pit->add_option("--workers", pit_flags.workers, "threads, 0 = all cores")->capture_default_str();

    std::string figure_id;
    std::string presets = VISE_DEFAULT_PRESETS;
    std::vector<std::string> overrides;
    unsigned figure_workers = 0;
    auto* figure = app.add_subcommand("figure", "export the data behind one figure from the presets file");
    add_common_flags(figure, common);
    figure->add_option("id", figure_id, "figure id, 1-8 or alpha-sections")->required();
    figure->add_option("--presets", presets, "presets file")->capture_default_str();
    figure->add_option("--set", overrides, "override a preset field in every output, key=value (repeatable)");
    figure->add_option("--workers", figure_workers, "threads, 0 = all cores")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid;
    }

    try {
        if (*expect) return cmd_expect(model, common);
        if (*optimal) return cmd_optimal(model, common, check);
        if (*simulate) return cmd_simulate(model, common, sim);
        if (*sweep) return cmd_sweep(sweep, model, common, sweep_flags);
        if (*pit) return cmd_pit(pit_flags, common);
        if (*figure) return cmd_figure(figure_id, presets, overrides, common, figure_workers);
    } catch (const vise::ValidationError& e) {
        std::cerr << "error: invalid " << e.what() << '\n';
        return invalid;
    } catch (const vise::DegenerateModelError& e) {
        std::cerr << "error: degenerate model: " << e.what() << '\n';
        return degenerate;
    } catch (const vise::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}
