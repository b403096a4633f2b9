// doseplane: simulation, calibration and live conduct of two-agent phase I-II trials.

#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "doseplane/conduct/service.hpp"
#include "doseplane/conduct/session.hpp"
#include "doseplane/design/state_json.hpp"
#include "doseplane/errors.hpp"
#include "doseplane/sim/metrics.hpp"
#include "doseplane/sim/report_io.hpp"
#include "doseplane/util/atomic_file.hpp"
#include "doseplane/util/json_fields.hpp"

namespace dp = doseplane;
using nlohmann::json;

namespace {

enum Exit { ok = 0, failure = 1, bad_input = 2, bad_state = 3 };

struct Common {
    std::uint64_t seed = 1;
    std::string config_file;
    double delta_u = -1.0;
    std::size_t grid_size = 0;
    int mcmc_iters = 0;
    int chains = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Base random seed");
    cmd->add_option("--config", c.config_file, "Design configuration JSON");
    cmd->add_option("--delta-u", c.delta_u, "Final-test rejection threshold");
    cmd->add_option("--grid-size", c.grid_size, "MTD curve grid points");
    cmd->add_option("--mcmc-iters", c.mcmc_iters, "MCMC iterations per chain (burn-in is a quarter)");
    cmd->add_option("--chains", c.chains, "MCMC chains");
}

json read_json_file(const std::string& path) {
    std::string text;
    try {
        text = dp::util::read_file(path);
    } catch (const std::exception& e) {
        throw dp::InputError("", e.what());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw dp::InputError("", path + " is not valid JSON: " + e.what());
    }
}

dp::model::DesignConfig design_config(const Common& c) {
    dp::model::DesignConfig cfg;
    if (!c.config_file.empty()) cfg = dp::design::design_config_from_json(read_json_file(c.config_file), "config");
    if (c.delta_u >= 0.0) cfg.delta_u = c.delta_u;
    if (c.grid_size > 0) cfg.grid_size = c.grid_size;
    dp::util::validate_under("config", [&] { cfg.validate(); });
    return cfg;
}

dp::inference::McmcConfig mcmc_config(const Common& c, dp::inference::McmcConfig base) {
    if (c.mcmc_iters > 0) {
        base.iterations = c.mcmc_iters;
        base.burn_in = c.mcmc_iters / 4;
    }
    if (c.chains > 0) base.chains = c.chains;
    dp::util::validate_under("mcmc", [&] { base.validate(); });
    return base;
}

dp::sim::Scenario scenario_from_args(const std::string& file, const std::string& builtin) {
    if (!file.empty()) return dp::sim::load_scenario(file);
    for (const auto& s : dp::sim::builtin_scenarios()) {
        if (s.name == builtin) return s;
    }
    throw dp::InputError("builtin", "unknown bundled scenario '" + builtin + "' (e.g. tox1_eff1_h1)");
}

void print_assignment(const dp::design::CohortAssignment& a, const dp::model::DoseWindow& w) {
    std::printf("next cohort: stage %d, cohort %d", a.stage, a.cohort);
    if (a.stage == 1) std::printf(", feasibility bound %.2f", a.feasibility_bound);
    std::printf("\n");
    for (const auto& p : a.patients) {
        const auto raw = dp::model::destandardize(p.dose, w);
        std::printf("  patient %2d  x=%.6f y=%.6f  (X %.2f mg/m2, Y %.2f mg/m2)\n", p.patient_index, p.dose.x, p.dose.y,
                    raw.x, raw.y);
    }
}

void print_status(const dp::conduct::Session& s) {
    const auto& st = s.state();
    std::printf("session %s: phase %s, %zu enrolled, %d DLTs\n", s.id().c_str(),
                std::string(dp::design::to_string(st.phase)).c_str(), st.data.size(), st.data.dlt_count());
    if (st.stop_reason != dp::design::StopReason::none) {
        std::printf("stopped: %s\n", std::string(dp::design::to_string(st.stop_reason)).c_str());
    }
    if (st.pending) print_assignment(*st.pending, s.spec().window);
}

int cmd_simulate(const Common& c, const std::string& scen_file, const std::string& builtin, std::size_t j,
                 unsigned workers, const std::string& out_dir) {
    const auto scenario = scenario_from_args(scen_file, builtin);
    const auto cfg = design_config(c);
    const auto mcmc = mcmc_config(c, dp::inference::McmcConfig::simulation());
    const auto study = dp::sim::run_study(scenario, cfg, mcmc, j, c.seed, workers);
    const auto& report = study.report;
    dp::sim::write_report(out_dir, report, study.results);
    std::printf("%s: J=%zu rejection=%.3f avg DLT=%.3f stops safety=%.3f futility=%.3f -> %s\n",
                scenario.name.c_str(), report.j, report.rejection_rate, report.avg_dlt_rate, report.safety_stop_rate,
                report.futility_stop_rate, out_dir.c_str());
    return ok;
}

int cmd_calibrate(const Common& c, const std::string& scen_file, const std::string& builtin, std::size_t j,
                  unsigned workers, double target, const std::string& out_file) {
    auto scenario = scenario_from_args(scen_file, builtin);
    if (scenario.hypothesis != dp::sim::Hypothesis::h0) {
        std::fprintf(stderr, "warning: calibrating on a scenario not marked H0\n");
    }
    const auto cfg = design_config(c);
    const auto mcmc = mcmc_config(c, dp::inference::McmcConfig::simulation());
    const auto results = dp::sim::run_trials(scenario, cfg, mcmc, j, c.seed, workers);
    const auto cal = dp::sim::calibrate_delta_u(results, dp::sim::default_delta_u_candidates(), target);
    if (!cal.warning.empty()) std::fprintf(stderr, "warning: %s\n", cal.warning.c_str());
    std::printf("delta_u=%.2f type1=%.3f\n", cal.delta_u, cal.type1);
    if (!out_file.empty()) dp::util::write_file_atomic(out_file, dp::sim::to_json(cal).dump(2) + "\n");
    return ok;
}

int cmd_init(const Common& c, const std::string& state_file, const std::string& window_file, bool force) {
    if (!force && std::filesystem::exists(state_file)) {
        throw dp::InputError("state", state_file + " already exists (use --force to overwrite)");
    }
    dp::conduct::SessionSpec spec;
    spec.config = design_config(c);
    spec.mcmc = mcmc_config(c, dp::inference::McmcConfig::conduct());
    if (!window_file.empty()) spec.window = dp::design::dose_window_from_json(read_json_file(window_file), "window");
    spec.seed = c.seed;
    auto stem = std::filesystem::path(state_file).stem().string();
    if (!dp::conduct::valid_session_id(stem)) stem = "trial";
    const auto s = dp::conduct::Session::create(stem, spec);
    dp::util::write_file_atomic(state_file, s.to_json().dump(1) + "\n");
    print_status(s);
    return ok;
}

dp::conduct::Session load_session(const std::string& state_file) {
    return dp::conduct::Session::from_json(read_json_file(state_file));
}

int cmd_next_dose(const std::string& state_file, const std::string& outcomes_file) {
    auto s = load_session(state_file);
    if (outcomes_file.empty()) {
        print_status(s);
        return ok;
    }
    auto j = read_json_file(outcomes_file);
    if (j.is_object() && j.contains("outcomes")) j = j["outcomes"];
    s.submit_outcomes(dp::design::outcomes_from_json(j, "outcomes"));
    dp::util::write_file_atomic(state_file, s.to_json().dump(1) + "\n");
    print_status(s);
    return ok;
}

int cmd_decide(const std::string& state_file, bool as_json) {
    auto s = load_session(state_file);
    const auto d = s.finalize();
    dp::util::write_file_atomic(state_file, s.to_json().dump(1) + "\n");
    if (as_json) {
        std::printf("%s\n", dp::design::to_json(d, s.spec().window).dump(2).c_str());
        return ok;
    }
    const auto summary = dp::design::to_json(d, s.spec().window)["summary"].get<std::string>();
    std::printf("%s\n", summary.c_str());
    std::printf("delta_u %.4f\n", d.delta_u);
    if (d.optimal) {
        const auto raw = dp::model::destandardize(*d.optimal, s.spec().window);
        std::printf("optimal dose x=%.6f y=%.6f  (X %.2f mg/m2, Y %.2f mg/m2)\n", d.optimal->x, d.optimal->y, raw.x,
                    raw.y);
        std::printf("exceedance probability %.4f\n", d.optimal_exceedance);
    } else if (!d.note.empty()) {
        std::printf("no recommendation: %s\n", d.note.c_str());
    }
    return ok;
}

int cmd_replay(const std::string& state_file) {
    const auto s = load_session(state_file);
    const auto replayed = dp::conduct::Session::replay(s.spec(), s.audit());
    const auto a = dp::design::to_json(s.state()).dump();
    const auto b = dp::design::to_json(replayed).dump();
    const auto h = std::hash<std::string>{}(b);
    std::printf("replay %s (state hash %016zx)\n", a == b ? "matches" : "DIFFERS", h);
    return a == b ? ok : failure;
}

int cmd_serve(const Common& c, const std::string& host, int port, const std::string& store) {
    const auto dir = store.empty() ? dp::conduct::default_store_dir() : std::filesystem::path(store);
    dp::conduct::ConductService service(dir, mcmc_config(c, dp::inference::McmcConfig::conduct()));
    const int bound = service.bind(host, port);
    if (bound < 0) {
        std::fprintf(stderr, "cannot bind %s:%d\n", host.c_str(), port);
        return failure;
    }
    std::printf("serving on http://%s:%d, sessions in %s\n", host.c_str(), bound, dir.string().c_str());
    std::fflush(stdout);
    return service.serve() ? ok : failure;
}

int cmd_export_scenarios(const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& s : dp::sim::builtin_scenarios()) {
        dp::util::write_file_atomic(std::filesystem::path(dir) / (s.name + ".json"), dp::sim::to_json(s).dump(2) + "\n");
    }
    std::printf("wrote %zu scenarios to %s\n", dp::sim::builtin_scenarios().size(), dir.c_str());
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage phase I-II dose finding for drug combinations"};
    app.require_subcommand(1);

    Common sim_c, cal_c, init_c, serve_c;
    std::string scen_file, builtin = "tox1_eff1_h1", out_dir = "oc_out";
    std::size_t j = 200;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    auto* sim = app.add_subcommand("simulate", "Simulate J trials and write operating characteristics");
    add_common(sim, sim_c);
    sim->add_option("--scenario", scen_file, "Scenario JSON file");
    sim->add_option("--builtin", builtin, "Bundled scenario name, e.g. tox1_eff1_h1");
    sim->add_option("--j", j, "Number of trials");
    sim->add_option("--workers", workers, "Worker threads");
    sim->add_option("--out", out_dir, "Output directory");

    std::string cal_scen, cal_builtin = "tox1_eff1_h0", cal_out;
    std::size_t cal_j = 200;
    double target = 0.15;
    auto* cal = app.add_subcommand("calibrate", "Choose delta_u from an H0 batch");
    add_common(cal, cal_c);
    cal->add_option("--scenario", cal_scen, "H0 scenario JSON file");
    cal->add_option("--builtin", cal_builtin, "Bundled H0 scenario name");
    cal->add_option("--j", cal_j, "Number of trials");
    cal->add_option("--workers", workers, "Worker threads");
    cal->add_option("--target", target, "Target type-I error");
    cal->add_option("--out", cal_out, "Write the calibration sweep as JSON");

    std::string init_state, window_file;
    bool force = false;
    auto* init = app.add_subcommand("init", "Start a trial and write its state file");
    add_common(init, init_c);
    init->add_option("--state", init_state, "State file to create")->required();
    init->add_option("--window", window_file, "Dose window JSON {x_min, x_max, y_min, y_max}");
    init->add_flag("--force", force, "Overwrite an existing state file");

    std::string nd_state, nd_outcomes;
    auto* next = app.add_subcommand("next-dose", "Record the pending cohort's outcomes and print the next doses");
    next->add_option("--state", nd_state, "State file")->required();
    next->add_option("--outcomes", nd_outcomes, "Outcomes JSON [{\"z\":0,\"e\":1}, ...]; omit to show the pending cohort");

    std::string dec_state;
    bool dec_json = false;
    auto* dec = app.add_subcommand("decide", "Final test and recommended dose");
    dec->add_option("--state", dec_state, "State file")->required();
    dec->add_flag("--json", dec_json, "Print the decision as JSON");

    std::string rep_state;
    auto* rep = app.add_subcommand("replay", "Rebuild the state from its audit log and compare");
    rep->add_option("--state", rep_state, "State file")->required();

    std::string host = "127.0.0.1", store;
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Run the JSON conduct API");
    add_common(serve, serve_c);
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port (0 picks a free one)");
    serve->add_option("--store", store, "Session directory (default $DOSEPLANE_STORE or ./sessions)");

    std::string export_dir = "scenarios";
    auto* exp = app.add_subcommand("export-scenarios", "Write the bundled scenarios as JSON files");
    exp->add_option("--out", export_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_c, scen_file, builtin, j, workers, out_dir);
        if (*cal) return cmd_calibrate(cal_c, cal_scen, cal_builtin, cal_j, workers, target, cal_out);
        if (*init) return cmd_init(init_c, init_state, window_file, force);
        if (*next) return cmd_next_dose(nd_state, nd_outcomes);
        if (*dec) return cmd_decide(dec_state, dec_json);
        if (*rep) return cmd_replay(rep_state);
        if (*serve) return cmd_serve(serve_c, host, port, store);
        if (*exp) return cmd_export_scenarios(export_dir);
    } catch (const dp::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return bad_input;
    } catch (const dp::StateError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return bad_state;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return failure;
    }
    return failure;
}
