#include "unirigid/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "unirigid/scenario_io.hpp"
#include "unirigid/validate.hpp"

namespace unirigid {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Parses args with CLI11. Returns an exit code when the command must stop
/// (usage error or --help), std::nullopt to continue.
std::optional<int> parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInput;
    }
    return std::nullopt;
}

const std::map<std::string, Formulation> kFormulations = {
    {"newton-euler", Formulation::NewtonEuler},
    {"kirchhoff", Formulation::Kirchhoff},
    {"lagrange", Formulation::Lagrange},
    {"gauss", Formulation::Gauss},
};

const std::map<std::string, IntegratorId> kIntegrators = {
    {"rk4", IntegratorId::RK4},
    {"lie-euler", IntegratorId::LieEuler},
    {"lie-rk4", IntegratorId::LieRK4},
};

std::optional<Scenario> load(const std::string& path, std::ostream& err) {
    try {
        std::vector<std::string> warnings;
        Scenario sc = load_scenario(path, &warnings);
        for (const auto& w : warnings) {
            err << "warning: " << w << '\n';
        }
        return sc;
    } catch (const Error& e) {
        err << to_string(e.kind()) << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

bool is_input_error(ErrorKind kind) {
    return kind == ErrorKind::InvalidArgument || kind == ErrorKind::FrameNotAtCoM ||
           kind == ErrorKind::ValidationError || kind == ErrorKind::ParseError;
}

}  // namespace

int cmd_simulate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Integrate one scenario and write its trajectory as CSV", "unirigid simulate"};
    std::string scenario_path;
    std::optional<std::string> formulation;
    std::optional<std::string> integrator;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<int> sample_every;
    std::string output;
    app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    app.add_option("--formulation", formulation, "Formulation (default: the scenario's)")
        ->check(CLI::IsMember(kFormulations));
    app.add_option("--integrator", integrator, "Integrator (default: the scenario's)")
        ->check(CLI::IsMember(kIntegrators));
    app.add_option("--dt", dt, "Step size [s]")->check(CLI::PositiveNumber);
    app.add_option("--t-end", t_end, "Final time [s]")->check(CLI::NonNegativeNumber);
    app.add_option("--sample-every", sample_every, "Record every N-th step")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", output, "CSV path (standard output when omitted)");
    if (auto code = parse(app, args, out, err)) {
        return *code;
    }

    std::optional<Scenario> sc = load(scenario_path, err);
    if (!sc) {
        return kExitInput;
    }
    RunConfig run = sc->run;
    if (formulation) run.formulation = kFormulations.at(*formulation);
    if (integrator) run.integrator = kIntegrators.at(*integrator);
    if (dt) run.dt = *dt;
    if (t_end) run.t_end = *t_end;
    if (sample_every) run.sample_every = *sample_every;

    std::ofstream file;
    if (!output.empty()) {
        file.open(output);
        if (!file) {
            err << "error: cannot write '" << output << "'\n";
            return kExitInput;
        }
    }
    std::ostream& csv = output.empty() ? out : file;
    std::ostream& summary = output.empty() ? err : out;

    Trajectory traj;
    try {
        traj = simulate(*sc, run.formulation, run.integrator, run.dt, run.t_end, run.sample_every);
    } catch (const SimulationAborted& e) {
        write_csv(csv, e.partial());
        err << e.what() << " (last good sample " << e.last_good_sample() << ")\n";
        return kExitAborted;
    } catch (const Error& e) {
        err << to_string(e.kind()) << ": " << e.what() << '\n';
        return is_input_error(e.kind()) ? kExitInput : kExitAborted;
    }
    write_csv(csv, traj);
    const DriftReport drift = conservation_drift(*sc, traj);
    summary << "final t=" << num(traj.back().t) << " energy_drift=" << sci(drift.energy)
            << " momentum_drift=" << sci(drift.momentum) << " samples=" << traj.size() << '\n';
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Run several formulations from the same initial data and compare them",
                 "unirigid compare"};
    std::string scenario_path;
    std::vector<std::string> names;
    std::optional<std::string> integrator;
    double dt = 0.0;
    double t_end = 0.0;
    double tol = 1e-5;
    int sample_every = 1;
    app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    app.add_option("--formulation", names, "Formulation to run (repeat, at least two)")
        ->check(CLI::IsMember(kFormulations));
    app.add_option("--integrator", integrator, "Integrator (default: the scenario's)")
        ->check(CLI::IsMember(kIntegrators));
    app.add_option("--dt", dt, "Step size [s]")->required()->check(CLI::PositiveNumber);
    app.add_option("--t-end", t_end, "Final time [s]")->required()->check(CLI::NonNegativeNumber);
    app.add_option("--tol", tol, "Pass threshold on pairwise orientation gaps [rad]");
    app.add_option("--sample-every", sample_every, "Compare every N-th step")
        ->check(CLI::PositiveNumber);
    if (auto code = parse(app, args, out, err)) {
        return *code;
    }
    if (names.size() < 2) {
        err << "error: need at least two --formulation flags\n\n" << app.help();
        return kExitInput;
    }
    std::optional<Scenario> sc = load(scenario_path, err);
    if (!sc) {
        return kExitInput;
    }
    const IntegratorId integ = integrator ? kIntegrators.at(*integrator) : sc->run.integrator;

    std::vector<std::future<Trajectory>> jobs;
    for (const auto& n : names) {
        const Formulation f = kFormulations.at(n);
        jobs.push_back(std::async(std::launch::async, [&sc, f, integ, dt, t_end, sample_every] {
            return simulate(*sc, f, integ, dt, t_end, sample_every);
        }));
    }
    std::vector<Trajectory> runs;
    int status = kExitOk;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            runs.push_back(jobs[i].get());
        } catch (const Error& e) {
            err << "run " << names[i] << " failed: " << e.what() << '\n';
            status = is_input_error(e.kind()) && status != kExitAborted ? kExitInput : kExitAborted;
        }
    }
    if (status != kExitOk) {
        return status == kExitInput ? kExitInput : kExitAborted;
    }

    for (std::size_t i = 0; i < runs.size(); ++i) {
        const DriftReport d = conservation_drift(*sc, runs[i]);
        out << "run " << names[i] << ": energy_drift=" << sci(d.energy)
            << " momentum_drift=" << sci(d.momentum) << '\n';
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < runs.size(); ++a) {
        for (std::size_t b = a + 1; b < runs.size(); ++b) {
            double orient = 0.0;
            double com = 0.0;
            const std::size_t n = std::min(runs[a].size(), runs[b].size());
            for (std::size_t k = 0; k < n; ++k) {
                const auto& sa = runs[a][k];
                const auto& sb = runs[b][k];
                orient = std::max(orient, geodesic_distance(sa.pose.rotation, sb.pose.rotation));
                com = std::max(com, (com_position(sc->inertia, sa.pose) -
                                     com_position(sc->inertia, sb.pose))
                                        .norm());
            }
            worst = std::max(worst, orient);
            out << "gap " << names[a] << " vs " << names[b] << ": orientation=" << sci(orient)
                << " rad com=" << sci(com) << " m\n";
        }
    }
    const bool ok = worst <= tol;
    out << (ok ? "PASS" : "FAIL") << ": max orientation gap " << sci(worst)
        << (ok ? " <= " : " > ") << "tol " << sci(tol) << '\n';
    return ok ? kExitOk : kExitGap;
}

int cmd_validate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Run the built-in invariant suites", "unirigid validate"};
    std::vector<std::string> suites;
    bool list = false;
    app.add_option("--suite", suites, "Suite to run (repeatable; default all)")
        ->check(CLI::IsMember(validation_suite_names()));
    app.add_flag("--list", list, "List suite names and exit");
    if (auto code = parse(app, args, out, err)) {
        return *code;
    }
    if (list) {
        for (const auto& n : validation_suite_names()) out << n << '\n';
        return kExitOk;
    }
    if (suites.empty()) {
        suites = validation_suite_names();
    }
    bool all = true;
    for (const auto& name : suites) {
        const SuiteResult r = run_validation_suite(name);
        all = all && r.passed;
        char line[96];
        std::snprintf(line, sizeof line, "%-26s %s  ", r.name.c_str(), r.passed ? "PASS" : "FAIL");
        out << line << r.detail << '\n';
    }
    return all ? kExitOk : kExitInput;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    static constexpr const char* kUsage =
        "usage: unirigid <command> [options]\n"
        "\n"
        "commands:\n"
        "  simulate   integrate a scenario and write the trajectory CSV\n"
        "  compare    run several formulations and report pairwise gaps\n"
        "  validate   run the built-in invariant suites\n"
        "\n"
        "Run 'unirigid <command> --help' for command options.\n";
    if (args.empty()) {
        err << kUsage;
        return kExitInput;
    }
    const std::string& cmd = args.front();
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (cmd == "simulate") return cmd_simulate(rest, out, err);
    if (cmd == "compare") return cmd_compare(rest, out, err);
    if (cmd == "validate") return cmd_validate(rest, out, err);
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
        out << kUsage;
        return kExitOk;
    }
    err << "unknown command '" << cmd << "'\n\n" << kUsage;
    return kExitInput;
}

}  // namespace unirigid
