// zenoqst: state transfer and swapping over a Zeno-gated fiber bus.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.

#include "zenoqst/cli/commands.hpp"
#include "zenoqst/errors.hpp"
#include "zenoqst/protocol.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

using namespace zenoqst;
using namespace zenoqst::cli;

struct Args {
    std::string config;
    std::string preset;
    std::string out;
    std::string series;
    std::string format = "text";
    int workers = -1;
    bool strict = false;
};

ExperimentConfig load(const Args& a) {
    if (!a.config.empty() && !a.preset.empty()) throw ConfigError("command line", 0, "", "--config and --preset are exclusive");
    if (!a.preset.empty()) return load_preset(a.preset);
    if (!a.config.empty()) return load_config_file(a.config);
    return parse_config("", "defaults");
}

// Writes through `emit` to --out, or to stdout when --out is absent.
void deliver(const Args& a, const std::function<void(std::ostream&)>& emit) {
    if (a.out.empty()) {
        emit(std::cout);
        return;
    }
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw ConfigError(a.out, 0, "", "cannot open output file");
    emit(f);
}

void print_report(const Args& a, const RunReport& r) {
    deliver(a, [&](std::ostream& os) {
        if (a.format == "json")
            write_report_json(os, r);
        else
            write_report_text(os, r);
    });
    if (!a.out.empty() && r.fidelity) std::cout << "fidelity: " << *r.fidelity << '\n';
}

CommandOptions options(const Args& a) { return {a.strict, a.workers}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zeno-dynamics simulator for cavity-fiber atom networks"};
    app.require_subcommand(1);
    Args args;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config, "Configuration file")->check(CLI::ExistingFile);
        sub->add_option("--preset", args.preset, "Built-in configuration (see `zenoqst presets`)");
        sub->add_option("--out", args.out, "Output file (default: stdout)");
        sub->add_flag("--strict", args.strict, "Treat validity-gate violations as errors");
    };

    auto* qst = app.add_subcommand("qst", "Transfer one qubit between two nodes");
    common(qst);
    qst->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    qst->add_option("--series", args.series, "Also write a population time series CSV here");

    auto* qss = app.add_subcommand("qss", "Swap two atoms through a helper");
    common(qss);
    qss->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"text", "json"}));

    auto* net = app.add_subcommand("network", "Swap an arbitrary pair on an N-node bus");
    common(net);
    net->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"text", "json"}));

    auto* sweep = app.add_subcommand("sweep", "Fidelity over a two-parameter grid, as CSV");
    common(sweep);
    sweep->add_option("--workers", args.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    auto* zeno = app.add_subcommand("zeno", "Zeno decomposition of the two-node strong coupling");
    common(zeno);
    std::string export_path;
    zeno->add_option("--export", export_path, "Write projectors and H_eff as sparse triplets");

    auto* schedule = app.add_subcommand("schedule", "Print the pulse schedule of a protocol");
    common(schedule);
    std::string protocol = "qst";
    schedule->add_option("--protocol", protocol, "qst, qss or network")->check(CLI::IsMember({"qst", "qss", "network"}));

    app.add_subcommand("presets", "List built-in configurations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("presets")) {
            for (const auto& n : preset_names()) std::cout << n << '\n';
            return 0;
        }
        const ExperimentConfig cfg = load(args);
        if (app.got_subcommand(qst)) {
            TimeSeries series;
            const RunReport r = cmd_qst(cfg, options(args), args.series.empty() ? nullptr : &series);
            if (!args.series.empty()) {
                std::ofstream f(args.series, std::ios::binary);
                if (!f) throw ConfigError(args.series, 0, "", "cannot open output file");
                write_time_series_csv(f, series);
            }
            print_report(args, r);
        } else if (app.got_subcommand(qss)) {
            print_report(args, cmd_qss(cfg, options(args)));
        } else if (app.got_subcommand(net)) {
            print_report(args, cmd_network(cfg, options(args)));
        } else if (app.got_subcommand(sweep)) {
            const SweepResult result = cmd_sweep(cfg, options(args));
            deliver(args, [&](std::ostream& os) { write_sweep_csv(os, result, cfg.echo); });
            std::size_t failed = 0;
            for (const auto& p : result.points) failed += p.fidelity ? 0 : 1;
            if (failed) std::cerr << "warning: " << failed << " grid point(s) failed\n";
        } else if (app.got_subcommand(zeno)) {
            const ZenoSummary z = cmd_zeno(cfg);
            deliver(args, [&](std::ostream& os) { write_zeno_text(os, z); });
            if (!export_path.empty()) {
                std::ofstream f(export_path, std::ios::binary);
                if (!f) throw ConfigError(export_path, 0, "", "cannot open output file");
                write_decomposition(f, z);
            }
        } else if (app.got_subcommand(schedule)) {
            PulseSchedule s;
            if (protocol == "qst")
                s = qst_schedule(cfg.sender, cfg.receiver, cfg.omega, cfg.g, cfg.lambda, cfg.nodes);
            else if (protocol == "qss")
                s = qss_schedule(cfg.atom_a, cfg.atom_b, cfg.helper, cfg.omega, cfg.g, cfg.lambda);
            else
                s = network_swap_schedule(cfg.atom_a, cfg.atom_b, cfg.helper, cfg.nodes, cfg.omega, cfg.g, cfg.lambda);
            deliver(args, [&](std::ostream& os) { write_schedule(os, s); });
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const ValidityError& e) {
        std::cerr << "validity error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
