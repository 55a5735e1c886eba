// hodge: command line front end.
//
//   hodge [run] <command> <input.json> [--order d] [--seed u64] [--report path]
//
// Exit status 0 when every check passes, 1 when a check fails and 2 when the
// input cannot be parsed or validated.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <hodge/io/commands.hpp>

int main(int argc, char **argv) {
    CLI::App app{"Exact computations with variations of mixed Hodge structure"};
    app.set_help_all_flag("--help-all");

    std::string command;
    std::string input;
    std::optional<int> order;
    std::optional<std::uint64_t> seed;
    std::string report_path;

    auto add_args = [&](CLI::App *a) {
        a->add_option("command", command, "bigrading, weight-filtration, rel-weight, higgs-extract, "
                                          "orbit-reconstruct, amodel, wdvv, bmodel or verify")
            ->required();
        a->add_option("input", input, "problem file (JSON)")->required();
        a->add_option("--order", order, "truncation order of power series")->check(CLI::Range(0, 64));
        a->add_option("--seed", seed, "seed for randomized steps");
        a->add_option("--report", report_path, "write the JSON report to this file");
    };
    CLI::App *run = app.add_subcommand("run", "run a command on a problem file");
    add_args(run);
    app.require_subcommand(0, 1);
    app.allow_extras();

    try {
        app.parse(argc, argv);
        if (!run->parsed()) {
            // "run" may be omitted: reparse the arguments as its own.
            CLI::App direct{"hodge"};
            add_args(&direct);
            direct.parse(argc, argv);
        }
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : hodge::io::exit_invalid;
    }

    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << command << ": invalid; cannot read " << input << "\n";
        return hodge::io::exit_invalid;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    hodge::io::run_options opt;
    opt.order = order;
    opt.seed = seed;
    hodge::io::run_result r = hodge::io::run_command(command, buf.str(), opt);

    if (report_path.empty()) {
        std::cout << r.report;
    } else {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << report_path << "\n";
            return hodge::io::exit_invalid;
        }
        out << r.report;
    }
    std::cerr << r.summary << "\n";
    return r.code;
}
