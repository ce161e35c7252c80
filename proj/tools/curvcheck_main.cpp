#include "curv/catalog.hpp"
#include "curv/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <unistd.h>

namespace {

bool stdout_is_tty() { return isatty(fileno(stdout)) != 0; }

void add_run_options(CLI::App* cmd, curv::RunOptions& opts, std::string& format) {
    cmd->add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--parallel", opts.parallel, "worker threads for the point loop (1 = serial)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&opts](std::uint64_t s) { opts.seed = s; }, "override the sampling seed");
    cmd->add_option_function<double>(
        "--tol-exact", [&opts](double t) { opts.tol_exact = t; },
        "tolerance for jet-exact checks");
    cmd->add_option_function<double>(
        "--tol-fd", [&opts](double t) { opts.tol_fd = t; },
        "tolerance for finite-difference checks");
}

int run_check_command(const std::string& path, const curv::RunOptions& opts,
                      const std::string& format_override) {
    curv::Scenario sc = curv::load_scenario_file(path);
    curv::CheckReport report = curv::run_scenario(sc, opts);

    const std::string format = format_override.empty() ? sc.output : format_override;
    if (format == "json") {
        std::cout << curv::report_to_json(report);
    } else {
        std::cout << curv::report_to_text(report, stdout_is_tty());
    }
    return report.all_pass() ? 0 : 1;
}

int run_verify_command(const curv::RunOptions& opts, const std::string& format) {
    curv::VerifyReport report = curv::verify_paper(opts);
    if (format == "json") {
        std::cout << curv::verify_to_json(report);
    } else {
        std::cout << curv::verify_to_text(report, stdout_is_tty());
    }
    return report.all_met ? 0 : 1;
}

void print_list() {
    std::printf("%-22s %-10s %s\n", "name", "kind", "summary");
    for (const auto& e : curv::list_catalog()) {
        std::printf("%-22s %-10s %s\n", e.name.c_str(), e.kind.c_str(), e.summary.c_str());
    }
}

int print_show(const std::string& name) {
    const curv::CatalogEntry& e = curv::catalog_entry(name);
    std::printf("name:     %s\n", e.name.c_str());
    std::printf("kind:     %s\n", e.kind.c_str());
    std::printf("summary:  %s\n", e.summary.c_str());
    std::printf("notes:    %s\n", e.doc.c_str());
    std::printf("defaults: %s\n", e.defaults.dump().c_str());
    if (!e.expected.empty()) {
        std::printf("expected verdicts on defaults:\n");
        for (const auto& x : e.expected) {
            std::printf("  %-24s %-5s (%s)\n", x.check.c_str(), x.pass ? "pass" : "fail",
                        x.provenance.c_str());
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pointwise curvature and immersion checks on coordinate charts"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string check_format;
    curv::RunOptions check_opts;
    CLI::App* check = app.add_subcommand("check", "run the checks of a scenario file");
    check->add_option("scenario", scenario_path, "scenario JSON file")->required();
    add_run_options(check, check_opts, check_format);

    CLI::App* list = app.add_subcommand("list", "list the built-in fixtures");

    std::string show_name;
    CLI::App* show = app.add_subcommand("show", "describe one fixture");
    show->add_option("name", show_name, "fixture name")->required();

    std::string verify_format = "text";
    curv::RunOptions verify_opts;
    CLI::App* verify =
        app.add_subcommand("verify-paper", "run the bundled fixture expectation matrix");
    verify->add_option("--only", verify_opts.only,
                       "restrict to one group: curvature, kahler, holomorphic, immersion, "
                       "umbilical");
    add_run_options(verify, verify_opts, verify_format);
    verify->add_option_function<double>(
        "--tol",
        [&verify_opts](double t) {
            verify_opts.tol_exact = t;
            verify_opts.tol_fd = t;
        },
        "set both tolerances at once");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return run_check_command(scenario_path, check_opts, check_format);
        if (list->parsed()) {
            print_list();
            return 0;
        }
        if (show->parsed()) return print_show(show_name);
        if (verify->parsed()) return run_verify_command(verify_opts, verify_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
