#pragma once

#include "curv/catalog.hpp"
#include "curv/verdict.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace curv {

/// Scenario file or CLI problem: malformed input, unknown names, a check
/// requested for a chart it does not apply to. Maps to exit code 2.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    int parallel = 0; ///< worker threads for the point loop; 1 = serial, 0 = default
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_exact;
    std::optional<double> tol_fd;
    std::string only; ///< verify-paper group filter ("" = all)
};

struct Scenario {
    std::string name = "scenario";
    std::shared_ptr<const Ambient> ambient;
    std::optional<ImmersionChart> immersion;
    std::vector<Eigen::VectorXd> explicit_points;
    int random_points = 0;
    std::uint64_t seed = 42;
    std::optional<DomainBox> box;
    std::vector<std::string> checks;
    Tolerances tol;
    std::string output = "text";
};

struct ReportRow {
    std::string check;
    Eigen::VectorXd point;
    CheckVerdict verdict;
    std::string statement;
};

struct CheckReport {
    std::string scenario_name;
    std::uint64_t seed = 0;
    Tolerances tol;
    std::vector<ReportRow> rows;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
    double wall_seconds = 0.0; // text output only; kept out of the JSON body

    bool all_pass() const { return failed == 0; }
};

/// The stable scenario check names.
const std::vector<std::string>& check_names();

/// Human-readable statement of what a check verifies (also used as the
/// traceability string in report rows).
const std::string& check_statement(const std::string& check);

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

/// Executes every (point x check) cell, point-parallel, report in input
/// order. Throws ScenarioError for validation problems; evaluation errors
/// propagate as their own exception types.
CheckReport run_scenario(const Scenario& sc, const RunOptions& opts);

std::string report_to_json(const CheckReport& report);
std::string report_to_text(const CheckReport& report, bool color);

// ---------------------------------------------------------------------------
// Bundled verification suite
// ---------------------------------------------------------------------------

struct VerifyRow {
    std::string group;
    std::string fixture;
    nlohmann::json params;
    std::string check;
    bool expected_pass = false;
    std::string provenance;
    std::string statement;
    CheckVerdict verdict; // aggregated over the probe points
    bool met = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    std::uint64_t seed = 0;
    Tolerances tol;
    double wall_seconds = 0.0;
    bool all_met = true;
};

/// Runs the full fixture expectation table (filtered by opts.only) at three
/// deterministic probe points per row.
VerifyReport verify_paper(const RunOptions& opts);

std::string verify_to_json(const VerifyReport& report);
std::string verify_to_text(const VerifyReport& report, bool color);

} // namespace curv
