#include "curv/runner.hpp"

#include "curv/jet.hpp"
#include "curv/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace curv {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "curvcheck 1.0.0";
constexpr int kDefaultSamples = 64;
constexpr int kProbePoints = 3; // verify-paper points per row

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct CheckSpec {
    const char* name;
    bool needs_immersion;
    bool needs_kahler;
    int min_ambient_dim;
    const char* statement;
};

const CheckSpec kChecks[] = {
    {"special", true, false, 2,
     "sum_i R(e_i, w) e_i stays tangent for every tangent w"},
    {"very-special", true, false, 2, "R(v, w) v stays tangent for all tangent v, w"},
    {"umbilical", true, false, 2, "alpha(X, Y) = <X, Y> H"},
    {"extrinsic-sphere", true, false, 2,
     "umbilical with parallel mean curvature (nabla-perp H = 0)"},
    {"codazzi", true, false, 2,
     "(R(X,Y)Z)^perp = (nabla-perp_X alpha)(Y,Z) - (nabla-perp_Y alpha)(X,Z)"},
    {"einstein", false, false, 2, "Ric = rho g at the point"},
    {"constant-curvature", false, false, 2, "R_abcd = rho (g_ad g_bc - g_ac g_bd)"},
    {"kahler-verify", false, true, 2, "J^2 = -I, g(J., J.) = g, nabla J = 0"},
    {"xy", false, true, 4,
     "<R(X,JX)Y,JX> = <R(Y,JY)X,JY> for orthonormal X, JX, Y, JY"},
    {"kahler-identities", false, true, 4,
     "J-invariance, pair-trade, polarization, and Bianchi-split curvature identities"},
    {"prop52-chain", false, true, 6,
     "<R(X,JX)Y,JX> = 2<R(Z,JZ)X,JY> = 4<R(Z,X)Z,Y> = 4<R(JZ,X)JZ,Y>, independent of Z"},
    {"constant-hol-curvature", false, true, 4,
     "<R(X,JX)Y,JX> = 0 and <R(X,JX)Y,X> = 0 for orthonormal X, JX, Y, JY"},
};

// verify-paper-only probes (not scenario checks)
const CheckSpec kInternalChecks[] = {
    {"frame-independence", true, false, 2,
     "the special-check defect norm is invariant under rotations of the tangent frame"},
    {"hol-zero-probes", false, true, 6,
     "the six zero scalars behind very-special complex and totally real immersions"},
    {"antiholomorphic-flatness", false, true, 8,
     "<R(X,Y)Z,W> = 0 on antiholomorphic orthonormal quadruples"},
};

const CheckSpec* find_spec(const std::string& name, bool include_internal) {
    for (const auto& c : kChecks) {
        if (name == c.name) return &c;
    }
    if (include_internal) {
        for (const auto& c : kInternalChecks) {
            if (name == c.name) return &c;
        }
    }
    return nullptr;
}

std::string valid_check_names() {
    std::string out;
    for (const auto& c : kChecks) {
        if (!out.empty()) out += ", ";
        out += c.name;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Check dispatch
// ---------------------------------------------------------------------------

struct PointContext {
    const Ambient* ambient = nullptr;
    const ImmersionChart* immersion = nullptr; // null for ambient-only runs
    Eigen::VectorXd point;                     // scenario point (parameter point if immersed)
    std::optional<ImmersionFrame> frame;
    CurvatureData cd; // at the chart point (image point if immersed)
    Tolerances tol;
    std::uint64_t seed = 0;
};

PointContext make_context(const Ambient& ambient, const ImmersionChart* im,
                          const Eigen::VectorXd& point, const Tolerances& tol,
                          std::uint64_t seed) {
    PointContext ctx;
    ctx.ambient = &ambient;
    ctx.immersion = im;
    ctx.point = point;
    ctx.tol = tol;
    ctx.seed = seed;
    if (im) {
        ctx.frame = frame_at(*im, point);
        ctx.cd = curvature_at(ambient.metric(), ctx.frame->p);
    } else {
        ctx.cd = curvature_at(ambient.metric(), point);
    }
    return ctx;
}

CheckVerdict run_check(const std::string& name, const PointContext& ctx) {
    const KahlerChart* kc = ctx.ambient->kahler();

    if (name == "einstein") return einstein_check_at(ctx.cd, ctx.tol.exact);
    if (name == "constant-curvature") return constant_curvature_check_at(ctx.cd, ctx.tol.exact);
    if (name == "kahler-verify") return kahler_verify_at(*kc, ctx.cd, ctx.tol.exact, ctx.tol.fd);
    if (name == "xy") return xy_check_at(*kc, ctx.cd, kDefaultSamples, ctx.seed, ctx.tol.exact);
    if (name == "kahler-identities") {
        return kahler_identity_suite_at(*kc, ctx.cd, kDefaultSamples, ctx.seed, ctx.tol.exact);
    }
    if (name == "prop52-chain") {
        return prop52_chain_sampled(*kc, ctx.cd, 8, ctx.seed, ctx.tol.exact);
    }
    if (name == "constant-hol-curvature") {
        return constant_hol_curvature_check_at(*kc, ctx.cd, kDefaultSamples, ctx.seed,
                                               ctx.tol.exact);
    }
    if (name == "special") return special_check_at(*ctx.frame, ctx.cd, ctx.tol.exact);
    if (name == "very-special") return very_special_check_at(*ctx.frame, ctx.cd, ctx.tol.exact);
    if (name == "umbilical") return umbilical_check_at(*ctx.frame, ctx.tol.exact);
    if (name == "extrinsic-sphere") {
        return extrinsic_sphere_check_at(*ctx.immersion, ctx.point, ctx.tol.exact, ctx.tol.fd);
    }
    if (name == "codazzi") return codazzi_residual_at(*ctx.immersion, ctx.point, ctx.tol.fd);

    if (name == "frame-independence") {
        const double spread = basis_independence_probe(*ctx.frame, ctx.cd, 20, ctx.seed);
        CheckVerdict v;
        v.check = name;
        v.defect = spread;
        v.tol = 1e-10 * (1.0 + ctx.cd.max_abs_riemann);
        v.pass = spread <= v.tol;
        return v;
    }
    if (name == "hol-zero-probes") {
        const Eigen::MatrixXd jm = kc->j_at(ctx.cd.point);
        std::mt19937_64 rng(ctx.seed);
        CheckVerdict v;
        v.check = name;
        v.tol = ctx.tol.exact * (1.0 + ctx.cd.max_abs_riemann);
        double defect = 0.0;
        for (int s = 0; s < 8; ++s) {
            auto gen = sample_j_pairs(ctx.cd, jm, 3, rng);
            auto scalars = eq_0xy_0z_probe(*kc, ctx.cd, gen[0], gen[1], gen[2], ctx.seed);
            for (double x : scalars) defect = std::max(defect, std::abs(x));
        }
        v.defect = defect;
        v.pass = defect <= v.tol;
        return v;
    }
    if (name == "antiholomorphic-flatness") {
        return antiholomorphic_flatness_probe(*kc, ctx.cd, kDefaultSamples, ctx.seed,
                                              ctx.tol.exact);
    }
    throw ScenarioError("unknown check '" + name + "'; valid checks: " + valid_check_names());
}

void validate_check(const std::string& name, const Ambient& ambient, const ImmersionChart* im,
                    bool include_internal) {
    const CheckSpec* spec = find_spec(name, include_internal);
    if (!spec) {
        throw ScenarioError("unknown check '" + name + "'; valid checks: " + valid_check_names());
    }
    if (spec->needs_immersion && !im) {
        throw ScenarioError("check '" + name + "' needs an immersion");
    }
    if (spec->needs_kahler && !ambient.kahler()) {
        throw ScenarioError("check '" + name + "' needs a kahler ambient chart");
    }
    if (ambient.metric().dim() < spec->min_ambient_dim) {
        throw ScenarioError("check '" + name + "' needs ambient dimension >= " +
                            std::to_string(spec->min_ambient_dim));
    }
    if (name == "codazzi" && im && im->domain_dim < 2) {
        throw ScenarioError("check 'codazzi' needs an immersion of dimension >= 2");
    }
}

// ---------------------------------------------------------------------------
// Scenario parsing
// ---------------------------------------------------------------------------

std::shared_ptr<const Ambient> parse_inline_ambient(const json& spec) {
    if (spec.contains("potential")) {
        const int n = spec.value("n", 0);
        if (n < 1) throw ScenarioError("inline potential ambient needs \"n\" >= 1");
        std::vector<std::string> vars;
        for (int i = 1; i <= 2 * n; ++i) vars.push_back("x" + std::to_string(i));
        ExprPtr phi;
        try {
            phi = parse(spec["potential"].get<std::string>(), vars);
        } catch (const ParseError& e) {
            throw ScenarioError(std::string("potential does not parse: ") + e.what() +
                                " (bytes " + std::to_string(e.span().begin) + ".." +
                                std::to_string(e.span().end) + ")");
        }
        auto a = std::make_shared<Ambient>();
        a->chart = metric_from_kahler_potential(phi, n, "inline-potential");
        return a;
    }

    if (!spec.contains("dim") || !spec.contains("entries")) {
        throw ScenarioError("inline ambient needs \"dim\" and \"entries\" (or \"potential\")");
    }
    const int m = spec["dim"].get<int>();
    std::vector<std::vector<std::string>> entries;
    for (const auto& row : spec["entries"]) {
        entries.push_back(row.get<std::vector<std::string>>());
    }
    MetricChart chart = [&] {
        try {
            return MetricChart::from_strings(m, entries, "inline-metric");
        } catch (const ParseError& e) {
            throw ScenarioError(std::string("metric entry does not parse: ") + e.what() +
                                " (bytes " + std::to_string(e.span().begin) + ".." +
                                std::to_string(e.span().end) + ")");
        }
    }();

    auto a = std::make_shared<Ambient>();
    if (spec.contains("complex_structure")) {
        const json& cs = spec["complex_structure"];
        KahlerChart kc;
        kc.metric = std::move(chart);
        if (cs.is_string() && cs.get<std::string>() == "standard") {
            if (m % 2 != 0) throw ScenarioError("standard J needs an even dimension");
            kc.J = ComplexStructureField::make_standard(m / 2);
        } else if (cs.is_array()) {
            ComplexStructureField j;
            j.dim = m;
            j.standard = false;
            const auto vars = kc.metric.var_order();
            for (const auto& row : cs) {
                for (const auto& cell : row) {
                    j.entries.push_back(parse(cell.get<std::string>(), vars));
                }
            }
            if (static_cast<int>(j.entries.size()) != m * m) {
                throw ScenarioError("complex_structure matrix must be dim x dim");
            }
            kc.J = std::move(j);
        } else {
            throw ScenarioError("complex_structure must be \"standard\" or a matrix of entries");
        }
        a->chart = std::move(kc);
    } else {
        a->chart = std::move(chart);
    }
    return a;
}

json params_of(const json& spec) {
    return spec.contains("params") ? spec["params"] : json::object();
}

} // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& c : kChecks) out.push_back(c.name);
        return out;
    }();
    return names;
}

const std::string& check_statement(const std::string& check) {
    static const std::map<std::string, std::string> table = [] {
        std::map<std::string, std::string> t;
        for (const auto& c : kChecks) t[c.name] = c.statement;
        for (const auto& c : kInternalChecks) t[c.name] = c.statement;
        return t;
    }();
    static const std::string unknown;
    auto it = table.find(check);
    return it == table.end() ? unknown : it->second;
}

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
    if (doc.value("schema", 0) != 1) {
        throw ScenarioError("scenario needs \"schema\": 1");
    }

    Scenario sc;
    sc.name = doc.value("name", std::string("scenario"));

    if (!doc.contains("ambient")) throw ScenarioError("scenario needs an \"ambient\"");
    const json& amb = doc["ambient"];
    try {
        if (amb.is_string()) {
            Instantiated inst = instantiate(amb.get<std::string>());
            sc.ambient = inst.ambient;
        } else if (amb.is_object() && amb.contains("name")) {
            Instantiated inst = instantiate(amb["name"].get<std::string>(), params_of(amb));
            if (inst.immersion) {
                throw ScenarioError("\"ambient\" names an immersion fixture; use \"immersion\"");
            }
            sc.ambient = inst.ambient;
        } else if (amb.is_object()) {
            sc.ambient = parse_inline_ambient(amb);
        } else {
            throw ScenarioError("\"ambient\" must be a fixture name or an object");
        }
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(e.what());
    }

    if (doc.contains("immersion")) {
        const json& imm = doc["immersion"];
        try {
            if (imm.is_string() || (imm.is_object() && imm.contains("name"))) {
                const std::string name =
                    imm.is_string() ? imm.get<std::string>() : imm["name"].get<std::string>();
                Instantiated inst = instantiate(name, imm.is_string() ? json::object() : params_of(imm));
                if (!inst.immersion) {
                    throw ScenarioError("\"immersion\" names an ambient fixture");
                }
                sc.immersion = std::move(inst.immersion);
                sc.ambient = inst.ambient; // an immersion fixture carries its own ambient
            } else if (imm.is_object()) {
                if (!imm.contains("domain_dim") || !imm.contains("components")) {
                    throw ScenarioError(
                        "inline immersion needs \"domain_dim\" and \"components\"");
                }
                sc.immersion = ImmersionChart::from_strings(
                    imm["domain_dim"].get<int>(),
                    imm["components"].get<std::vector<std::string>>(), sc.ambient,
                    "inline-immersion");
            } else {
                throw ScenarioError("\"immersion\" must be a fixture name or an object");
            }
        } catch (const ParseError& e) {
            throw ScenarioError(std::string("immersion component does not parse: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(e.what());
        }
    }

    if (!doc.contains("checks") || !doc["checks"].is_array() || doc["checks"].empty()) {
        throw ScenarioError("scenario needs a non-empty \"checks\" array");
    }
    for (const auto& c : doc["checks"]) sc.checks.push_back(c.get<std::string>());
    for (const auto& c : sc.checks) {
        validate_check(c, *sc.ambient, sc.immersion ? &*sc.immersion : nullptr, false);
    }

    const int pdim = sc.immersion ? sc.immersion->domain_dim : sc.ambient->metric().dim();
    if (doc.contains("points")) {
        const json& pts = doc["points"];
        if (pts.contains("explicit")) {
            for (const auto& p : pts["explicit"]) {
                auto coords = p.get<std::vector<double>>();
                if (static_cast<int>(coords.size()) != pdim) {
                    throw ScenarioError("explicit point has dimension " +
                                        std::to_string(coords.size()) + ", expected " +
                                        std::to_string(pdim));
                }
                sc.explicit_points.push_back(
                    Eigen::Map<const Eigen::VectorXd>(coords.data(), pdim));
            }
        }
        sc.random_points = pts.value("random", 0);
        if (sc.random_points < 0) throw ScenarioError("\"random\" must be >= 0");
        if (pts.contains("seed")) sc.seed = pts["seed"].get<std::uint64_t>();
        if (pts.contains("box")) {
            DomainBox box;
            auto lo = pts["box"]["lo"].get<std::vector<double>>();
            auto hi = pts["box"]["hi"].get<std::vector<double>>();
            if (static_cast<int>(lo.size()) != pdim || static_cast<int>(hi.size()) != pdim) {
                throw ScenarioError("points box must match the point dimension");
            }
            box.lo = Eigen::Map<const Eigen::VectorXd>(lo.data(), pdim);
            box.hi = Eigen::Map<const Eigen::VectorXd>(hi.data(), pdim);
            sc.box = box;
        }
    }
    if (sc.explicit_points.empty() && sc.random_points == 0) {
        sc.random_points = 5; // sensible default: a handful of sampled points
    }

    if (doc.contains("tolerances")) {
        sc.tol.exact = doc["tolerances"].value("exact", sc.tol.exact);
        sc.tol.fd = doc["tolerances"].value("fd", sc.tol.fd);
    }
    sc.output = doc.value("output", sc.output);
    if (sc.output != "text" && sc.output != "json") {
        throw ScenarioError("\"output\" must be \"text\" or \"json\"");
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ScenarioError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    Scenario sc = parse_scenario(doc);
    if (sc.name == "scenario") sc.name = path;
    return sc;
}

namespace {

std::vector<Eigen::VectorXd> scenario_points(const Scenario& sc) {
    std::vector<Eigen::VectorXd> points = sc.explicit_points;
    if (sc.random_points > 0) {
        std::optional<DomainBox> box = sc.box;
        if (!box) {
            box = sc.immersion ? sc.immersion->domain_hint : sc.ambient->metric().domain_hint;
        }
        if (!box) {
            throw ScenarioError("random points need a \"box\" (the chart has no domain hint)");
        }
        const int pdim = static_cast<int>(box->lo.size());
        std::mt19937_64 rng(sc.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int i = 0; i < sc.random_points; ++i) {
            Eigen::VectorXd p(pdim);
            for (int d = 0; d < pdim; ++d) {
                p[d] = box->lo[d] + (box->hi[d] - box->lo[d]) * unit(rng);
            }
            points.push_back(std::move(p));
        }
    }
    return points;
}

} // namespace

CheckReport run_scenario(const Scenario& sc, const RunOptions& opts) {
    const auto start = std::chrono::steady_clock::now();

    Scenario run = sc;
    if (opts.seed) run.seed = *opts.seed;
    if (opts.tol_exact) run.tol.exact = *opts.tol_exact;
    if (opts.tol_fd) run.tol.fd = *opts.tol_fd;

    const auto points = scenario_points(run);
    const int ncells = static_cast<int>(points.size());
    const int nchecks = static_cast<int>(run.checks.size());

    std::vector<std::vector<CheckVerdict>> verdicts(static_cast<std::size_t>(ncells));
    kernels::parallel_for(ncells, opts.parallel, [&](int i) {
        PointContext ctx = make_context(*run.ambient,
                                        run.immersion ? &*run.immersion : nullptr,
                                        points[static_cast<std::size_t>(i)], run.tol,
                                        mix_seed(run.seed, static_cast<std::uint64_t>(i)));
        auto& out = verdicts[static_cast<std::size_t>(i)];
        out.reserve(static_cast<std::size_t>(nchecks));
        for (const auto& check : run.checks) out.push_back(run_check(check, ctx));
    });

    CheckReport report;
    report.scenario_name = run.name;
    report.seed = run.seed;
    report.tol = run.tol;
    for (int i = 0; i < ncells; ++i) {
        for (int c = 0; c < nchecks; ++c) {
            ReportRow row;
            row.check = run.checks[static_cast<std::size_t>(c)];
            row.point = points[static_cast<std::size_t>(i)];
            row.verdict = verdicts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            row.statement = check_statement(row.check);
            if (row.verdict.skipped) {
                ++report.skipped;
            } else if (row.verdict.pass) {
                ++report.passed;
            } else {
                ++report.failed;
            }
            report.rows.push_back(std::move(row));
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

namespace {

json row_to_json(const ReportRow& row) {
    json j;
    j["check"] = row.check;
    j["point"] = std::vector<double>(row.point.data(), row.point.data() + row.point.size());
    j["defect"] = row.verdict.defect;
    j["tol"] = row.verdict.tol;
    j["pass"] = row.verdict.pass;
    if (row.verdict.skipped) j["skipped"] = *row.verdict.skipped;
    if (!row.verdict.details.empty()) {
        json d;
        for (const auto& [k, v] : row.verdict.details) d[k] = v;
        j["details"] = d;
    }
    j["statement"] = row.statement;
    return j;
}

bool want_color(bool color_requested) {
    return color_requested && std::getenv("NO_COLOR") == nullptr;
}

const char* pass_str(bool pass, bool skipped, bool color) {
    if (skipped) return color ? "\x1b[33mskip\x1b[0m" : "skip";
    if (pass) return color ? "\x1b[32mpass\x1b[0m" : "pass";
    return color ? "\x1b[31mFAIL\x1b[0m" : "FAIL";
}

std::string format_point(const Eigen::VectorXd& p) {
    std::ostringstream out;
    out.precision(3);
    out << "(";
    for (int i = 0; i < p.size(); ++i) {
        if (i) out << ",";
        out << p[i];
    }
    out << ")";
    return out.str();
}

} // namespace

std::string report_to_json(const CheckReport& report) {
    json j;
    j["schema"] = 1;
    j["version"] = kVersion;
    j["scenario"] = report.scenario_name;
    j["seed"] = report.seed;
    j["tolerances"] = {{"exact", report.tol.exact}, {"fd", report.tol.fd}};
    json rows = json::array();
    for (const auto& row : report.rows) rows.push_back(row_to_json(row));
    j["rows"] = rows;
    j["summary"] = {{"total", report.rows.size()},
                    {"passed", report.passed},
                    {"failed", report.failed},
                    {"skipped", report.skipped}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const CheckReport& report, bool color) {
    const bool c = want_color(color);
    std::ostringstream out;
    out << "scenario: " << report.scenario_name << "  (seed " << report.seed << ", tol exact "
        << report.tol.exact << ", fd " << report.tol.fd << ")\n";
    for (const auto& row : report.rows) {
        std::ostringstream defect;
        defect.precision(3);
        defect << std::scientific << row.verdict.defect << " <= " << row.verdict.tol;
        out << "  " << pass_str(row.verdict.pass, row.verdict.skipped.has_value(), c) << "  ";
        out.width(24);
        out << std::left << row.check;
        out << " " << defect.str() << "  at " << format_point(row.point);
        if (row.verdict.skipped) out << "  [" << *row.verdict.skipped << "]";
        out << "\n";
    }
    out << "summary: " << report.passed << " passed, " << report.failed << " failed, "
        << report.skipped << " skipped  (" << report.wall_seconds << " s)\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// verify-paper
// ---------------------------------------------------------------------------

namespace {

struct VerifySpec {
    std::string group;
    std::string fixture;
    json params;
    std::string check;
    bool expected_pass;
    std::string provenance;
};

std::string group_of_check(const std::string& check) {
    if (check == "einstein" || check == "constant-curvature") return "curvature";
    if (check == "kahler-verify" || check == "kahler-identities" || check == "xy") {
        return "kahler";
    }
    if (check == "constant-hol-curvature" || check == "prop52-chain" ||
        check == "hol-zero-probes" || check == "antiholomorphic-flatness") {
        return "holomorphic";
    }
    if (check == "umbilical" || check == "extrinsic-sphere") return "umbilical";
    return "immersion";
}

std::vector<VerifySpec> verify_table() {
    std::vector<VerifySpec> rows;

    // Every catalog expectation on default parameters.
    for (const auto& entry : list_catalog()) {
        for (const auto& exp : entry.expected) {
            rows.push_back({group_of_check(exp.check), entry.name, json::object(), exp.check,
                            exp.pass, exp.provenance});
        }
    }

    auto add = [&](const std::string& fixture, json params, const std::string& check,
                   bool expected, const std::string& provenance) {
        rows.push_back({group_of_check(check), fixture, std::move(params), check, expected,
                        provenance});
    };

    // Umbilical surfaces in the curved conformal ambient: still umbilical,
    // no longer extrinsic spheres, and therefore not special.
    add("round-sphere", {{"ambient", "conformal3"}}, "umbilical", true, "theorem");
    add("round-sphere", {{"ambient", "conformal3"}}, "extrinsic-sphere", false, "measured");
    add("round-sphere", {{"ambient", "conformal3"}}, "special", false, "theorem");
    add("ellipsoid", {{"ambient", "conformal3"}}, "special", false, "measured");
    add("ellipsoid", {{"ambient", "conformal3"}}, "extrinsic-sphere", false, "measured");

    // Space-form immersions beyond the defaults.
    add("surface2", {{"ambient", "sphere"}, {"m", 4}, {"seed", 11}}, "very-special", true,
        "theorem");
    add("surface2", {{"ambient", "hyperbolic"}, {"m", 4}, {"seed", 12}}, "very-special", true,
        "theorem");
    add("graph-hypersurface", {{"ambient", "euclidean"}, {"m", 4}, {"seed", 13}},
        "very-special", true, "theorem");
    add("graph-hypersurface", {{"ambient", "sphere"}, {"m", 4}, {"seed", 14}}, "very-special",
        true, "theorem");

    // Frame independence of the special-check defect norm.
    add("graph-hypersurface", json::object(), "frame-independence", true, "theorem");
    add("surface2", {{"ambient", "sphere"}, {"m", 4}, {"seed", 11}}, "frame-independence",
        true, "theorem");
    add("round-sphere", json::object(), "frame-independence", true, "theorem");

    // Holomorphic structure at higher dimension.
    add("fubini-study", {{"n", 3}}, "kahler-identities", true, "theorem");
    add("fubini-study", {{"n", 3}}, "constant-hol-curvature", true, "theorem");
    add("fubini-study", {{"n", 3}}, "prop52-chain", true, "theorem");
    add("fubini-study", {{"n", 3}}, "hol-zero-probes", true, "theorem");
    add("fubini-study", {{"n", 4}}, "antiholomorphic-flatness", true, "theorem");
    add("flat-cn", {{"n", 3}}, "prop52-chain", true, "construction");
    add("flat-cn", {{"n", 3}}, "hol-zero-probes", true, "construction");
    add("perturbed-kahler", {{"n", 3}, {"amplitude", 0.05}}, "kahler-identities", true,
        "theorem");

    // Stable-sort into a fixed group order so the text matrix reads as one
    // block per group; ties keep the insertion order above.
    auto rank = [](const std::string& g) {
        if (g == "curvature") return 0;
        if (g == "kahler") return 1;
        if (g == "holomorphic") return 2;
        if (g == "umbilical") return 3;
        return 4; // immersion
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const VerifySpec& a, const VerifySpec& b) {
        return rank(a.group) < rank(b.group);
    });
    return rows;
}

} // namespace

VerifyReport verify_paper(const RunOptions& opts) {
    const auto start = std::chrono::steady_clock::now();

    Tolerances tol;
    if (opts.tol_exact) tol.exact = *opts.tol_exact;
    if (opts.tol_fd) tol.fd = *opts.tol_fd;
    const std::uint64_t seed = opts.seed.value_or(42);

    std::vector<VerifySpec> specs = verify_table();
    if (!opts.only.empty()) {
        std::vector<VerifySpec> filtered;
        for (auto& s : specs) {
            if (s.group == opts.only) filtered.push_back(std::move(s));
        }
        if (filtered.empty()) {
            throw ScenarioError("no verification rows in group '" + opts.only +
                                "'; groups: curvature, kahler, holomorphic, immersion, umbilical");
        }
        specs = std::move(filtered);
    }

    VerifyReport report;
    report.seed = seed;
    report.tol = tol;
    report.rows.resize(specs.size());

    kernels::parallel_for(static_cast<int>(specs.size()), opts.parallel, [&](int i) {
        const VerifySpec& spec = specs[static_cast<std::size_t>(i)];
        VerifyRow row;
        row.group = spec.group;
        row.fixture = spec.fixture;
        row.params = spec.params;
        row.check = spec.check;
        row.expected_pass = spec.expected_pass;
        row.provenance = spec.provenance;
        row.statement = check_statement(spec.check);

        Instantiated inst = instantiate(spec.fixture, spec.params);
        auto box = inst.points_box();
        if (!box) throw ScenarioError("fixture '" + spec.fixture + "' has no sampling box");

        const std::uint64_t row_seed =
            mix_seed(seed, fnv1a(spec.fixture + "|" + spec.check + "|" + spec.params.dump()));
        std::mt19937_64 rng(row_seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        CheckVerdict agg;
        agg.check = spec.check;
        agg.pass = true;
        for (int pt = 0; pt < kProbePoints; ++pt) {
            const int pdim = static_cast<int>(box->lo.size());
            Eigen::VectorXd p(pdim);
            for (int d = 0; d < pdim; ++d) {
                p[d] = box->lo[d] + (box->hi[d] - box->lo[d]) * unit(rng);
            }
            PointContext ctx = make_context(*inst.ambient,
                                            inst.immersion ? &*inst.immersion : nullptr, p, tol,
                                            mix_seed(row_seed, static_cast<std::uint64_t>(pt)));
            CheckVerdict v = run_check(spec.check, ctx);
            agg.defect = std::max(agg.defect, v.defect);
            agg.tol = std::max(agg.tol, v.tol);
            if (v.skipped) agg.skipped = v.skipped;
            agg.pass = agg.pass && v.pass;
            if (pt == 0) agg.details = v.details;
        }
        row.verdict = agg;
        row.met = !agg.skipped && (agg.pass == spec.expected_pass);
        report.rows[static_cast<std::size_t>(i)] = std::move(row);
    });

    for (const auto& row : report.rows) report.all_met = report.all_met && row.met;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string verify_to_json(const VerifyReport& report) {
    json j;
    j["schema"] = 1;
    j["version"] = kVersion;
    j["seed"] = report.seed;
    j["tolerances"] = {{"exact", report.tol.exact}, {"fd", report.tol.fd}};
    json rows = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["group"] = row.group;
        r["fixture"] = row.fixture;
        if (!row.params.empty()) r["params"] = row.params;
        r["check"] = row.check;
        r["expected"] = row.expected_pass ? "pass" : "fail";
        r["provenance"] = row.provenance;
        r["defect"] = row.verdict.defect;
        r["tol"] = row.verdict.tol;
        r["actual"] = row.verdict.pass ? "pass" : "fail";
        if (row.verdict.skipped) r["skipped"] = *row.verdict.skipped;
        r["met"] = row.met;
        r["statement"] = row.statement;
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    int met = 0;
    for (const auto& row : report.rows) met += row.met ? 1 : 0;
    j["summary"] = {{"total", report.rows.size()},
                    {"met", met},
                    {"unmet", report.rows.size() - static_cast<std::size_t>(met)}};
    return j.dump(2) + "\n";
}

std::string verify_to_text(const VerifyReport& report, bool color) {
    const bool c = want_color(color);
    std::ostringstream out;
    out << "verification matrix (seed " << report.seed << ", tol exact " << report.tol.exact
        << ", fd " << report.tol.fd << ")\n";
    std::string group;
    for (const auto& row : report.rows) {
        if (row.group != group) {
            group = row.group;
            out << "[" << group << "]\n";
        }
        const char* met = row.met ? (c ? "\x1b[32mok\x1b[0m " : "ok ")
                                  : (c ? "\x1b[31mUNMET\x1b[0m" : "UNMET");
        out << "  " << met << " ";
        out.width(22);
        out << std::left << row.fixture;
        out.width(24);
        out << std::left << row.check;
        out << " expected " << (row.expected_pass ? "pass" : "fail") << ", got "
            << (row.verdict.pass ? "pass" : "fail");
        std::ostringstream defect;
        defect.precision(3);
        defect << std::scientific << row.verdict.defect;
        out << "  (defect " << defect.str() << ", " << row.provenance << ")";
        if (!row.params.empty()) out << "  " << row.params.dump();
        if (row.verdict.skipped) out << "  [" << *row.verdict.skipped << "]";
        out << "\n";
    }
    int met = 0;
    for (const auto& row : report.rows) met += row.met ? 1 : 0;
    out << "summary: " << met << "/" << report.rows.size() << " expectations met  ("
        << report.wall_seconds << " s)\n";
    return out.str();
}

} // namespace curv
