#include "curv/catalog.hpp"

#include <cmath>
#include <random>

namespace curv {

using nlohmann::json;

namespace {

double get_real(const json& p, const std::string& key) {
    if (!p.contains(key) || !p[key].is_number()) {
        throw std::invalid_argument("parameter '" + key + "' must be a number");
    }
    return p[key].get<double>();
}

int get_int(const json& p, const std::string& key) {
    double v = get_real(p, key);
    if (v != std::floor(v)) {
        throw std::invalid_argument("parameter '" + key + "' must be an integer");
    }
    return static_cast<int>(v);
}

std::string get_str(const json& p, const std::string& key) {
    if (!p.contains(key) || !p[key].is_string()) {
        throw std::invalid_argument("parameter '" + key + "' must be a string");
    }
    return p[key].get<std::string>();
}

ExprPtr lit(double v) { return make_number(v); }

ExprPtr var(const std::string& name) { return make_var(name); }
ExprPtr varx(int i) { return make_var("x" + std::to_string(i)); }
ExprPtr varu(int i) { return make_var("u" + std::to_string(i)); }

/// sum of squares x_{first}^2 + ... + x_{last}^2
ExprPtr sum_of_squares(const std::string& base, int first, int last) {
    ExprPtr sum;
    for (int i = first; i <= last; ++i) {
        ExprPtr sq = make_pow(var(base + std::to_string(i)), 2);
        sum = sum ? make_add(sum, sq) : sq;
    }
    return sum;
}

/// 1 + x_first^2 + ... + x_last^2, folded left so it prints without parens
ExprPtr one_plus_squares(int first, int last) {
    ExprPtr e = lit(1.0);
    for (int i = first; i <= last; ++i) e = make_add(e, make_pow(varx(i), 2));
    return e;
}

/// 1 - x_first^2 - ... - x_last^2
ExprPtr one_minus_squares(int first, int last) {
    ExprPtr e = lit(1.0);
    for (int i = first; i <= last; ++i) e = make_sub(e, make_pow(varx(i), 2));
    return e;
}

/// Seeded random polynomial of total degree <= `degree` in u1..ur with
/// coefficients uniform in [-amplitude, amplitude]; no constant term.
ExprPtr random_polynomial(int r, int degree, double amplitude, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-amplitude, amplitude);

    // Enumerate exponent tuples of total degree 1..degree, lexicographically.
    std::vector<std::vector<int>> monomials;
    std::vector<int> expo(static_cast<std::size_t>(r), 0);
    const auto enumerate = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == r) {
            if (remaining < degree) monomials.push_back(expo); // total degree >= 1
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            expo[static_cast<std::size_t>(pos)] = e;
            self(self, pos + 1, remaining - e);
        }
        expo[static_cast<std::size_t>(pos)] = 0;
    };
    enumerate(enumerate, 0, degree);

    ExprPtr sum;
    for (const auto& mono : monomials) {
        ExprPtr term = lit(coeff(rng));
        for (int i = 0; i < r; ++i) {
            const int e = mono[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            ExprPtr f = (e == 1) ? varu(i + 1) : make_pow(varu(i + 1), e);
            term = make_mul(term, f);
        }
        sum = sum ? make_add(sum, term) : term;
    }
    return sum ? sum : lit(0.0);
}

std::shared_ptr<const Ambient> wrap(MetricChart chart) {
    auto a = std::make_shared<Ambient>();
    a->chart = std::move(chart);
    return a;
}

std::shared_ptr<const Ambient> wrap(KahlerChart chart) {
    auto a = std::make_shared<Ambient>();
    a->chart = std::move(chart);
    return a;
}

// ---------------------------------------------------------------------------
// Ambient builders
// ---------------------------------------------------------------------------

MetricChart build_euclidean(int m) {
    std::vector<ExprPtr> diag(static_cast<std::size_t>(m), lit(1.0));
    MetricChart c = MetricChart::diagonal(m, std::move(diag), "euclidean");
    c.domain_hint = uniform_box(m, -1.0, 1.0);
    return c;
}

/// Stereographic chart of the round sphere with sectional curvature rho > 0:
/// entries (4/rho) / (1 + |x|^2)^2 on the diagonal.
MetricChart build_sphere(int m, double rho) {
    ExprPtr entry = make_div(lit(4.0 / rho), make_pow(one_plus_squares(1, m), 2));
    std::vector<ExprPtr> diag(static_cast<std::size_t>(m), entry);
    MetricChart c = MetricChart::diagonal(m, std::move(diag), "sphere");
    c.domain_hint = uniform_box(m, -0.6, 0.6);
    return c;
}

/// Poincare-ball chart with sectional curvature rho < 0:
/// entries (4/|rho|) / (1 - |x|^2)^2.
MetricChart build_hyperbolic(int m, double rho) {
    ExprPtr entry =
        make_div(lit(4.0 / std::abs(rho)), make_pow(one_minus_squares(1, m), 2));
    std::vector<ExprPtr> diag(static_cast<std::size_t>(m), entry);
    MetricChart c = MetricChart::diagonal(m, std::move(diag), "hyperbolic");
    c.domain_hint = uniform_box(m, -0.3, 0.3);
    return c;
}

/// Product of two unit 2-spheres in stereographic charts; Einstein with
/// Ric = g but with mixed-plane sectional curvature 0.
MetricChart build_s2xs2() {
    ExprPtr f1 = make_div(lit(4.0), make_pow(one_plus_squares(1, 2), 2));
    ExprPtr f2 = make_div(lit(4.0), make_pow(one_plus_squares(3, 4), 2));
    MetricChart c = MetricChart::diagonal(4, {f1, f1, f2, f2}, "s2xs2");
    c.domain_hint = uniform_box(4, -0.6, 0.6);
    return c;
}

MetricChart build_bumpy2() {
    MetricChart c = MetricChart::diagonal(
        2, {parse("1 + x2^2", {"x1", "x2"}), parse("1 + x1^2", {"x1", "x2"})}, "bumpy2");
    c.domain_hint = uniform_box(2, -1.0, 1.0);
    return c;
}

MetricChart build_bumpy3() {
    const std::vector<std::string> vars = {"x1", "x2", "x3"};
    MetricChart c = MetricChart::diagonal(
        3, {parse("1 + x2^2", vars), parse("1 + x3^2", vars), parse("1 + x1^2", vars)}, "bumpy3");
    c.domain_hint = uniform_box(3, -1.0, 1.0);
    return c;
}

/// Conformally flat chart exp(2 phi) * delta with a generic low-degree phi;
/// curved, not Einstein. Umbilic surfaces stay umbilic here, which is what
/// the round-sphere-in-conformal3 fixture exercises.
MetricChart build_conformal3(double amplitude) {
    ExprPtr phi = make_mul(lit(amplitude),
                           make_add(make_mul(varx(1), varx(2)),
                                    make_add(make_mul(lit(0.5), varx(3)),
                                             make_mul(lit(0.25), make_pow(varx(3), 2)))));
    ExprPtr entry = make_call("exp", make_mul(lit(2.0), phi));
    MetricChart c = MetricChart::diagonal(3, {entry, entry, entry}, "conformal3");
    c.domain_hint = uniform_box(3, -0.5, 0.5);
    return c;
}

KahlerChart build_flat_cn(int n) {
    ExprPtr phi = sum_of_squares("x", 1, 2 * n);
    KahlerChart kc = metric_from_kahler_potential(phi, n, "flat-cn",
                                                  uniform_box(2 * n, -1.0, 1.0));
    return kc;
}

KahlerChart build_fubini_study(int n) {
    ExprPtr phi = make_call("ln", one_plus_squares(1, 2 * n));
    return metric_from_kahler_potential(phi, n, "fubini-study",
                                        uniform_box(2 * n, -0.7, 0.7));
}

KahlerChart build_perturbed_kahler(int n, double amplitude) {
    ExprPtr phi = make_add(sum_of_squares("x", 1, 2 * n),
                           make_mul(lit(amplitude),
                                    make_add(make_pow(varx(1), 4), make_pow(varx(n + 1), 4))));
    return metric_from_kahler_potential(phi, n, "perturbed-kahler",
                                        uniform_box(2 * n, -0.6, 0.6));
}

KahlerChart build_cp1xcp1() {
    // n = 2 with z1 = x1 + i x3, z2 = x2 + i x4.
    ExprPtr phi1 = make_call(
        "ln", make_add(make_add(lit(1.0), make_pow(varx(1), 2)), make_pow(varx(3), 2)));
    ExprPtr phi2 = make_call(
        "ln", make_add(make_add(lit(1.0), make_pow(varx(2), 2)), make_pow(varx(4), 2)));
    return metric_from_kahler_potential(make_add(phi1, phi2), 2, "cp1xcp1",
                                        uniform_box(4, -0.7, 0.7));
}

std::shared_ptr<const Ambient> build_named_ambient(const std::string& name, const json& p) {
    if (name == "euclidean") return wrap(build_euclidean(get_int(p, "m")));
    if (name == "sphere") return wrap(build_sphere(get_int(p, "m"), get_real(p, "curvature")));
    if (name == "hyperbolic")
        return wrap(build_hyperbolic(get_int(p, "m"), get_real(p, "curvature")));
    if (name == "s2xs2") return wrap(build_s2xs2());
    if (name == "conformal3") return wrap(build_conformal3(get_real(p, "amplitude")));
    if (name == "fubini-study") return wrap(build_fubini_study(get_int(p, "n")));
    throw std::invalid_argument("immersion fixtures cannot use ambient '" + name + "'");
}

// Defaults used when an immersion only names its ambient.
json ambient_defaults(const std::string& name) {
    if (name == "euclidean") return {{"m", 3}};
    if (name == "sphere") return {{"m", 3}, {"curvature", 1.0}};
    if (name == "hyperbolic") return {{"m", 3}, {"curvature", -1.0}};
    if (name == "conformal3") return {{"amplitude", 0.3}};
    if (name == "fubini-study") return {{"n", 3}};
    return json::object();
}

std::shared_ptr<const Ambient> resolve_ambient(const json& p) {
    const std::string name = get_str(p, "ambient");
    json merged = ambient_defaults(name);
    for (const char* key : {"m", "n", "curvature"}) {
        if (p.contains(key)) merged[key] = p[key];
    }
    if (name == "conformal3" && p.contains("ambient_amplitude")) {
        merged["amplitude"] = p["ambient_amplitude"];
    }
    return build_named_ambient(name, merged);
}

// ---------------------------------------------------------------------------
// Immersion builders
// ---------------------------------------------------------------------------

ImmersionChart build_linear_subspace(int m, int r) {
    auto ambient = wrap(build_euclidean(m));
    std::vector<ExprPtr> comps;
    for (int i = 0; i < m; ++i) comps.push_back(i < r ? varu(i + 1) : lit(0.0));
    ImmersionChart im = ImmersionChart::make(r, std::move(comps), ambient, "linear-subspace");
    im.domain_hint = uniform_box(r, -1.0, 1.0);
    return im;
}

ImmersionChart build_curve(const json& p) {
    auto ambient = resolve_ambient(p);
    const int m = ambient->metric().dim();
    std::mt19937_64 rng(static_cast<std::uint64_t>(get_int(p, "seed")));
    std::uniform_real_distribution<double> amp(0.15, 0.3);
    std::uniform_real_distribution<double> phase(0.0, 6.28);
    std::vector<ExprPtr> comps;
    for (int i = 0; i < m; ++i) {
        comps.push_back(make_mul(lit(amp(rng)),
                                 make_call("sin", make_add(varu(1), lit(phase(rng))))));
    }
    ImmersionChart im = ImmersionChart::make(1, std::move(comps), ambient, "curve");
    im.domain_hint = uniform_box(1, 0.0, 6.0);
    return im;
}

ImmersionChart build_product_of_curves() {
    auto ambient = wrap(build_s2xs2());
    std::vector<ExprPtr> comps = {
        make_mul(lit(0.3), make_call("cos", varu(1))),
        make_mul(lit(0.3), make_call("sin", varu(1))),
        make_mul(lit(0.25), make_call("cos", varu(2))),
        make_mul(lit(0.25), make_call("sin", varu(2))),
    };
    ImmersionChart im = ImmersionChart::make(2, std::move(comps), ambient, "product-of-curves");
    im.domain_hint = uniform_box(2, 0.0, 6.0);
    return im;
}

std::vector<ExprPtr> spherical_components(double a, double b, double c) {
    // (a sin u1 cos u2, b sin u1 sin u2, c cos u1)
    return {
        make_mul(lit(a), make_mul(make_call("sin", varu(1)), make_call("cos", varu(2)))),
        make_mul(lit(b), make_mul(make_call("sin", varu(1)), make_call("sin", varu(2)))),
        make_mul(lit(c), make_call("cos", varu(1))),
    };
}

DomainBox sphere_param_box() {
    DomainBox box;
    box.lo = Eigen::Vector2d(0.5, 0.3);
    box.hi = Eigen::Vector2d(2.6, 5.9);
    return box;
}

ImmersionChart build_round_sphere(const json& p) {
    const double radius = get_real(p, "radius");
    if (!(radius > 0.0)) throw std::invalid_argument("parameter 'radius' must be positive");
    const std::string ambient_name = get_str(p, "ambient");
    std::shared_ptr<const Ambient> ambient;
    if (ambient_name == "euclidean") {
        ambient = wrap(build_euclidean(3));
    } else if (ambient_name == "conformal3") {
        ambient = wrap(build_conformal3(p.contains("ambient_amplitude")
                                            ? get_real(p, "ambient_amplitude")
                                            : 0.3));
    } else {
        throw std::invalid_argument("round-sphere ambient must be euclidean or conformal3");
    }
    ImmersionChart im = ImmersionChart::make(2, spherical_components(radius, radius, radius),
                                             ambient, "round-sphere");
    im.domain_hint = sphere_param_box();
    return im;
}

ImmersionChart build_small_sphere(const json& p) {
    const double radius = get_real(p, "radius");
    if (!(radius > 0.0)) throw std::invalid_argument("parameter 'radius' must be positive");
    auto ambient = wrap(build_sphere(3, 1.0));
    // A chart sphere |x| = radius is a geodesic sphere of the round ambient.
    ImmersionChart im = ImmersionChart::make(2, spherical_components(radius, radius, radius),
                                             ambient, "small-sphere");
    im.domain_hint = sphere_param_box();
    return im;
}

ImmersionChart build_equator(int m) {
    auto ambient = wrap(build_sphere(m, 1.0));
    std::vector<ExprPtr> comps;
    for (int i = 0; i < m - 1; ++i) comps.push_back(varu(i + 1));
    comps.push_back(lit(0.0));
    ImmersionChart im = ImmersionChart::make(m - 1, std::move(comps), ambient, "equator");
    im.domain_hint = uniform_box(m - 1, -0.5, 0.5);
    return im;
}

ImmersionChart build_ellipsoid(const json& p) {
    const double a = get_real(p, "a");
    const double b = get_real(p, "b");
    const double c = get_real(p, "c");
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) {
        throw std::invalid_argument("ellipsoid semi-axes must be positive");
    }
    const std::string ambient_name = get_str(p, "ambient");
    std::shared_ptr<const Ambient> ambient;
    if (ambient_name == "euclidean") {
        ambient = wrap(build_euclidean(3));
    } else if (ambient_name == "conformal3") {
        ambient = wrap(build_conformal3(0.3));
    } else {
        throw std::invalid_argument("ellipsoid ambient must be euclidean or conformal3");
    }
    ImmersionChart im =
        ImmersionChart::make(2, spherical_components(a, b, c), ambient, "ellipsoid");
    im.domain_hint = sphere_param_box();
    return im;
}

ImmersionChart build_graph_hypersurface(const json& p) {
    auto ambient = resolve_ambient(p);
    const int m = ambient->metric().dim();
    const int r = m - 1;
    const double amplitude = get_real(p, "amplitude");
    std::mt19937_64 rng(static_cast<std::uint64_t>(get_int(p, "seed")));

    std::vector<ExprPtr> comps;
    for (int i = 0; i < r; ++i) comps.push_back(varu(i + 1));
    comps.push_back(random_polynomial(r, 3, amplitude, rng));
    ImmersionChart im =
        ImmersionChart::make(r, std::move(comps), ambient, "graph-hypersurface");
    im.domain_hint = uniform_box(r, -0.25, 0.25);
    return im;
}

ImmersionChart build_surface2(const json& p) {
    auto ambient = resolve_ambient(p);
    const int m = ambient->metric().dim();
    if (m < 4) throw std::invalid_argument("surface2 needs an ambient of dimension >= 4");
    const double amplitude = get_real(p, "amplitude");
    std::mt19937_64 rng(static_cast<std::uint64_t>(get_int(p, "seed")));

    std::vector<ExprPtr> comps = {varu(1), varu(2)};
    for (int i = 2; i < m; ++i) comps.push_back(random_polynomial(2, 3, amplitude, rng));
    ImmersionChart im = ImmersionChart::make(2, std::move(comps), ambient, "surface2");
    im.domain_hint = uniform_box(2, -0.25, 0.25);
    return im;
}

ImmersionChart build_cpk_slice(int n, int k) {
    if (k < 1 || k >= n) throw std::invalid_argument("cpk-slice needs 1 <= k < n");
    auto ambient = wrap(build_fubini_study(n));
    const int m = 2 * n;
    std::vector<ExprPtr> comps(static_cast<std::size_t>(m), lit(0.0));
    for (int i = 0; i < k; ++i) {
        comps[static_cast<std::size_t>(i)] = varu(i + 1);         // x_i = u_i
        comps[static_cast<std::size_t>(n + i)] = varu(k + i + 1); // y_i = u_{k+i}
    }
    ImmersionChart im = ImmersionChart::make(2 * k, std::move(comps), ambient, "cpk-slice");
    im.domain_hint = uniform_box(2 * k, -0.5, 0.5);
    return im;
}

ImmersionChart build_real_slice(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("real-slice needs 1 <= k <= n");
    auto ambient = wrap(build_fubini_study(n));
    const int m = 2 * n;
    std::vector<ExprPtr> comps(static_cast<std::size_t>(m), lit(0.0));
    for (int i = 0; i < k; ++i) comps[static_cast<std::size_t>(i)] = varu(i + 1);
    ImmersionChart im = ImmersionChart::make(k, std::move(comps), ambient, "real-slice");
    im.domain_hint = uniform_box(k, -0.5, 0.5);
    return im;
}

/// Holomorphic graph z2 = z1^2 inside the Fubini-Study chart: a complex
/// immersion that is not totally geodesic.
ImmersionChart build_complex_quadric(int n) {
    if (n < 2) throw std::invalid_argument("complex-quadric needs n >= 2");
    auto ambient = wrap(build_fubini_study(n));
    const int m = 2 * n;
    std::vector<ExprPtr> comps(static_cast<std::size_t>(m), lit(0.0));
    comps[0] = varu(1);                                          // x1 = u1
    comps[1] = make_sub(make_pow(varu(1), 2), make_pow(varu(2), 2)); // x2 = u1^2 - u2^2
    comps[static_cast<std::size_t>(n)] = varu(2);                // y1 = u2
    comps[static_cast<std::size_t>(n) + 1] =
        make_mul(lit(2.0), make_mul(varu(1), varu(2)));          // y2 = 2 u1 u2
    ImmersionChart im = ImmersionChart::make(2, std::move(comps), ambient, "complex-quadric");
    im.domain_hint = uniform_box(2, -0.4, 0.4);
    return im;
}

/// Real graph inside the real locus y = 0 of the Fubini-Study chart: a
/// totally real immersion that is not totally geodesic.
ImmersionChart build_real_graph(int n, double amplitude) {
    if (n < 3) throw std::invalid_argument("real-graph needs n >= 3");
    auto ambient = wrap(build_fubini_study(n));
    const int m = 2 * n;
    std::vector<ExprPtr> comps(static_cast<std::size_t>(m), lit(0.0));
    comps[0] = varu(1);
    comps[1] = varu(2);
    comps[2] = make_mul(lit(amplitude),
                        make_add(make_sub(make_pow(varu(1), 2), make_pow(varu(2), 2)),
                                 make_mul(varu(1), varu(2))));
    ImmersionChart im = ImmersionChart::make(2, std::move(comps), ambient, "real-graph");
    im.domain_hint = uniform_box(2, -0.4, 0.4);
    return im;
}

// ---------------------------------------------------------------------------
// Entry table
// ---------------------------------------------------------------------------

std::vector<CatalogEntry> make_entries() {
    std::vector<CatalogEntry> entries;

    auto add = [&](CatalogEntry e) { entries.push_back(std::move(e)); };

    add({"euclidean", "ambient", "flat chart of R^m",
         "zero curvature baseline; every tensor identity degenerates to 0",
         {{"m", 3}},
         {{"constant-curvature", true, "construction"}, {"einstein", true, "construction"}}});

    add({"sphere", "ambient", "round sphere via stereographic projection",
         "space form of curvature rho > 0; every immersion into it is very special",
         {{"m", 3}, {"curvature", 1.0}},
         {{"constant-curvature", true, "theorem"}, {"einstein", true, "theorem"}}});

    add({"hyperbolic", "ambient", "Poincare-ball chart of curvature rho < 0",
         "space form of negative curvature; every immersion into it is very special",
         {{"m", 3}, {"curvature", -1.0}},
         {{"constant-curvature", true, "theorem"}, {"einstein", true, "theorem"}}});

    add({"s2xs2", "ambient", "product of two unit 2-spheres",
         "Einstein (Ric = g) without constant sectional curvature; hypersurfaces in it are "
         "special but generically not very special",
         json::object(),
         {{"einstein", true, "theorem"}, {"constant-curvature", false, "theorem"}}});

    add({"bumpy2", "ambient", "diagonal metric diag(1+x2^2, 1+x1^2) on R^2",
         "surface metric; in dimension 2 the pointwise Einstein identity Ric = (S/2) g holds "
         "for every metric, so the pointwise check passes even though rho varies from point "
         "to point",
         json::object(),
         {{"einstein", true, "theorem"}}});

    add({"bumpy3", "ambient", "diagonal metric diag(1+x2^2, 1+x3^2, 1+x1^2) on R^3",
         "deliberately non-Einstein fixture for negative tests",
         json::object(),
         {{"einstein", false, "measured"}, {"constant-curvature", false, "measured"}}});

    add({"conformal3", "ambient", "conformally flat chart exp(2 phi) delta on R^3",
         "curved non-Einstein ambient; umbilicity of surfaces is conformally invariant, so "
         "round spheres here are umbilical with non-parallel mean curvature",
         {{"amplitude", 0.3}},
         {{"einstein", false, "measured"}, {"constant-curvature", false, "measured"}}});

    add({"flat-cn", "ambient", "flat Kahler chart C^n from the potential |z|^2",
         "constant holomorphic sectional curvature 0",
         {{"n", 2}},
         {{"kahler-verify", true, "construction"},
          {"constant-hol-curvature", true, "construction"},
          {"xy", true, "theorem"},
          {"kahler-identities", true, "theorem"}}});

    add({"fubini-study", "ambient", "Fubini-Study chart from the potential ln(1+|z|^2)",
         "constant holomorphic sectional curvature (value measured at the origin, never "
         "hard-coded); the canonical positive example for the holomorphic criteria",
         {{"n", 2}},
         {{"kahler-verify", true, "theorem"},
          {"kahler-identities", true, "theorem"},
          {"constant-hol-curvature", true, "theorem"},
          {"xy", true, "theorem"}}});

    add({"perturbed-kahler", "ambient", "|z|^2 potential plus a quartic perturbation",
         "Kahler but without constant holomorphic curvature; exercises the identity suite "
         "away from the homogeneous examples",
         {{"n", 2}, {"amplitude", 0.1}},
         {{"kahler-verify", true, "theorem"},
          {"kahler-identities", true, "theorem"},
          {"constant-hol-curvature", false, "measured"},
          {"xy", false, "measured"}}});

    add({"cp1xcp1", "ambient", "product of two Fubini-Study lines",
         "Kahler product: verifies the suite while failing constant holomorphic curvature",
         json::object(),
         {{"kahler-verify", true, "theorem"},
          {"kahler-identities", true, "theorem"},
          {"constant-hol-curvature", false, "measured"},
          {"xy", false, "measured"}}});

    add({"linear-subspace", "immersion", "affine r-plane in flat R^m",
         "totally geodesic: alpha = 0, H = 0, all submanifold checks pass trivially",
         {{"m", 4}, {"r", 2}},
         {{"special", true, "construction"},
          {"very-special", true, "construction"},
          {"umbilical", true, "construction"},
          {"extrinsic-sphere", true, "construction"},
          {"codazzi", true, "construction"}}});

    add({"curve", "immersion", "random immersed curve",
         "every immersed curve is very special, with defect exactly zero",
         {{"ambient", "s2xs2"}, {"seed", 1}},
         {{"very-special", true, "theorem"}, {"special", true, "theorem"}}});

    add({"product-of-curves", "immersion", "product of circles in s2xs2",
         "products of curves into product manifolds are very special",
         json::object(),
         {{"very-special", true, "theorem"},
          {"special", true, "theorem"},
          {"codazzi", true, "theorem"}}});

    add({"round-sphere", "immersion", "round sphere of given radius",
         "umbilical extrinsic sphere; in the flat ambient |H| = 1/radius",
         {{"radius", 0.8}, {"ambient", "euclidean"}},
         {{"umbilical", true, "theorem"},
          {"extrinsic-sphere", true, "theorem"},
          {"special", true, "theorem"},
          {"very-special", true, "theorem"},
          {"codazzi", true, "theorem"}}});

    add({"small-sphere", "immersion", "chart sphere |x| = radius inside the round 3-sphere",
         "geodesic sphere of a space form: an extrinsic sphere, hence special and very special",
         {{"radius", 0.5}},
         {{"umbilical", true, "theorem"},
          {"extrinsic-sphere", true, "theorem"},
          {"special", true, "theorem"},
          {"very-special", true, "theorem"}}});

    add({"equator", "immersion", "equatorial slice x_m = 0 of the round sphere",
         "totally geodesic hypersurface: alpha = 0",
         {{"m", 3}},
         {{"umbilical", true, "construction"},
          {"extrinsic-sphere", true, "theorem"},
          {"special", true, "theorem"},
          {"very-special", true, "theorem"}}});

    add({"ellipsoid", "immersion", "triaxial ellipsoid",
         "distinct principal curvatures: not umbilical, not an extrinsic sphere; in the flat "
         "ambient it is still (vacuously) special, in conformal3 it fails special",
         {{"a", 1.0}, {"b", 0.8}, {"c", 0.6}, {"ambient", "euclidean"}},
         {{"umbilical", false, "measured"},
          {"extrinsic-sphere", false, "measured"},
          {"special", true, "construction"},
          {"very-special", true, "construction"},
          {"codazzi", true, "theorem"}}});

    add({"graph-hypersurface", "immersion", "random polynomial graph of codimension one",
         "hypersurfaces of Einstein manifolds are special; generically they are not very "
         "special, which separates the two notions",
         {{"ambient", "s2xs2"}, {"seed", 7}, {"amplitude", 0.2}},
         {{"special", true, "theorem"},
          {"very-special", false, "measured"},
          {"codazzi", true, "theorem"}}});

    add({"surface2", "immersion", "random codimension-2 surface",
         "codimension two in s2xs2: the Einstein hypersurface argument does not apply and "
         "the special condition generically fails",
         {{"ambient", "s2xs2"}, {"seed", 3}, {"amplitude", 0.2}},
         {{"special", false, "measured"}, {"codazzi", true, "theorem"}}});

    add({"cpk-slice", "immersion", "linear complex slice CP^k of the Fubini-Study chart",
         "complex immersions in constant holomorphic curvature are very special",
         {{"n", 3}, {"k", 1}},
         {{"very-special", true, "theorem"}, {"special", true, "theorem"}}});

    add({"real-slice", "immersion", "real locus slice R^k of the Fubini-Study chart",
         "totally real immersions in constant holomorphic curvature are very special",
         {{"n", 3}, {"k", 2}},
         {{"very-special", true, "theorem"}, {"special", true, "theorem"}}});

    add({"complex-quadric", "immersion", "holomorphic graph z2 = z1^2 in Fubini-Study",
         "a complex immersion with nonzero second fundamental form; still very special",
         {{"n", 3}},
         {{"very-special", true, "theorem"},
          {"special", true, "theorem"},
          {"umbilical", false, "measured"}}});

    add({"real-graph", "immersion", "totally real graph inside the real locus of Fubini-Study",
         "a totally real immersion with nonzero second fundamental form; still very special",
         {{"n", 3}, {"amplitude", 0.2}},
         {{"very-special", true, "theorem"}, {"special", true, "theorem"}}});

    return entries;
}

json merged_params(const CatalogEntry& entry, const json& params) {
    json merged = entry.defaults;
    if (params.is_null()) return merged;
    if (!params.is_object()) throw std::invalid_argument("params must be a JSON object");
    for (auto it = params.begin(); it != params.end(); ++it) {
        const bool known = merged.contains(it.key()) || it.key() == "ambient_amplitude" ||
                           ((entry.name == "graph-hypersurface" || entry.name == "surface2" ||
                             entry.name == "curve") &&
                            (it.key() == "m" || it.key() == "n" || it.key() == "curvature"));
        if (!known) {
            throw std::invalid_argument("unknown parameter '" + it.key() + "' for fixture '" +
                                        entry.name + "'");
        }
        merged[it.key()] = it.value();
    }
    return merged;
}

} // namespace

DomainBox uniform_box(int dim, double lo, double hi) {
    DomainBox box;
    box.lo = Eigen::VectorXd::Constant(dim, lo);
    box.hi = Eigen::VectorXd::Constant(dim, hi);
    return box;
}

std::optional<DomainBox> Instantiated::points_box() const {
    if (immersion) return immersion->domain_hint;
    return ambient->metric().domain_hint;
}

int Instantiated::points_dim() const {
    return immersion ? immersion->domain_dim : ambient->metric().dim();
}

const std::vector<CatalogEntry>& list_catalog() {
    static const std::vector<CatalogEntry> entries = make_entries();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : list_catalog()) {
        if (e.name == name) return e;
    }
    std::string valid;
    for (const auto& e : list_catalog()) {
        if (!valid.empty()) valid += ", ";
        valid += e.name;
    }
    throw std::invalid_argument("unknown fixture '" + name + "'; valid names: " + valid);
}

Instantiated instantiate(const std::string& name, const json& params) {
    const CatalogEntry& entry = catalog_entry(name);
    const json p = merged_params(entry, params);

    Instantiated out;
    if (entry.kind == "ambient") {
        if (name == "euclidean") {
            const int m = get_int(p, "m");
            if (m < 2) throw std::invalid_argument("euclidean needs m >= 2");
            out.ambient = wrap(build_euclidean(m));
        } else if (name == "sphere") {
            const int m = get_int(p, "m");
            const double rho = get_real(p, "curvature");
            if (m < 2) throw std::invalid_argument("sphere needs m >= 2");
            if (!(rho > 0.0)) throw std::invalid_argument("sphere curvature must be positive");
            out.ambient = wrap(build_sphere(m, rho));
        } else if (name == "hyperbolic") {
            const int m = get_int(p, "m");
            const double rho = get_real(p, "curvature");
            if (m < 2) throw std::invalid_argument("hyperbolic needs m >= 2");
            if (!(rho < 0.0)) throw std::invalid_argument("hyperbolic curvature must be negative");
            out.ambient = wrap(build_hyperbolic(m, rho));
        } else if (name == "s2xs2") {
            out.ambient = wrap(build_s2xs2());
        } else if (name == "bumpy2") {
            out.ambient = wrap(build_bumpy2());
        } else if (name == "bumpy3") {
            out.ambient = wrap(build_bumpy3());
        } else if (name == "conformal3") {
            out.ambient = wrap(build_conformal3(get_real(p, "amplitude")));
        } else if (name == "flat-cn") {
            const int n = get_int(p, "n");
            if (n < 1) throw std::invalid_argument("flat-cn needs n >= 1");
            out.ambient = wrap(build_flat_cn(n));
        } else if (name == "fubini-study") {
            const int n = get_int(p, "n");
            if (n < 1) throw std::invalid_argument("fubini-study needs n >= 1");
            out.ambient = wrap(build_fubini_study(n));
        } else if (name == "perturbed-kahler") {
            const int n = get_int(p, "n");
            if (n < 1) throw std::invalid_argument("perturbed-kahler needs n >= 1");
            out.ambient = wrap(build_perturbed_kahler(n, get_real(p, "amplitude")));
        } else if (name == "cp1xcp1") {
            out.ambient = wrap(build_cp1xcp1());
        } else {
            throw std::logic_error("missing builder for ambient '" + name + "'");
        }
        return out;
    }

    ImmersionChart im = [&]() -> ImmersionChart {
        if (name == "linear-subspace") {
            const int m = get_int(p, "m");
            const int r = get_int(p, "r");
            if (r < 1 || r > m) throw std::invalid_argument("linear-subspace needs 1 <= r <= m");
            return build_linear_subspace(m, r);
        }
        if (name == "curve") return build_curve(p);
        if (name == "product-of-curves") return build_product_of_curves();
        if (name == "round-sphere") return build_round_sphere(p);
        if (name == "small-sphere") return build_small_sphere(p);
        if (name == "equator") {
            const int m = get_int(p, "m");
            if (m < 2) throw std::invalid_argument("equator needs m >= 2");
            return build_equator(m);
        }
        if (name == "ellipsoid") return build_ellipsoid(p);
        if (name == "graph-hypersurface") return build_graph_hypersurface(p);
        if (name == "surface2") return build_surface2(p);
        if (name == "cpk-slice") return build_cpk_slice(get_int(p, "n"), get_int(p, "k"));
        if (name == "real-slice") return build_real_slice(get_int(p, "n"), get_int(p, "k"));
        if (name == "complex-quadric") return build_complex_quadric(get_int(p, "n"));
        if (name == "real-graph")
            return build_real_graph(get_int(p, "n"), get_real(p, "amplitude"));
        throw std::logic_error("missing builder for immersion '" + name + "'");
    }();
    out.ambient = im.ambient;
    out.immersion = std::move(im);
    return out;
}

} // namespace curv
