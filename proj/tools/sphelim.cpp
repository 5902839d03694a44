// sphelim: command-line front end.
//
//   sphelim catalog       [--rank R] [--q-minus-p D] [--out FILE]
//   sphelim c-eval        --family F [--p P] [--q Q | --q-minus-p D] [--n N | --rank R] --mu K1,K2,...
//   sphelim limit-scan    [--config FILE] [flags...] [--csv FILE] [--json FILE]
//   sphelim sphere-verify --n N --k K [--grid M] [--samples S] [--seed X]
//   sphelim mc-check      --n N --k K [--samples S] [--seed X] [--theta-x T --theta-y T]
//   sphelim --check
//
// SPHELIM_THREADS caps the number of worker threads.

#include "sphelim/acceptance.hpp"
#include "sphelim/sphelim.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace sphelim;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text(path, text);
    }
}

// ---------------------------------------------------------------- c-eval

struct CEvalOptions {
    std::string family;
    std::optional<int> p, q, n, rank;
    int q_minus_p = 1;
    std::vector<std::string> mu;
};

SpaceDatum resolve_datum(const CEvalOptions& o)
{
    const Family f = parse_family(o.family);
    if (is_grassmannian(f)) {
        const int p = f == Family::RankOneReal ? 1 : o.p.value_or(o.rank.value_or(0));
        if (p < 1) {
            throw UsageError("Grassmannian rows need --p");
        }
        return build_space(f, p, o.q.value_or(p + o.q_minus_p));
    }
    if (o.n) {
        return build_space(f, 0, *o.n);
    }
    if (o.rank) {
        return build_at_rank(f, *o.rank);
    }
    throw UsageError("row " + std::string(family_info(f).row) + " needs --n or --rank");
}

int run_c_eval(const CEvalOptions& o)
{
    if (o.mu.empty()) {
        throw UsageError("c-eval needs at least one --mu");
    }
    const SpaceDatum d = resolve_datum(o);
    json params = datum_to_json(d);
    params.erase("family");
    params.erase("row");
    for (const std::string& text : o.mu) {
        const std::vector<std::int64_t> k = parse_int_list(text);
        const BigRational c = c_value(d, weight_from_xi(d, k));
        json line;
        line["family"] = std::string(family_info(d.family).key);
        line["params"] = params;
        line["mu"] = k;
        line["c_exact"] = to_string(c);
        line["c_float"] = to_double(c);
        std::cout << line.dump() << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ limit-scan

struct ScanSettings {
    std::string family;
    std::string mode; // "finite" or "infinite"; derived from the family when empty
    std::optional<int> p;
    int q_minus_p = 1;
    std::string coeffs;
    std::string levels;
    std::optional<int> base_level;
    std::optional<int> until_decided;
    ClassifyConfig thresholds;
    std::string csv_path;
    std::string json_path;
};

ScanSettings settings_from(const KeyValues& kv)
{
    ScanSettings s;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    static const std::vector<std::string> known = {"family", "mode",      "p",         "q_minus_p", "coeffs",
                                                   "levels", "base_level", "until_decided", "zero_floor", "window",
                                                   "rel_tol", "certificate_ceiling", "csv", "json"};
    for (const auto& [key, value] : kv) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    if (auto v = get("family")) s.family = *v;
    if (auto v = get("mode")) s.mode = *v;
    if (auto v = get("p")) s.p = std::stoi(*v);
    if (auto v = get("q_minus_p")) s.q_minus_p = std::stoi(*v);
    if (auto v = get("coeffs")) s.coeffs = *v;
    if (auto v = get("levels")) s.levels = *v;
    if (auto v = get("base_level")) s.base_level = std::stoi(*v);
    if (auto v = get("until_decided")) s.until_decided = std::stoi(*v);
    if (auto v = get("zero_floor")) s.thresholds.zero_floor = std::stod(*v);
    if (auto v = get("window")) s.thresholds.window = std::stoi(*v);
    if (auto v = get("rel_tol")) s.thresholds.rel_tol = std::stod(*v);
    if (auto v = get("certificate_ceiling")) s.thresholds.certificate_ceiling = std::stod(*v);
    if (auto v = get("csv")) s.csv_path = *v;
    if (auto v = get("json")) s.json_path = *v;
    return s;
}

int run_limit_scan(const ScanSettings& s)
{
    if (s.family.empty()) {
        throw UsageError("limit-scan needs a family");
    }
    const Family f = parse_family(s.family);
    std::string mode = s.mode;
    if (mode.empty()) {
        mode = (is_grassmannian(f) && (s.p || f == Family::RankOneReal)) ? "finite" : "infinite";
    }
    if (mode != "finite" && mode != "infinite") {
        throw UsageError("mode must be 'finite' or 'infinite'");
    }
    const std::vector<std::int64_t> coeffs = parse_int_list(s.coeffs);
    const std::vector<int> levels = parse_levels(s.levels);
    if (levels.empty() && !s.until_decided) {
        throw UsageError("empty level range");
    }

    DirectSystem sys;
    if (mode == "finite") {
        const int p = f == Family::RankOneReal ? 1 : s.p.value_or(0);
        if (p < 1) {
            throw UsageError("finite-rank scans need p");
        }
        sys = finite_rank_system(f, p, coeffs, levels, s.base_level);
    } else {
        sys = infinite_rank_system(f, coeffs, levels, s.q_minus_p, s.base_level);
    }

    CSequence seq;
    ConvergenceReport report;
    if (s.until_decided) {
        ScanResult r = scan_until_decided(sys, s.thresholds, *s.until_decided);
        seq = std::move(r.sequence);
        report = std::move(r.report);
        if (seq.entries.empty()) {
            throw UsageError("empty level range");
        }
    } else {
        seq = c_sequence(sys);
        report = classify(seq, s.thresholds);
    }

    json out;
    out["family"] = std::string(family_info(f).key);
    out["mode"] = mode;
    out["p"] = sys.fixed_p ? json(*sys.fixed_p) : json(nullptr);
    out["q_minus_p"] = mode == "infinite" && is_grassmannian(f) ? json(sys.q_minus_p) : json(nullptr);
    out["coeffs"] = coeffs;
    out["first_level"] = seq.entries.front().level;
    out["last_level"] = seq.entries.back().level;
    out["thresholds"] = {{"zero_floor", s.thresholds.zero_floor},
                         {"window", s.thresholds.window},
                         {"rel_tol", s.thresholds.rel_tol},
                         {"certificate_ceiling", s.thresholds.certificate_ceiling}};
    out["report"] = report_to_json(report);

    emit(csv_sequence(seq), s.csv_path);
    emit(out.dump(2) + "\n", s.json_path);
    std::cerr << family_info(f).key << " (" << mode << " rank): " << to_string(report.verdict) << " after "
              << report.levels_used << " levels, last value " << format_double(report.last_value.value_or(0.0))
              << "\n";
    return 0;
}

// --------------------------------------------------------------- sphere

struct SphereOptions {
    int n = 2;
    int k = 0;
    int grid = 101;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::optional<double> theta_x, theta_y;
    double z_max = 4.0;
    std::string csv_path;
    std::string json_path;
};

std::pair<RotationMatrix, RotationMatrix> mc_points(const SphereOptions& o)
{
    if (o.theta_x.has_value() != o.theta_y.has_value()) {
        throw UsageError("give both --theta-x and --theta-y or neither");
    }
    if (o.theta_x) {
        return {RotationMatrix::plane_rotation(o.n + 1, 0, 1, *o.theta_x),
                RotationMatrix::plane_rotation(o.n + 1, 0, 1, *o.theta_y)};
    }
    return {haar_rotation(o.n + 1, 2 * o.seed + 1), haar_rotation(o.n + 1, 2 * o.seed + 2)};
}

int run_sphere_verify(const SphereOptions& o)
{
    const ZonalFunction f(o.n, o.k);
    std::string csv = "t,p,t_pow_k,residual\n";
    double max_res = 0.0;
    double max_dev = 0.0;
    for (double t : chebyshev_interior_grid(o.grid)) {
        const double p = zonal_eval(f, t);
        const double tk = std::pow(t, o.k);
        const double res = ode_residual(f, t);
        max_res = std::max(max_res, std::abs(res));
        max_dev = std::max(max_dev, std::abs(p - tk));
        csv += format_double(t) + "," + format_double(p) + "," + format_double(tk) + "," + format_double(res) + "\n";
    }
    const auto [x, y] = mc_points(o);
    const McResult mc = mc_functional_equation(o.n, o.k, x, y, o.samples, o.seed);

    json out;
    out["n"] = o.n;
    out["k"] = o.k;
    out["grid"] = o.grid;
    out["seed"] = o.seed;
    out["max_residual"] = max_res;
    out["max_limit_deviation"] = max_dev;
    out["mc"] = mc_to_json(mc);
    emit(csv, o.csv_path);
    emit(out.dump(2) + "\n", o.json_path);
    return 0;
}

int run_mc_check(const SphereOptions& o)
{
    const auto [x, y] = mc_points(o);
    const McResult mc = mc_functional_equation(o.n, o.k, x, y, o.samples, o.seed);
    json out = mc_to_json(mc);
    out["n"] = o.n;
    out["k"] = o.k;
    out["seed"] = o.seed;
    out["z_max"] = o.z_max;
    out["pass"] = mc.z <= o.z_max;
    emit(out.dump() + "\n", o.json_path);
    return mc.z <= o.z_max ? 0 : 1;
}

int run_check()
{
    bool ok = true;
    for (const auto& criterion : acceptance::all_criteria()) {
        const acceptance::CriterionResult r = criterion();
        std::cout << acceptance::format_line(r) << std::endl;
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Harish-Chandra c-function values, direct-limit classification and sphere checks"};
    app.require_subcommand(0, 1);
    bool check = false;
    app.add_flag("--check", check, "Run the acceptance suite; nonzero exit if any criterion fails");

    // catalog
    int cat_rank = 4;
    int cat_qmp = 1;
    std::string cat_out;
    auto* catalog = app.add_subcommand("catalog", "JSON of every catalog row");
    catalog->add_option("--rank", cat_rank, "Rank of the concrete instance per row")->check(CLI::PositiveNumber);
    catalog->add_option("--q-minus-p", cat_qmp, "q - p for Grassmannian instances")->check(CLI::NonNegativeNumber);
    catalog->add_option("--out", cat_out, "Output file (default stdout)");

    // c-eval
    CEvalOptions ce;
    auto* ceval = app.add_subcommand("c-eval", "Exact c(mu + rho), one JSON line per --mu");
    ceval->add_option("--family", ce.family, "Family key or row label")->required();
    ceval->add_option("--p", ce.p, "Grassmannian p");
    ceval->add_option("--q", ce.q, "Grassmannian q");
    ceval->add_option("--q-minus-p", ce.q_minus_p, "Grassmannian q - p (when --q is absent)");
    ceval->add_option("--n", ce.n, "Group index n for non-Grassmannian rows");
    ceval->add_option("--rank", ce.rank, "Rank (alternative to --n / --p)");
    ceval->add_option("--mu", ce.mu, "Weight coefficients over the fundamental weights, e.g. 1,0,2");

    // limit-scan
    std::string config_path;
    ScanSettings flags;
    std::string th_floor, th_window, th_rel, th_ceiling;
    auto* scan = app.add_subcommand("limit-scan", "c-sequence of a direct system with its classification");
    scan->add_option("--config", config_path, "key = value config file; flags override it");
    scan->add_option("--family", flags.family);
    scan->add_option("--mode", flags.mode, "finite or infinite");
    scan->add_option("--p", flags.p);
    scan->add_option("--q-minus-p", flags.q_minus_p);
    scan->add_option("--coeffs", flags.coeffs, "Base weight, e.g. 1,0");
    scan->add_option("--levels", flags.levels, "a..b[:step] or a list");
    scan->add_option("--base-level", flags.base_level);
    scan->add_option("--until-decided", flags.until_decided, "Scan from the base level until decided, up to this level");
    scan->add_option("--zero-floor", th_floor);
    scan->add_option("--window", th_window);
    scan->add_option("--rel-tol", th_rel);
    scan->add_option("--certificate-ceiling", th_ceiling);
    scan->add_option("--csv", flags.csv_path, "CSV output (default stdout)");
    scan->add_option("--json", flags.json_path, "JSON report (default stdout)");

    // sphere-verify / mc-check
    SphereOptions so;
    auto* sphere = app.add_subcommand("sphere-verify", "Zonal function table, ODE residuals and a Monte-Carlo check");
    auto* mc = app.add_subcommand("mc-check", "Monte-Carlo check of the spherical functional equation");
    for (auto* sub : {sphere, mc}) {
        sub->add_option("--n", so.n, "Sphere dimension")->required()->check(CLI::Range(2, 100000));
        sub->add_option("--k", so.k, "Degree")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--samples", so.samples, "Monte-Carlo samples");
        sub->add_option("--seed", so.seed, "RNG seed");
        sub->add_option("--theta-x", so.theta_x, "Use a rotation in the (1,2)-plane for x");
        sub->add_option("--theta-y", so.theta_y, "Use a rotation in the (1,2)-plane for y");
        sub->add_option("--json", so.json_path, "JSON output (default stdout)");
    }
    sphere->add_option("--grid", so.grid, "Chebyshev grid size")->check(CLI::PositiveNumber);
    sphere->add_option("--csv", so.csv_path, "CSV output (default stdout)");
    mc->add_option("--z-max", so.z_max, "Largest accepted |z|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (check) {
            return run_check();
        }
        if (*catalog) {
            emit(catalog_json(cat_rank, cat_qmp).dump(2) + "\n", cat_out);
            return 0;
        }
        if (*ceval) {
            return run_c_eval(ce);
        }
        if (*scan) {
            ScanSettings s = config_path.empty() ? ScanSettings{} : settings_from(read_key_values(config_path));
            auto given = [&](const char* name) { return scan->count(name) > 0; };
            if (given("--family")) s.family = flags.family;
            if (given("--mode")) s.mode = flags.mode;
            if (given("--p")) s.p = flags.p;
            if (given("--q-minus-p")) s.q_minus_p = flags.q_minus_p;
            if (given("--coeffs")) s.coeffs = flags.coeffs;
            if (given("--levels")) s.levels = flags.levels;
            if (given("--base-level")) s.base_level = flags.base_level;
            if (given("--until-decided")) s.until_decided = flags.until_decided;
            if (given("--zero-floor")) s.thresholds.zero_floor = std::stod(th_floor);
            if (given("--window")) s.thresholds.window = std::stoi(th_window);
            if (given("--rel-tol")) s.thresholds.rel_tol = std::stod(th_rel);
            if (given("--certificate-ceiling")) s.thresholds.certificate_ceiling = std::stod(th_ceiling);
            if (given("--csv")) s.csv_path = flags.csv_path;
            if (given("--json")) s.json_path = flags.json_path;
            return run_limit_scan(s);
        }
        if (*sphere) {
            return run_sphere_verify(so);
        }
        if (*mc) {
            return run_mc_check(so);
        }
        std::cerr << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sphelim: error: " << e.what() << "\n";
        return 2;
    }
}
