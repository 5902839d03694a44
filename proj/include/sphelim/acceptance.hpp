#pragma once

// The acceptance suite shared by the test binary and `sphelim --check`.
// Each criterion returns one pass/fail record with a short detail line.

#include "sphelim/cfunc.hpp"
#include "sphelim/limits.hpp"
#include "sphelim/rootdata.hpp"
#include "sphelim/sphere.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace sphelim::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Valid data of every catalog row (plus the rank-one alias) at ranks lo..hi.
inline std::vector<SpaceDatum> catalog_data(int lo, int hi, bool with_alias = true)
{
    std::vector<SpaceDatum> out;
    std::vector<Family> families = catalog_families();
    if (with_alias) {
        families.push_back(Family::RankOneReal);
    }
    for (Family f : families) {
        for (int r = lo; r <= hi; ++r) {
            if (f == Family::RankOneReal && r != 1) {
                continue;
            }
            if (r < sphelim::detail::min_rank(family_info(f).type)) {
                continue;
            }
            out.push_back(build_at_rank(f, r, 1));
        }
    }
    return out;
}

/// Finite-rank sweeps: F in {R, C, H}, p in {1, 2, 3}, three seeded weights.
inline std::vector<DirectSystem> finite_rank_sweeps(int levels_per_sweep)
{
    std::vector<DirectSystem> out;
    const Family families[] = {Family::RealGrassmannian, Family::ComplexGrassmannian,
                               Family::QuaternionicGrassmannian};
    for (Family f : families) {
        for (int p = 1; p <= 3; ++p) {
            std::mt19937_64 rng(1000u + 10u * static_cast<unsigned>(f) + static_cast<unsigned>(p));
            std::uniform_int_distribution<int> coeff(0, 3);
            for (int w = 0; w < 3; ++w) {
                std::vector<std::int64_t> k(static_cast<std::size_t>(p));
                for (auto& v : k) {
                    v = coeff(rng);
                }
                if (std::all_of(k.begin(), k.end(), [](auto v) { return v == 0; })) {
                    k[0] = 1;
                }
                std::vector<int> levels;
                for (int q = p; q < p + levels_per_sweep; ++q) {
                    levels.push_back(q);
                }
                out.push_back(finite_rank_system(f, p, k, levels));
            }
        }
    }
    return out;
}

inline std::string describe(const DirectSystem& s)
{
    std::ostringstream os;
    os << family_info(s.family).key;
    if (s.fixed_p) {
        os << " p=" << *s.fixed_p;
    }
    os << " k=(";
    for (std::size_t i = 0; i < s.base_coeffs.size(); ++i) {
        os << (i ? "," : "") << s.base_coeffs[i];
    }
    os << ")";
    return os.str();
}

} // namespace detail

inline CriterionResult normalization()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{1, "normalization c(rho) = 1, all rows, ranks 1..8", true, "", 0.0};
    int count = 0;
    for (const SpaceDatum& d : detail::catalog_data(1, 8)) {
        const Weight zero = weight_from_xi(d, std::span<const std::int64_t>{});
        if (c_value(d, zero) != 1) {
            r.passed = false;
            r.detail = "c != 1 for " + std::string(family_info(d.family).key) + " rank " + std::to_string(d.rank());
        }
        ++count;
    }
    r.seconds = detail::since(t0);
    if (r.passed && r.seconds >= 1.0) {
        r.passed = false;
        r.detail = "took " + std::to_string(r.seconds) + " s";
    }
    if (r.passed) {
        r.detail = std::to_string(count) + " data";
    }
    return r;
}

inline CriterionResult rank_one_exactness()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{2, "rank-one real sequence (n+1)/(4n), limit 1/4", true, "", 0.0};
    std::vector<int> levels;
    for (int n = 2; n <= 50; ++n) {
        levels.push_back(n);
    }
    const DirectSystem sys = finite_rank_system(Family::RankOneReal, 1, {1}, levels);
    const CSequence seq = c_sequence(sys);
    for (const auto& e : seq.entries) {
        const int n = e.level;
        if (e.value != make_rational(n + 1, 4 * n)) {
            r.passed = false;
            r.detail = "n=" + std::to_string(n) + " gave " + to_string(e.value);
            break;
        }
        const SpaceDatum d = datum_at(sys, n);
        const double g = c_gamma_shifted(d, weight_from_xi(d, {1}));
        if (std::abs(g - to_double(e.value)) > 1e-12) {
            r.passed = false;
            r.detail = "gamma oracle disagrees at n=" + std::to_string(n);
            break;
        }
    }
    if (r.passed) {
        const DirectSystem open = finite_rank_system(Family::RankOneReal, 1, {1}, {}, 2);
        const ScanResult scan = scan_until_decided(open, {}, 20000);
        const double est = scan.report.limit_estimate.value_or(-1.0);
        r.passed = scan.report.verdict == Verdict::PositiveLimit && std::abs(est - 0.25) <= 1e-3;
        std::ostringstream os;
        os << "verdict " << to_string(scan.report.verdict) << " at level " << scan.report.last_level << ", estimate "
           << est;
        r.detail = os.str();
    }
    r.seconds = detail::since(t0);
    return r;
}

inline CriterionResult oracle_agreement()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{3, "gamma oracle vs exact product, rank <= 6, coefficients <= 4", true, "", 0.0};
    const std::vector<SpaceDatum> data = detail::catalog_data(1, 6);
    std::atomic<long> evaluated{0};
    std::mutex m;
    double worst = 0.0;
    std::string worst_where;
    parallel_for(data.size(), [&](std::size_t i) {
        const SpaceDatum& d = data[i];
        const int rank = d.rank();
        std::vector<std::int64_t> k(static_cast<std::size_t>(rank), 0);
        double local = 0.0;
        std::string where;
        long n = 0;
        while (true) {
            const Weight mu = weight_from_xi(d, k);
            const double exact = to_double(c_value(d, mu));
            const double approx = c_gamma_shifted(d, mu);
            const double rel = std::abs(approx - exact) / exact;
            if (!(rel <= local)) {
                local = rel;
                where = std::string(family_info(d.family).key) + " rank " + std::to_string(rank);
            }
            ++n;
            std::size_t j = 0;
            while (j < k.size() && k[j] == 4) {
                k[j++] = 0;
            }
            if (j == k.size()) {
                break;
            }
            ++k[j];
        }
        evaluated += n;
        std::lock_guard lock(m);
        if (!(local <= worst)) {
            worst = local;
            worst_where = where;
        }
    });
    r.seconds = detail::since(t0);
    r.passed = worst <= 1e-9 && r.seconds < 60.0;
    std::ostringstream os;
    os << evaluated.load() << " weights, max rel error " << worst << " (" << worst_where << ")";
    r.detail = os.str();
    return r;
}

inline CriterionResult monotonicity()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{4, "monotone sequences and c(mu + xi_j) <= c(mu)", true, "", 0.0};
    std::mt19937_64 rng(20240517);
    const std::vector<SpaceDatum> data = detail::catalog_data(1, 6);
    std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
    std::uniform_int_distribution<int> coeff(0, 6);
    for (int s = 0; s < 100; ++s) {
        const SpaceDatum& d = data[pick(rng)];
        std::vector<std::int64_t> k(static_cast<std::size_t>(d.rank()));
        for (auto& v : k) {
            v = coeff(rng);
        }
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, k.size() - 1)(rng);
        const BigRational before = c_value(d, weight_from_xi(d, k));
        ++k[j];
        const BigRational after = c_value(d, weight_from_xi(d, k));
        if (after > before) {
            r.passed = false;
            r.detail = "increase for " + std::string(family_info(d.family).key) + " at xi_" + std::to_string(j + 1);
        }
    }
    int sequences = 0;
    auto check = [&](const DirectSystem& sys) {
        ++sequences;
        if (!is_nonincreasing(c_sequence(sys))) {
            r.passed = false;
            r.detail = "sequence increases: " + detail::describe(sys);
        }
    };
    for (const DirectSystem& sys : detail::finite_rank_sweeps(40)) {
        check(sys);
    }
    for (Family f : catalog_families()) {
        if (is_grassmannian(f)) {
            continue;
        }
        const int base = sphelim::detail::min_rank(family_info(f).type);
        std::vector<int> levels;
        for (int l = base; l <= base + 30; ++l) {
            levels.push_back(l);
        }
        check(infinite_rank_system(f, {1}, levels));
        levels.erase(std::remove_if(levels.begin(), levels.end(), [](int l) { return l < 3; }), levels.end());
        check(infinite_rank_system(f, {0, 2, 1}, levels));
    }
    if (r.passed) {
        r.detail = "100 spot checks, " + std::to_string(sequences) + " sequences";
    }
    r.seconds = detail::since(t0);
    return r;
}

inline CriterionResult dichotomy()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{5, "finite rank -> PositiveLimit, infinite rank -> ZeroLimit", true, "", 0.0};
    int finite = 0;
    int max_level = 0;
    for (const DirectSystem& sys : detail::finite_rank_sweeps(1)) {
        const ScanResult scan = scan_until_decided(sys, {}, 100000, 64);
        max_level = std::max(max_level, scan.report.last_level);
        if (scan.report.verdict != Verdict::PositiveLimit) {
            r.passed = false;
            r.detail = detail::describe(sys) + ": " + std::string(to_string(scan.report.verdict));
        }
        ++finite;
    }
    std::ostringstream os;
    os << finite << " finite-rank systems positive (deepest level " << max_level << ")";
    for (Family f : {Family::SuDiag, Family::SuSo, Family::SuSp, Family::SpU}) {
        const DirectSystem sys = infinite_rank_system(f, {1}, {}, 1, 1);
        const ScanResult scan = scan_until_decided(sys, {}, 500);
        bool below = false;
        for (const auto& e : scan.sequence.entries) {
            below = below || to_double(e.value) < 1e-2;
        }
        if (scan.report.verdict != Verdict::ZeroLimit || !below) {
            r.passed = false;
            os << "; " << family_info(f).key << " " << to_string(scan.report.verdict);
        } else {
            os << "; " << family_info(f).key << " zero at rank " << scan.report.last_level;
        }
    }
    r.seconds = detail::since(t0);
    if (r.seconds >= 300.0) {
        r.passed = false;
    }
    r.detail = r.detail.empty() ? os.str() : r.detail + " | " + os.str();
    return r;
}

inline CriterionResult certificate_telescoping()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{6, "certificate with a_j = 1, x_j = 0 equals 1/(N+1), N <= 10^4", true, "", 0.0};
    const int n_max = 10000;
    const std::vector<BigRational> a(n_max, BigRational(1));
    const std::vector<BigRational> x(n_max, BigRational(0));
    const auto partials = divergence_certificate_partials(a, x, 1, n_max, BigRational(1), BigRational(0));
    for (int n = 1; n <= n_max; ++n) {
        if (partials[static_cast<std::size_t>(n - 1)] != make_rational(1, n + 1)) {
            r.passed = false;
            r.detail = "mismatch at N=" + std::to_string(n);
            break;
        }
    }
    if (r.passed && divergence_certificate(a, x, 1, 0, BigRational(1), BigRational(0)) != 1) {
        r.passed = false;
        r.detail = "empty product is not 1";
    }
    if (r.passed) {
        r.detail = "N = 0.." + std::to_string(n_max);
    }
    r.seconds = detail::since(t0);
    return r;
}

inline CriterionResult sphere_closed_forms()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{7, "zonal closed forms and ODE residual", true, "", 0.0};
    const std::vector<double> grid = chebyshev_interior_grid(101);
    std::vector<double> full = grid;
    full.push_back(-1.0);
    full.push_back(1.0);
    double worst2 = 0.0;
    for (int n = 2; n <= 50; ++n) {
        for (double t : full) {
            if (zonal_eval(ZonalFunction(n, 1), t) != t) {
                r.passed = false;
                r.detail = "p_{n,1}(t) != t at n=" + std::to_string(n);
            }
            const double p2 = zonal_eval(ZonalFunction(n, 2), t);
            worst2 = std::max(worst2, std::abs(p2 - ((n + 1) * t * t - 1.0) / n));
        }
    }
    double worst_res = 0.0;
    for (int n = 2; n <= 20; ++n) {
        for (int k = 0; k <= 10; ++k) {
            for (double t : grid) {
                worst_res = std::max(worst_res, std::abs(ode_residual(ZonalFunction(n, k), t)));
            }
        }
    }
    r.passed = r.passed && worst2 <= 1e-12 && worst_res < 1e-8;
    std::ostringstream os;
    os << "max |p2 - closed form| " << worst2 << ", max ODE residual " << worst_res;
    r.detail = r.detail.empty() ? os.str() : r.detail + " | " + os.str();
    r.seconds = detail::since(t0);
    return r;
}

/// max over the interior grid and the endpoints of |p_{n,k}(t) - t^k|.
inline double limit_deviation(int n, int k)
{
    std::vector<double> grid = chebyshev_interior_grid(101);
    grid.push_back(-1.0);
    grid.push_back(1.0);
    double worst = 0.0;
    for (double t : grid) {
        worst = std::max(worst, std::abs(zonal_eval(ZonalFunction(n, k), t) - std::pow(t, k)));
    }
    return worst;
}

inline CriterionResult pointwise_limit()
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{8, "p_{n,k}(t) -> t^k as n grows, k <= 3", true, "", 0.0};
    std::ostringstream os;
    for (int k = 0; k <= 3; ++k) {
        double prev = std::numeric_limits<double>::infinity();
        for (int n : {10, 20, 40, 80, 160}) {
            const double dev = limit_deviation(n, k);
            if (dev > prev) {
                r.passed = false;
                os << "k=" << k << " deviation grows at n=" << n << "; ";
            }
            prev = dev;
        }
        const double at200 = limit_deviation(200, k);
        if (!(at200 < 0.05)) {
            r.passed = false;
        }
        os << "k=" << k << ": " << at200 << (k < 3 ? ", " : "");
    }
    r.detail = "deviation at n=200 " + os.str();
    r.seconds = detail::since(t0);
    return r;
}

inline CriterionResult functional_equation(std::size_t samples = 100000)
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{9, "Monte-Carlo spherical functional equation, |z| <= 4", true, "", 0.0};
    double worst = 0.0;
    std::string where;
    for (int n : {3, 5, 9}) {
        const RotationMatrix x = haar_rotation(n + 1, 7000u + static_cast<unsigned>(n));
        const RotationMatrix y = haar_rotation(n + 1, 8000u + static_cast<unsigned>(n));
        for (int k = 0; k <= 3; ++k) {
            const McResult mc = mc_functional_equation(n, k, x, y, samples, 9000u + 10u * static_cast<unsigned>(n));
            if (!(mc.z <= worst)) {
                worst = mc.z;
                where = "n=" + std::to_string(n) + " k=" + std::to_string(k);
            }
        }
    }
    r.seconds = detail::since(t0);
    r.passed = worst <= 4.0 && r.seconds < 120.0;
    std::ostringstream os;
    os << "max z " << worst << " (" << where << "), " << samples << " samples each";
    r.detail = os.str();
    return r;
}

inline CriterionResult chain_identity(int levels_per_sweep = 16)
{
    const auto t0 = detail::Clock::now();
    CriterionResult r{10, "q(m,l) = q(m,n) q(n,l) exactly, finite-rank sweeps", true, "", 0.0};
    long triples = 0;
    for (const DirectSystem& sys : detail::finite_rank_sweeps(levels_per_sweep)) {
        const auto& lv = sys.index_range;
        const std::size_t m = lv.size();
        std::vector<SpaceDatum> data;
        for (int l : lv) {
            data.push_back(datum_at(sys, l));
        }
        // q2[i][j] = q(level_i, level_j)^2 for i >= j
        std::vector<std::vector<BigRational>> q2(m, std::vector<BigRational>(m));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                q2[i][j] = overlap_q_squared(data[i], data[j], sys.base_coeffs);
            }
        }
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a; b < m; ++b) {
                for (std::size_t c = b; c < m; ++c) {
                    ++triples;
                    if (q2[c][a] != q2[c][b] * q2[b][a]) {
                        r.passed = false;
                        r.detail = "identity fails for " + detail::describe(sys);
                    }
                }
            }
        }
    }
    if (r.passed) {
        r.detail = std::to_string(triples) + " level triples";
    }
    r.seconds = detail::since(t0);
    return r;
}

inline std::vector<std::function<CriterionResult()>> all_criteria()
{
    return {normalization,  rank_one_exactness,      oracle_agreement,    monotonicity,
            dichotomy,      certificate_telescoping, sphere_closed_forms, pointwise_limit,
            [] { return functional_equation(); }, [] { return chain_identity(); }};
}

inline std::string format_line(const CriterionResult& c)
{
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", c.seconds);
    return std::string(c.passed ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.name + " -- " + c.detail +
           " (" + secs + " s)";
}

} // namespace sphelim::acceptance
