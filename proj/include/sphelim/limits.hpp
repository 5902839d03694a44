#pragma once

// Direct systems of spherical representations: propagation of a weight along
// a family, the c-sequence c_n(mu_n + rho_n), and the finite/infinite rank
// classification of its limit.

#include "sphelim/cfunc.hpp"
#include "sphelim/parallel.hpp"
#include "sphelim/rational.hpp"
#include "sphelim/rootdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphelim {

enum class RankMode { Finite, Infinite };

/// A chain M_n of propagating spaces carrying the weight sum_j k_j xi_{n,j}.
///
/// Finite rank (Grassmannians and rank1-real with fixed p): the level is q and
/// only m_{alpha_1/2} = (q - p) d changes. Infinite rank: the level is the
/// rank; Grassmannian rows then grow p with q - p fixed.
struct DirectSystem {
    Family family = Family::SuDiag;
    std::optional<int> fixed_p;
    int q_minus_p = 1;
    int base_level = 1;
    std::vector<std::int64_t> base_coeffs;
    std::vector<int> index_range;

    RankMode mode() const { return fixed_p ? RankMode::Finite : RankMode::Infinite; }

    bool zero_weight() const
    {
        return std::all_of(base_coeffs.begin(), base_coeffs.end(), [](std::int64_t k) { return k == 0; });
    }
};

inline SpaceDatum datum_at(const DirectSystem& system, int level)
{
    if (system.fixed_p) {
        return build_space(system.family, *system.fixed_p, level);
    }
    return build_at_rank(system.family, level, system.q_minus_p);
}

namespace detail {

inline void validate_system(const DirectSystem& s)
{
    const SpaceDatum base = datum_at(s, s.base_level);
    if (static_cast<int>(s.base_coeffs.size()) > base.rank()) {
        throw std::invalid_argument("base weight has " + std::to_string(s.base_coeffs.size()) +
                                    " coefficients but the base level has rank " + std::to_string(base.rank()));
    }
    for (auto k : s.base_coeffs) {
        if (k < 0) {
            throw std::invalid_argument("base weight coefficients must be nonnegative");
        }
    }
    for (int level : s.index_range) {
        if (level < s.base_level) {
            throw std::invalid_argument("level " + std::to_string(level) + " is below the base level " +
                                        std::to_string(s.base_level));
        }
    }
}

} // namespace detail

/// Grassmannian (or rank1-real) with p fixed; levels are values of q.
inline DirectSystem finite_rank_system(Family family, int p, std::vector<std::int64_t> coeffs, std::vector<int> levels,
                                       std::optional<int> base_level = std::nullopt)
{
    if (!is_grassmannian(family)) {
        throw std::invalid_argument("finite-rank systems exist only for Grassmannian rows");
    }
    DirectSystem s;
    s.family = family;
    s.fixed_p = p;
    s.base_coeffs = std::move(coeffs);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    s.index_range = std::move(levels);
    s.base_level = base_level.value_or(s.index_range.empty() ? p : s.index_range.front());
    detail::validate_system(s);
    return s;
}

/// Rank grows with the level (level = rank).
inline DirectSystem infinite_rank_system(Family family, std::vector<std::int64_t> coeffs, std::vector<int> levels,
                                         int q_minus_p = 1, std::optional<int> base_level = std::nullopt)
{
    if (family == Family::RankOneReal) {
        throw std::invalid_argument("rank1-real has fixed rank");
    }
    DirectSystem s;
    s.family = family;
    s.q_minus_p = q_minus_p;
    s.base_coeffs = std::move(coeffs);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    s.index_range = std::move(levels);
    s.base_level = base_level.value_or(s.index_range.empty() ? 1 : s.index_range.front());
    detail::validate_system(s);
    return s;
}

struct Propagated {
    SpaceDatum datum;
    Weight weight;
};

/// The level's datum and mu_k = sum_{j <= r_n} k_j xi_{k,j}.
inline Propagated propagate(const DirectSystem& system, int target_level)
{
    if (target_level < system.base_level) {
        throw std::invalid_argument("propagate: level " + std::to_string(target_level) + " is below the base level " +
                                    std::to_string(system.base_level));
    }
    SpaceDatum datum = datum_at(system, target_level);
    Weight w = weight_from_xi(datum, system.base_coeffs);
    return {std::move(datum), std::move(w)};
}

struct CEntry {
    int level = 0;
    BigRational value;
};

struct CSequence {
    DirectSystem system;
    std::vector<CEntry> entries;
};

/// Exact c_n(mu_n + rho_n) at each level; levels are evaluated concurrently
/// and returned in increasing order.
inline CSequence c_sequence(const DirectSystem& system, std::vector<int> levels)
{
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    CSequence seq;
    seq.system = system;
    seq.entries.resize(levels.size());
    parallel_for(levels.size(), [&](std::size_t i) {
        const auto [datum, weight] = propagate(system, levels[i]);
        seq.entries[i] = CEntry{levels[i], c_value(datum, weight)};
    });
    return seq;
}

inline CSequence c_sequence(const DirectSystem& system) { return c_sequence(system, system.index_range); }

inline bool is_nonincreasing(const CSequence& seq)
{
    for (std::size_t i = 1; i < seq.entries.size(); ++i) {
        if (seq.entries[i].value > seq.entries[i - 1].value) {
            return false;
        }
    }
    return true;
}

/// Exact prod_{j=L}^{N} (1 + a_j / (x_j + j))^{-1}, a and x indexed from L.
/// Requires a_j >= epsilon > 0 and 0 <= x_j <= delta; 1 when N < L.
inline std::vector<BigRational> divergence_certificate_partials(std::span<const BigRational> a,
                                                                std::span<const BigRational> x, int L, int N,
                                                                const BigRational& epsilon, const BigRational& delta)
{
    std::vector<BigRational> partials;
    if (N < L) {
        return partials;
    }
    if (L < 1) {
        throw std::invalid_argument("divergence_certificate: L must be >= 1");
    }
    if (sgn(epsilon) <= 0 || sgn(delta) < 0) {
        throw std::invalid_argument("divergence_certificate: need epsilon > 0 and delta >= 0");
    }
    const auto count = static_cast<std::size_t>(N - L + 1);
    if (a.size() < count || x.size() < count) {
        throw std::invalid_argument("divergence_certificate: a and x need N - L + 1 entries");
    }
    partials.reserve(count);
    BigRational prod(1);
    for (std::size_t i = 0; i < count; ++i) {
        if (a[i] < epsilon) {
            throw std::domain_error("divergence_certificate: a_" + std::to_string(L + static_cast<int>(i)) + " = " +
                                    to_string(a[i]) + " < epsilon");
        }
        if (sgn(x[i]) < 0 || x[i] > delta) {
            throw std::domain_error("divergence_certificate: x_" + std::to_string(L + static_cast<int>(i)) + " = " +
                                    to_string(x[i]) + " outside [0, delta]");
        }
        const BigRational denom = x[i] + (L + static_cast<long>(i));
        prod *= denom / (denom + a[i]);
        partials.push_back(prod);
    }
    return partials;
}

inline BigRational divergence_certificate(std::span<const BigRational> a, std::span<const BigRational> x, int L, int N,
                                          const BigRational& epsilon, const BigRational& delta)
{
    auto partials = divergence_certificate_partials(a, x, L, N, epsilon, delta);
    return partials.empty() ? BigRational(1) : partials.back();
}

/// Witness root at rank n for a weight whose first nonzero xi-coefficient
/// has index k (1-based): along it rho grows affinely in n and xi_k pairs to 1.
inline RestrictedRoot infinite_rank_root_sequence(RootType type, int n, int k)
{
    auto require = [&](bool ok) {
        if (!ok) {
            throw std::invalid_argument("infinite_rank_root_sequence: no witness at n = " + std::to_string(n) +
                                        " for type " + std::string(1, to_char(type)));
        }
    };
    switch (type) {
    case RootType::A:
        require(n >= 1);
        return RestrictedRoot{n + 1, n, 1, 0, -1, RootOrbit::Alpha1}; // f_{n+1} - f_1
    case RootType::B:
        if (k == 1) {
            require(n >= 1);
            return RestrictedRoot{n, n - 1, 1, 0, 0, RootOrbit::Alpha1}; // f_n
        }
        require(n >= 2);
        return RestrictedRoot{n, n - 1, 1, 0, -1, RootOrbit::Middle}; // f_n - f_1
    case RootType::C:
        require(n >= 2);
        return RestrictedRoot{n, n - 1, 1, 0, +1, RootOrbit::Middle}; // f_n + f_1
    case RootType::D:
        require(n >= 3);
        return RestrictedRoot{n, n - 1, 1, 1, +1, RootOrbit::Alpha1}; // f_n + f_2
    }
    throw std::invalid_argument("unknown root type");
}

namespace detail {

inline int first_witness_rank(RootType type, int k)
{
    switch (type) {
    case RootType::A: return std::max(k, 1);
    case RootType::B: return k == 1 ? 1 : std::max(k, 2);
    case RootType::C: return std::max(k, 2);
    case RootType::D: return std::max(k, 3);
    }
    return k;
}

inline BigRational floor_of(const BigRational& r)
{
    BigInteger q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return BigRational(q);
}

} // namespace detail

/// Upper bound c_N <= prod_n (1 + y_{alpha_n} / rho_{alpha_n})^{-1} over the
/// witness roots alpha_n at level N, rewritten in the form
/// prod_j (1 + a_j / (x_j + j))^{-1} whose divergence to 0 is guaranteed
/// once a_j >= epsilon > 0 and 0 <= x_j <= delta.
struct DivergenceCertificate {
    int level = 0;
    int first_witness = 0;
    int last_witness = 0;
    BigRational slope;  // rho_{alpha_n} = slope * n + offset
    BigRational offset;
    BigRational y;
    BigRational epsilon; // a_j (constant)
    BigRational delta;   // x_j (constant)
    int L = 1;
    int N = 0;
    BigRational bound;
    bool hypotheses_hold = false;
    bool dominates = false; // c_N <= bound
    std::optional<double> schedule; // exp(-(epsilon/2) sum_{j=L}^N 1/(delta + j))
    std::string note;
};

inline std::optional<DivergenceCertificate> witness_certificate(const DirectSystem& system, int level,
                                                                 const BigRational& c_level)
{
    if (system.mode() != RankMode::Infinite || system.zero_weight()) {
        return std::nullopt;
    }
    const auto first_nonzero = std::find_if(system.base_coeffs.begin(), system.base_coeffs.end(),
                                            [](std::int64_t k) { return k != 0; });
    const int k = static_cast<int>(first_nonzero - system.base_coeffs.begin()) + 1;

    const auto [datum, mu] = propagate(system, level);
    const Weight rho_w = rho(datum);
    const RootType type = datum.psi.label;
    const int n0 = detail::first_witness_rank(type, k);
    const int n1 = datum.rank();
    if (n1 - n0 + 1 < 2) {
        return std::nullopt;
    }

    DivergenceCertificate cert;
    cert.level = level;
    cert.first_witness = n0;
    cert.last_witness = n1;
    cert.hypotheses_hold = true;

    std::vector<BigRational> rho_n;
    std::vector<BigRational> y_n;
    for (int n = n0; n <= n1; ++n) {
        RestrictedRoot alpha = infinite_rank_root_sequence(type, n, k);
        alpha.dim = datum.dim();
        if (lambda_alpha(mu, alpha) < 1) {
            cert.hypotheses_hold = false;
            cert.note = "witness " + alpha.name() + " has mu_alpha < 1";
        }
        rho_n.push_back(lambda_alpha(rho_w, alpha));
        y_n.push_back(y_of(datum, alpha));
    }
    cert.slope = rho_n[1] - rho_n[0];
    cert.offset = rho_n[0] - cert.slope * n0;
    cert.y = y_n[0];
    for (int n = n0; n <= n1; ++n) {
        const auto i = static_cast<std::size_t>(n - n0);
        if (rho_n[i] != cert.slope * n + cert.offset || y_n[i] != cert.y) {
            cert.hypotheses_hold = false;
            cert.note = "rho along the witness roots is not affine in n";
        }
    }
    if (sgn(cert.slope) <= 0 || sgn(cert.y) <= 0) {
        cert.hypotheses_hold = false;
        cert.note = "witness slope or y_alpha is not positive";
        return cert;
    }

    // (1 + y / (s n + t))^{-1} = (1 + a / (x + j))^{-1} with a = y/s,
    // j = n + shift, x = t/s - shift in [0, 1).
    const BigRational r = cert.offset / cert.slope;
    const BigRational shift = detail::floor_of(r);
    cert.epsilon = cert.y / cert.slope;
    cert.delta = r - shift;
    const int shift_i = static_cast<int>(shift.get_num().get_si());
    cert.L = std::max(1, n0 + shift_i);
    cert.N = n1 + shift_i;
    const auto count = static_cast<std::size_t>(std::max(0, cert.N - cert.L + 1));
    std::vector<BigRational> a(count, cert.epsilon);
    std::vector<BigRational> x(count, cert.delta);
    cert.bound = divergence_certificate(a, x, cert.L, cert.N, cert.epsilon, cert.delta);
    cert.dominates = c_level <= cert.bound;

    // 1 + u >= e^{u/2} holds for 0 <= u <= 2.5, which covers every term here
    // when it covers the first.
    const double eps = to_double(cert.epsilon);
    const double del = to_double(cert.delta);
    if (eps / (del + cert.L) <= 2.5) {
        double harmonic = 0.0;
        for (int j = cert.L; j <= cert.N; ++j) {
            harmonic += 1.0 / (del + j);
        }
        cert.schedule = std::exp(-0.5 * eps * harmonic);
    }
    return cert;
}

enum class Verdict { PositiveLimit, ZeroLimit, Undecided };

inline std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::PositiveLimit: return "PositiveLimit";
    case Verdict::ZeroLimit: return "ZeroLimit";
    case Verdict::Undecided: return "Undecided";
    }
    return "?";
}

// zero_floor and certificate_ceiling only act on infinite-rank systems: a
// finite-rank limit can be positive and still far below 1e-6.
struct ClassifyConfig {
    double zero_floor = 1e-6;
    int window = 5;
    double rel_tol = 1e-4;
    double certificate_ceiling = 1e-2;
};

struct ConvergenceReport {
    Verdict verdict = Verdict::Undecided;
    std::optional<double> limit_estimate;
    std::optional<double> last_value;
    int levels_used = 0;
    int last_level = 0;
    std::optional<double> last_delta; // relative change between the last two entries
    std::optional<DivergenceCertificate> certificate;
    std::string reason;
};

namespace detail {

inline double relative_change(const CEntry& prev, const CEntry& cur)
{
    return to_double((prev.value - cur.value) / prev.value);
}

} // namespace detail

/// Classifies lim c_n. Throws std::logic_error on a non-monotone sequence,
/// since c_n never increases and a violation means a bug upstream.
inline ConvergenceReport classify(const CSequence& seq, const ClassifyConfig& config = {})
{
    if (seq.entries.empty()) {
        throw std::invalid_argument("classify: empty c-sequence");
    }
    for (std::size_t i = 1; i < seq.entries.size(); ++i) {
        if (seq.entries[i].value > seq.entries[i - 1].value) {
            throw std::logic_error("classify: c-sequence increases from level " +
                                   std::to_string(seq.entries[i - 1].level) + " to level " +
                                   std::to_string(seq.entries[i].level));
        }
    }
    const auto& entries = seq.entries;
    const CEntry& last = entries.back();

    ConvergenceReport report;
    report.levels_used = static_cast<int>(entries.size());
    report.last_level = last.level;
    report.last_value = to_double(last.value);
    if (entries.size() >= 2) {
        report.last_delta = detail::relative_change(entries[entries.size() - 2], last);
    }

    if (seq.system.mode() == RankMode::Infinite && *report.last_value < config.zero_floor) {
        report.verdict = Verdict::ZeroLimit;
        report.limit_estimate = 0.0;
        report.reason = "value below the zero floor";
        return report;
    }

    if (seq.system.mode() == RankMode::Infinite) {
        report.certificate = witness_certificate(seq.system, last.level, last.value);
        const auto& cert = report.certificate;
        if (cert && cert->hypotheses_hold && cert->dominates && to_double(cert->bound) < config.certificate_ceiling) {
            report.verdict = Verdict::ZeroLimit;
            report.limit_estimate = 0.0;
            report.reason = "witness certificate bounds c_n below the ceiling and forces divergence";
            return report;
        }
    }

    const bool constant = entries.size() >= 2 && entries.front().value == last.value;
    if (constant) {
        report.verdict = Verdict::PositiveLimit;
        report.limit_estimate = *report.last_value;
        report.reason = "constant sequence";
        return report;
    }

    if (seq.system.mode() == RankMode::Finite) {
        const auto w = static_cast<std::size_t>(std::max(1, config.window));
        if (entries.size() >= w + 1) {
            bool stable = true;
            for (std::size_t i = entries.size() - w; i < entries.size(); ++i) {
                if (detail::relative_change(entries[i - 1], entries[i]) >= config.rel_tol) {
                    stable = false;
                }
            }
            if (stable) {
                // Richardson on 1/level: c_n = c_inf + A/n + O(1/n^2).
                const CEntry& prev = entries[entries.size() - 2];
                const BigRational extrapolated =
                    (last.value * last.level - prev.value * prev.level) / BigRational(last.level - prev.level);
                const double est = to_double(extrapolated);
                if (est > 0.0) {
                    report.verdict = Verdict::PositiveLimit;
                    report.limit_estimate = est;
                    report.reason = "stabilized over the window; Richardson extrapolant reported";
                    return report;
                }
            }
        }
        report.reason = "not yet stabilized; more levels needed";
    } else {
        report.reason = "no divergence evidence yet; more levels needed";
    }
    report.verdict = Verdict::Undecided;
    return report;
}

struct ScanResult {
    CSequence sequence;
    ConvergenceReport report;
};

/// Evaluates levels base_level, base_level + 1, ... in batches until the
/// classifier decides or max_level is reached.
inline ScanResult scan_until_decided(const DirectSystem& system, const ClassifyConfig& config, int max_level,
                                     int batch = 16)
{
    ScanResult out;
    out.sequence.system = system;
    int next = system.base_level;
    while (next <= max_level) {
        std::vector<int> levels;
        for (int i = 0; i < batch && next <= max_level; ++i) {
            levels.push_back(next++);
        }
        CSequence part = c_sequence(system, levels);
        for (auto& e : part.entries) {
            out.sequence.entries.push_back(std::move(e));
        }
        out.report = classify(out.sequence, config);
        if (out.report.verdict != Verdict::Undecided) {
            break;
        }
    }
    return out;
}

} // namespace sphelim
