#pragma once

// Harish-Chandra c-function at shifted dominant weights.
//
// c_value evaluates c(mu + rho) exactly as a product over Sigma_0^+ of
// Gindikin-Karpelevich factors; c_gamma is the independent floating-point
// route through the Gamma-function form of each factor.

#include "sphelim/rational.hpp"
#include "sphelim/rootdata.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace sphelim {

struct CFactorParams {
    std::int64_t mu_alpha = 0;
    BigRational rho_alpha;
    BigRational x_alpha;
    BigRational y_alpha;
};

/// x_alpha = (m_{alpha/2} + 2) / 4
inline BigRational x_of(const SpaceDatum& s, const RestrictedRoot& r)
{
    BigRational x(mult_half_of(s, r) + 2, 4);
    x.canonicalize();
    return x;
}

/// y_alpha = (m_{alpha/2} + 2 m_alpha) / 4
inline BigRational y_of(const SpaceDatum& s, const RestrictedRoot& r)
{
    BigRational y(mult_half_of(s, r) + 2 * mult_of(s, r), 4);
    y.canonicalize();
    return y;
}

/// Thrown when a weight fails the Cartan-Helgason test; names the first
/// offending root.
class NotDominantError : public std::domain_error {
public:
    NotDominantError(const RestrictedRoot& root, const BigRational& value)
        : std::domain_error("weight is not in Lambda^+: lambda_alpha = " + to_string(value) + " at alpha = " +
                            root.name()),
          root_(root)
    {
    }

    const RestrictedRoot& root() const noexcept { return root_; }

private:
    RestrictedRoot root_;
};

/// One Gindikin-Karpelevich factor in product form:
///   ((1 + x/rho)(1 + y/rho))^{-mu}
///     * prod_{j<mu} (1 + j/(2 rho))(1 + (mu + j)/(2 rho))
///                   / ((1 + j/(x + rho))(1 + j/(y + rho)))
/// which is 1 for mu = 0.
inline BigRational c_factor(const CFactorParams& p)
{
    if (p.mu_alpha < 0) {
        throw std::invalid_argument("c_factor: mu_alpha must be nonnegative");
    }
    if (p.mu_alpha == 0) {
        return BigRational(1);
    }
    if (sgn(p.rho_alpha) <= 0 || sgn(p.x_alpha) <= 0 || sgn(p.y_alpha) < 0) {
        throw std::invalid_argument("c_factor: need rho > 0, x > 0, y >= 0");
    }
    const BigRational& rho = p.rho_alpha;
    const BigRational& x = p.x_alpha;
    const BigRational& y = p.y_alpha;
    const BigRational one(1);

    BigRational base = (one + x / rho) * (one + y / rho);
    BigRational head = one;
    for (std::int64_t i = 0; i < p.mu_alpha; ++i) {
        head *= base;
    }
    BigRational result = one / head;

    const BigRational two_rho = 2 * rho;
    const BigRational mu(static_cast<long>(p.mu_alpha));
    for (std::int64_t jj = 0; jj < p.mu_alpha; ++jj) {
        const BigRational j(static_cast<long>(jj));
        BigRational num = (one + j / two_rho) * (one + (mu + j) / two_rho);
        BigRational den = (one + j / (x + rho)) * (one + j / (y + rho));
        result *= num / den;
    }
    return result;
}

namespace detail {

/// Multiplies many small factors, spilling into a big integer only when the
/// 64-bit running product would overflow.
class ProductAccumulator {
public:
    void mul(std::uint64_t v)
    {
        std::uint64_t r = 0;
        if (__builtin_mul_overflow(small_, v, &r)) {
            big_ *= static_cast<unsigned long>(small_);
            small_ = v;
        } else {
            small_ = r;
        }
    }

    BigInteger value() const
    {
        BigInteger out = big_;
        out *= static_cast<unsigned long>(small_);
        return out;
    }

private:
    BigInteger big_ = 1;
    std::uint64_t small_ = 1;
};

inline std::int64_t to_int64(const BigInteger& z, const char* what)
{
    if (!z.fits_slong_p()) {
        throw std::overflow_error(std::string{"c_value: "} + what + " does not fit in 64 bits");
    }
    return z.get_si();
}

/// Scales a rational f-vector by the lcm of its denominators.
inline std::pair<std::vector<std::int64_t>, std::int64_t> integer_scaled(std::span<const BigRational> f)
{
    BigInteger l = 1;
    for (const auto& c : f) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    }
    std::vector<std::int64_t> out;
    out.reserve(f.size());
    for (const auto& c : f) {
        BigInteger v = c.get_num() * (l / c.get_den());
        out.push_back(to_int64(v, "scaled weight coordinate"));
    }
    return {std::move(out), to_int64(l, "weight denominator")};
}

inline std::int64_t scaled_pairing(const std::vector<std::int64_t>& v, const RestrictedRoot& r)
{
    std::int64_t s = v[static_cast<std::size_t>(r.hi)] * r.hi_coeff;
    if (r.lo_coeff != 0) {
        s += v[static_cast<std::size_t>(r.lo)] * r.lo_coeff;
    }
    return s;
}

/// Factor data in integer form: rho = R/D, x = X/D, y = Y/D with D a
/// multiple of 4. Roots sharing a key share their factor.
struct FactorKey {
    std::int64_t mu;
    std::int64_t R;
    std::int64_t X;
    std::int64_t Y;
    std::int64_t D;

    auto tie() const { return std::tie(mu, R, X, Y, D); }
    friend bool operator<(const FactorKey& a, const FactorKey& b) { return a.tie() < b.tie(); }
};

/// prod_{j<mu} (2R + jD)(2R + (mu+j)D) / (4 (R + X + jD)(R + Y + jD)),
/// the Gindikin-Karpelevich factor with the rho powers cancelled.
inline BigRational integer_factor(const FactorKey& k)
{
    ProductAccumulator num;
    ProductAccumulator den;
    for (std::int64_t j = 0; j < k.mu; ++j) {
        num.mul(static_cast<std::uint64_t>(2 * k.R + j * k.D));
        num.mul(static_cast<std::uint64_t>(2 * k.R + (k.mu + j) * k.D));
        den.mul(4);
        den.mul(static_cast<std::uint64_t>(k.R + k.X + j * k.D));
        den.mul(static_cast<std::uint64_t>(k.R + k.Y + j * k.D));
    }
    BigRational f(num.value(), den.value());
    f.canonicalize();
    return f;
}

} // namespace detail

/// Factor parameters of root alpha for mu + rho.
inline CFactorParams factor_params(const SpaceDatum& datum, const RestrictedRoot& alpha, const Weight& mu,
                                   const Weight& rho_w)
{
    const BigRational m = lambda_alpha(mu, alpha);
    if (!is_nonnegative_integer(m) || !m.get_num().fits_slong_p()) {
        throw NotDominantError(alpha, m);
    }
    return CFactorParams{m.get_num().get_si(), lambda_alpha(rho_w, alpha), x_of(datum, alpha), y_of(datum, alpha)};
}

/// c(mu + rho) exactly, for mu in Lambda^+. Value lies in (0, 1].
inline BigRational c_value(const SpaceDatum& datum, const Weight& mu)
{
    if (static_cast<int>(mu.coeffs_f.size()) != datum.dim()) {
        throw std::invalid_argument("c_value: weight dimension " + std::to_string(mu.coeffs_f.size()) +
                                    " does not match datum dimension " + std::to_string(datum.dim()));
    }
    const Weight rho_w = rho(datum);
    auto [M, Lm] = detail::integer_scaled(mu.coeffs_f);
    auto [P, Lp] = detail::integer_scaled(rho_w.coeffs_f);

    std::map<detail::FactorKey, unsigned long> groups;
    bool violated = false;
    for_each_positive_root(datum.psi, [&](const RestrictedRoot& r) {
        if (violated) {
            return;
        }
        const std::int64_t n2 = r.norm2();
        const std::int64_t pm = detail::scaled_pairing(M, r);
        const std::int64_t dm = Lm * n2;
        if (pm < 0 || pm % dm != 0) {
            violated = true;
            return;
        }
        const std::int64_t mu_a = pm / dm;
        if (mu_a == 0 || is_null_root(datum, r)) {
            return;
        }
        // rho_alpha = pr / dr, reduced
        std::int64_t pr = detail::scaled_pairing(P, r);
        std::int64_t dr = Lp * n2;
        const std::int64_t g = std::gcd(pr, dr);
        pr /= g;
        dr /= g;
        if (pr <= 0) {
            throw std::logic_error("c_value: rho_alpha <= 0 at non-null root " + r.name());
        }
        const std::int64_t D = std::lcm(dr, std::int64_t{4});
        const std::int64_t R = pr * (D / dr);
        const std::int64_t X = (mult_half_of(datum, r) + 2) * (D / 4);
        const std::int64_t Y = (mult_half_of(datum, r) + 2 * mult_of(datum, r)) * (D / 4);
        ++groups[detail::FactorKey{mu_a, R, X, Y, D}];
    });
    if (violated) {
        auto root = first_non_integral_root(datum.psi, mu);
        throw NotDominantError(*root, lambda_alpha(mu, *root));
    }

    BigRational result(1);
    for (const auto& [key, count] : groups) {
        const BigRational f = detail::integer_factor(key);
        BigInteger num;
        BigInteger den;
        mpz_pow_ui(num.get_mpz_t(), f.get_num().get_mpz_t(), count);
        mpz_pow_ui(den.get_mpz_t(), f.get_den().get_mpz_t(), count);
        result *= BigRational(num, den);
    }
    return result;
}

namespace detail {

/// log 'c_alpha(l) = log(2^{-2l} Gamma(2l) / (Gamma(l + x) Gamma(l + y)))
inline double log_c_alpha(double l, double x, double y)
{
    if (!(l > 0.0) || !(l + y > 0.0)) {
        throw std::domain_error("c_gamma: Gamma pole at lambda_alpha = " + std::to_string(l));
    }
    return -2.0 * l * std::log(2.0) + std::lgamma(2.0 * l) - std::lgamma(l + x) - std::lgamma(l + y);
}

} // namespace detail

/// 'c(lambda) / 'c(rho) in floating point from the Gamma form of each
/// factor; logs are summed over roots and exponentiated once.
inline double c_gamma(const SpaceDatum& datum, const Weight& lam)
{
    if (static_cast<int>(lam.coeffs_f.size()) != datum.dim()) {
        throw std::invalid_argument("c_gamma: weight dimension mismatch");
    }
    const Weight rho_w = rho(datum);
    std::vector<double> lf;
    std::vector<double> rf;
    for (std::size_t i = 0; i < lam.coeffs_f.size(); ++i) {
        lf.push_back(to_double(lam.coeffs_f[i]));
        rf.push_back(to_double(rho_w.coeffs_f[i]));
    }
    auto pair = [](const std::vector<double>& v, const RestrictedRoot& r) {
        double s = v[static_cast<std::size_t>(r.hi)] * r.hi_coeff;
        if (r.lo_coeff != 0) {
            s += v[static_cast<std::size_t>(r.lo)] * r.lo_coeff;
        }
        return s / r.norm2();
    };
    double log_sum = 0.0;
    for_each_positive_root(datum.psi, [&](const RestrictedRoot& r) {
        if (is_null_root(datum, r)) {
            return;
        }
        const double x = 0.25 * (mult_half_of(datum, r) + 2);
        const double y = 0.25 * (mult_half_of(datum, r) + 2 * mult_of(datum, r));
        const double l = pair(lf, r);
        const double l0 = pair(rf, r);
        if (l == l0) {
            return;
        }
        log_sum += detail::log_c_alpha(l, x, y) - detail::log_c_alpha(l0, x, y);
    });
    return std::exp(log_sum);
}

/// c_gamma at lambda = mu + rho.
inline double c_gamma_shifted(const SpaceDatum& datum, const Weight& mu)
{
    const Weight rho_w = rho(datum);
    Weight lam;
    lam.coeffs_f = mu.coeffs_f;
    for (std::size_t i = 0; i < lam.coeffs_f.size() && i < rho_w.coeffs_f.size(); ++i) {
        lam.coeffs_f[i] += rho_w.coeffs_f[i];
    }
    return c_gamma(datum, lam);
}

/// <u_mu, e_mu> = sqrt(c(mu + rho)).
inline double overlap_highest_weight(const SpaceDatum& datum, const Weight& mu)
{
    return std::sqrt(to_double(c_value(datum, mu)));
}

namespace detail {

inline void check_propagates(const SpaceDatum& larger, const SpaceDatum& smaller)
{
    if (larger.family != smaller.family) {
        throw std::invalid_argument("overlap_q: data belong to different families");
    }
    if (larger.psi.label != smaller.psi.label || larger.rank() < smaller.rank()) {
        throw std::invalid_argument("overlap_q: " + larger.psi.name() + " does not propagate " + smaller.psi.name());
    }
    if (is_grassmannian(larger.family)) {
        if (larger.p != smaller.p && larger.q_or_n - larger.p != smaller.q_or_n - smaller.p) {
            throw std::invalid_argument("overlap_q: Grassmannians must share p or q - p");
        }
        if (larger.q_or_n < smaller.q_or_n) {
            throw std::invalid_argument("overlap_q: level of the first datum is below the second");
        }
    }
}

} // namespace detail

/// q(m, n)^2 = c_m(mu_m + rho_m) / c_n(mu_n + rho_n), with mu given by its
/// xi-coefficients (zero-padded at level m).
inline BigRational overlap_q_squared(const SpaceDatum& datum_m, const SpaceDatum& datum_n,
                                     std::span<const std::int64_t> coeffs)
{
    detail::check_propagates(datum_m, datum_n);
    const BigRational cm = c_value(datum_m, weight_from_xi(datum_m, coeffs));
    const BigRational cn = c_value(datum_n, weight_from_xi(datum_n, coeffs));
    return cm / cn;
}

/// <e_m, e_n> = sqrt(c_m / c_n), in (0, 1].
inline double overlap_q(const SpaceDatum& datum_m, const SpaceDatum& datum_n, std::span<const std::int64_t> coeffs)
{
    return std::sqrt(to_double(overlap_q_squared(datum_m, datum_n, coeffs)));
}

} // namespace sphelim
