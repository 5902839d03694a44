#include "sphelim/cfunc.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace sphelim;

namespace {

// 'c_alpha(rho + mu) / 'c_alpha(rho) for integral mu, from Gamma(z + n) = Gamma(z) (z)_n:
//   2^{-2mu} (2rho)_{2mu} / ((rho + x)_mu (rho + y)_mu)
BigRational pochhammer_oracle(std::int64_t mu, const BigRational& rho, const BigRational& x, const BigRational& y)
{
    BigRational num = 1;
    for (std::int64_t i = 0; i < 2 * mu; ++i) {
        num *= 2 * rho + i;
    }
    BigRational den = 1;
    for (std::int64_t i = 0; i < mu; ++i) {
        den *= (rho + x + i) * (rho + y + i) * 4;
    }
    return num / den;
}

// Multiplicity pair (m_alpha, m_{alpha/2}) from the orbit rules, using dense
// coefficients only.
std::pair<int, int> oracle_mults(const SpaceDatum& d, const std::vector<int>& c)
{
    const int nonzero = static_cast<int>(std::count_if(c.begin(), c.end(), [](int v) { return v != 0; }));
    const bool all_positive = std::all_of(c.begin(), c.end(), [](int v) { return v >= 0; });
    bool alpha1 = false;
    switch (d.psi.label) {
    case RootType::A: alpha1 = true; break;
    case RootType::B:
    case RootType::C: alpha1 = nonzero == 1; break;
    case RootType::D: alpha1 = all_positive; break;
    }
    return alpha1 ? std::pair{d.mult_alpha1, d.mult_half} : std::pair{d.mult_middle, 0};
}

BigRational dense_lambda(const std::vector<BigRational>& f, const std::vector<int>& a)
{
    BigRational num = 0;
    int norm = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += f[i] * a[i];
        norm += a[i] * a[i];
    }
    return num / norm;
}

BigRational oracle_c_value(const SpaceDatum& d, const Weight& mu)
{
    const Weight r = rho(d);
    BigRational out = 1;
    for (const auto& alpha : positive_nonmultipliable_roots(d)) {
        const auto c = alpha.coeffs();
        const auto [m, mh] = oracle_mults(d, c);
        if (m == 0 && mh == 0) {
            continue;
        }
        const BigRational mu_a = dense_lambda(mu.coeffs_f, c);
        out *= pochhammer_oracle(mu_a.get_num().get_si(), dense_lambda(r.coeffs_f, c), BigRational(mh + 2) / 4,
                                 BigRational(mh + 2 * m) / 4);
    }
    return out;
}

std::vector<SpaceDatum> all_data(int max_rank)
{
    std::vector<SpaceDatum> out;
    for (Family f : catalog_families()) {
        for (int r = 1; r <= max_rank; ++r) {
            if (family_info(f).type == RootType::D && r < 4) {
                continue;
            }
            out.push_back(build_at_rank(f, r));
        }
    }
    out.push_back(build_space(Family::RankOneReal, 1, 5));
    return out;
}

std::vector<std::int64_t> random_coeffs(std::mt19937_64& rng, int rank, int max)
{
    std::uniform_int_distribution<int> k(0, max);
    std::vector<std::int64_t> v(static_cast<std::size_t>(rank));
    for (auto& x : v) {
        x = k(rng);
    }
    return v;
}

} // namespace

TEST(CFactor, Examples)
{
    EXPECT_EQ(c_factor({0, make_rational(1, 4), make_rational(3, 4), make_rational(1, 4)}), 1);
    EXPECT_EQ(c_factor({1, make_rational(1, 4), make_rational(3, 4), make_rational(1, 4)}), make_rational(3, 8));
    EXPECT_EQ(c_factor({1, make_rational(1, 2), make_rational(1), make_rational(1, 2)}), make_rational(1, 3));
}

TEST(CFactor, MatchesPochhammerOracle)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> small(1, 12);
    for (int trial = 0; trial < 300; ++trial) {
        const std::int64_t mu = std::uniform_int_distribution<int>(0, 7)(rng);
        const BigRational rho = make_rational(small(rng), 4);
        const BigRational x = make_rational(small(rng), 4);
        const BigRational y = make_rational(small(rng) - 1, 4);
        EXPECT_EQ(c_factor({mu, rho, x, y}), pochhammer_oracle(mu, rho, x, y));
    }
}

TEST(CFactor, RejectsBadParams)
{
    EXPECT_THROW(c_factor({-1, make_rational(1), make_rational(1), make_rational(1)}), std::invalid_argument);
    EXPECT_THROW(c_factor({1, make_rational(0), make_rational(1), make_rational(1)}), std::invalid_argument);
}

TEST(CValue, RankOneExamples)
{
    const SpaceDatum d1 = build_space(Family::RankOneReal, 1, 2);
    const SpaceDatum d2 = build_space(Family::RankOneReal, 1, 3);
    EXPECT_EQ(c_value(d1, weight_from_xi(d1, {1})), make_rational(3, 8));
    EXPECT_EQ(c_value(d2, weight_from_xi(d2, {1})), make_rational(1, 3));
    EXPECT_EQ(c_value(d1, weight_from_xi(d1, {})), 1);
}

TEST(CValue, Normalization)
{
    for (const SpaceDatum& d : all_data(8)) {
        EXPECT_EQ(c_value(d, weight_from_xi(d, {})), 1) << family_info(d.family).key << " rank " << d.rank();
    }
}

TEST(CValue, MatchesRootByRootOracle)
{
    std::mt19937_64 rng(17);
    for (const SpaceDatum& d : all_data(5)) {
        for (int trial = 0; trial < 8; ++trial) {
            const Weight mu = weight_from_xi(d, random_coeffs(rng, d.rank(), 4));
            EXPECT_EQ(c_value(d, mu), oracle_c_value(d, mu)) << family_info(d.family).key << " rank " << d.rank();
        }
    }
}

TEST(CValue, ShuffledRootOrderIsIdentical)
{
    std::mt19937_64 rng(23);
    for (const SpaceDatum& d : all_data(5)) {
        const Weight mu = weight_from_xi(d, random_coeffs(rng, d.rank(), 3));
        const Weight r = rho(d);
        auto roots = positive_nonmultipliable_roots(d);
        std::shuffle(roots.begin(), roots.end(), rng);
        BigRational prod = 1;
        for (const auto& a : roots) {
            if (!is_null_root(d, a)) {
                prod *= c_factor(factor_params(d, a, mu, r));
            }
        }
        const BigRational v = c_value(d, mu);
        EXPECT_EQ(prod, v);
        EXPECT_EQ(prod.get_num().get_str(), v.get_num().get_str());
        EXPECT_EQ(prod.get_den().get_str(), v.get_den().get_str());
    }
}

TEST(CValue, BoundsAndMonotone)
{
    std::mt19937_64 rng(31);
    for (const SpaceDatum& d : all_data(6)) {
        for (int trial = 0; trial < 6; ++trial) {
            auto k = random_coeffs(rng, d.rank(), 6);
            const BigRational c = c_value(d, weight_from_xi(d, k));
            EXPECT_GT(c, 0);
            EXPECT_LE(c, 1);
            const auto j = std::uniform_int_distribution<std::size_t>(0, k.size() - 1)(rng);
            ++k[j];
            EXPECT_LE(c_value(d, weight_from_xi(d, k)), c);
        }
    }
}

TEST(CValue, RejectsNonDominantWithRoot)
{
    const SpaceDatum d = build_space(Family::SpDiag, 0, 3);
    const std::vector<std::int64_t> k{0, -1, 1};
    try {
        (void)c_value(d, weight_from_xi(d, k));
        FAIL() << "expected NotDominantError";
    } catch (const NotDominantError& e) {
        const auto expected = first_non_integral_root(d.psi, weight_from_xi(d, k));
        ASSERT_TRUE(expected.has_value());
        EXPECT_EQ(e.root(), *expected);
        EXPECT_NE(std::string(e.what()).find(expected->name()), std::string::npos);
    }
}

TEST(CGamma, RhoAndRankOne)
{
    for (const SpaceDatum& d : all_data(6)) {
        EXPECT_DOUBLE_EQ(c_gamma(d, rho(d)), 1.0);
    }
    const SpaceDatum d = build_space(Family::RankOneReal, 1, 2);
    EXPECT_NEAR(c_gamma_shifted(d, weight_from_xi(d, {1})), 0.375, 1e-12);
}

TEST(CGamma, AgreesWithExact)
{
    std::mt19937_64 rng(41);
    for (const SpaceDatum& d : all_data(6)) {
        for (int trial = 0; trial < 10; ++trial) {
            const Weight mu = weight_from_xi(d, random_coeffs(rng, d.rank(), 4));
            const double exact = to_double(c_value(d, mu));
            EXPECT_LE(std::abs(c_gamma_shifted(d, mu) - exact) / exact, 1e-9);
        }
    }
}

TEST(CValue, HighRankStaysExact)
{
    // rank-60 SU(n)/SO(n): xi_1 gives 1/(r + 1)
    const SpaceDatum d = build_at_rank(Family::SuSo, 60);
    EXPECT_EQ(c_value(d, weight_from_xi(d, {1})), make_rational(1, 61));
    const std::vector<std::int64_t> k{2, 0, 1, 3};
    const Weight mu = weight_from_xi(d, k);
    const double exact = to_double(c_value(d, mu));
    EXPECT_LE(std::abs(c_gamma_shifted(d, mu) - exact) / exact, 1e-9);
}

TEST(Overlap, HighestWeight)
{
    const SpaceDatum d = build_space(Family::RankOneReal, 1, 2);
    EXPECT_DOUBLE_EQ(overlap_highest_weight(d, weight_from_xi(d, {})), 1.0);
    EXPECT_NEAR(overlap_highest_weight(d, weight_from_xi(d, {1})), std::sqrt(3.0 / 8.0), 1e-15);
    EXPECT_NEAR(overlap_highest_weight(d, weight_from_xi(d, {1})), 0.612372, 1e-6);
    EXPECT_LT(overlap_highest_weight(d, weight_from_xi(d, {2})), overlap_highest_weight(d, weight_from_xi(d, {1})));
}

TEST(Overlap, InterLevel)
{
    const std::vector<std::int64_t> xi1{1};
    const SpaceDatum n2 = build_space(Family::RankOneReal, 1, 2);
    const SpaceDatum n3 = build_space(Family::RankOneReal, 1, 3);
    const SpaceDatum n4 = build_space(Family::RankOneReal, 1, 4);
    EXPECT_DOUBLE_EQ(overlap_q(n2, n2, xi1), 1.0);
    EXPECT_EQ(overlap_q_squared(n3, n2, xi1), make_rational(8, 9));
    EXPECT_NEAR(overlap_q(n3, n2, xi1), 0.942809, 1e-6);
    EXPECT_NEAR(overlap_q(n4, n2, xi1), overlap_q(n3, n2, xi1) * overlap_q(n4, n3, xi1), 1e-12);
    EXPECT_EQ(overlap_q_squared(n4, n2, xi1), overlap_q_squared(n3, n2, xi1) * overlap_q_squared(n4, n3, xi1));

    const SpaceDatum a3 = build_at_rank(Family::SuDiag, 3);
    const SpaceDatum a5 = build_at_rank(Family::SuDiag, 5);
    EXPECT_EQ(overlap_q_squared(a5, a3, xi1), make_rational(4, 6));
}

TEST(Overlap, PropagationMismatch)
{
    const std::vector<std::int64_t> xi1{1};
    EXPECT_THROW(overlap_q(build_at_rank(Family::SuSo, 3), build_at_rank(Family::SuSp, 2), xi1),
                 std::invalid_argument);
    EXPECT_THROW(overlap_q(build_at_rank(Family::SuSo, 2), build_at_rank(Family::SuSo, 3), xi1),
                 std::invalid_argument);
    EXPECT_THROW(overlap_q(build_space(Family::ComplexGrassmannian, 2, 3), build_space(Family::ComplexGrassmannian, 2, 5),
                           xi1),
                 std::invalid_argument);
}
