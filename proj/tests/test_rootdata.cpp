#include "sphelim/rootdata.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace sphelim;

namespace {

using Dense = std::vector<int>;

// Independent enumeration from the type patterns, dense coefficients only.
std::set<Dense> brute_force_roots(RootType t, int r)
{
    const int dim = t == RootType::A ? r + 1 : r;
    std::set<Dense> out;
    auto unit = [&](int j, int c) {
        Dense v(static_cast<std::size_t>(dim), 0);
        v[static_cast<std::size_t>(j)] = c;
        return v;
    };
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < j; ++i) {
            Dense minus = unit(j, 1);
            minus[static_cast<std::size_t>(i)] = -1;
            out.insert(minus);
            if (t != RootType::A) {
                Dense plus = unit(j, 1);
                plus[static_cast<std::size_t>(i)] = 1;
                out.insert(plus);
            }
        }
        if (t == RootType::B) {
            out.insert(unit(j, 1));
        }
        if (t == RootType::C) {
            out.insert(unit(j, 2));
        }
    }
    return out;
}

BigRational dense_lambda(const std::vector<BigRational>& f, const Dense& a)
{
    BigRational num = 0;
    int norm = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += f[i] * a[i];
        norm += a[i] * a[i];
    }
    return num / norm;
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

std::vector<BigRational> fv(std::initializer_list<long> num, long den = 1)
{
    std::vector<BigRational> v;
    for (long n : num) {
        v.push_back(make_rational(n, den));
    }
    return v;
}

} // namespace

TEST(BuildSpace, SuSoRank4)
{
    const SpaceDatum d = build_space(Family::SuSo, 0, 5);
    EXPECT_EQ(d.psi, (RootSystemType{RootType::A, 4}));
    EXPECT_EQ(d.mult_middle, 1);
    EXPECT_EQ(d.mult_alpha1, 1);
    EXPECT_EQ(d.mult_half, 0);
}

TEST(BuildSpace, ComplexGrassmannian)
{
    const SpaceDatum d = build_space(Family::ComplexGrassmannian, 2, 3);
    EXPECT_EQ(d.psi, (RootSystemType{RootType::C, 2}));
    EXPECT_EQ(d.mult_middle, 2);
    EXPECT_EQ(d.mult_alpha1, 1);
    EXPECT_EQ(d.mult_half, 2);
    EXPECT_EQ(d.d, 2);
}

TEST(BuildSpace, RealGrassmannianRankOne)
{
    const SpaceDatum d = build_space(Family::RealGrassmannian, 1, 2);
    EXPECT_EQ(d.psi, (RootSystemType{RootType::C, 1}));
    EXPECT_EQ(d.mult_alpha1, 0);
    EXPECT_EQ(d.mult_half, 1);
    EXPECT_EQ(build_space(Family::RankOneReal, 1, 2).mult_half, 1);
}

TEST(BuildSpace, GrassmannianColumns)
{
    for (Family f : {Family::RealGrassmannian, Family::ComplexGrassmannian, Family::QuaternionicGrassmannian}) {
        const int d = family_info(f).d;
        for (int p = 1; p <= 4; ++p) {
            for (int q = p; q <= p + 5; ++q) {
                const SpaceDatum s = build_space(f, p, q);
                EXPECT_EQ(s.mult_half, (q - p) * d);
                EXPECT_EQ(s.mult_alpha1, d - 1);
                EXPECT_EQ(s.mult_middle, d);
                EXPECT_EQ(s.rank(), p);
            }
        }
    }
}

TEST(BuildSpace, AandBInvariant)
{
    for (const SpaceDatum& d : all_data(8)) {
        EXPECT_EQ(d.a, BigRational(d.mult_alpha1 + BigRational(d.mult_half) / 2) / 2);
        EXPECT_EQ(d.b, BigRational(d.mult_middle) / 2);
    }
}

TEST(BuildSpace, Rejections)
{
    EXPECT_THROW(build_space(Family::ComplexGrassmannian, 3, 2), std::invalid_argument);
    EXPECT_THROW(build_space(Family::ComplexGrassmannian, 0, 2), std::invalid_argument);
    EXPECT_THROW(build_space(Family::SpinEvenDiag, 0, 3), std::invalid_argument);
    EXPECT_THROW(build_space(Family::SuSo, 0, 1), std::invalid_argument);
    EXPECT_THROW(build_space(Family::RankOneReal, 2, 5), std::invalid_argument);
    EXPECT_THROW(parse_family("row12"), std::invalid_argument);
}

TEST(Family, ParseKeysAndRows)
{
    EXPECT_EQ(parse_family("5"), Family::ComplexGrassmannian);
    EXPECT_EQ(parse_family("row9_2"), Family::SoUOdd);
    EXPECT_EQ(parse_family("rank1-real"), Family::RankOneReal);
    EXPECT_EQ(parse_family("8"), Family::RealGrassmannian);
    EXPECT_EQ(catalog_families().size(), 12u);
}

TEST(Roots, SmallExamples)
{
    const auto c1 = positive_nonmultipliable_roots(RootSystemType{RootType::C, 1});
    ASSERT_EQ(c1.size(), 1u);
    EXPECT_EQ(c1[0].coeffs(), (Dense{2}));

    const auto c2 = positive_nonmultipliable_roots(RootSystemType{RootType::C, 2});
    std::set<Dense> got;
    for (const auto& r : c2) {
        got.insert(r.coeffs());
    }
    EXPECT_EQ(got, (std::set<Dense>{{2, 0}, {0, 2}, {-1, 1}, {1, 1}}));
    EXPECT_EQ(positive_nonmultipliable_roots(RootSystemType{RootType::D, 4}).size(), 12u);
}

TEST(Roots, MatchBruteForceAndCounts)
{
    for (RootType t : {RootType::A, RootType::B, RootType::C, RootType::D}) {
        for (int r = (t == RootType::D ? 2 : 1); r <= 8; ++r) {
            const auto roots = positive_nonmultipliable_roots(RootSystemType{t, r});
            std::set<Dense> got;
            for (const auto& a : roots) {
                got.insert(a.coeffs());
            }
            EXPECT_EQ(got.size(), roots.size()) << "duplicates";
            EXPECT_EQ(got, brute_force_roots(t, r));
            const std::size_t expected = t == RootType::A   ? r * (r + 1) / 2
                                         : t == RootType::D ? r * (r - 1)
                                                            : r * r;
            EXPECT_EQ(roots.size(), expected);
        }
    }
}

TEST(Roots, OrbitLabels)
{
    for (RootType t : {RootType::A, RootType::B, RootType::C, RootType::D}) {
        for (const auto& a : positive_nonmultipliable_roots(RootSystemType{t, 4})) {
            const Dense c = a.coeffs();
            const int nonzero = static_cast<int>(std::count_if(c.begin(), c.end(), [](int v) { return v != 0; }));
            const bool all_positive = std::all_of(c.begin(), c.end(), [](int v) { return v >= 0; });
            bool alpha1 = false;
            switch (t) {
            case RootType::A: alpha1 = true; break;
            case RootType::B:
            case RootType::C: alpha1 = nonzero == 1; break;
            case RootType::D: alpha1 = all_positive; break;
            }
            EXPECT_EQ(a.orbit == RootOrbit::Alpha1, alpha1) << a.name();
        }
    }
}

TEST(Weights, FundamentalExamples)
{
    const auto c2 = fundamental_weights(RootSystemType{RootType::C, 2});
    EXPECT_EQ(c2[0].coeffs_f, fv({2, 2}));
    EXPECT_EQ(c2[1].coeffs_f, fv({0, 2}));
    const auto b2 = fundamental_weights(RootSystemType{RootType::B, 2});
    EXPECT_EQ(b2[0].coeffs_f, fv({1, 1}));
    EXPECT_EQ(b2[1].coeffs_f, fv({0, 2}));
}

TEST(Weights, DualityAllData)
{
    for (const SpaceDatum& d : all_data(8)) {
        const auto xi = fundamental_weights(d);
        const auto simple = simple_roots(d.psi);
        ASSERT_EQ(xi.size(), simple.size());
        for (std::size_t i = 0; i < xi.size(); ++i) {
            for (std::size_t j = 0; j < simple.size(); ++j) {
                EXPECT_EQ(lambda_alpha(xi[i], simple[j]), BigRational(i == j ? 1 : 0))
                    << family_info(d.family).key << " rank " << d.rank();
            }
            EXPECT_TRUE(in_lambda_plus(d, xi[i]));
        }
    }
}

TEST(Rho, Examples)
{
    const SpaceDatum g = build_space(Family::RealGrassmannian, 2, 3);
    EXPECT_EQ(rho(g).coeffs_f, fv({1, 3}, 2));

    const SpaceDatum su = build_space(Family::SuDiag, 0, 5);
    EXPECT_EQ(rho(su).coeffs_f, fv({0, 2, 4, 6, 8}));

    const SpaceDatum c1 = build_space(Family::RealGrassmannian, 1, 2);
    const Weight r = rho(c1);
    EXPECT_EQ(r.coeffs_f, fv({1}, 2));
    EXPECT_EQ(lambda_alpha(r, positive_nonmultipliable_roots(c1)[0]), make_rational(1, 4));
}

TEST(Rho, HalfSumMatchesClosedForms)
{
    for (const SpaceDatum& d : all_data(8)) {
        const int r = d.rank();
        const auto& a = d.a;
        const auto& b = d.b;
        const int dim = d.dim();
        const Weight got = rho(d);

        // general form a xi_1 + b sum_{j>=2} xi_j
        std::vector<BigRational> general(static_cast<std::size_t>(dim), BigRational(0));
        const auto xi = fundamental_weights(d);
        for (int j = 0; j < r; ++j) {
            const BigRational c = j == 0 ? a : b;
            for (int i = 0; i < dim; ++i) {
                general[static_cast<std::size_t>(i)] += c * xi[static_cast<std::size_t>(j)].coeffs_f[static_cast<std::size_t>(i)];
            }
        }
        EXPECT_EQ(got.coeffs_f, general) << family_info(d.family).key << " rank " << r;

        // per-type closed forms (B and D occur only with m = 2)
        std::vector<BigRational> closed(static_cast<std::size_t>(dim));
        switch (d.psi.label) {
        case RootType::A:
            for (int j = 1; j <= dim; ++j) closed[static_cast<std::size_t>(j - 1)] = 2 * a * (j - 1);
            break;
        case RootType::C:
            for (int j = 1; j <= dim; ++j) closed[static_cast<std::size_t>(j - 1)] = 2 * (a + b * (j - 1));
            break;
        case RootType::B:
            for (int j = 1; j <= dim; ++j) closed[static_cast<std::size_t>(j - 1)] = BigRational(2 * j - 1);
            break;
        case RootType::D:
            for (int j = 1; j <= dim; ++j) closed[static_cast<std::size_t>(j - 1)] = BigRational(2 * (j - 1));
            break;
        }
        EXPECT_EQ(got.coeffs_f, closed) << family_info(d.family).key << " rank " << r;
    }
}

TEST(Rho, BruteForceHalfSum)
{
    // Sum over dense roots, adding alpha/2 with m_{alpha/2} on the alpha_1 orbit.
    for (const SpaceDatum& d : all_data(6)) {
        std::vector<BigRational> sum(static_cast<std::size_t>(d.dim()), BigRational(0));
        for (const auto& alpha : positive_nonmultipliable_roots(d)) {
            const Dense c = alpha.coeffs();
            const BigRational w = BigRational(mult_of(d, alpha)) + BigRational(mult_half_of(d, alpha)) / 2;
            for (std::size_t i = 0; i < c.size(); ++i) {
                sum[i] += w * c[i] / 2;
            }
        }
        if (d.psi.label == RootType::A) {
            const BigRational shift = sum[0];
            for (auto& v : sum) v -= shift;
        }
        EXPECT_EQ(rho(d).coeffs_f, sum);
    }
}

TEST(Lambda, ZeroAndMismatch)
{
    const SpaceDatum d = build_space(Family::SpDiag, 0, 3);
    const Weight zero = weight_from_xi(d, {});
    for (const auto& a : positive_nonmultipliable_roots(d)) {
        EXPECT_EQ(lambda_alpha(zero, a), 0);
    }
    const auto wrong = fv({1, 2});
    EXPECT_THROW(lambda_alpha(std::span<const BigRational>(wrong), positive_nonmultipliable_roots(d)[0]),
                 std::invalid_argument);
}

TEST(Lambda, ScaleInvariance)
{
    // lambda_alpha under <u,v>' = s <u,v>: numerator and denominator both scale by s.
    const SpaceDatum d = build_space(Family::SoUOdd, 0, 4);
    const Weight mu = weight_from_xi(d, {1, 0, 2, 1});
    for (const BigRational& s : {make_rational(3, 7), make_rational(5), make_rational(1, 100)}) {
        for (const auto& a : positive_nonmultipliable_roots(d)) {
            const Dense c = a.coeffs();
            BigRational num = 0;
            BigRational den = 0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                num += s * mu.coeffs_f[i] * c[i];
                den += s * c[i] * c[i];
            }
            EXPECT_EQ(num / den, lambda_alpha(mu, a));
        }
    }
}

TEST(LambdaPlus, Examples)
{
    const RootSystemType a2{RootType::A, 2};
    EXPECT_FALSE(in_lambda_plus(a2, weight_from_f(a2, fv({0, 1, 3}))));
    EXPECT_TRUE(in_lambda_plus(a2, weight_from_f(a2, fv({0, 2, 4}))));
    const SpaceDatum d = build_space(Family::SpDiag, 0, 3);
    const std::vector<std::int64_t> neg{1, -1, 0};
    EXPECT_FALSE(in_lambda_plus(d, weight_from_xi(d, neg)));
    const auto bad = first_non_integral_root(d.psi, weight_from_xi(d, neg));
    ASSERT_TRUE(bad.has_value());
}

TEST(LambdaPlus, MatchesBruteForceAndSemilattice)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coord(-3, 6);
    for (const SpaceDatum& d : all_data(4)) {
        const auto roots = brute_force_roots(d.psi.label, d.rank());
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<BigRational> f(static_cast<std::size_t>(d.dim()));
            for (auto& v : f) {
                v = coord(rng);
            }
            if (d.psi.label == RootType::A) {
                f[0] = 0;
            }
            bool expected = true;
            for (const auto& a : roots) {
                expected = expected && is_nonnegative_integer(dense_lambda(f, a));
            }
            EXPECT_EQ(in_lambda_plus(d.psi, weight_from_f(d.psi, f)), expected);
        }
        std::uniform_int_distribution<int> k(0, 4);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::int64_t> k1(static_cast<std::size_t>(d.rank())), k2(k1.size()), ks(k1.size());
            for (std::size_t i = 0; i < k1.size(); ++i) {
                k1[i] = k(rng);
                k2[i] = k(rng);
                ks[i] = k1[i] + k2[i];
            }
            const Weight w1 = weight_from_xi(d, k1);
            const Weight w2 = weight_from_xi(d, k2);
            std::vector<BigRational> sum(w1.coeffs_f.size());
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] = w1.coeffs_f[i] + w2.coeffs_f[i];
            }
            const Weight ws = weight_from_f(d.psi, sum);
            EXPECT_TRUE(in_lambda_plus(d, ws));
            EXPECT_EQ(ws, weight_from_xi(d, ks));
        }
    }
}

TEST(LambdaPlus, DiagnosticIsLexicographicallyFirst)
{
    const RootSystemType c3{RootType::C, 3};
    const Weight w = weight_from_f(c3, fv({1, 1, 2}, 2));
    const auto bad = first_non_integral_root(c3, w);
    ASSERT_TRUE(bad.has_value());
    Dense best;
    bool first = true;
    for (const auto& a : brute_force_roots(RootType::C, 3)) {
        if (!is_nonnegative_integer(dense_lambda(w.coeffs_f, a)) && (first || a < best)) {
            best = a;
            first = false;
        }
    }
    EXPECT_EQ(bad->coeffs(), best);
}
