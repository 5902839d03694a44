#pragma once

// Classical compact symmetric spaces: restricted root systems, root
// multiplicities, class-1 fundamental weights, rho, and the Cartan-Helgason
// lattice test.
//
// Coordinates: weights and roots are written in the basis f_1, ..., f_N with
// N = rank + 1 for type A and N = rank otherwise. Index 0 of every vector is
// f_1 (the alpha_1 end of the Dynkin diagram), so propagating to a larger
// space only appends coordinates. Type-A weights are normalized so that the
// f_1 coordinate vanishes ("(m_r, ..., m_1, 0)"); all roots are orthogonal to
// (1, ..., 1), so this changes no pairing.

#include "sphelim/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sphelim {

enum class RootType { A, B, C, D };

inline char to_char(RootType t)
{
    switch (t) {
    case RootType::A: return 'A';
    case RootType::B: return 'B';
    case RootType::C: return 'C';
    case RootType::D: return 'D';
    }
    return '?';
}

inline RootType parse_root_type(std::string_view s)
{
    if (s == "A") return RootType::A;
    if (s == "B") return RootType::B;
    if (s == "C") return RootType::C;
    if (s == "D") return RootType::D;
    throw std::invalid_argument("unknown root system type '" + std::string{s} + "'");
}

struct RootSystemType {
    RootType label = RootType::A;
    int rank = 1;

    /// Number of f-basis coordinates.
    int dim() const { return label == RootType::A ? rank + 1 : rank; }

    std::string name() const { return std::string(1, to_char(label)) + "_" + std::to_string(rank); }

    friend bool operator==(const RootSystemType&, const RootSystemType&) = default;
};

/// Rows of the classical catalog. RankOneReal is row 8 with p = 1.
enum class Family {
    SuDiag,                   // 1  SU(n)xSU(n) / diag
    SpinOddDiag,              // 2  Spin(2n+1)xSpin(2n+1) / diag
    SpinEvenDiag,             // 3  Spin(2n)xSpin(2n) / diag
    SpDiag,                   // 4  Sp(n)xSp(n) / diag
    ComplexGrassmannian,      // 5  SU(p+q) / S(U(p)xU(q))
    SuSo,                     // 6  SU(n) / SO(n)
    SuSp,                     // 7  SU(2n) / Sp(n)
    RealGrassmannian,         // 8  SO(p+q) / SO(p)xSO(q), viewed as C_p
    SoUEven,                  // 9_1 SO(4n) / U(2n)
    SoUOdd,                   // 9_2 SO(2(2n+1)) / U(2n+1)
    QuaternionicGrassmannian, // 10 Sp(p+q) / Sp(p)xSp(q)
    SpU,                      // 11 Sp(n) / U(n)
    RankOneReal,              // alias: row 8 with p = 1 (spheres)
};

struct FamilyInfo {
    Family family;
    std::string_view key;
    std::string_view row;
    std::string_view group;
    std::string_view subgroup;
    RootType type;
    std::string_view rank_formula;
    std::string_view mult_middle;
    std::string_view mult_alpha1;
    std::string_view mult_half;
    bool grassmannian;
    int d; // dim_R F for Grassmannians, 0 otherwise
};

inline const std::array<FamilyInfo, 13>& family_table()
{
    static const std::array<FamilyInfo, 13> table{{
        {Family::SuDiag, "su-diag", "1", "SU(n)xSU(n)", "diag SU(n)", RootType::A, "n-1", "2", "2", "0", false, 0},
        {Family::SpinOddDiag, "spin-odd-diag", "2", "Spin(2n+1)xSpin(2n+1)", "diag Spin(2n+1)", RootType::B, "n", "2", "2", "0", false, 0},
        {Family::SpinEvenDiag, "spin-even-diag", "3", "Spin(2n)xSpin(2n)", "diag Spin(2n)", RootType::D, "n", "2", "2", "0", false, 0},
        {Family::SpDiag, "sp-diag", "4", "Sp(n)xSp(n)", "diag Sp(n)", RootType::C, "n", "2", "2", "0", false, 0},
        {Family::ComplexGrassmannian, "complex-grassmannian", "5", "SU(p+q)", "S(U(p)xU(q))", RootType::C, "p", "2", "1", "2(q-p)", true, 2},
        {Family::SuSo, "su-so", "6", "SU(n)", "SO(n)", RootType::A, "n-1", "1", "1", "0", false, 0},
        {Family::SuSp, "su-sp", "7", "SU(2n)", "Sp(n)", RootType::A, "n-1", "4", "4", "0", false, 0},
        {Family::RealGrassmannian, "real-grassmannian", "8", "SO(p+q)", "SO(p)xSO(q)", RootType::C, "p", "1", "0", "q-p", true, 1},
        {Family::SoUEven, "so-u-even", "9_1", "SO(4n)", "U(2n)", RootType::C, "n", "4", "1", "0", false, 0},
        {Family::SoUOdd, "so-u-odd", "9_2", "SO(2(2n+1))", "U(2n+1)", RootType::C, "n", "4", "1", "4", false, 0},
        {Family::QuaternionicGrassmannian, "quaternionic-grassmannian", "10", "Sp(p+q)", "Sp(p)xSp(q)", RootType::C, "p", "4", "3", "4(q-p)", true, 4},
        {Family::SpU, "sp-u", "11", "Sp(n)", "U(n)", RootType::C, "n", "1", "0", "0", false, 0},
        {Family::RankOneReal, "rank1-real", "8", "SO(q+1)", "SO(q)", RootType::C, "1", "1", "0", "q-1", true, 1},
    }};
    return table;
}

inline const FamilyInfo& family_info(Family f)
{
    for (const auto& info : family_table()) {
        if (info.family == f) {
            return info;
        }
    }
    throw std::invalid_argument("unknown family");
}

/// Accepts the family key ("complex-grassmannian"), the row label ("5",
/// "9_1"), or "row5".
inline Family parse_family(std::string_view s)
{
    std::string_view t = s;
    if (t.starts_with("row")) {
        t.remove_prefix(3);
    }
    for (const auto& info : family_table()) {
        if (info.key == s || (info.family != Family::RankOneReal && info.row == t)) {
            return info.family;
        }
    }
    throw std::invalid_argument("unknown family '" + std::string{s} + "'");
}

/// The catalog proper (rank-one alias excluded).
inline std::vector<Family> catalog_families()
{
    std::vector<Family> out;
    for (const auto& info : family_table()) {
        if (info.family != Family::RankOneReal) {
            out.push_back(info.family);
        }
    }
    return out;
}

inline bool is_grassmannian(Family f) { return family_info(f).grassmannian; }

struct SpaceDatum {
    Family family = Family::SuDiag;
    int p = 0;      // Grassmannians only
    int q_or_n = 0; // q for Grassmannians, n otherwise
    RootSystemType psi;
    int mult_middle = 0; // m_{alpha_j}, j > 1
    int mult_alpha1 = 0; // m_{alpha_1}
    int mult_half = 0;   // m_{alpha_1 / 2}
    BigRational a;
    BigRational b;
    std::optional<int> d;

    int rank() const { return psi.rank; }
    int dim() const { return psi.dim(); }

    friend bool operator==(const SpaceDatum&, const SpaceDatum&) = default;
};

namespace detail {

inline int min_rank(RootType t)
{
    // B_1 and C_1, C_2 are accepted as root-pattern generators; D keeps the
    // catalog bound.
    return t == RootType::D ? 4 : 1;
}

} // namespace detail

/// For Grassmannian rows (5, 8, 10, rank1-real) `p` and `q_or_n = q` are used;
/// the other rows take the group index `q_or_n = n` and ignore `p`.
inline SpaceDatum build_space(Family family, int p, int q_or_n)
{
    const FamilyInfo& info = family_info(family);
    SpaceDatum s;
    s.family = family;
    s.q_or_n = q_or_n;

    auto set_mult = [&](int middle, int alpha1, int half) {
        s.mult_middle = middle;
        s.mult_alpha1 = alpha1;
        s.mult_half = half;
    };

    int rank = 0;
    if (info.grassmannian) {
        if (family == Family::RankOneReal && p != 1) {
            throw std::invalid_argument("rank1-real requires p = 1, got p = " + std::to_string(p));
        }
        if (p < 1) {
            throw std::invalid_argument("Grassmannian requires p >= 1, got p = " + std::to_string(p));
        }
        if (q_or_n < p) {
            throw std::invalid_argument("Grassmannian requires q >= p, got p = " + std::to_string(p) +
                                        ", q = " + std::to_string(q_or_n));
        }
        s.p = p;
        rank = p;
        const int d = info.d;
        s.d = d;
        set_mult(d, d - 1, (q_or_n - p) * d);
    } else {
        const int n = q_or_n;
        switch (family) {
        case Family::SuDiag: rank = n - 1; set_mult(2, 2, 0); break;
        case Family::SpinOddDiag: rank = n; set_mult(2, 2, 0); break;
        case Family::SpinEvenDiag: rank = n; set_mult(2, 2, 0); break;
        case Family::SpDiag: rank = n; set_mult(2, 2, 0); break;
        case Family::SuSo: rank = n - 1; set_mult(1, 1, 0); break;
        case Family::SuSp: rank = n - 1; set_mult(4, 4, 0); break;
        case Family::SoUEven: rank = n; set_mult(4, 1, 0); break;
        case Family::SoUOdd: rank = n; set_mult(4, 1, 4); break;
        case Family::SpU: rank = n; set_mult(1, 0, 0); break;
        default: throw std::invalid_argument("unknown family");
        }
    }
    s.psi = RootSystemType{info.type, rank};
    if (rank < detail::min_rank(info.type)) {
        throw std::invalid_argument("row " + std::string{info.row} + ": rank " + std::to_string(rank) +
                                    " below the minimum " + std::to_string(detail::min_rank(info.type)) +
                                    " for type " + std::string(1, to_char(info.type)));
    }
    s.a = BigRational(2 * s.mult_alpha1 + s.mult_half, 4);
    s.a.canonicalize();
    s.b = BigRational(s.mult_middle, 2);
    s.b.canonicalize();
    return s;
}

/// Builds the datum of `family` whose rank is `rank`. Grassmannians use
/// p = rank, q = p + q_minus_p.
inline SpaceDatum build_at_rank(Family family, int rank, int q_minus_p = 1)
{
    switch (family) {
    case Family::SuDiag:
    case Family::SuSo:
    case Family::SuSp:
        return build_space(family, 0, rank + 1);
    case Family::ComplexGrassmannian:
    case Family::RealGrassmannian:
    case Family::QuaternionicGrassmannian:
        return build_space(family, rank, rank + q_minus_p);
    case Family::RankOneReal:
        if (rank != 1) {
            throw std::invalid_argument("rank1-real has rank 1");
        }
        return build_space(family, 1, 1 + q_minus_p);
    default:
        return build_space(family, 0, rank);
    }
}

enum class RootOrbit { Middle, Alpha1 };

inline std::string_view to_string(RootOrbit o) { return o == RootOrbit::Middle ? "middle" : "alpha1_orbit"; }

/// A positive nonmultipliable root hi_coeff * f_{hi+1} + lo_coeff * f_{lo+1}
/// (0-based indices; lo_coeff == 0 for single-coordinate roots).
struct RestrictedRoot {
    int dim = 0;
    int hi = 0;
    int hi_coeff = 0;
    int lo = 0;
    int lo_coeff = 0;
    RootOrbit orbit = RootOrbit::Middle;

    std::vector<int> coeffs() const
    {
        std::vector<int> c(static_cast<std::size_t>(dim), 0);
        c[static_cast<std::size_t>(hi)] += hi_coeff;
        if (lo_coeff != 0) {
            c[static_cast<std::size_t>(lo)] += lo_coeff;
        }
        return c;
    }

    int norm2() const { return hi_coeff * hi_coeff + lo_coeff * lo_coeff; }

    std::string name() const
    {
        std::ostringstream os;
        if (hi_coeff != 1) {
            os << hi_coeff;
        }
        os << "f_" << hi + 1;
        if (lo_coeff != 0) {
            os << (lo_coeff > 0 ? "+" : "-");
            if (std::abs(lo_coeff) != 1) {
                os << std::abs(lo_coeff);
            }
            os << "f_" << lo + 1;
        }
        return os.str();
    }

    friend bool operator==(const RestrictedRoot&, const RestrictedRoot&) = default;
};

namespace detail {

inline RestrictedRoot single_root(int dim, int j, int coeff, RootOrbit orbit)
{
    return RestrictedRoot{dim, j, coeff, 0, 0, orbit};
}

inline RestrictedRoot pair_root(int dim, int j, int i, int sign, RootOrbit orbit)
{
    return RestrictedRoot{dim, j, 1, i, sign, orbit};
}

} // namespace detail

/// Calls fn(root) for every alpha in Sigma_0^+ without materializing the list.
template <class Fn>
void for_each_positive_root(const RootSystemType& psi, Fn&& fn)
{
    const int dim = psi.dim();
    using detail::pair_root;
    using detail::single_root;
    switch (psi.label) {
    case RootType::A:
        // Every root of A_r is Weyl-conjugate to alpha_1.
        for (int j = 1; j < dim; ++j) {
            for (int i = 0; i < j; ++i) {
                fn(pair_root(dim, j, i, -1, RootOrbit::Alpha1));
            }
        }
        break;
    case RootType::B:
    case RootType::C: {
        const int c = psi.label == RootType::B ? 1 : 2;
        for (int j = 0; j < dim; ++j) {
            fn(single_root(dim, j, c, RootOrbit::Alpha1));
            for (int i = 0; i < j; ++i) {
                fn(pair_root(dim, j, i, -1, RootOrbit::Middle));
                fn(pair_root(dim, j, i, +1, RootOrbit::Middle));
            }
        }
        break;
    }
    case RootType::D:
        for (int j = 1; j < dim; ++j) {
            for (int i = 0; i < j; ++i) {
                fn(pair_root(dim, j, i, -1, RootOrbit::Middle));
                fn(pair_root(dim, j, i, +1, RootOrbit::Alpha1));
            }
        }
        break;
    }
}

inline std::vector<RestrictedRoot> positive_nonmultipliable_roots(const RootSystemType& psi)
{
    std::vector<RestrictedRoot> roots;
    for_each_positive_root(psi, [&](const RestrictedRoot& r) { roots.push_back(r); });
    return roots;
}

inline std::vector<RestrictedRoot> positive_nonmultipliable_roots(const SpaceDatum& datum)
{
    return positive_nonmultipliable_roots(datum.psi);
}

/// Simple roots alpha_1, ..., alpha_r in the numbering where alpha_1 sits at
/// the fixed end of the diagram.
inline std::vector<RestrictedRoot> simple_roots(const RootSystemType& psi)
{
    const int dim = psi.dim();
    std::vector<RestrictedRoot> out;
    out.reserve(static_cast<std::size_t>(psi.rank));
    using detail::pair_root;
    switch (psi.label) {
    case RootType::A:
        for (int j = 0; j < psi.rank; ++j) {
            out.push_back(pair_root(dim, j + 1, j, -1, RootOrbit::Alpha1));
        }
        break;
    case RootType::B:
    case RootType::C:
        out.push_back(detail::single_root(dim, 0, psi.label == RootType::B ? 1 : 2, RootOrbit::Alpha1));
        for (int j = 1; j < psi.rank; ++j) {
            out.push_back(pair_root(dim, j, j - 1, -1, RootOrbit::Middle));
        }
        break;
    case RootType::D:
        out.push_back(pair_root(dim, 1, 0, +1, RootOrbit::Alpha1));
        for (int j = 1; j < psi.rank; ++j) {
            out.push_back(pair_root(dim, j, j - 1, -1, RootOrbit::Middle));
        }
        break;
    }
    return out;
}

inline int mult_of(const SpaceDatum& s, const RestrictedRoot& r)
{
    return r.orbit == RootOrbit::Alpha1 ? s.mult_alpha1 : s.mult_middle;
}

inline int mult_half_of(const SpaceDatum& s, const RestrictedRoot& r)
{
    return r.orbit == RootOrbit::Alpha1 ? s.mult_half : 0;
}

/// A root with m_alpha = m_{alpha/2} = 0 is not an actual root of the space
/// (row 11 long roots, row 8 long roots when q = p); its c-factor is 1.
inline bool is_null_root(const SpaceDatum& s, const RestrictedRoot& r)
{
    return mult_of(s, r) == 0 && mult_half_of(s, r) == 0;
}

/// A dominant weight. coeffs_f is authoritative; coeffs_xi holds the
/// coordinates over the class-1 fundamental weights and is empty when the
/// f-vector is not an integral combination of them.
struct Weight {
    std::vector<std::int64_t> coeffs_xi;
    std::vector<BigRational> coeffs_f;

    friend bool operator==(const Weight&, const Weight&) = default;
};

inline BigRational pairing(std::span<const BigRational> f, const RestrictedRoot& alpha)
{
    BigRational v = f[static_cast<std::size_t>(alpha.hi)] * alpha.hi_coeff;
    if (alpha.lo_coeff != 0) {
        v += f[static_cast<std::size_t>(alpha.lo)] * alpha.lo_coeff;
    }
    return v;
}

/// lambda_alpha = <lambda, alpha> / <alpha, alpha> for the Euclidean pairing.
inline BigRational lambda_alpha(std::span<const BigRational> f, const RestrictedRoot& alpha)
{
    if (static_cast<int>(f.size()) != alpha.dim) {
        throw std::invalid_argument("lambda_alpha: weight has " + std::to_string(f.size()) +
                                    " coordinates, root " + alpha.name() + " has " + std::to_string(alpha.dim));
    }
    BigRational v = pairing(f, alpha);
    v /= alpha.norm2();
    return v;
}

inline BigRational lambda_alpha(const Weight& lam, const RestrictedRoot& alpha)
{
    return lambda_alpha(std::span<const BigRational>(lam.coeffs_f), alpha);
}

namespace detail {

inline void normalize_type_a(const RootSystemType& psi, std::vector<BigRational>& f)
{
    if (psi.label != RootType::A || f.empty() || sgn(f.front()) == 0) {
        return;
    }
    const BigRational shift = f.front();
    for (auto& c : f) {
        c -= shift;
    }
}

inline std::vector<BigRational> fundamental_weight_f(const RootSystemType& psi, int j)
{
    // j is 1-based
    const int dim = psi.dim();
    std::vector<BigRational> f(static_cast<std::size_t>(dim), BigRational(0));
    auto fill = [&](int from_1based, int value) {
        for (int i = from_1based; i <= dim; ++i) {
            f[static_cast<std::size_t>(i - 1)] = value;
        }
    };
    switch (psi.label) {
    case RootType::A: fill(j + 1, 2); break;
    case RootType::B:
        if (j == 1) fill(1, 1); else fill(j, 2);
        break;
    case RootType::C: fill(j, 2); break;
    case RootType::D:
        if (j == 1) {
            fill(1, 1);
        } else if (j == 2) {
            fill(2, 1);
            f[0] = -1;
        } else {
            fill(j, 2);
        }
        break;
    }
    return f;
}

} // namespace detail

/// Class-1 fundamental weights xi_1, ..., xi_r.
inline std::vector<Weight> fundamental_weights(const RootSystemType& psi)
{
    std::vector<Weight> out;
    out.reserve(static_cast<std::size_t>(psi.rank));
    for (int j = 1; j <= psi.rank; ++j) {
        Weight w;
        w.coeffs_xi.assign(static_cast<std::size_t>(psi.rank), 0);
        w.coeffs_xi[static_cast<std::size_t>(j - 1)] = 1;
        w.coeffs_f = detail::fundamental_weight_f(psi, j);
        out.push_back(std::move(w));
    }
    return out;
}

inline std::vector<Weight> fundamental_weights(const SpaceDatum& datum) { return fundamental_weights(datum.psi); }

/// mu = sum_j k_j xi_j. Shorter coefficient vectors are zero-padded; entries
/// may be negative (such weights simply fail the lattice test).
inline Weight weight_from_xi(const RootSystemType& psi, std::span<const std::int64_t> k)
{
    if (static_cast<int>(k.size()) > psi.rank) {
        throw std::invalid_argument("weight has " + std::to_string(k.size()) + " xi-coefficients, rank is " +
                                    std::to_string(psi.rank));
    }
    Weight w;
    w.coeffs_xi.assign(static_cast<std::size_t>(psi.rank), 0);
    std::copy(k.begin(), k.end(), w.coeffs_xi.begin());
    w.coeffs_f.assign(static_cast<std::size_t>(psi.dim()), BigRational(0));
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j] == 0) {
            continue;
        }
        const auto xi = detail::fundamental_weight_f(psi, static_cast<int>(j) + 1);
        const BigRational kj(static_cast<long>(k[j]));
        for (std::size_t i = 0; i < xi.size(); ++i) {
            w.coeffs_f[i] += kj * xi[i];
        }
    }
    detail::normalize_type_a(psi, w.coeffs_f);
    return w;
}

inline Weight weight_from_xi(const SpaceDatum& datum, std::span<const std::int64_t> k)
{
    return weight_from_xi(datum.psi, k);
}

inline Weight weight_from_xi(const SpaceDatum& datum, std::initializer_list<std::int64_t> k)
{
    return weight_from_xi(datum.psi, std::span<const std::int64_t>(k.begin(), k.size()));
}

/// Wraps an f-basis vector; xi-coordinates are recovered by pairing with the
/// simple roots when they are integral.
inline Weight weight_from_f(const RootSystemType& psi, std::vector<BigRational> f)
{
    if (static_cast<int>(f.size()) != psi.dim()) {
        throw std::invalid_argument("weight_from_f: expected " + std::to_string(psi.dim()) + " coordinates, got " +
                                    std::to_string(f.size()));
    }
    detail::normalize_type_a(psi, f);
    Weight w;
    w.coeffs_f = std::move(f);
    std::vector<std::int64_t> xi;
    for (const auto& alpha : simple_roots(psi)) {
        const BigRational v = lambda_alpha(w, alpha);
        if (!is_integer(v) || !v.get_num().fits_slong_p()) {
            return w;
        }
        xi.push_back(v.get_num().get_si());
    }
    w.coeffs_xi = std::move(xi);
    return w;
}

/// Half the multiplicity-weighted sum of all positive restricted roots,
/// counting alpha/2 with m_{alpha/2}.
inline Weight rho(const SpaceDatum& datum)
{
    // accumulated in units of 1/4
    std::vector<std::int64_t> quarter(static_cast<std::size_t>(datum.dim()), 0);
    for_each_positive_root(datum.psi, [&](const RestrictedRoot& r) {
        // (m_alpha + m_{alpha/2}/2) / 2 times alpha
        const std::int64_t w = 2 * mult_of(datum, r) + mult_half_of(datum, r);
        quarter[static_cast<std::size_t>(r.hi)] += w * r.hi_coeff;
        if (r.lo_coeff != 0) {
            quarter[static_cast<std::size_t>(r.lo)] += w * r.lo_coeff;
        }
    });
    std::vector<BigRational> f;
    f.reserve(quarter.size());
    for (auto q : quarter) {
        f.push_back(make_rational(q, 4));
    }
    return weight_from_f(datum.psi, std::move(f));
}

/// The first Sigma_0^+ root (lexicographic on f-basis coefficients) at which
/// lam is not a nonnegative integer, if any.
inline std::optional<RestrictedRoot> first_non_integral_root(const RootSystemType& psi, const Weight& lam)
{
    std::optional<RestrictedRoot> worst;
    std::vector<int> worst_coeffs;
    for_each_positive_root(psi, [&](const RestrictedRoot& r) {
        if (is_nonnegative_integer(lambda_alpha(lam, r))) {
            return;
        }
        auto c = r.coeffs();
        if (!worst || c < worst_coeffs) {
            worst = r;
            worst_coeffs = std::move(c);
        }
    });
    return worst;
}

/// Cartan-Helgason test: lambda_alpha in Z^+ for every alpha in Sigma_0^+.
inline bool in_lambda_plus(const RootSystemType& psi, const Weight& lam)
{
    if (static_cast<int>(lam.coeffs_f.size()) != psi.dim()) {
        return false;
    }
    bool ok = true;
    for_each_positive_root(psi, [&](const RestrictedRoot& r) {
        if (ok && !is_nonnegative_integer(lambda_alpha(lam, r))) {
            ok = false;
        }
    });
    return ok;
}

inline bool in_lambda_plus(const SpaceDatum& datum, const Weight& lam) { return in_lambda_plus(datum.psi, lam); }

} // namespace sphelim
