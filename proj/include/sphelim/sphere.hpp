#pragma once

// Rank-one checks on S^n = SO(n+1)/SO(n): zonal spherical functions, the
// radial ODE, their n -> infinity limit and a Monte-Carlo test of the
// spherical functional equation.

#include "sphelim/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphelim {

/// Normalized ultraspherical polynomial p_{n,k} with p_{n,k}(1) = 1.
struct ZonalFunction {
    int n = 2;
    int k = 0;

    ZonalFunction() = default;
    ZonalFunction(int n_, int k_) : n(n_), k(k_)
    {
        if (n < 2) {
            throw std::invalid_argument("zonal function needs sphere dimension n >= 2");
        }
        if (k < 0) {
            throw std::invalid_argument("zonal function needs degree k >= 0");
        }
    }
};

struct ZonalJet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// p, p', p'' from the three-term recurrence
///   (j + n - 1) p_{j+1} = (2j + n - 1) t p_j - j p_{j-1}
/// and its formal derivatives.
inline ZonalJet zonal_eval_with_derivatives(const ZonalFunction& f, double t)
{
    if (!(std::abs(t) <= 1.0)) {
        throw std::domain_error("zonal_eval: |t| > 1 (t = " + std::to_string(t) + ")");
    }
    ZonalJet prev{1.0, 0.0, 0.0};
    if (f.k == 0) {
        return prev;
    }
    ZonalJet cur{t, 1.0, 0.0};
    const double n = f.n;
    for (int j = 1; j < f.k; ++j) {
        const double a = 2.0 * j + n - 1.0;
        const double b = j + n - 1.0;
        ZonalJet next;
        next.value = (a * t * cur.value - j * prev.value) / b;
        next.d1 = (a * (cur.value + t * cur.d1) - j * prev.d1) / b;
        next.d2 = (a * (2.0 * cur.d1 + t * cur.d2) - j * prev.d2) / b;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline double zonal_eval(const ZonalFunction& f, double t) { return zonal_eval_with_derivatives(f, t).value; }

/// (1 - t^2) p'' - n t p' + k (k + n - 1) p, for |t| < 1.
inline double ode_residual(const ZonalFunction& f, double t)
{
    if (!(std::abs(t) < 1.0)) {
        throw std::domain_error("ode_residual: needs |t| < 1");
    }
    const ZonalJet p = zonal_eval_with_derivatives(f, t);
    const double k = f.k;
    return (1.0 - t * t) * p.d2 - f.n * t * p.d1 + k * (k + f.n - 1.0) * p.value;
}

/// m Chebyshev nodes cos((2i+1) pi / 2m), ascending; all strictly inside (-1, 1).
inline std::vector<double> chebyshev_interior_grid(int m = 101)
{
    if (m < 1) {
        throw std::invalid_argument("grid size must be positive");
    }
    std::vector<double> grid(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        grid[static_cast<std::size_t>(m - 1 - i)] = std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * m));
    }
    // the middle node of an odd grid is cos(pi/2), which is not exactly 0
    if (m % 2 == 1) {
        grid[static_cast<std::size_t>(m / 2)] = 0.0;
    }
    return grid;
}

/// Element of SO(dim), checked on construction.
class RotationMatrix {
public:
    static constexpr double tolerance = 1e-12;

    explicit RotationMatrix(Eigen::MatrixXd m) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols() || m_.rows() < 1) {
            throw std::invalid_argument("rotation matrix must be square");
        }
        const double defect = orthogonality_defect(m_);
        if (!(defect < tolerance)) {
            throw std::domain_error("matrix is not orthogonal (defect " + std::to_string(defect) + ")");
        }
        if (m_.determinant() < 0.0) {
            throw std::domain_error("matrix has determinant -1");
        }
    }

    static RotationMatrix identity(int dim) { return RotationMatrix(Eigen::MatrixXd::Identity(dim, dim)); }

    /// Rotation by theta in the (i, j) coordinate plane (0-based).
    static RotationMatrix plane_rotation(int dim, int i, int j, double theta)
    {
        if (i == j || i < 0 || j < 0 || i >= dim || j >= dim) {
            throw std::invalid_argument("plane_rotation: bad plane");
        }
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
        m(i, i) = std::cos(theta);
        m(j, j) = std::cos(theta);
        m(j, i) = std::sin(theta);
        m(i, j) = -std::sin(theta);
        return RotationMatrix(std::move(m));
    }

    static double orthogonality_defect(const Eigen::MatrixXd& m)
    {
        return (m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    friend RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b)
    {
        if (a.dim() != b.dim()) {
            throw std::invalid_argument("rotation dimension mismatch");
        }
        return RotationMatrix(a.m_ * b.m_, Unchecked{});
    }

private:
    struct Unchecked {};
    RotationMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

    Eigen::MatrixXd m_;
};

/// phi_{infinity,k}(x) = <e_1, x e_1>^k.
inline double limit_zonal(int k, const RotationMatrix& x)
{
    if (k < 0) {
        throw std::invalid_argument("limit_zonal: k must be >= 0");
    }
    return std::pow(x(0, 0), k);
}

/// psi(g) = p_{n,k}(<e_1, g e_1>) for g in SO(n+1).
inline double spherical_function(const ZonalFunction& f, const RotationMatrix& g)
{
    if (g.dim() != f.n + 1) {
        throw std::invalid_argument("spherical_function: expected SO(" + std::to_string(f.n + 1) + ")");
    }
    return zonal_eval(f, std::clamp(g(0, 0), -1.0, 1.0));
}

// Sample i lives in chunk i / haar_chunk_size. Each chunk owns an
// mt19937_64 seeded from seed_seq{seed low, seed high, chunk}, so a sample
// depends only on (seed, i) and never on the thread layout.
inline constexpr std::size_t haar_chunk_size = 4096;

namespace detail {

inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

/// Haar element of SO(m): QR of a Gaussian matrix, columns scaled by
/// sign(R_ii), first column negated if the determinant is -1.
template <class Engine>
Eigen::MatrixXd haar_so(int m, Engine& engine, std::normal_distribution<double>& normal)
{
    Eigen::MatrixXd g(m, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            g(i, j) = normal(engine);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& r = qr.matrixQR();
    for (int j = 0; j < m; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) = -q.col(j);
        }
    }
    if (q.determinant() < 0.0) {
        q.col(0) = -q.col(0);
    }
    return q;
}

/// Calls fn(i, k) for every sample index in [begin, end) of one chunk,
/// k the embedded stabilizer element diag(1, Q).
template <class Fn>
void for_each_stabilizer_sample(int n, std::uint64_t seed, std::size_t chunk, std::size_t count, Fn&& fn)
{
    auto engine = chunk_engine(seed, chunk);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t begin = chunk * haar_chunk_size;
    const std::size_t end = std::min(count, begin + haar_chunk_size);
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n + 1, n + 1);
    for (std::size_t i = begin; i < end; ++i) {
        k.bottomRightCorner(n, n) = haar_so(n, engine, normal);
        fn(i, k);
    }
}

inline std::size_t chunk_count(std::size_t count) { return (count + haar_chunk_size - 1) / haar_chunk_size; }

/// Pairwise sum of v[lo, hi).
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi)
{
    if (hi - lo <= 16) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += v[i];
        }
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

} // namespace detail

/// Haar samples of SO(n) embedded in SO(n+1) as the stabilizer of e_1.
inline std::vector<RotationMatrix> haar_sample_stabilizer(int n, std::size_t count, std::uint64_t seed)
{
    if (n < 2) {
        throw std::invalid_argument("haar_sample_stabilizer: n must be >= 2");
    }
    if (count < 1) {
        throw std::invalid_argument("haar_sample_stabilizer: count must be >= 1");
    }
    std::vector<Eigen::MatrixXd> raw(count);
    parallel_for(detail::chunk_count(count), [&](std::size_t chunk) {
        detail::for_each_stabilizer_sample(n, seed, chunk, count,
                                           [&](std::size_t i, const Eigen::MatrixXd& k) { raw[i] = k; });
    });
    std::vector<RotationMatrix> out;
    out.reserve(count);
    for (auto& m : raw) {
        out.emplace_back(std::move(m));
    }
    return out;
}

/// One Haar element of SO(dim).
inline RotationMatrix haar_rotation(int dim, std::uint64_t seed)
{
    if (dim < 1) {
        throw std::invalid_argument("haar_rotation: dim must be >= 1");
    }
    auto engine = detail::chunk_engine(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    return RotationMatrix(detail::haar_so(dim, engine, normal));
}

struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z = 0.0; // |estimate - target| / std_error (0 when both vanish)
    std::size_t samples = 0;
};

/// Monte-Carlo mean of psi(x k y) over k in the stabilizer of e_1, compared
/// with psi(x) psi(y).
inline McResult mc_functional_equation(int n, int k, const RotationMatrix& x, const RotationMatrix& y,
                                       std::size_t samples, std::uint64_t seed)
{
    const ZonalFunction f(n, k);
    if (x.dim() != n + 1 || y.dim() != n + 1) {
        throw std::invalid_argument("mc_functional_equation: x and y must lie in SO(" + std::to_string(n + 1) + ")");
    }
    if (samples < 2) {
        throw std::invalid_argument("mc_functional_equation: need at least 2 samples");
    }
    const Eigen::RowVectorXd x_row = x.matrix().row(0);
    const Eigen::VectorXd y_col = y.matrix().col(0);
    std::vector<double> values(samples);
    parallel_for(detail::chunk_count(samples), [&](std::size_t chunk) {
        detail::for_each_stabilizer_sample(n, seed, chunk, samples, [&](std::size_t i, const Eigen::MatrixXd& kk) {
            const double g00 = x_row.dot(kk * y_col);
            values[i] = zonal_eval(f, std::clamp(g00, -1.0, 1.0));
        });
    });

    McResult out;
    out.samples = samples;
    const double count = static_cast<double>(samples);
    out.estimate = detail::pairwise_sum(values, 0, samples) / count;
    for (double& v : values) {
        v = (v - out.estimate) * (v - out.estimate);
    }
    const double variance = detail::pairwise_sum(values, 0, samples) / (count - 1.0);
    out.std_error = std::sqrt(variance / count);
    out.target = spherical_function(f, x) * spherical_function(f, y);
    const double diff = std::abs(out.estimate - out.target);
    if (out.std_error > 0.0) {
        out.z = diff / out.std_error;
    } else {
        out.z = diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace sphelim
