#include "semikrylov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace semikrylov {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-14;

// Indices that stably sort `values` descending.
std::vector<std::size_t> descending_order(std::span<const double> values)
{
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return idx;
}

double off_diagonal_norm(const DenseMatrix& w)
{
    double s = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
            if (i != j) s += w(i, j) * w(i, j);
    return std::sqrt(s);
}

// tan of the Jacobi angle annihilating the (p,q) pair, for theta = (a_qq − a_pp)/(2 a_pq).
double jacobi_tangent(double theta)
{
    if (std::abs(theta) > 1e150) return 0.5 / theta;
    const double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    return theta < 0.0 ? -t : t;
}

}  // namespace

std::size_t numerical_rank(std::span<const double> descending, double tol)
{
    if (descending.empty()) return 0;
    const double cut = tol * std::max(descending[0], 1.0);
    std::size_t r = 0;
    while (r < descending.size() && descending[r] > cut) ++r;
    return r;
}

double orthogonality_error(const DenseMatrix& q)
{
    const std::size_t n = q.cols();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < q.rows(); ++k) s += q(k, i) * q(k, j);
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

SpectralDecomposition symmetric_eig(const DenseMatrix& a, double rank_tol)
{
    if (!a.square()) throw DimensionError("symmetric_eig: matrix is not square");
    if (!is_symmetric(a)) throw std::invalid_argument("symmetric_eig: matrix is not symmetric");
    if (!(rank_tol > 0.0)) throw std::invalid_argument("symmetric_eig: rank_tol must be positive");

    const std::size_t n = a.rows();
    DenseMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
    DenseMatrix v = DenseMatrix::identity(n);

    const double target = kOffDiagonalTol * frobenius_norm(a);
    bool converged = false;
    for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(w) <= target) {
            converged = true;
            break;
        }
        if (sweep == kMaxSweeps) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double t = jacobi_tangent((w(q, q) - w(p, p)) / (2.0 * apq));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                w(p, p) -= t * apq;
                w(q, q) += t * apq;
                w(p, q) = w(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double wkp = w(k, p);
                    const double wkq = w(k, q);
                    w(k, p) = w(p, k) = c * wkp - s * wkq;
                    w(k, q) = w(q, k) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) {
        throw ConvergenceError("symmetric_eig: no convergence after " + std::to_string(kMaxSweeps) +
                               " sweeps");
    }

    Vector diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = w(i, i);
    const auto order = descending_order(diag);

    SpectralDecomposition out{DenseMatrix(n, n), Vector(n), 0, rank_tol};
    for (std::size_t k = 0; k < n; ++k) {
        out.lambdas[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.q(i, k) = v(i, order[k]);
    }
    out.rank = numerical_rank(out.lambdas, rank_tol);
    return out;
}

SingularDecomposition svd(const DenseMatrix& a, double rank_tol)
{
    if (!(rank_tol > 0.0)) throw std::invalid_argument("svd: rank_tol must be positive");

    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t k = std::min(m, n);

    // Columns of W = A·V, stored contiguously for the rotations.
    std::vector<Vector> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = a.col(j);
    std::vector<Vector> v(n, Vector(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

    const double tol = static_cast<double>(m) * std::numeric_limits<double>::epsilon();
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = dot(w[p], w[p]);
                const double beta = dot(w[q], w[q]);
                if (alpha == 0.0 || beta == 0.0) continue;
                const double gamma = dot(w[p], w[q]);
                if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
                rotated = true;
                const double t = jacobi_tangent((beta - alpha) / (2.0 * gamma));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w[p][i];
                    const double wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v[p][i];
                    const double vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw ConvergenceError("svd: no convergence after " + std::to_string(kMaxSweeps) + " sweeps");
    }

    Vector norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = norm2(w[j]);
    const auto order = descending_order(norms);

    SingularDecomposition out{DenseMatrix(m, m), Vector(k), DenseMatrix(n, n), 0, rank_tol};
    for (std::size_t j = 0; j < n; ++j) out.v.set_col(j, v[order[j]]);
    for (std::size_t j = 0; j < k; ++j) out.sigmas[j] = norms[order[j]];
    out.rank = numerical_rank(out.sigmas, rank_tol);

    std::vector<Vector> basis;
    basis.reserve(m);
    auto orthogonalize = [&](Vector& c) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) axpy(-dot(b, c), b, c);
        return norm2(c);
    };
    for (std::size_t j = 0; j < out.rank; ++j) basis.push_back(scaled(1.0 / out.sigmas[j], w[order[j]]));
    // Below the rank cut, keep AV·Σ⁻¹ where it is still well separated from the basis.
    for (std::size_t j = out.rank; j < k; ++j) {
        if (out.sigmas[j] <= std::numeric_limits<double>::min()) break;
        Vector c = scaled(1.0 / out.sigmas[j], w[order[j]]);
        const double nc = orthogonalize(c);
        if (nc < 0.5) break;
        basis.push_back(scaled(1.0 / nc, c));
    }
    // Complete with the coordinate vector least represented in the current basis.
    while (basis.size() < m) {
        std::size_t best = 0;
        double best_residual = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            double covered = 0.0;
            for (const auto& b : basis) covered += b[i] * b[i];
            if (1.0 - covered > best_residual) {
                best_residual = 1.0 - covered;
                best = i;
            }
        }
        Vector c(m, 0.0);
        c[best] = 1.0;
        const double nc = orthogonalize(c);
        basis.push_back(scaled(1.0 / nc, c));
    }
    for (std::size_t j = 0; j < m; ++j) out.u.set_col(j, basis[j]);
    return out;
}

DenseMatrix reconstruct(const SpectralDecomposition& d)
{
    const std::size_t n = d.dimension();
    DenseMatrix a(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lk = d.lambdas[k];
        if (lk == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double qik = lk * d.q(i, k);
            for (std::size_t j = 0; j < n; ++j) a(i, j) += qik * d.q(j, k);
        }
    }
    return a;
}

DenseMatrix reconstruct(const SingularDecomposition& d)
{
    const std::size_t m = d.rows();
    const std::size_t n = d.cols();
    DenseMatrix a(m, n);
    for (std::size_t k = 0; k < d.sigmas.size(); ++k) {
        const double sk = d.sigmas[k];
        if (sk == 0.0) continue;
        for (std::size_t i = 0; i < m; ++i) {
            const double uik = sk * d.u(i, k);
            for (std::size_t j = 0; j < n; ++j) a(i, j) += uik * d.v(j, k);
        }
    }
    return a;
}

}  // namespace semikrylov
