#pragma once

#include "semikrylov/dense.hpp"

#include <cstddef>

namespace semikrylov {

inline constexpr double kDefaultRankTol = 1e-10;

/// A = Q·diag(lambdas)·Qᵀ with eigenvalues sorted descending. The first
/// `rank` columns of Q span R(A), the remaining ones span N(A).
struct SpectralDecomposition {
    DenseMatrix q;
    Vector lambdas;
    std::size_t rank = 0;
    double rank_tol = kDefaultRankTol;

    std::size_t dimension() const noexcept { return lambdas.size(); }
    std::size_t null_dimension() const noexcept { return lambdas.size() - rank; }
};

/// A = U·Σ·Vᵀ; `sigmas` holds min(m, n) values sorted descending.
struct SingularDecomposition {
    DenseMatrix u;
    Vector sigmas;
    DenseMatrix v;
    std::size_t rank = 0;
    double rank_tol = kDefaultRankTol;

    std::size_t rows() const noexcept { return u.rows(); }
    std::size_t cols() const noexcept { return v.rows(); }
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius norm is at most 1e-14·‖A‖_F,
/// capped at 100 sweeps. Eigenpairs are stably sorted by eigenvalue,
/// largest first; `rank` counts eigenvalues above rank_tol·max(λ₁, 1).
///
/// Throws DimensionError for non-square input, std::invalid_argument for
/// asymmetric input and ConvergenceError if the sweep cap is reached.
SpectralDecomposition symmetric_eig(const DenseMatrix& a, double rank_tol = kDefaultRankTol);

/// One-sided (Hestenes) Jacobi SVD. Column rotations are accumulated into
/// V; U is AV·Σ⁻¹ on the numerical range and is completed to an orthogonal
/// basis by Gram-Schmidt.
SingularDecomposition svd(const DenseMatrix& a, double rank_tol = kDefaultRankTol);

/// Count of leading values strictly above tol·max(values[0], 1).
std::size_t numerical_rank(std::span<const double> descending, double tol);

/// Max entrywise deviation of QᵀQ from the identity.
double orthogonality_error(const DenseMatrix& q);

DenseMatrix reconstruct(const SpectralDecomposition& d);
DenseMatrix reconstruct(const SingularDecomposition& d);

}  // namespace semikrylov
