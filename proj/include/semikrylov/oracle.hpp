#pragma once

#include "semikrylov/linalg.hpp"

namespace semikrylov {

inline constexpr double kDefaultConsistencyTol = 1e-10;

/// Coordinates of v in the eigenbasis: range_part = Q₁ᵀv, null_part = Q₂ᵀv.
struct SplitVector {
    Vector range_part;
    Vector null_part;
};

struct ConsistencyReport {
    bool consistent = false;
    double null_norm = 0.0;
};

SplitVector split(const SpectralDecomposition& decomp, std::span<const double> v);
/// Q₁v¹ + Q₂v².
Vector reassemble(const SpectralDecomposition& decomp, const SplitVector& parts);

/// Q₁ᵀv (length rank) and Q₂ᵀv (length n − rank) individually.
Vector range_coordinates(const SpectralDecomposition& decomp, std::span<const double> v);
Vector null_coordinates(const SpectralDecomposition& decomp, std::span<const double> v);

/// (basis[:, first..last))ᵀ v.
Vector project_onto_columns(const DenseMatrix& basis, std::span<const double> v, std::size_t first,
                            std::size_t last);

/// x* = Q₁·Λr⁻¹·Q₁ᵀb, the minimum-norm solution of a consistent Ax = b.
Vector pseudoinverse_apply(const SpectralDecomposition& decomp, std::span<const double> b);

/// x* = V₁·Σr⁻¹·U₁ᵀb, the minimum-norm least squares solution.
Vector pinv_apply_rect(const SingularDecomposition& sdec, std::span<const double> b);

/// null_norm = ‖Q₂ᵀb‖₂; consistent iff null_norm ≤ tol·max(‖b‖₂, 1).
ConsistencyReport consistency_check(const SpectralDecomposition& decomp, std::span<const double> b,
                                    double tol = kDefaultConsistencyTol);
/// Same test against the left null space: null_norm = ‖U₂ᵀb‖₂.
ConsistencyReport consistency_check(const SingularDecomposition& sdec, std::span<const double> b,
                                    double tol = kDefaultConsistencyTol);

/// Explicit A† = Q·Λ†·Qᵀ.
DenseMatrix pseudoinverse_matrix(const SpectralDecomposition& decomp);
/// Explicit A† = V·Σ†·Uᵀ (n×m).
DenseMatrix pseudoinverse_matrix(const SingularDecomposition& sdec);

}  // namespace semikrylov
