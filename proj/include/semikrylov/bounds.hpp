#pragma once

#include "semikrylov/linalg.hpp"
#include "semikrylov/solvers.hpp"

#include <string_view>

namespace semikrylov {

enum class BoundKind { cg_energy, cgls_range_residual, cgne_energy };

std::string_view to_string(BoundKind k) noexcept;

struct BoundViolation {
    std::size_t iteration = 0;
    double measured = 0.0;
    double bound = 0.0;
};

/// Measured error quantity against bound[k] = 2·ρᵏ·measured[0].
struct BoundReport {
    BoundKind kind = BoundKind::cg_energy;
    std::vector<double> measured;
    std::vector<double> bound;
    double contraction_factor = 0.0;
    /// {λ₁, λ_r} for cg, {σ₁, σ_r} for cgls/cgne.
    std::vector<double> kappa_or_sigmas;
    std::vector<BoundViolation> violations;
    bool pass = false;
};

// Slack on bound comparisons: measured ≤ bound·(1 + kBoundRelSlack) + kBoundAbsFloor·measured[0],
// checked until measured drops below kBoundCutoff·measured[0].
inline constexpr double kBoundRelSlack = 1e-6;
inline constexpr double kBoundAbsFloor = 1e-13;
inline constexpr double kBoundCutoff = 1e-12;

/// ρ = (√κ − 1)/(√κ + 1) with κ = λ₁/λ_r.
double cg_contraction_factor(double lambda_max, double lambda_min);
/// ρ = (σ₁ − σ_r)/(σ₁ + σ_r).
double normal_contraction_factor(double sigma_max, double sigma_min);

/// CG energy-norm bound: measured[k] = √(r¹ₖᵀΛr⁻¹r¹ₖ), r¹ₖ = Q₁ᵀrₖ.
/// Throws when the trace right-hand side is inconsistent.
BoundReport cg_bound_verify(const SolveTrace& trace, const SpectralDecomposition& decomp);

/// CGLS bound on measured[k] = ‖A(xₖ − x*)‖₂, evaluated through the SVD.
BoundReport cgls_bound_verify(const SolveTrace& trace, const SingularDecomposition& sdec,
                              std::span<const double> xstar);

/// CGNE bound on the quadratic form rₖᵀ(AAᵀ)†rₖ (no square root).
BoundReport cgne_bound_verify(const SolveTrace& trace, const SingularDecomposition& sdec);

/// Fills `bound` and `violations` from `measured` and `contraction_factor`.
void evaluate_bound(BoundReport& report);

}  // namespace semikrylov
