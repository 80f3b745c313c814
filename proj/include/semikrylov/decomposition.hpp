#pragma once

#include "semikrylov/linalg.hpp"
#include "semikrylov/solvers.hpp"

namespace semikrylov {

/// CG carried in eigen-coordinates: the range block (length rank) and the
/// null block (length n − rank) of every iterate, residual and direction.
///
/// In the general case the null-space residual is never updated, so
/// r2[i] == b2 for every recorded i. When the right-hand side is consistent
/// the null block follows the b² = 0 listing: b2 is stored as zero,
/// p2[i] == 0 and x2[i] == x2[0].
struct DecomposedTrace {
    Vector b1;
    Vector b2;
    bool consistent_case = false;

    std::vector<Vector> x1, r1, p1;
    std::vector<Vector> x2, r2, p2;
    std::vector<double> alphas;
    std::vector<double> betas;

    std::size_t iterations = 0;
    StopReason stop_reason = StopReason::max_iters;
};

struct EquivalenceReport {
    double max_deviation = 0.0;
    std::size_t iterations_compared = 0;
    bool pass = false;
};

struct ConfinementReport {
    /// Largest sine of the angle between p2[i] and b2.
    double max_angle = 0.0;
    bool pass = false;
};

/// Runs the decomposed recurrence for up to `iters` iterations using Λr
/// diagonally. b is treated as consistent (b2 := 0) when ‖Q₂ᵀb‖ passes
/// consistency_check at `consistency_tol`. Stops early on curvature
/// breakdown, (p¹, Λr p¹) ≤ breakdown_tol·(‖p¹‖² + ‖p²‖²).
DecomposedTrace decomposed_cg_run(const SpectralDecomposition& decomp, std::span<const double> b,
                                  std::span<const double> x0, std::size_t iters,
                                  double breakdown_tol = 1e-14,
                                  double consistency_tol = 1e-10);

/// Compares a plain CG trace, rotated by Qᵀ, against the decomposed run.
///
/// Vectors use |a − b| / max(‖reference‖, 1) with the decomposed side as
/// reference; α and β use plain relative error. Comparison stops at the
/// first index h where ‖r1[h]‖ < 1e-12·‖b1‖, after which rounding dominates.
/// β_{h-1} is built from r_h and is therefore excluded as well.
/// Throws std::invalid_argument when nothing is comparable.
EquivalenceReport equivalence_check(const SolveTrace& trace, const DecomposedTrace& dtrace,
                                    const SpectralDecomposition& decomp, double tol);

/// Checks that every non-negligible p2[i] is parallel to b2. Throws for
/// the consistent case, where p2 vanishes instead.
ConfinementReport null_direction_confinement(const DecomposedTrace& dtrace, double tol);

/// max_i ‖Q₂ᵀvᵢ − Q₂ᵀreference‖ / max(‖Q₂ᵀreference‖, 1) over a sequence.
double max_null_drift(const SpectralDecomposition& decomp, const std::vector<Vector>& vs,
                      std::span<const double> reference);

}  // namespace semikrylov
