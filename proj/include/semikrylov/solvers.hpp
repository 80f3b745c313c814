#pragma once

#include "semikrylov/dense.hpp"

#include <optional>
#include <string_view>

namespace semikrylov {

enum class Method { cg, cgls, cgne };
enum class StopReason { converged, max_iters, breakdown };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(StopReason s) noexcept;
Method parse_method(std::string_view s);
StopReason parse_stop_reason(std::string_view s);

struct SolverConfig {
    /// Unset means 10 × (dimension of the system the recurrence runs on).
    std::optional<std::size_t> max_iters;
    double rel_tol = 1e-12;
    double breakdown_tol = 1e-14;
    /// Vectors are recorded only when set; scalars are always recorded.
    bool record_trace = true;

    void validate() const;
};

/// Per-iteration record of a solve.
///
/// `iterates`, `residuals` and `directions` hold one entry per visited
/// index 0..iterations; `alphas` and `betas` hold one per completed
/// iteration. For cgne, `directions` live in y-space and `residuals` are
/// b − AAᵀyᵢ.
struct SolveTrace {
    Method method = Method::cg;
    StopReason stop_reason = StopReason::max_iters;
    std::size_t iterations = 0;

    Vector rhs;
    Vector solution;
    Vector y_solution;  // cgne only

    std::vector<Vector> iterates;
    std::vector<Vector> residuals;
    std::vector<Vector> directions;
    std::vector<Vector> normal_residuals;  // sᵢ = Aᵀrᵢ, cgls only
    std::vector<Vector> y_iterates;        // cgne only

    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> residual_norms;
    std::vector<double> normal_residual_norms;  // cgls only

    bool has_vectors() const noexcept { return !iterates.empty(); }
};

/// Plain CG on a symmetric (possibly singular) A.
///
/// Stops as converged once ‖rᵢ‖₂ ≤ rel_tol·max(‖b‖₂, 1), as breakdown
/// when (Apᵢ, pᵢ) ≤ breakdown_tol·‖pᵢ‖₂², or at the iteration cap.
SolveTrace cg_solve(const DenseMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const SolverConfig& cfg = {});

/// CGLS: CG on AᵀAx = Aᵀb with AᵀA never formed. Stops once
/// γᵢ = ‖Aᵀrᵢ‖² ≤ (rel_tol·max(‖Aᵀb‖₂, 1))².
SolveTrace cgls_solve(const DenseMatrix& a, std::span<const double> b, std::span<const double> x0,
                      const SolverConfig& cfg = {});

/// CGNE: CG on AAᵀy = b from y0, with x = Aᵀy.
SolveTrace cgne_solve(const DenseMatrix& a, std::span<const double> b, std::span<const double> y0,
                      const SolverConfig& cfg = {});

}  // namespace semikrylov
