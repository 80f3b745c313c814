#pragma once

#include "semikrylov/dense.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace semikrylov {

/// Seeded normal deviates: std::mt19937_64 words mapped to 53-bit uniforms,
/// then Box-Muller. Both stages are fully specified, so streams are
/// reproducible across platforms up to libm rounding.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform();
    double normal();
    Vector normal_vector(std::size_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class ProblemKind { spsd, rectangular };
enum class X0Mode { zero, random_range, random_full };

std::string_view to_string(ProblemKind k) noexcept;
std::string_view to_string(X0Mode m) noexcept;
ProblemKind parse_problem_kind(std::string_view s);
X0Mode parse_x0_mode(std::string_view s);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::spsd;
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// Eigenvalues (spsd) or singular values (rectangular), descending, ≥ 0.
    Vector spectrum;
    std::uint64_t seed = 0;
    /// ‖b²‖: norm of the component of b outside R(A).
    double consistency_gap = 0.0;
    X0Mode x0_mode = X0Mode::zero;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

struct Problem {
    DenseMatrix a;
    Vector b;
    /// Initial guess in x-space (length cols).
    Vector x0;
    /// Initial guess in y-space for cgne (length rows).
    Vector y0;
    /// A†b from the generating factors, independent of the eigensolver.
    Vector xstar_reference;
    std::size_t rank = 0;
};

/// Haar-distributed orthogonal matrix: modified Gram-Schmidt (two passes)
/// on a seeded standard-normal matrix.
DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed);
DenseMatrix random_orthogonal(std::size_t n, NormalRng& rng);

/// A = QΛQᵀ (spsd) or UΣVᵀ (rectangular) with b = A·w + gap·(unit vector in
/// N(Aᵀ)). Throws when a gap is requested but N(Aᵀ) is trivial.
Problem make_problem(const ProblemSpec& spec);

/// `rank` values spaced geometrically from `top` down to top/condition,
/// padded with zeros to `length`.
Vector geometric_spectrum(std::size_t length, std::size_t rank, double top, double condition);
/// Same endpoints, equally spaced.
Vector linear_spectrum(std::size_t length, std::size_t rank, double top, double condition);

}  // namespace semikrylov
