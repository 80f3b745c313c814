#include "semikrylov/genmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace semikrylov {

double NormalRng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalRng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Vector NormalRng::normal_vector(std::size_t n)
{
    Vector v(n);
    for (auto& e : v) e = normal();
    return v;
}

std::string_view to_string(ProblemKind k) noexcept
{
    return k == ProblemKind::spsd ? "spsd" : "rectangular";
}

std::string_view to_string(X0Mode m) noexcept
{
    switch (m) {
    case X0Mode::zero: return "zero";
    case X0Mode::random_range: return "random_range";
    case X0Mode::random_full: return "random_full";
    }
    return "?";
}

ProblemKind parse_problem_kind(std::string_view s)
{
    if (s == "spsd") return ProblemKind::spsd;
    if (s == "rectangular") return ProblemKind::rectangular;
    throw std::invalid_argument("unknown problem kind '" + std::string(s) + "'");
}

X0Mode parse_x0_mode(std::string_view s)
{
    if (s == "zero") return X0Mode::zero;
    if (s == "random_range") return X0Mode::random_range;
    if (s == "random_full") return X0Mode::random_full;
    throw std::invalid_argument("unknown x0_mode '" + std::string(s) + "'");
}

void ProblemSpec::validate() const
{
    if (rows == 0 || cols == 0) throw std::invalid_argument("problem dims must be positive");
    if (kind == ProblemKind::spsd && rows != cols)
        throw std::invalid_argument("spsd problem must be square");
    if (spectrum.size() != std::min(rows, cols))
        throw std::invalid_argument("spectrum length " + std::to_string(spectrum.size()) +
                                    " does not match min(rows, cols) = " +
                                    std::to_string(std::min(rows, cols)));
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (!std::isfinite(spectrum[i]) || spectrum[i] < 0.0)
            throw std::invalid_argument("spectrum entries must be finite and nonnegative");
        if (i > 0 && spectrum[i] > spectrum[i - 1])
            throw std::invalid_argument("spectrum must be sorted descending");
    }
    if (!std::isfinite(consistency_gap) || consistency_gap < 0.0)
        throw std::invalid_argument("consistency_gap must be finite and nonnegative");
}

DenseMatrix random_orthogonal(std::size_t n, NormalRng& rng)
{
    if (n < 1) throw std::invalid_argument("random_orthogonal: n must be at least 1");
    std::vector<Vector> cols(n);
    for (auto& c : cols) c = rng.normal_vector(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) axpy(-dot(cols[k], cols[j]), cols[k], cols[j]);
        const double nj = norm2(cols[j]);
        for (auto& e : cols[j]) e /= nj;
    }
    DenseMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) q.set_col(j, cols[j]);
    return q;
}

DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed)
{
    NormalRng rng(seed);
    return random_orthogonal(n, rng);
}

namespace {

// Σ_k c[k]·basis[:, first + k]
Vector combine_columns(const DenseMatrix& basis, std::size_t first, std::span<const double> c)
{
    Vector v(basis.rows(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t i = 0; i < basis.rows(); ++i) v[i] += basis(i, first + k) * c[k];
    return v;
}

// (basis[:, first .. first + count))ᵀ v
Vector project(const DenseMatrix& basis, std::size_t first, std::size_t count, std::span<const double> v)
{
    Vector c(count, 0.0);
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t i = 0; i < basis.rows(); ++i) c[k] += basis(i, first + k) * v[i];
    return c;
}

// Unit vector drawn from span(basis[:, first..]).
Vector random_unit_in(const DenseMatrix& basis, std::size_t first, NormalRng& rng)
{
    const Vector g = rng.normal_vector(basis.cols() - first);
    Vector v = combine_columns(basis, first, g);
    const double nv = norm2(v);
    for (auto& e : v) e /= nv;
    return v;
}

}  // namespace

Problem make_problem(const ProblemSpec& spec)
{
    spec.validate();
    const std::size_t m = spec.rows;
    const std::size_t n = spec.cols;
    const auto rank = static_cast<std::size_t>(
        std::count_if(spec.spectrum.begin(), spec.spectrum.end(), [](double s) { return s > 0.0; }));
    if (spec.consistency_gap > 0.0 && rank == m) {
        throw std::invalid_argument("consistency_gap > 0 requires a nontrivial null space of A^T, but rank = " +
                                    std::to_string(rank) + " = rows");
    }

    NormalRng rng(spec.seed);
    // Left and right factors; for spsd they coincide.
    const DenseMatrix u = random_orthogonal(m, rng);
    const DenseMatrix v = spec.kind == ProblemKind::spsd ? u : random_orthogonal(n, rng);

    DenseMatrix a(m, n);
    for (std::size_t j = 0; j < rank; ++j) {
        const double s = spec.spectrum[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double uij = s * u(i, j);
            for (std::size_t l = 0; l < n; ++l) a(i, l) += uij * v(l, j);
        }
    }
    if (spec.kind == ProblemKind::spsd) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) a(j, i) = a(i, j);
    }

    // b = A·w + gap·(unit vector in the left null space).
    const Vector w = rng.normal_vector(n);
    Vector b = matvec(a, w);
    if (spec.consistency_gap > 0.0) axpy(spec.consistency_gap, random_unit_in(u, rank, rng), b);

    // x* = V₁·Σr⁻¹·U₁ᵀb from the generating factors.
    Vector coeff = project(u, 0, rank, b);
    for (std::size_t j = 0; j < rank; ++j) coeff[j] /= spec.spectrum[j];
    Vector xstar = combine_columns(v, 0, coeff);

    Vector x0(n, 0.0);
    Vector y0(m, 0.0);
    switch (spec.x0_mode) {
    case X0Mode::zero: break;
    case X0Mode::random_range:
        x0 = combine_columns(v, 0, rng.normal_vector(rank));
        y0 = combine_columns(u, 0, rng.normal_vector(rank));
        break;
    case X0Mode::random_full:
        x0 = rng.normal_vector(n);
        y0 = rng.normal_vector(m);
        break;
    }
    return Problem{std::move(a), std::move(b), std::move(x0), std::move(y0), std::move(xstar), rank};
}

namespace {

template <class Shape>
Vector spaced_spectrum(const char* who, std::size_t length, std::size_t rank, double top, double condition,
                       Shape shape)
{
    if (rank > length) throw std::invalid_argument(std::string(who) + ": rank exceeds length");
    if (!(top > 0.0) || !(condition >= 1.0))
        throw std::invalid_argument(std::string(who) + ": need top > 0 and condition >= 1");
    Vector s(length, 0.0);
    for (std::size_t j = 0; j < rank; ++j) {
        const double frac = rank == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(rank - 1);
        s[j] = top * shape(frac);
    }
    // pin the last value so the requested condition number is exact
    if (rank > 1) s[rank - 1] = top / condition;
    return s;
}

}  // namespace

Vector geometric_spectrum(std::size_t length, std::size_t rank, double top, double condition)
{
    return spaced_spectrum("geometric_spectrum", length, rank, top, condition,
                           [&](double f) { return std::pow(condition, -f); });
}

Vector linear_spectrum(std::size_t length, std::size_t rank, double top, double condition)
{
    return spaced_spectrum("linear_spectrum", length, rank, top, condition,
                           [&](double f) { return 1.0 - f * (1.0 - 1.0 / condition); });
}

}  // namespace semikrylov
