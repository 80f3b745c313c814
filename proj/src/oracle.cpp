#include "semikrylov/oracle.hpp"

#include <algorithm>

namespace semikrylov {

namespace {

void require_length(std::size_t expected, std::size_t got, const char* what)
{
    if (expected != got) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                             ", got " + std::to_string(got));
    }
}

}  // namespace

Vector project_onto_columns(const DenseMatrix& m, std::span<const double> v, std::size_t first,
                            std::size_t last)
{
    require_length(m.rows(), v.size(), "project_onto_columns");
    Vector out(last - first, 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (std::size_t k = first; k < last; ++k) out[k - first] += m(i, k) * vi;
    }
    return out;
}

Vector range_coordinates(const SpectralDecomposition& decomp, std::span<const double> v)
{
    require_length(decomp.dimension(), v.size(), "range_coordinates");
    return project_onto_columns(decomp.q, v, 0, decomp.rank);
}

Vector null_coordinates(const SpectralDecomposition& decomp, std::span<const double> v)
{
    require_length(decomp.dimension(), v.size(), "null_coordinates");
    return project_onto_columns(decomp.q, v, decomp.rank, decomp.dimension());
}

SplitVector split(const SpectralDecomposition& decomp, std::span<const double> v)
{
    return {range_coordinates(decomp, v), null_coordinates(decomp, v)};
}

Vector reassemble(const SpectralDecomposition& decomp, const SplitVector& parts)
{
    require_length(decomp.rank, parts.range_part.size(), "reassemble (range part)");
    require_length(decomp.null_dimension(), parts.null_part.size(), "reassemble (null part)");
    const std::size_t n = decomp.dimension();
    Vector v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < decomp.rank; ++k) s += decomp.q(i, k) * parts.range_part[k];
        for (std::size_t k = decomp.rank; k < n; ++k)
            s += decomp.q(i, k) * parts.null_part[k - decomp.rank];
        v[i] = s;
    }
    return v;
}

Vector pseudoinverse_apply(const SpectralDecomposition& decomp, std::span<const double> b)
{
    require_length(decomp.dimension(), b.size(), "pseudoinverse_apply");
    Vector c = range_coordinates(decomp, b);
    for (std::size_t k = 0; k < decomp.rank; ++k) c[k] /= decomp.lambdas[k];
    const std::size_t n = decomp.dimension();
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < decomp.rank; ++k) s += decomp.q(i, k) * c[k];
        x[i] = s;
    }
    return x;
}

Vector pinv_apply_rect(const SingularDecomposition& sdec, std::span<const double> b)
{
    require_length(sdec.rows(), b.size(), "pinv_apply_rect");
    Vector c = project_onto_columns(sdec.u, b, 0, sdec.rank);
    for (std::size_t k = 0; k < sdec.rank; ++k) c[k] /= sdec.sigmas[k];
    const std::size_t n = sdec.cols();
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < sdec.rank; ++k) s += sdec.v(i, k) * c[k];
        x[i] = s;
    }
    return x;
}

ConsistencyReport consistency_check(const SpectralDecomposition& decomp, std::span<const double> b,
                                    double tol)
{
    require_length(decomp.dimension(), b.size(), "consistency_check");
    const double null_norm = norm2(null_coordinates(decomp, b));
    return {null_norm <= tol * std::max(norm2(b), 1.0), null_norm};
}

ConsistencyReport consistency_check(const SingularDecomposition& sdec, std::span<const double> b,
                                    double tol)
{
    require_length(sdec.rows(), b.size(), "consistency_check");
    const double null_norm = norm2(project_onto_columns(sdec.u, b, sdec.rank, sdec.rows()));
    return {null_norm <= tol * std::max(norm2(b), 1.0), null_norm};
}

DenseMatrix pseudoinverse_matrix(const SpectralDecomposition& decomp)
{
    const std::size_t n = decomp.dimension();
    DenseMatrix p(n, n);
    for (std::size_t k = 0; k < decomp.rank; ++k) {
        const double inv = 1.0 / decomp.lambdas[k];
        for (std::size_t i = 0; i < n; ++i) {
            const double qik = inv * decomp.q(i, k);
            for (std::size_t j = 0; j < n; ++j) p(i, j) += qik * decomp.q(j, k);
        }
    }
    return p;
}

DenseMatrix pseudoinverse_matrix(const SingularDecomposition& sdec)
{
    const std::size_t m = sdec.rows();
    const std::size_t n = sdec.cols();
    DenseMatrix p(n, m);
    for (std::size_t k = 0; k < sdec.rank; ++k) {
        const double inv = 1.0 / sdec.sigmas[k];
        for (std::size_t i = 0; i < n; ++i) {
            const double vik = inv * sdec.v(i, k);
            for (std::size_t j = 0; j < m; ++j) p(i, j) += vik * sdec.u(j, k);
        }
    }
    return p;
}

}  // namespace semikrylov
