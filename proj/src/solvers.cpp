#include "semikrylov/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace semikrylov {

std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::cg: return "cg";
    case Method::cgls: return "cgls";
    case Method::cgne: return "cgne";
    }
    return "?";
}

std::string_view to_string(StopReason s) noexcept
{
    switch (s) {
    case StopReason::converged: return "converged";
    case StopReason::max_iters: return "max_iters";
    case StopReason::breakdown: return "breakdown";
    }
    return "?";
}

Method parse_method(std::string_view s)
{
    if (s == "cg") return Method::cg;
    if (s == "cgls") return Method::cgls;
    if (s == "cgne") return Method::cgne;
    throw std::invalid_argument("unknown method '" + std::string(s) + "' (expected cg, cgls or cgne)");
}

StopReason parse_stop_reason(std::string_view s)
{
    if (s == "converged") return StopReason::converged;
    if (s == "max_iters") return StopReason::max_iters;
    if (s == "breakdown") return StopReason::breakdown;
    throw std::invalid_argument("unknown stop reason '" + std::string(s) + "'");
}

void SolverConfig::validate() const
{
    if (max_iters && *max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
    if (!(breakdown_tol > 0.0)) throw std::invalid_argument("breakdown_tol must be positive");
}

namespace {

void require(bool ok, const std::string& msg)
{
    if (!ok) throw DimensionError(msg);
}

struct Product {
    Vector value;      // operator applied to p
    double curvature;  // (Op, p)
};

// The CG recurrence on a symmetric operator. `apply` returns Op and (Op, p);
// `observe` records method-specific data for iterate index i.
template <class Apply, class Observe>
void run_cg(SolveTrace& trace, Apply apply, Observe observe, std::span<const double> b, Vector x,
            const SolverConfig& cfg, std::size_t max_iters)
{
    Vector r = subtract(b, apply(x).value);
    Vector p = r;
    double rr = dot(r, r);
    const double stop = cfg.rel_tol * std::max(norm2(b), 1.0);

    auto record = [&] {
        trace.residual_norms.push_back(std::sqrt(rr));
        if (cfg.record_trace) {
            trace.iterates.push_back(x);
            trace.residuals.push_back(r);
            trace.directions.push_back(p);
        }
        observe(x, cfg.record_trace);
    };
    record();

    std::size_t i = 0;
    for (;; ++i) {
        if (std::sqrt(rr) <= stop) {
            trace.stop_reason = StopReason::converged;
            break;
        }
        if (i >= max_iters) {
            trace.stop_reason = StopReason::max_iters;
            break;
        }
        const Product ap = apply(p);
        if (ap.curvature <= cfg.breakdown_tol * dot(p, p)) {
            trace.stop_reason = StopReason::breakdown;
            break;
        }
        const double alpha = rr / ap.curvature;
        axpy(alpha, p, x);
        axpy(-alpha, ap.value, r);
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
        rr = rr_next;
        trace.alphas.push_back(alpha);
        trace.betas.push_back(beta);
        record();
    }
    trace.iterations = i;
}

}  // namespace

SolveTrace cg_solve(const DenseMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const SolverConfig& cfg)
{
    cfg.validate();
    require(a.square(), "cg_solve: matrix is not square");
    if (!is_symmetric(a)) throw std::invalid_argument("cg_solve: matrix is not symmetric");
    require(b.size() == a.rows(), "cg_solve: rhs length does not match matrix");
    require(x0.size() == a.cols(), "cg_solve: x0 length does not match matrix");

    SolveTrace trace;
    trace.method = Method::cg;
    trace.rhs.assign(b.begin(), b.end());
    Vector x_final;
    auto apply = [&](std::span<const double> p) {
        Vector ap = matvec(a, p);
        const double curvature = dot(ap, p);
        return Product{std::move(ap), curvature};
    };
    auto observe = [&](const Vector& x, bool) { x_final = x; };
    run_cg(trace, apply, observe, b, Vector(x0.begin(), x0.end()), cfg,
           cfg.max_iters.value_or(10 * a.rows()));
    trace.solution = std::move(x_final);
    return trace;
}

SolveTrace cgne_solve(const DenseMatrix& a, std::span<const double> b, std::span<const double> y0,
                      const SolverConfig& cfg)
{
    cfg.validate();
    require(b.size() == a.rows(), "cgne_solve: rhs length does not match matrix rows");
    require(y0.size() == a.rows(), "cgne_solve: y0 length does not match matrix rows");

    SolveTrace trace;
    trace.method = Method::cgne;
    trace.rhs.assign(b.begin(), b.end());
    Vector y_final;
    // (AAᵀp, p) = ‖Aᵀp‖², so the curvature is evaluated from the inner product.
    auto apply = [&](std::span<const double> p) {
        const Vector atp = matvec_transposed(a, p);
        return Product{matvec(a, atp), dot(atp, atp)};
    };
    auto observe = [&](const Vector& y, bool record) {
        y_final = y;
        if (record) {
            trace.y_iterates.push_back(y);
            trace.iterates.back() = matvec_transposed(a, y);
        }
    };
    run_cg(trace, apply, observe, b, Vector(y0.begin(), y0.end()), cfg,
           cfg.max_iters.value_or(10 * a.rows()));
    trace.y_solution = y_final;
    trace.solution = matvec_transposed(a, y_final);
    return trace;
}

SolveTrace cgls_solve(const DenseMatrix& a, std::span<const double> b, std::span<const double> x0,
                      const SolverConfig& cfg)
{
    cfg.validate();
    require(b.size() == a.rows(), "cgls_solve: rhs length does not match matrix rows");
    require(x0.size() == a.cols(), "cgls_solve: x0 length does not match matrix columns");

    SolveTrace trace;
    trace.method = Method::cgls;
    trace.rhs.assign(b.begin(), b.end());
    const std::size_t max_iters = cfg.max_iters.value_or(10 * a.cols());
    const double stop = cfg.rel_tol * std::max(norm2(matvec_transposed(a, b)), 1.0);

    Vector x(x0.begin(), x0.end());
    Vector r = subtract(b, matvec(a, x));
    Vector s = matvec_transposed(a, r);
    Vector p = s;
    double gamma = dot(s, s);

    auto record = [&] {
        trace.residual_norms.push_back(norm2(r));
        trace.normal_residual_norms.push_back(std::sqrt(gamma));
        if (cfg.record_trace) {
            trace.iterates.push_back(x);
            trace.residuals.push_back(r);
            trace.directions.push_back(p);
            trace.normal_residuals.push_back(s);
        }
    };
    record();

    std::size_t i = 0;
    for (;; ++i) {
        if (gamma <= stop * stop) {
            trace.stop_reason = StopReason::converged;
            break;
        }
        if (i >= max_iters) {
            trace.stop_reason = StopReason::max_iters;
            break;
        }
        const Vector q = matvec(a, p);
        const double qq = dot(q, q);
        if (qq <= cfg.breakdown_tol * dot(p, p)) {
            trace.stop_reason = StopReason::breakdown;
            break;
        }
        const double alpha = gamma / qq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        s = matvec_transposed(a, r);
        const double gamma_next = dot(s, s);
        const double beta = gamma_next / gamma;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = s[k] + beta * p[k];
        gamma = gamma_next;
        trace.alphas.push_back(alpha);
        trace.betas.push_back(beta);
        record();
    }
    trace.iterations = i;
    trace.solution = std::move(x);
    return trace;
}

}  // namespace semikrylov
