#include "semikrylov/decomposition.hpp"

#include "semikrylov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semikrylov {

DecomposedTrace decomposed_cg_run(const SpectralDecomposition& decomp, std::span<const double> b,
                                  std::span<const double> x0, std::size_t iters,
                                  double breakdown_tol, double consistency_tol)
{
    const std::size_t n = decomp.dimension();
    if (b.size() != n || x0.size() != n) throw DimensionError("decomposed_cg_run: length mismatch");
    const std::size_t r = decomp.rank;

    DecomposedTrace t;
    t.b1 = range_coordinates(decomp, b);
    t.b2 = null_coordinates(decomp, b);
    t.consistent_case = consistency_check(decomp, b, consistency_tol).consistent;
    if (t.consistent_case) std::fill(t.b2.begin(), t.b2.end(), 0.0);
    const double b2b2 = dot(t.b2, t.b2);

    Vector x1 = range_coordinates(decomp, x0);
    Vector x2 = null_coordinates(decomp, x0);
    Vector r1 = t.b1;
    for (std::size_t k = 0; k < r; ++k) r1[k] -= decomp.lambdas[k] * x1[k];
    Vector p1 = r1;
    Vector p2 = t.b2;

    auto record = [&] {
        t.x1.push_back(x1);
        t.r1.push_back(r1);
        t.p1.push_back(p1);
        t.x2.push_back(x2);
        t.r2.push_back(t.b2);
        t.p2.push_back(p2);
    };
    record();

    double rr = dot(r1, r1) + b2b2;
    std::size_t i = 0;
    for (; i < iters; ++i) {
        double curvature = 0.0;
        for (std::size_t k = 0; k < r; ++k) curvature += p1[k] * decomp.lambdas[k] * p1[k];
        if (curvature <= breakdown_tol * (dot(p1, p1) + dot(p2, p2))) {
            t.stop_reason = StopReason::breakdown;
            break;
        }
        const double alpha = rr / curvature;
        for (std::size_t k = 0; k < r; ++k) {
            x1[k] += alpha * p1[k];
            r1[k] -= alpha * decomp.lambdas[k] * p1[k];
        }
        if (!t.consistent_case) axpy(alpha, p2, x2);
        const double rr_next = dot(r1, r1) + b2b2;
        const double beta = rr_next / rr;
        for (std::size_t k = 0; k < r; ++k) p1[k] = r1[k] + beta * p1[k];
        if (!t.consistent_case)
            for (std::size_t k = 0; k < p2.size(); ++k) p2[k] = t.b2[k] + beta * p2[k];
        rr = rr_next;
        t.alphas.push_back(alpha);
        t.betas.push_back(beta);
        record();
    }
    if (i == iters) t.stop_reason = StopReason::max_iters;
    t.iterations = i;
    return t;
}

namespace {

double vector_deviation(std::span<const double> got, std::span<const double> reference)
{
    return norm2(subtract(got, reference)) / std::max(norm2(reference), 1.0);
}

double scalar_deviation(double got, double reference)
{
    const double diff = std::abs(got - reference);
    return reference == 0.0 ? diff : diff / std::abs(reference);
}

}  // namespace

EquivalenceReport equivalence_check(const SolveTrace& trace, const DecomposedTrace& dtrace,
                                    const SpectralDecomposition& decomp, double tol)
{
    if (trace.method != Method::cg) throw std::invalid_argument("equivalence_check: trace is not from cg_solve");
    if (!trace.has_vectors()) throw std::invalid_argument("equivalence_check: trace has no recorded vectors");
    if (trace.rhs.size() != decomp.dimension()) throw DimensionError("equivalence_check: dimension mismatch");

    const std::size_t last = std::min(trace.iterates.size(), dtrace.x1.size()) - 1;
    const double horizon = 1e-12 * norm2(dtrace.b1);
    std::size_t h = 0;
    while (h < last && !(norm2(dtrace.r1[h]) < horizon)) ++h;
    // h: last vector index compared; scalars are compared for completed iterations below h.
    if (h == 0) throw std::invalid_argument("equivalence_check: no comparable iterations");

    EquivalenceReport rep;
    double worst = 0.0;
    for (std::size_t i = 0; i <= h; ++i) {
        const SplitVector x = split(decomp, trace.iterates[i]);
        const SplitVector r = split(decomp, trace.residuals[i]);
        const SplitVector p = split(decomp, trace.directions[i]);
        worst = std::max({worst, vector_deviation(x.range_part, dtrace.x1[i]),
                          vector_deviation(x.null_part, dtrace.x2[i]),
                          vector_deviation(r.range_part, dtrace.r1[i]),
                          vector_deviation(r.null_part, dtrace.r2[i]),
                          vector_deviation(p.range_part, dtrace.p1[i]),
                          vector_deviation(p.null_part, dtrace.p2[i])});
        // beta_i is built from r_{i+1}, so the step that crosses the horizon contributes alpha only.
        if (i < h) worst = std::max(worst, scalar_deviation(trace.alphas[i], dtrace.alphas[i]));
        if (i + 1 < h) worst = std::max(worst, scalar_deviation(trace.betas[i], dtrace.betas[i]));
    }
    rep.max_deviation = worst;
    rep.iterations_compared = h;
    rep.pass = worst <= tol;
    return rep;
}

ConfinementReport null_direction_confinement(const DecomposedTrace& dtrace, double tol)
{
    const double b2_norm = norm2(dtrace.b2);
    if (dtrace.consistent_case || b2_norm == 0.0) {
        throw std::invalid_argument(
            "null_direction_confinement: b2 = 0 (consistent case); check p2 = 0 and x2 = x2_0 instead");
    }
    ConfinementReport rep;
    if (dtrace.b2.size() > 1) {
        const Vector unit = scaled(1.0 / b2_norm, dtrace.b2);
        for (const auto& p2 : dtrace.p2) {
            const double np = norm2(p2);
            if (np <= tol * b2_norm) continue;
            Vector perp = p2;
            axpy(-dot(unit, p2), unit, perp);
            rep.max_angle = std::max(rep.max_angle, norm2(perp) / np);
        }
    }
    rep.pass = rep.max_angle <= tol;
    return rep;
}

double max_null_drift(const SpectralDecomposition& decomp, const std::vector<Vector>& vs,
                      std::span<const double> reference)
{
    const Vector ref = null_coordinates(decomp, reference);
    const double scale = std::max(norm2(ref), 1.0);
    double worst = 0.0;
    for (const auto& v : vs) worst = std::max(worst, norm2(subtract(null_coordinates(decomp, v), ref)) / scale);
    return worst;
}

}  // namespace semikrylov
