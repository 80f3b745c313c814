#include "semikrylov/bounds.hpp"

#include "semikrylov/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace semikrylov {

std::string_view to_string(BoundKind k) noexcept
{
    switch (k) {
    case BoundKind::cg_energy: return "cg_energy";
    case BoundKind::cgls_range_residual: return "cgls_range_residual";
    case BoundKind::cgne_energy: return "cgne_energy";
    }
    return "?";
}

double cg_contraction_factor(double lambda_max, double lambda_min)
{
    if (!(lambda_min > 0.0) || lambda_max < lambda_min)
        throw std::invalid_argument("cg_contraction_factor: need lambda_max >= lambda_min > 0");
    const double sk = std::sqrt(lambda_max / lambda_min);
    return (sk - 1.0) / (sk + 1.0);
}

double normal_contraction_factor(double sigma_max, double sigma_min)
{
    if (!(sigma_min > 0.0) || sigma_max < sigma_min)
        throw std::invalid_argument("normal_contraction_factor: need sigma_max >= sigma_min > 0");
    return (sigma_max - sigma_min) / (sigma_max + sigma_min);
}

void evaluate_bound(BoundReport& report)
{
    const double m0 = report.measured.empty() ? 0.0 : report.measured.front();
    const double rho = report.contraction_factor;
    report.bound.assign(report.measured.size(), 0.0);
    report.violations.clear();
    for (std::size_t k = 0; k < report.measured.size(); ++k)
        report.bound[k] = 2.0 * std::pow(rho, static_cast<double>(k)) * m0;
    for (std::size_t k = 0; k < report.measured.size(); ++k) {
        const double mk = report.measured[k];
        if (mk < kBoundCutoff * m0) break;
        if (mk > report.bound[k] * (1.0 + kBoundRelSlack) + kBoundAbsFloor * m0)
            report.violations.push_back({k, mk, report.bound[k]});
    }
    report.pass = report.violations.empty();
}

namespace {

void require_vectors(const SolveTrace& trace, Method expected, const char* who)
{
    if (trace.method != expected)
        throw std::invalid_argument(std::string(who) + ": trace comes from " + std::string(to_string(trace.method)));
    if (!trace.has_vectors()) throw std::invalid_argument(std::string(who) + ": trace has no recorded vectors");
}

// Σ (ukᵀv)² · weight(k) over the first `rank` columns of U.
template <class Weight>
double weighted_range_form(const DenseMatrix& u, std::size_t rank, std::span<const double> v, Weight weight)
{
    double s = 0.0;
    for (std::size_t k = 0; k < rank; ++k) {
        double c = 0.0;
        for (std::size_t i = 0; i < u.rows(); ++i) c += u(i, k) * v[i];
        s += weight(k) * c * c;
    }
    return s;
}

}  // namespace

BoundReport cg_bound_verify(const SolveTrace& trace, const SpectralDecomposition& decomp)
{
    require_vectors(trace, Method::cg, "cg_bound_verify");
    if (trace.rhs.size() != decomp.dimension()) throw DimensionError("cg_bound_verify: dimension mismatch");
    if (decomp.rank == 0) throw std::invalid_argument("cg_bound_verify: zero-rank operator");
    const auto consistency = consistency_check(decomp, trace.rhs);
    if (!consistency.consistent) {
        throw std::invalid_argument("cg_bound_verify: right-hand side is inconsistent (null component " +
                                    std::to_string(consistency.null_norm) + ")");
    }

    BoundReport rep;
    rep.kind = BoundKind::cg_energy;
    const double lmax = decomp.lambdas.front();
    const double lmin = decomp.lambdas[decomp.rank - 1];
    rep.kappa_or_sigmas = {lmax, lmin};
    rep.contraction_factor = cg_contraction_factor(lmax, lmin);
    for (const auto& r : trace.residuals) {
        const double form = weighted_range_form(decomp.q, decomp.rank, r,
                                                [&](std::size_t k) { return 1.0 / decomp.lambdas[k]; });
        rep.measured.push_back(std::sqrt(form));
    }
    evaluate_bound(rep);
    return rep;
}

BoundReport cgls_bound_verify(const SolveTrace& trace, const SingularDecomposition& sdec,
                              std::span<const double> xstar)
{
    require_vectors(trace, Method::cgls, "cgls_bound_verify");
    if (sdec.rank == 0) throw std::invalid_argument("cgls_bound_verify: zero-rank operator");
    if (xstar.size() != sdec.cols()) throw DimensionError("cgls_bound_verify: xstar length mismatch");

    BoundReport rep;
    rep.kind = BoundKind::cgls_range_residual;
    const double smax = sdec.sigmas.front();
    const double smin = sdec.sigmas[sdec.rank - 1];
    rep.kappa_or_sigmas = {smax, smin};
    rep.contraction_factor = normal_contraction_factor(smax, smin);
    for (const auto& x : trace.iterates) {
        // ‖A e‖² = Σ σₖ² (vₖᵀe)²
        const Vector e = subtract(x, xstar);
        const double form = weighted_range_form(sdec.v, sdec.rank, e,
                                                [&](std::size_t k) { return sdec.sigmas[k] * sdec.sigmas[k]; });
        rep.measured.push_back(std::sqrt(form));
    }
    evaluate_bound(rep);
    return rep;
}

BoundReport cgne_bound_verify(const SolveTrace& trace, const SingularDecomposition& sdec)
{
    require_vectors(trace, Method::cgne, "cgne_bound_verify");
    if (sdec.rank == 0) throw std::invalid_argument("cgne_bound_verify: zero-rank operator");
    if (trace.rhs.size() != sdec.rows()) throw DimensionError("cgne_bound_verify: dimension mismatch");
    const auto consistency = consistency_check(sdec, trace.rhs);
    if (!consistency.consistent) {
        throw std::invalid_argument("cgne_bound_verify: right-hand side is inconsistent (null component " +
                                    std::to_string(consistency.null_norm) + ")");
    }

    BoundReport rep;
    rep.kind = BoundKind::cgne_energy;
    const double smax = sdec.sigmas.front();
    const double smin = sdec.sigmas[sdec.rank - 1];
    rep.kappa_or_sigmas = {smax, smin};
    rep.contraction_factor = normal_contraction_factor(smax, smin);
    for (const auto& r : trace.residuals) {
        rep.measured.push_back(weighted_range_form(sdec.u, sdec.rank, r, [&](std::size_t k) {
            return 1.0 / (sdec.sigmas[k] * sdec.sigmas[k]);
        }));
    }
    evaluate_bound(rep);
    return rep;
}

}  // namespace semikrylov
