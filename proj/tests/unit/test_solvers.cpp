#include "semikrylov/solvers.hpp"

#include "semikrylov/genmat.hpp"
#include "semikrylov/oracle.hpp"
#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace sk = semikrylov;
using sk::DenseMatrix;
using sk::Method;
using sk::StopReason;
using sk::Vector;

namespace {

void expect_near(const Vector& got, const Vector& want, double tol)
{
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

void expect_consistent_lengths(const sk::SolveTrace& t)
{
    EXPECT_EQ(t.alphas.size(), t.iterations);
    EXPECT_EQ(t.betas.size(), t.iterations);
    EXPECT_EQ(t.residual_norms.size(), t.iterations + 1);
    if (t.has_vectors()) {
        EXPECT_EQ(t.iterates.size(), t.iterations + 1);
        EXPECT_EQ(t.residuals.size(), t.iterations + 1);
        EXPECT_EQ(t.directions.size(), t.iterations + 1);
    }
}

sk::Problem spsd_problem(std::size_t n, std::size_t rank, double kappa, std::uint64_t seed, double gap = 0.0,
                         sk::X0Mode mode = sk::X0Mode::zero)
{
    sk::ProblemSpec s;
    s.rows = s.cols = n;
    s.spectrum = sk::linear_spectrum(n, rank, 1.0, kappa);
    s.seed = seed;
    s.consistency_gap = gap;
    s.x0_mode = mode;
    return sk::make_problem(s);
}

sk::Problem rect_problem(std::size_t m, std::size_t n, std::size_t rank, double cond, std::uint64_t seed, double gap)
{
    sk::ProblemSpec s;
    s.kind = sk::ProblemKind::rectangular;
    s.rows = m;
    s.cols = n;
    s.spectrum = sk::linear_spectrum(std::min(m, n), rank, 1.0, cond);
    s.seed = seed;
    s.consistency_gap = gap;
    return sk::make_problem(s);
}

}  // namespace

TEST(SolverNames, RoundTrip)
{
    for (Method m : {Method::cg, Method::cgls, Method::cgne}) EXPECT_EQ(sk::parse_method(sk::to_string(m)), m);
    for (StopReason s : {StopReason::converged, StopReason::max_iters, StopReason::breakdown})
        EXPECT_EQ(sk::parse_stop_reason(sk::to_string(s)), s);
    EXPECT_THROW(sk::parse_method("gmres"), std::invalid_argument);
}

TEST(SolverConfig, Validation)
{
    sk::SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.max_iters = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.max_iters = 3;
    c.rel_tol = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.rel_tol = 1e-8;
    c.breakdown_tol = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(CgSolve, IdentityConvergesInOneStep)
{
    const auto t = sk::cg_solve(DenseMatrix::identity(3), Vector{1, 2, 3}, Vector{0, 0, 0});
    EXPECT_EQ(t.stop_reason, StopReason::converged);
    EXPECT_EQ(t.iterations, 1u);
    EXPECT_DOUBLE_EQ(t.alphas[0], 1.0);
    expect_near(t.solution, {1, 2, 3}, 1e-15);
    expect_consistent_lengths(t);
}

TEST(CgSolve, SingularDiagonalHandUnrolled)
{
    const auto a = DenseMatrix::diagonal(Vector{2, 1, 0});
    const auto t = sk::cg_solve(a, Vector{2, 1, 0}, Vector{0, 0, 0});
    EXPECT_EQ(t.stop_reason, StopReason::converged);
    EXPECT_EQ(t.iterations, 2u);
    EXPECT_NEAR(t.alphas[0], 5.0 / 9.0, 1e-15);
    EXPECT_NEAR(t.alphas[1], 0.9, 1e-15);
    EXPECT_NEAR(t.betas[0], 4.0 / 81.0, 1e-15);
    expect_near(t.iterates[2], {1, 1, 0}, 1e-14);
    // and against the oracle
    expect_near(t.solution, sk::pseudoinverse_apply(sk::symmetric_eig(a), Vector{2, 1, 0}), 1e-14);
}

TEST(CgSolve, PureNullRhsBreaksDown)
{
    const auto t = sk::cg_solve(DenseMatrix::diagonal(Vector{1, 0}), Vector{0, 1}, Vector{0, 0});
    EXPECT_EQ(t.stop_reason, StopReason::breakdown);
    EXPECT_EQ(t.iterations, 0u);
    expect_near(t.solution, {0, 0}, 0.0);
    expect_consistent_lengths(t);
}

TEST(CgSolve, ZeroRhsConvergesImmediately)
{
    const auto t = sk::cg_solve(DenseMatrix::identity(2), Vector{0, 0}, Vector{0, 0});
    EXPECT_EQ(t.stop_reason, StopReason::converged);
    EXPECT_EQ(t.iterations, 0u);
}

TEST(CgSolve, Errors)
{
    EXPECT_THROW(sk::cg_solve(DenseMatrix{{1, 2}, {0, 1}}, Vector{1, 1}, Vector{0, 0}), std::invalid_argument);
    EXPECT_THROW(sk::cg_solve(DenseMatrix::identity(2), Vector{1, 1, 1}, Vector{0, 0}), sk::DimensionError);
    EXPECT_THROW(sk::cg_solve(DenseMatrix::identity(2), Vector{1, 1}, Vector{0}), sk::DimensionError);
}

TEST(CgSolve, IterationCapDefaultsToTenTimesN)
{
    // an inconsistent system never converges; breakdown or the cap must end it
    const auto p = spsd_problem(8, 4, 10.0, 3, 0.5);
    sk::SolverConfig cfg;
    cfg.max_iters = 3;
    const auto t = sk::cg_solve(p.a, p.b, p.x0, cfg);
    EXPECT_EQ(t.stop_reason, StopReason::max_iters);
    EXPECT_EQ(t.iterations, 3u);
    const auto full = sk::cg_solve(p.a, p.b, p.x0);
    EXPECT_LE(full.iterations, 80u);
}

TEST(CgSolve, RecordTraceOffKeepsScalars)
{
    const auto p = spsd_problem(10, 6, 10.0, 4);
    sk::SolverConfig cfg;
    cfg.record_trace = false;
    const auto t = sk::cg_solve(p.a, p.b, p.x0, cfg);
    EXPECT_FALSE(t.has_vectors());
    expect_consistent_lengths(t);
    const auto full = sk::cg_solve(p.a, p.b, p.x0);
    EXPECT_EQ(t.alphas, full.alphas);
    EXPECT_EQ(t.solution, full.solution);
}

TEST(CgSolve, RecordedResidualsMatchTrueResiduals)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = spsd_problem(20, 12, 100.0, 100 + seed, 0.0, sk::X0Mode::random_full);
        const auto t = sk::cg_solve(p.a, p.b, p.x0);
        const double anorm = sk::frobenius_norm(p.a);
        for (std::size_t i = 0; i < t.iterates.size(); ++i) {
            const Vector truer = sk::subtract(p.b, sk::matvec(p.a, t.iterates[i]));
            EXPECT_LE(sk::norm2(sk::subtract(truer, t.residuals[i])),
                      1e-10 * (sk::norm2(p.b) + anorm * sk::norm2(t.iterates[i])));
        }
    }
}

TEST(CgSolve, ResidualsAreMutuallyOrthogonal)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = spsd_problem(30, 20, 100.0, 200 + seed);
        const auto t = sk::cg_solve(p.a, p.b, p.x0);
        const std::size_t k = std::min<std::size_t>({20, t.residuals.size()});
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < i; ++j)
                EXPECT_LE(std::abs(sk::dot(t.residuals[i], t.residuals[j])),
                          1e-8 * sk::norm2(t.residuals[i]) * sk::norm2(t.residuals[j]))
                    << "seed " << seed << " pair " << i << "," << j;
    }
}

TEST(CgSolve, TerminatesNearRankAndReachesMinimumNorm)
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const double kappa = seed % 2 ? 1e4 : 10.0;
        const auto p = spsd_problem(40, 20, kappa, 300 + seed);
        const auto d = sk::symmetric_eig(p.a);
        const auto t = sk::cg_solve(p.a, p.b, p.x0);
        std::size_t k = 0;
        while (k < t.residual_norms.size() && t.residual_norms[k] > 1e-10 * sk::norm2(p.b)) ++k;
        EXPECT_LE(k, 22u) << "seed " << seed;
        EXPECT_LE(testutil::rel_diff(t.solution, sk::pseudoinverse_apply(d, p.b)), 1e-8);
        for (const auto& x : t.iterates)
            EXPECT_LE(sk::norm2(sk::null_coordinates(d, x)), 1e-10 * std::max(sk::norm2(x), 1.0));
    }
}

TEST(CgSolve, NullComponentOfX0IsCarriedUnchanged)
{
    const auto p = spsd_problem(20, 10, 100.0, 400, 0.0, sk::X0Mode::random_full);
    const auto d = sk::symmetric_eig(p.a);
    const auto t = sk::cg_solve(p.a, p.b, p.x0);
    const Vector ref = sk::null_coordinates(d, p.x0);
    for (const auto& x : t.iterates)
        EXPECT_LE(sk::norm2(sk::subtract(sk::null_coordinates(d, x), ref)), 1e-10 * std::max(sk::norm2(ref), 1.0));
}

TEST(CglsSolve, RankOneOneStep)
{
    const DenseMatrix a{{1, 0}, {0, 0}, {0, 0}};
    const auto t = sk::cgls_solve(a, Vector{1, 1, 0}, Vector{0, 0});
    EXPECT_EQ(t.stop_reason, StopReason::converged);
    EXPECT_EQ(t.iterations, 1u);
    EXPECT_NEAR(t.alphas[0], 1.0, 1e-15);
    expect_near(t.solution, {1, 0}, 1e-15);
    expect_near(t.solution, sk::pinv_apply_rect(sk::svd(a), Vector{1, 1, 0}), 1e-15);
    ASSERT_EQ(t.normal_residuals.size(), 2u);
    expect_near(t.normal_residuals[0], {1, 0}, 1e-15);
}

TEST(CglsSolve, Identity)
{
    const auto t = sk::cgls_solve(DenseMatrix::identity(2), Vector{3, 4}, Vector{0, 0});
    EXPECT_EQ(t.iterations, 1u);
    expect_near(t.solution, {3, 4}, 1e-14);
}

TEST(CglsSolve, ZeroNormalResidualStopsImmediately)
{
    const auto t = sk::cgls_solve(DenseMatrix{{1}, {0}}, Vector{0, 1}, Vector{0});
    EXPECT_EQ(t.stop_reason, StopReason::converged);
    EXPECT_EQ(t.iterations, 0u);
    expect_near(t.solution, {0}, 0.0);
}

TEST(CglsSolve, Errors)
{
    EXPECT_THROW(sk::cgls_solve(DenseMatrix(3, 2), Vector{1, 1}, Vector{0, 0}), sk::DimensionError);
    EXPECT_THROW(sk::cgls_solve(DenseMatrix(3, 2), Vector{1, 1, 1}, Vector{0, 0, 0}), sk::DimensionError);
}

TEST(CglsSolve, RankDeficientLeastSquares)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = rect_problem(30, 20, 12, 50.0, 500 + seed, 0.5);
        const auto t = sk::cgls_solve(p.a, p.b, p.x0);
        const Vector atb = sk::matvec_transposed(p.a, p.b);
        const Vector atr = sk::matvec_transposed(p.a, sk::subtract(p.b, sk::matvec(p.a, t.solution)));
        EXPECT_LE(sk::norm2(atr), 1e-8 * sk::norm2(atb));
        EXPECT_LE(testutil::rel_diff(t.solution, sk::pinv_apply_rect(sk::svd(p.a), p.b)), 1e-8);
        // generator's own ground truth, independent of the SVD
        EXPECT_LE(testutil::rel_diff(t.solution, p.xstar_reference), 1e-8);
        for (std::size_t i = 0; i < t.residuals.size(); ++i) {
            const Vector truer = sk::subtract(p.b, sk::matvec(p.a, t.iterates[i]));
            EXPECT_LE(sk::norm2(sk::subtract(truer, t.residuals[i])),
                      1e-10 * (sk::norm2(p.b) + sk::frobenius_norm(p.a) * sk::norm2(t.iterates[i])));
        }
    }
}

TEST(CgneSolve, Examples)
{
    {
        const DenseMatrix a{{1, 0, 0}, {0, 0, 0}};
        const auto t = sk::cgne_solve(a, Vector{1, 0}, Vector{0, 0});
        EXPECT_EQ(t.stop_reason, StopReason::converged);
        expect_near(t.solution, sk::pinv_apply_rect(sk::svd(a), Vector{1, 0}), 1e-15);
    }
    {
        const auto t = sk::cgne_solve(DenseMatrix::identity(2), Vector{1, 1}, Vector{0, 0});
        EXPECT_EQ(t.iterations, 1u);
        expect_near(t.y_solution, {1, 1}, 1e-15);
        expect_near(t.solution, {1, 1}, 1e-15);
    }
    {
        const auto t = sk::cgne_solve(DenseMatrix{{1, 0}}, Vector{2}, Vector{0});
        EXPECT_EQ(t.iterations, 1u);
        expect_near(t.y_solution, {2}, 1e-15);
        expect_near(t.solution, {2, 0}, 1e-15);
    }
}

TEST(CgneSolve, IteratesAreImagesOfY)
{
    const auto p = rect_problem(15, 25, 10, 10.0, 600, 0.0);
    const auto t = sk::cgne_solve(p.a, p.b, p.y0);
    ASSERT_EQ(t.y_iterates.size(), t.iterates.size());
    for (std::size_t i = 0; i < t.iterates.size(); ++i) {
        EXPECT_LE(sk::norm2(sk::subtract(t.iterates[i], sk::matvec_transposed(p.a, t.y_iterates[i]))), 1e-13);
        const Vector truer = sk::subtract(p.b, sk::matvec(p.a, sk::matvec_transposed(p.a, t.y_iterates[i])));
        EXPECT_LE(sk::norm2(sk::subtract(truer, t.residuals[i])),
                  1e-10 * (sk::norm2(p.b) + sk::frobenius_norm(p.a) * sk::norm2(t.iterates[i])));
    }
}

TEST(CgneSolve, UnderdeterminedMinimumNorm)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = rect_problem(20, 30, 10, 50.0, 700 + seed, 0.0);
        const auto t = sk::cgne_solve(p.a, p.b, Vector(20, 0.0));
        EXPECT_LE(testutil::rel_diff(t.solution, sk::pinv_apply_rect(sk::svd(p.a), p.b)), 1e-8);
        EXPECT_LE(testutil::rel_diff(t.solution, p.xstar_reference), 1e-8);
    }
}

TEST(CgneSolve, Errors)
{
    EXPECT_THROW(sk::cgne_solve(DenseMatrix(2, 3), Vector{1, 1}, Vector{0, 0, 0}), sk::DimensionError);
}
