#include "semikrylov/genmat.hpp"

#include "semikrylov/oracle.hpp"
#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace sk = semikrylov;
using sk::DenseMatrix;
using sk::Vector;

namespace {

sk::ProblemSpec spsd(Vector spectrum, std::uint64_t seed, double gap = 0.0)
{
    sk::ProblemSpec s;
    s.rows = s.cols = spectrum.size();
    s.spectrum = std::move(spectrum);
    s.seed = seed;
    s.consistency_gap = gap;
    return s;
}

sk::ProblemSpec rect(std::size_t m, std::size_t n, Vector sigmas, std::uint64_t seed, double gap = 0.0)
{
    sk::ProblemSpec s;
    s.kind = sk::ProblemKind::rectangular;
    s.rows = m;
    s.cols = n;
    s.spectrum = std::move(sigmas);
    s.seed = seed;
    s.consistency_gap = gap;
    return s;
}

}  // namespace

TEST(NormalRng, Deterministic)
{
    sk::NormalRng a(5), b(5), c(6);
    const Vector va = a.normal_vector(16);
    EXPECT_EQ(va, b.normal_vector(16));
    EXPECT_NE(va, c.normal_vector(16));
}

TEST(NormalRng, UniformRangeAndMoments)
{
    sk::NormalRng r(9);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.05);
    EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(GenmatNames, RoundTrip)
{
    for (auto k : {sk::ProblemKind::spsd, sk::ProblemKind::rectangular})
        EXPECT_EQ(sk::parse_problem_kind(sk::to_string(k)), k);
    for (auto m : {sk::X0Mode::zero, sk::X0Mode::random_range, sk::X0Mode::random_full})
        EXPECT_EQ(sk::parse_x0_mode(sk::to_string(m)), m);
    EXPECT_THROW(sk::parse_problem_kind("banded"), std::invalid_argument);
    EXPECT_THROW(sk::parse_x0_mode("ones"), std::invalid_argument);
}

TEST(RandomOrthogonal, OneByOne)
{
    const DenseMatrix q = sk::random_orthogonal(1, 3);
    EXPECT_EQ(std::abs(q(0, 0)), 1.0);
}

TEST(RandomOrthogonal, OrthonormalAndDeterministic)
{
    for (std::size_t n : {2u, 7u, 30u, 60u}) {
        const DenseMatrix q = sk::random_orthogonal(n, 100 + n);
        EXPECT_LE(sk::orthogonality_error(q), 1e-12) << n;
        EXPECT_EQ(q, sk::random_orthogonal(n, 100 + n));
    }
    EXPECT_NE(sk::random_orthogonal(5, 1), sk::random_orthogonal(5, 2));
    EXPECT_THROW(sk::random_orthogonal(0, 1), std::invalid_argument);
}

TEST(Spectra, GeometricAndLinear)
{
    const Vector g = sk::geometric_spectrum(5, 3, 2.0, 100.0);
    EXPECT_NEAR(g[0], 2.0, 1e-15);
    EXPECT_NEAR(g[1], 0.2, 1e-15);
    EXPECT_EQ(g[2], 0.02);
    EXPECT_EQ(g[3], 0.0);
    const Vector l = sk::linear_spectrum(4, 3, 1.0, 10.0);
    EXPECT_NEAR(l[1], 0.55, 1e-15);
    EXPECT_EQ(l[2], 0.1);
    EXPECT_EQ(l[3], 0.0);
    EXPECT_EQ(sk::linear_spectrum(2, 1, 3.0, 10.0), (Vector{3.0, 0.0}));
    EXPECT_THROW(sk::linear_spectrum(2, 3, 1.0, 10.0), std::invalid_argument);
    EXPECT_THROW(sk::geometric_spectrum(3, 2, 1.0, 0.5), std::invalid_argument);
}

TEST(ProblemSpec, Validation)
{
    EXPECT_NO_THROW(spsd({2, 1, 0}, 1).validate());
    EXPECT_THROW(spsd({1, 2, 0}, 1).validate(), std::invalid_argument);
    EXPECT_THROW(spsd({1, -1}, 1).validate(), std::invalid_argument);
    auto s = spsd({1, 0}, 1);
    s.cols = 3;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    EXPECT_THROW(rect(3, 2, {1, 1, 1}, 1).validate(), std::invalid_argument);
    EXPECT_THROW(spsd({1, 0}, 1, -0.5).validate(), std::invalid_argument);
}

TEST(MakeProblem, EigenRoundtripSmall)
{
    const auto p = sk::make_problem(spsd({2, 1, 0}, 7));
    const auto d = sk::symmetric_eig(p.a);
    EXPECT_NEAR(d.lambdas[0], 2.0, 1e-10);
    EXPECT_NEAR(d.lambdas[1], 1.0, 1e-10);
    EXPECT_NEAR(d.lambdas[2], 0.0, 1e-10);
    EXPECT_EQ(d.rank, 2u);
    EXPECT_EQ(p.rank, 2u);
}

TEST(MakeProblem, IdentitySpectrumGivesIdentity)
{
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const auto p = sk::make_problem(spsd({1, 1, 1}, seed));
        EXPECT_LE(sk::max_abs(sk::subtract(p.a, DenseMatrix::identity(3))), 1e-12);
    }
}

TEST(MakeProblem, RectangularGapIsPlacedExactly)
{
    const auto p = sk::make_problem(rect(3, 2, {2, 1}, 11, 0.5));
    const auto g = sk::symmetric_eig(sk::multiply(p.a, p.a.transpose()));
    EXPECT_NEAR(sk::consistency_check(g, p.b).null_norm, 0.5, 1e-10);
}

TEST(MakeProblem, GapRequiresNullSpace)
{
    EXPECT_THROW(sk::make_problem(spsd({2, 1}, 1, 0.1)), std::invalid_argument);
    EXPECT_THROW(sk::make_problem(rect(2, 3, {2, 1}, 1, 0.1)), std::invalid_argument);
}

TEST(MakeProblem, SpectrumRoundtripProperty)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t n = 5 + seed * 3;
        const std::size_t r = 1 + seed % (n - 1);
        const Vector spec = sk::geometric_spectrum(n, r, 3.0, 1e3);
        const auto p = sk::make_problem(spsd(spec, 900 + seed, 0.25));
        EXPECT_TRUE(sk::is_symmetric(p.a));
        const auto d = sk::symmetric_eig(p.a);
        EXPECT_EQ(d.rank, r);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(d.lambdas[i], spec[i], 1e-10 * spec[0]);
        EXPECT_NEAR(sk::consistency_check(d, p.b).null_norm, 0.25, 0.25 * 1e-12 + 1e-12);
    }
}

TEST(MakeProblem, SingularValueRoundtripProperty)
{
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::size_t m = 4 + seed * 2, n = 3 + seed * 3;
        const std::size_t k = std::min(m, n);
        const std::size_t r = 1 + seed % k;
        const Vector sig = sk::linear_spectrum(k, r, 2.0, 50.0);
        const double gap = r < m ? 0.75 : 0.0;
        const auto p = sk::make_problem(rect(m, n, sig, 950 + seed, gap));
        const auto s = sk::svd(p.a);
        EXPECT_EQ(s.rank, r);
        for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(s.sigmas[i], sig[i], 1e-10 * sig[0]);
        EXPECT_NEAR(sk::consistency_check(s, p.b).null_norm, gap, 1e-12 * std::max(gap, 1.0));
    }
}

TEST(MakeProblem, ReferenceSolutionMatchesOracle)
{
    const auto p = sk::make_problem(rect(12, 8, sk::linear_spectrum(8, 5, 1.0, 20.0), 31, 0.3));
    EXPECT_LE(testutil::rel_diff(p.xstar_reference, sk::pinv_apply_rect(sk::svd(p.a), p.b)), 1e-12);
    const auto q = sk::make_problem(spsd(sk::linear_spectrum(10, 6, 1.0, 20.0), 32, 0.3));
    EXPECT_LE(testutil::rel_diff(q.xstar_reference, sk::pseudoinverse_apply(sk::symmetric_eig(q.a), q.b)), 1e-12);
}

TEST(MakeProblem, X0Modes)
{
    auto s = spsd(sk::linear_spectrum(10, 6, 1.0, 10.0), 40);
    EXPECT_EQ(sk::norm2(sk::make_problem(s).x0), 0.0);

    s.x0_mode = sk::X0Mode::random_range;
    const auto pr = sk::make_problem(s);
    const auto d = sk::symmetric_eig(pr.a);
    EXPECT_GT(sk::norm2(pr.x0), 0.0);
    EXPECT_LE(sk::norm2(sk::null_coordinates(d, pr.x0)), 1e-12 * sk::norm2(pr.x0));

    s.x0_mode = sk::X0Mode::random_full;
    const auto pf = sk::make_problem(s);
    EXPECT_GT(sk::norm2(sk::null_coordinates(d, pf.x0)), 1e-3);
    EXPECT_EQ(pf.y0.size(), 10u);
    // A and b do not depend on the x0 mode
    EXPECT_EQ(pf.a, pr.a);
    EXPECT_EQ(pf.b, pr.b);
}

TEST(MakeProblem, RectangularRangeModeUsesRowSpace)
{
    auto s = rect(9, 6, sk::linear_spectrum(6, 4, 1.0, 10.0), 41);
    s.x0_mode = sk::X0Mode::random_range;
    const auto p = sk::make_problem(s);
    const auto sv = sk::svd(p.a);
    EXPECT_LE(sk::norm2(sk::project_onto_columns(sv.v, p.x0, sv.rank, 6)), 1e-12 * sk::norm2(p.x0));
    EXPECT_LE(sk::norm2(sk::project_onto_columns(sv.u, p.y0, sv.rank, 9)), 1e-12 * sk::norm2(p.y0));
}

TEST(MakeProblem, BitIdenticalForIdenticalSpecs)
{
    auto s = rect(7, 5, {3, 2, 1, 0, 0}, 77, 0.4);
    s.x0_mode = sk::X0Mode::random_full;
    const auto p1 = sk::make_problem(s);
    const auto p2 = sk::make_problem(s);
    EXPECT_EQ(p1.a, p2.a);
    EXPECT_EQ(p1.b, p2.b);
    EXPECT_EQ(p1.x0, p2.x0);
    EXPECT_EQ(p1.y0, p2.y0);
    EXPECT_EQ(p1.xstar_reference, p2.xstar_reference);
}
