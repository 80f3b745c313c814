#include "semikrylov/cli.hpp"

#include "semikrylov/bounds.hpp"
#include "semikrylov/decomposition.hpp"
#include "semikrylov/matrix_market.hpp"
#include "semikrylov/oracle.hpp"
#include "semikrylov/report.hpp"
#include "semikrylov/solvers.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>

namespace semikrylov {

namespace {

using nlohmann::json;

constexpr const char* kSeedEnv = "SEMIKRYLOV_SEED";

struct ProblemOptions {
    std::string matrix;
    std::string rhs;
    std::string spec;
    std::string x0;
    std::optional<std::uint64_t> seed;
    double rank_tol = kDefaultRankTol;
};

struct SolveOptions {
    std::string method;
    std::optional<std::size_t> max_iters;
    double rel_tol = 1e-12;
    std::string out;
    std::string trace_csv;
};

struct LoadedProblem {
    DenseMatrix a{1, 1};
    Vector b;
    // Initial guesses from a spec; absent for file-based input.
    std::optional<Vector> x0;
    std::optional<Vector> y0;
    std::optional<std::uint64_t> seed;
};

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ProblemSpec read_spec_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("invalid JSON in '" + path + "': " + e.what());
    }
    return j.get<ProblemSpec>();
}

// --seed beats SEMIKRYLOV_SEED, which beats the seed in the spec file.
void apply_seed_override(ProblemSpec& spec, const std::optional<std::uint64_t>& flag)
{
    if (flag) {
        spec.seed = *flag;
        return;
    }
    if (const char* env = std::getenv(kSeedEnv); env && *env) {
        std::size_t used = 0;
        const std::string text(env);
        std::uint64_t v = 0;
        try {
            v = std::stoull(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || text.front() == '-')
            throw std::invalid_argument(std::string(kSeedEnv) + " is not an unsigned integer: '" + text + "'");
        spec.seed = v;
    }
}

LoadedProblem load_problem(const ProblemOptions& o)
{
    LoadedProblem p;
    if (!o.spec.empty()) {
        if (!o.matrix.empty() || !o.rhs.empty())
            throw CLI::ValidationError("--spec", "cannot be combined with --matrix/--rhs");
        ProblemSpec spec = read_spec_file(o.spec);
        apply_seed_override(spec, o.seed);
        Problem gen = make_problem(spec);
        p.a = std::move(gen.a);
        p.b = std::move(gen.b);
        p.x0 = std::move(gen.x0);
        p.y0 = std::move(gen.y0);
        p.seed = spec.seed;
    } else {
        if (o.matrix.empty() || o.rhs.empty())
            throw CLI::ValidationError("input", "either --spec or both --matrix and --rhs are required");
        p.a = read_matrix_market_file(o.matrix);
        p.b = read_vector_file(o.rhs);
        p.seed = o.seed;
    }
    return p;
}

// Resolves --x0 (zero | file:<path>) for a guess of length n; `fallback` is the spec's guess.
Vector initial_guess(const std::string& flag, std::size_t n, const std::optional<Vector>& fallback)
{
    Vector v;
    if (flag.empty()) {
        v = fallback ? *fallback : Vector(n, 0.0);
    } else if (flag == "zero") {
        v.assign(n, 0.0);
    } else if (flag.rfind("file:", 0) == 0) {
        v = read_vector_file(flag.substr(5));
    } else {
        throw CLI::ValidationError("--x0", "expected 'zero' or 'file:<path>', got '" + flag + "'");
    }
    if (v.size() != n)
        throw DimensionError("initial guess has length " + std::to_string(v.size()) + ", expected " +
                             std::to_string(n));
    return v;
}

double relative_distance(std::span<const double> x, std::span<const double> ref)
{
    const double nr = norm2(ref);
    const double d = norm2(subtract(x, ref));
    return nr > 0.0 ? d / nr : d;
}

SpectralSummary summarize(std::string kind, std::span<const double> values, std::size_t rank)
{
    SpectralSummary s;
    s.kind = std::move(kind);
    if (rank > 0) {
        s.max = values[0];
        s.min = values[rank - 1];
        s.ratio = s.max / s.min;
    }
    return s;
}

void fill_solver_series(RunReport& rep, const SolveTrace& t)
{
    rep.method = std::string(to_string(t.method));
    rep.stop_reason = std::string(to_string(t.stop_reason));
    rep.iterations = t.iterations;
    rep.per_iteration.res_norm = t.residual_norms;
    rep.per_iteration.normal_res_norm = t.normal_residual_norms;
    rep.per_iteration.alpha = t.alphas;
    rep.per_iteration.beta = t.betas;
}

// Range/null split of every residual against columns [0, rank) and [rank, end) of `basis`.
void fill_residual_split(RunReport& rep, const SolveTrace& t, const DenseMatrix& basis, std::size_t rank)
{
    for (const auto& r : t.residuals) {
        rep.per_iteration.range_res_norm.push_back(norm2(project_onto_columns(basis, r, 0, rank)));
        rep.per_iteration.null_res_norm.push_back(norm2(project_onto_columns(basis, r, rank, basis.cols())));
    }
}

SolverConfig solver_config(const SolveOptions& s)
{
    SolverConfig cfg;
    cfg.max_iters = s.max_iters;
    cfg.rel_tol = s.rel_tol;
    cfg.record_trace = true;
    return cfg;
}

struct MethodRun {
    SolveTrace trace;
    std::optional<SpectralDecomposition> eig;
    std::optional<SingularDecomposition> sing;
    Vector xstar;
};

// Runs the requested solver and the matching oracle, filling the common report fields.
MethodRun run_method(RunReport& rep, const LoadedProblem& p, const ProblemOptions& po, const SolveOptions& so)
{
    const Method method = parse_method(so.method);
    const SolverConfig cfg = solver_config(so);
    MethodRun run;
    rep.rows = p.a.rows();
    rep.cols = p.a.cols();
    rep.seed = p.seed;
    if (method == Method::cg) {
        const Vector x0 = initial_guess(po.x0, p.a.cols(), p.x0);
        run.trace = cg_solve(p.a, p.b, x0, cfg);
        run.eig = symmetric_eig(p.a, po.rank_tol);
        const auto& d = *run.eig;
        run.xstar = pseudoinverse_apply(d, p.b);
        rep.rank = d.rank;
        rep.spectral = summarize("eigen", d.lambdas, d.rank);
        fill_solver_series(rep, run.trace);
        fill_residual_split(rep, run.trace, d.q, d.rank);
        rep.distances["rhs_null_component"] = consistency_check(d, p.b).null_norm;
        rep.distances["solution_null_component"] = norm2(null_coordinates(d, run.trace.solution));
    } else {
        run.sing = svd(p.a, po.rank_tol);
        const auto& s = *run.sing;
        run.xstar = pinv_apply_rect(s, p.b);
        if (method == Method::cgls) {
            const Vector x0 = initial_guess(po.x0, p.a.cols(), p.x0);
            run.trace = cgls_solve(p.a, p.b, x0, cfg);
        } else {
            const Vector y0 = initial_guess(po.x0, p.a.rows(), p.y0);
            run.trace = cgne_solve(p.a, p.b, y0, cfg);
        }
        rep.rank = s.rank;
        rep.spectral = summarize("singular", s.sigmas, s.rank);
        fill_solver_series(rep, run.trace);
        fill_residual_split(rep, run.trace, s.u, s.rank);
        rep.distances["rhs_null_component"] = consistency_check(s, p.b).null_norm;
        rep.distances["solution_null_component"] =
            norm2(project_onto_columns(s.v, run.trace.solution, s.rank, s.cols()));
    }
    rep.distances["solution_to_pinv_rel"] = relative_distance(run.trace.solution, run.xstar);
    return run;
}

int emit(const RunReport& rep, const std::string& out_path, const std::string& csv_path, std::ostream& out)
{
    const std::string text = json(rep).dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
    } else {
        write_file_atomic(out_path, text);
    }
    if (!csv_path.empty()) write_file_atomic(csv_path, trace_csv(rep.per_iteration));
    return rep.pass ? kExitPass : kExitCheckFailed;
}

void add_problem_options(CLI::App* cmd, ProblemOptions& o)
{
    cmd->add_option("--matrix", o.matrix, "Matrix Market file for A");
    cmd->add_option("--rhs", o.rhs, "Matrix Market n x 1 file for b");
    cmd->add_option("--spec", o.spec, "ProblemSpec JSON to generate A, b, x0 from");
    cmd->add_option("--x0", o.x0, "Initial guess: zero | file:<path> (y0 for cgne)");
    cmd->add_option("--seed", o.seed, "Override the spec seed");
    cmd->add_option("--rank-tol", o.rank_tol, "Relative numerical rank threshold")->check(CLI::PositiveNumber);
}

void add_solver_options(CLI::App* cmd, SolveOptions& s, bool need_method)
{
    auto* m = cmd->add_option("--method", s.method, "cg | cgls | cgne")
                  ->check(CLI::IsMember({"cg", "cgls", "cgne"}));
    if (need_method) m->required();
    cmd->add_option("--max-iters", s.max_iters, "Iteration cap (default 10 x system size)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rel-tol", s.rel_tol, "Relative stopping tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--out", s.out, "Report path (stdout when omitted)");
    cmd->add_option("--trace-csv", s.trace_csv, "Per-iteration CSV path");
}

int cmd_solve(const ProblemOptions& po, const SolveOptions& so, std::ostream& out)
{
    RunReport rep;
    rep.command = "solve";
    rep.timestamp = utc_timestamp();
    const LoadedProblem p = load_problem(po);
    const MethodRun run = run_method(rep, p, po, so);
    rep.checks.push_back({"converged", run.trace.stop_reason == StopReason::converged,
                          run.trace.residual_norms.back(), so.rel_tol});
    rep.finalize();
    return emit(rep, so.out, so.trace_csv, out);
}

int cmd_verify_bounds(const ProblemOptions& po, const SolveOptions& so, std::ostream& out)
{
    RunReport rep;
    rep.command = "verify-bounds";
    rep.timestamp = utc_timestamp();
    const LoadedProblem p = load_problem(po);
    const MethodRun run = run_method(rep, p, po, so);

    BoundReport br;
    if (run.trace.method == Method::cg) {
        br = cg_bound_verify(run.trace, *run.eig);
        // measured[k] against √(rₖᵀA†rₖ) with A† assembled explicitly.
        const DenseMatrix pinv = pseudoinverse_matrix(*run.eig);
        double worst = 0.0;
        for (std::size_t k = 0; k < br.measured.size(); ++k) {
            if (!(br.measured[k] > 1e-10 * br.measured[0])) break;
            const auto& r = run.trace.residuals[k];
            const double direct = std::sqrt(std::max(dot(r, matvec(pinv, r)), 0.0));
            worst = std::max(worst, std::abs(br.measured[k] - direct) / br.measured[k]);
        }
        rep.checks.push_back({"energy_identity", worst <= 1e-9, worst, 1e-9});
    } else if (run.trace.method == Method::cgls) {
        br = cgls_bound_verify(run.trace, *run.sing, run.xstar);
    } else {
        br = cgne_bound_verify(run.trace, *run.sing);
    }
    rep.per_iteration.measured = br.measured;
    rep.per_iteration.bound = br.bound;
    rep.contraction_factor = br.contraction_factor;
    rep.checks.push_back({std::string(to_string(br.kind)) + "_bound", br.pass,
                          static_cast<double>(br.violations.size()), 0.0});
    rep.finalize();
    return emit(rep, so.out, so.trace_csv, out);
}

int cmd_diagnose(const ProblemOptions& po, std::size_t iters, double tol, const SolveOptions& so,
                 std::ostream& out)
{
    RunReport rep;
    rep.command = "diagnose";
    rep.timestamp = utc_timestamp();
    const LoadedProblem p = load_problem(po);
    SolveOptions capped = so;
    capped.method = "cg";
    capped.max_iters = iters;
    const MethodRun run = run_method(rep, p, po, capped);
    const auto& decomp = *run.eig;
    const Vector x0 = run.trace.iterates.front();

    const DecomposedTrace dtrace = decomposed_cg_run(decomp, p.b, x0, iters);
    try {
        const EquivalenceReport eq = equivalence_check(run.trace, dtrace, decomp, tol);
        rep.checks.push_back({"equivalence", eq.pass, eq.max_deviation, tol});
        rep.distances["equivalence_iterations_compared"] = static_cast<double>(eq.iterations_compared);
    } catch (const std::invalid_argument&) {
        // Nothing to compare: the plain run stopped at iteration 0.
        rep.distances["equivalence_iterations_compared"] = 0.0;
    }

    constexpr double kStagnationTol = 1e-10;
    if (dtrace.consistent_case) {
        const double drift = max_null_drift(decomp, run.trace.iterates, x0);
        rep.checks.push_back({"null_iterate_stagnation", drift <= kStagnationTol, drift, kStagnationTol});
        bool exact = true;
        for (std::size_t i = 0; i < dtrace.p2.size(); ++i) {
            exact = exact && dtrace.x2[i] == dtrace.x2.front();
            for (double e : dtrace.p2[i]) exact = exact && e == 0.0;
        }
        rep.checks.push_back({"decomposed_null_block_frozen", exact, exact ? 0.0 : 1.0, 0.0});
    } else {
        const double drift = max_null_drift(decomp, run.trace.residuals, p.b);
        rep.checks.push_back({"null_residual_stagnation", drift <= kStagnationTol, drift, kStagnationTol});
        const ConfinementReport conf = null_direction_confinement(dtrace, tol);
        rep.checks.push_back({"null_direction_confinement", conf.pass, conf.max_angle, tol});
    }
    rep.finalize();
    return emit(rep, so.out, so.trace_csv, out);
}

int cmd_generate(const std::string& spec_path, const std::optional<std::uint64_t>& seed,
                 const std::string& out_dir, std::ostream& out)
{
    ProblemSpec spec = read_spec_file(spec_path);
    apply_seed_override(spec, seed);
    const Problem prob = make_problem(spec);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "a.mtx", write_matrix_market(prob.a));
    write_file_atomic(dir / "b.mtx", write_matrix_market(DenseMatrix::column(prob.b)));
    write_file_atomic(dir / "x0.mtx", write_matrix_market(DenseMatrix::column(prob.x0)));
    write_file_atomic(dir / "y0.mtx", write_matrix_market(DenseMatrix::column(prob.y0)));
    write_file_atomic(dir / "xstar.mtx", write_matrix_market(DenseMatrix::column(prob.xstar_reference)));
    write_file_atomic(dir / "spec.json", json(spec).dump(2) + "\n");
    out << json{{"command", "generate"},
                {"dir", dir.string()},
                {"dims", {spec.rows, spec.cols}},
                {"rank", prob.rank},
                {"seed", spec.seed}}
               .dump(2)
        << "\n";
    return kExitPass;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"CG, CGLS and CGNE on singular and rank-deficient systems, with spectral diagnostics"};
    app.name("semikrylov");
    app.require_subcommand(1);

    ProblemOptions po;
    SolveOptions so;
    std::size_t diag_iters = 20;
    double diag_tol = 1e-8;
    std::string gen_spec;
    std::string gen_dir;
    std::optional<std::uint64_t> gen_seed;

    auto* solve = app.add_subcommand("solve", "Run one solver and compare with the pseudoinverse solution");
    add_problem_options(solve, po);
    add_solver_options(solve, so, true);

    auto* diagnose = app.add_subcommand("diagnose", "Decomposed-CG equivalence and null-space structure");
    add_problem_options(diagnose, po);
    add_solver_options(diagnose, so, false);
    diagnose->add_option("--iters", diag_iters, "Iterations to run")->check(CLI::PositiveNumber);
    diagnose->add_option("--tol", diag_tol, "Equivalence and confinement tolerance")->check(CLI::PositiveNumber);

    auto* bounds = app.add_subcommand("verify-bounds", "Check measured errors against the convergence bounds");
    add_problem_options(bounds, po);
    add_solver_options(bounds, so, true);

    auto* generate = app.add_subcommand("generate", "Emit a.mtx, b.mtx, x0.mtx, y0.mtx, xstar.mtx from a spec");
    generate->add_option("--spec", gen_spec, "ProblemSpec JSON")->required();
    generate->add_option("--out-dir", gen_dir, "Output directory")->required();
    generate->add_option("--seed", gen_seed, "Override the spec seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(po, so, out);
        if (diagnose->parsed()) return cmd_diagnose(po, diag_iters, diag_tol, so, out);
        if (bounds->parsed()) return cmd_verify_bounds(po, so, out);
        return cmd_generate(gen_spec, gen_seed, gen_dir, out);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitUsage;
}

}  // namespace semikrylov
