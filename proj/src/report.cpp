#include "semikrylov/report.hpp"

#include <algorithm>
#include <cstdio>

namespace semikrylov {

using nlohmann::json;

void RunReport::finalize()
{
    pass = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void to_json(json& j, const RunReport& r)
{
    const auto& s = r.per_iteration;
    j = json{
        {"command", r.command},
        {"method", r.method},
        {"dims", {r.rows, r.cols}},
        {"rank", r.rank},
        {"spectral_summary",
         {{"kind", r.spectral.kind}, {"max", r.spectral.max}, {"min", r.spectral.min}, {"ratio", r.spectral.ratio}}},
        {"stop_reason", r.stop_reason},
        {"iterations", r.iterations},
        {"per_iteration",
         {{"res_norm", s.res_norm},
          {"normal_res_norm", s.normal_res_norm},
          {"range_res_norm", s.range_res_norm},
          {"null_res_norm", s.null_res_norm},
          {"alpha", s.alpha},
          {"beta", s.beta},
          {"measured", s.measured},
          {"bound", s.bound}}},
        {"contraction_factor", r.contraction_factor ? json(*r.contraction_factor) : json(nullptr)},
        {"distances", r.distances},
        {"checks", json::array()},
        {"pass", r.pass},
        {"seed", r.seed ? json(*r.seed) : json(nullptr)},
        {"timestamp", r.timestamp},
    };
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}});
}

void from_json(const json& j, RunReport& r)
{
    j.at("command").get_to(r.command);
    j.at("method").get_to(r.method);
    const auto& dims = j.at("dims");
    r.rows = dims.at(0).get<std::size_t>();
    r.cols = dims.at(1).get<std::size_t>();
    j.at("rank").get_to(r.rank);
    const auto& sp = j.at("spectral_summary");
    sp.at("kind").get_to(r.spectral.kind);
    sp.at("max").get_to(r.spectral.max);
    sp.at("min").get_to(r.spectral.min);
    sp.at("ratio").get_to(r.spectral.ratio);
    j.at("stop_reason").get_to(r.stop_reason);
    j.at("iterations").get_to(r.iterations);
    const auto& s = j.at("per_iteration");
    auto& out = r.per_iteration;
    s.at("res_norm").get_to(out.res_norm);
    s.at("normal_res_norm").get_to(out.normal_res_norm);
    s.at("range_res_norm").get_to(out.range_res_norm);
    s.at("null_res_norm").get_to(out.null_res_norm);
    s.at("alpha").get_to(out.alpha);
    s.at("beta").get_to(out.beta);
    s.at("measured").get_to(out.measured);
    s.at("bound").get_to(out.bound);
    const auto& cf = j.at("contraction_factor");
    r.contraction_factor = cf.is_null() ? std::nullopt : std::optional<double>(cf.get<double>());
    j.at("distances").get_to(r.distances);
    r.checks.clear();
    for (const auto& c : j.at("checks")) {
        r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.at("value").get<double>(),
                            c.at("tolerance").get<double>()});
    }
    j.at("pass").get_to(r.pass);
    const auto& seed = j.at("seed");
    r.seed = seed.is_null() ? std::nullopt : std::optional<std::uint64_t>(seed.get<std::uint64_t>());
    j.at("timestamp").get_to(r.timestamp);
}

void to_json(json& j, const ProblemSpec& s)
{
    j = json{{"kind", std::string(to_string(s.kind))},
             {"dims", {s.rows, s.cols}},
             {"spectrum", s.spectrum},
             {"seed", s.seed},
             {"consistency_gap", s.consistency_gap},
             {"x0_mode", std::string(to_string(s.x0_mode))}};
}

void from_json(const json& j, ProblemSpec& s)
{
    s.kind = parse_problem_kind(j.at("kind").get<std::string>());
    const auto& dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 2) throw std::invalid_argument("dims must be [rows, cols]");
    s.rows = dims.at(0).get<std::size_t>();
    s.cols = dims.at(1).get<std::size_t>();
    const auto& spectrum = j.at("spectrum");
    if (spectrum.is_object()) {
        const bool linear = spectrum.contains("linear");
        const auto& g = linear ? spectrum.at("linear") : spectrum.at("geometric");
        const auto make = linear ? linear_spectrum : geometric_spectrum;
        s.spectrum = make(std::min(s.rows, s.cols), g.at("rank").get<std::size_t>(), g.value("top", 1.0),
                          g.at("condition").get<double>());
    } else {
        spectrum.get_to(s.spectrum);
    }
    s.seed = j.value("seed", std::uint64_t{0});
    s.consistency_gap = j.value("consistency_gap", 0.0);
    s.x0_mode = parse_x0_mode(j.value("x0_mode", std::string("zero")));
    s.validate();
}

std::string trace_csv(const IterationSeries& s)
{
    std::string out = "iter,alpha,beta,res_norm,normal_res_norm,range_res_norm,null_res_norm,"
                      "measured_bound_quantity,bound_value\n";
    const std::size_t rows = std::max({s.res_norm.size(), s.normal_res_norm.size(), s.range_res_norm.size(),
                                       s.null_res_norm.size(), s.alpha.size(), s.beta.size(), s.measured.size(),
                                       s.bound.size()});
    char buf[32];
    auto cell = [&](const std::vector<double>& v, std::size_t i) {
        out += ',';
        if (i < v.size()) {
            std::snprintf(buf, sizeof buf, "%.17g", v[i]);
            out += buf;
        }
    };
    for (std::size_t i = 0; i < rows; ++i) {
        out += std::to_string(i);
        cell(s.alpha, i);
        cell(s.beta, i);
        cell(s.res_norm, i);
        cell(s.normal_res_norm, i);
        cell(s.range_res_norm, i);
        cell(s.null_res_norm, i);
        cell(s.measured, i);
        cell(s.bound, i);
        out += '\n';
    }
    return out;
}

}  // namespace semikrylov
