// rigidlab: command-line front end for frameworks, bipartite stress analysis,
// curve families and distinct-distance censuses.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rigidlab/bipartite.hpp"
#include "rigidlab/census.hpp"
#include "rigidlab/checks.hpp"
#include "rigidlab/curves.hpp"
#include "rigidlab/framework.hpp"
#include "rigidlab/io.hpp"

namespace {

using rigidlab::io::json;
namespace rl = rigidlab;

struct GlobalOptions {
    std::string mode = "floating";
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::size_t grid = 64;
    std::size_t trials = 20;
    std::string output;

    rl::RankPolicy policy() const { return {rl::parse_mode(mode), tol, seed}; }

    json to_json() const {
        return {{"mode", rl::to_string(rl::parse_mode(mode))}, {"tol", tol}, {"seed", seed}, {"grid", grid},
                {"trials", trials}};
    }
};

json points_json(const std::vector<rl::Point>& pts) { return rl::io::points_to_json(pts); }

json vector_json(const rl::Vector& v) {
    json arr = json::array();
    for (const auto& s : v) arr.push_back(rl::io::scalar_to_json(s));
    return arr;
}

json profile_json(const rl::DerivativeProfile& p) {
    json arr = json::array();
    for (const auto& o : p.orders)
        arr.push_back({{"order", o.order}, {"min_norm", o.min_norm}, {"max_norm", o.max_norm}, {"spread", o.spread}});
    return arr;
}

json analyze(const std::string& path, const GlobalOptions& g, double perturbation) {
    const auto f = rl::io::framework_from_json(rl::io::read_json_file(path));
    const auto policy = g.policy();
    const auto report = rl::infinitesimal_rigidity(f, policy);
    const auto probe = rl::regularity_probe(f, g.trials, perturbation, policy);
    return {{"vertices", f.vertex_count()},
            {"edges", f.graph().edges.size()},
            {"dimension", f.dim()},
            {"rigidity_rank", report.rigidity_rank},
            {"kernel_dim", report.kernel_dim},
            {"trivial_dim", report.trivial_dim},
            {"affine_span_dim", report.affine_span_dim},
            {"is_infinitesimally_rigid", report.is_infinitesimally_rigid},
            {"edge_function", vector_json(rl::edge_function(f))},
            {"regularity_probe",
             {{"trials", g.trials},
              {"perturbation", perturbation},
              {"rank_at_p", probe.rank_at_p},
              {"max_rank_seen", probe.max_rank_seen},
              {"is_regular_estimate", probe.is_regular_estimate}}}};
}

json bipartite_json(const rl::BolkerRothReport& r) {
    json j = {{"dimDA", r.dimDA},
              {"dimDB", r.dimDB},
              {"C_points", points_json(r.C_points)},
              {"k", r.k},
              {"dimC_span", r.dimC_span},
              {"dimQC", r.dimQC},
              {"dim_omega_direct", r.dim_omega_direct},
              {"kernel_dim_direct", r.kernel_dim_direct},
              {"kernel_dim_via_stress", r.kernel_dim_via_stress},
              {"trivial_dim", r.trivial_dim},
              {"classification", rl::to_string(r.classification)}};
    j["dim_omega_formula"] = r.dim_omega_formula ? json(*r.dim_omega_formula) : json(nullptr);
    j["formula_matches_direct"] = r.dim_omega_formula ? json(r.formula_matches_direct()) : json(nullptr);
    j["kernel_identity_holds"] = r.kernel_dim_via_stress == static_cast<long>(r.kernel_dim_direct);
    return j;
}

json curve_report(const std::string& path, const GlobalOptions& g, int k, std::size_t samples) {
    const auto c = rl::io::curve_from_json(rl::io::read_json_file(path));
    json j;
    j["curve"] = rl::io::curve_to_json(c);
    const auto q = rl::qk_membership(c, k, g.grid, g.tol);
    j["qk"] = {{"k", k}, {"grid", g.grid}, {"is_member_estimate", q.is_member_estimate},
               {"profile", profile_json(q.profile)}};
    if (samples == 0) samples = 3 * rl::quadric_coefficient_count(c.dim());
    const auto fit = rl::quadric_containment(c, samples, g.policy());
    if (fit) {
        j["quadric"] = {{"found", true}, {"samples", samples}, {"dimension", fit->basis.size()},
                        {"coefficients", fit->coefficients}, {"fresh_residual", fit->fresh_residual}};
    } else {
        j["quadric"] = {{"found", false}, {"samples", samples}, {"dimension", 0}};
    }
    return j;
}

json family_report(const std::string& path1, const std::string& path2, const std::vector<double>& x0,
                   const std::vector<double>& y0, const std::vector<double>& deltas, const std::string& out_dir,
                   const GlobalOptions& g) {
    const auto c1 = rl::io::curve_from_json(rl::io::read_json_file(path1));
    const auto c2 = rl::io::curve_from_json(rl::io::read_json_file(path2));
    const auto family = rl::sliding_family(c1, c2, x0, y0, deltas);
    const auto eq = rl::family_equivalence(family, g.tol);
    const auto law = rl::translation_invariance_check(c1, c2, g.grid, g.tol);
    json files = json::array();
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        for (std::size_t i = 0; i < family.size(); ++i) {
            std::ostringstream name;
            name << "family_" << std::setw(3) << std::setfill('0') << i << ".json";
            const auto file = (std::filesystem::path(out_dir) / name.str()).string();
            rl::io::write_file_atomic(file, rl::io::dump(rl::io::bipartite_to_json(family[i])));
            files.push_back(file);
        }
    }
    return {{"m", x0.size()},
            {"n", y0.size()},
            {"deltas", deltas},
            {"files", files},
            {"pairwise_equivalent", eq.pairwise_equivalent},
            {"max_edge_discrepancy", eq.max_discrepancy},
            {"translation_invariance_holds", law.holds}};
}

json census_report(const std::string& path1, const std::string& path2, const std::vector<std::size_t>& schedule,
                   const std::string& sampler, const std::string& csv_path, const GlobalOptions& g) {
    const auto c1 = rl::io::curve_from_json(rl::io::read_json_file(path1));
    const auto c2 = rl::io::curve_from_json(rl::io::read_json_file(path2));
    const auto run = rl::growth_fit(c1, c2, schedule, rl::parse_sampler(sampler), g.tol, g.seed);
    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "n,distinct_count,sizeA,sizeB,sizeC,triple_count,seconds\n";
        for (const auto& r : run.rows)
            csv << r.n << ',' << r.distinct_count << ',' << r.triples.sizeA << ',' << r.triples.sizeB << ','
                << r.triples.sizeC << ',' << r.triples.triple_count << ',' << r.seconds << '\n';
        rl::io::write_file_atomic(csv_path, csv.str());
    }
    json rows = json::array();
    for (const auto& r : run.rows)
        rows.push_back({{"n", r.n}, {"distinct_count", r.distinct_count}, {"sizeA", r.triples.sizeA},
                        {"sizeB", r.triples.sizeB}, {"sizeC", r.triples.sizeC},
                        {"triple_count", r.triples.triple_count}, {"max_fiber_A", r.triples.max_fiber_A},
                        {"max_fiber_B", r.triples.max_fiber_B}});
    return {{"sampler", sampler},
            {"rows", rows},
            {"growth_fit",
             {{"schedule", run.fit.schedule},
              {"counts", run.fit.counts},
              {"slope", run.fit.slope},
              {"intercept", run.fit.intercept},
              {"residual", run.fit.residual}}},
            {"warnings", run.warnings},
            {"csv", csv_path}};
}

json selfcheck(const GlobalOptions& g, bool& all_passed) {
    namespace ck = rl::checks;
    std::vector<ck::CheckResult> results;
    results.push_back(ck::bolker_roth_equality(30, 8, g.seed));
    results.push_back(ck::kernel_identity(30, 8, g.seed));
    results.push_back(ck::quadric_dichotomy(10, g.seed));
    results.push_back(ck::trivial_motions_in_kernel(20, g.seed));
    results.push_back(ck::affine_identity(100, g.seed));
    results.push_back(ck::helix_properties(10, g.seed));
    results.push_back(ck::sliding_families(10, g.seed));
    const auto contrast = ck::run_contrast({32, 64, 128}, 5, g.seed);
    results.push_back(ck::distinct_distance_contrast(contrast));
    results.push_back(ck::triple_lower_bound(contrast, 50, g.seed));
    results.push_back(ck::exact_small_counts());
    json arr = json::array();
    all_passed = true;
    for (const auto& r : results) {
        all_passed = all_passed && r.passed;
        arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    return {{"checks", arr}, {"all_passed", all_passed}};
}

void emit(const json& report, const std::string& output) {
    const std::string text = rl::io::dump(report);
    if (output.empty())
        std::cout << text;
    else
        rl::io::write_file_atomic(output, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rigidlab: rigidity and distinct-distance experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    if (const char* env = std::getenv("RIGIDLAB_SEED")) {
        try {
            g.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "ignoring malformed RIGIDLAB_SEED='" << env << "'\n";
        }
    }
    app.add_option("--mode", g.mode, "arithmetic mode: floating | exact")->capture_default_str();
    app.add_option("--tol", g.tol, "relative singular-value cutoff / comparison tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized probes and samplers (env RIGIDLAB_SEED)")->capture_default_str();
    app.add_option("--grid", g.grid, "sample grid size for curve checks")->capture_default_str();
    app.add_option("--trials", g.trials, "regularity probe trials")->capture_default_str();
    app.add_option("-o,--output", g.output, "report path (stdout when omitted)");

    std::string input, input2, out_dir, csv, sampler = "uniform";
    double perturbation = 1e-3;
    int k = 1;
    std::size_t samples = 0;
    std::vector<double> x0, y0, deltas{0.0, 0.1, 0.2};
    std::vector<std::size_t> schedule{64, 128, 256, 512};

    auto* analyze_cmd = app.add_subcommand("analyze", "infinitesimal rigidity of a framework file");
    analyze_cmd->add_option("framework", input, "framework JSON file")->required()->check(CLI::ExistingFile);
    analyze_cmd->add_option("--perturbation", perturbation, "regularity probe perturbation size")->capture_default_str();

    auto* bipartite_cmd = app.add_subcommand("bipartite", "stress space and quadric classification of K_{m,n}");
    bipartite_cmd->add_option("realization", input, "bipartite JSON file")->required()->check(CLI::ExistingFile);

    auto* curve_cmd = app.add_subcommand("curve", "derivative-norm profile and quadric containment of a curve");
    curve_cmd->add_option("curve", input, "curve JSON file")->required()->check(CLI::ExistingFile);
    curve_cmd->add_option("--k", k, "Q_k class to test")->capture_default_str();
    curve_cmd->add_option("--samples", samples, "samples for quadric containment (default 3x coefficient count)");

    auto* family_cmd = app.add_subcommand("family", "sliding family of K_{m,n} realizations on two curves");
    family_cmd->add_option("curve1", input, "first curve JSON file")->required()->check(CLI::ExistingFile);
    family_cmd->add_option("curve2", input2, "second curve JSON file")->required()->check(CLI::ExistingFile);
    family_cmd->add_option("--x0", x0, "base parameters on curve1")->required()->delimiter(',');
    family_cmd->add_option("--y0", y0, "base parameters on curve2")->required()->delimiter(',');
    family_cmd->add_option("--deltas", deltas, "parameter shifts")->delimiter(',')->capture_default_str();
    family_cmd->add_option("--out-dir", out_dir, "directory for family_NNN.json bipartite files");

    auto* census_cmd = app.add_subcommand("census", "distinct-distance census and growth fit over a schedule");
    census_cmd->add_option("curve1", input, "first curve JSON file")->required()->check(CLI::ExistingFile);
    census_cmd->add_option("curve2", input2, "second curve JSON file")->required()->check(CLI::ExistingFile);
    census_cmd->add_option("--schedule", schedule, "point counts per curve")->delimiter(',')->capture_default_str();
    census_cmd->add_option("--sampler", sampler, "uniform | equispaced | integer")->capture_default_str();
    census_cmd->add_option("--csv", csv, "CSV output path");

    auto* selfcheck_cmd = app.add_subcommand("selfcheck", "run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);

    json report;
    report["error"] = nullptr;
    bool ok = true;
    try {
        report["config"] = g.to_json();
        if (analyze_cmd->parsed()) {
            report["verb"] = "analyze";
            report["config"]["input"] = input;
            report["config"]["perturbation"] = perturbation;
            report["result"] = analyze(input, g, perturbation);
        } else if (bipartite_cmd->parsed()) {
            report["verb"] = "bipartite";
            report["config"]["input"] = input;
            const auto br = rl::io::bipartite_from_json(rl::io::read_json_file(input));
            const auto r = rl::bolker_roth_report(br, g.policy());
            report["result"] = bipartite_json(r);
            if (r.classification == rl::Classification::C_not_spanning) {
                report["error"] = {{"code", "C_not_spanning"},
                                   {"message", "boundary set does not affinely span R^d; formula not applicable"}};
                ok = false;
            }
        } else if (curve_cmd->parsed()) {
            report["verb"] = "curve";
            report["config"]["input"] = input;
            report["config"]["k"] = k;
            report["config"]["samples"] = samples;
            report["result"] = curve_report(input, g, k, samples);
        } else if (family_cmd->parsed()) {
            report["verb"] = "family";
            report["config"]["inputs"] = {input, input2};
            report["config"]["x0"] = x0;
            report["config"]["y0"] = y0;
            report["config"]["deltas"] = deltas;
            report["config"]["out_dir"] = out_dir;
            report["result"] = family_report(input, input2, x0, y0, deltas, out_dir, g);
        } else if (census_cmd->parsed()) {
            report["verb"] = "census";
            report["config"]["inputs"] = {input, input2};
            report["config"]["schedule"] = schedule;
            report["config"]["sampler"] = sampler;
            report["config"]["csv"] = csv;
            report["result"] = census_report(input, input2, schedule, sampler, csv, g);
        } else if (selfcheck_cmd->parsed()) {
            report["verb"] = "selfcheck";
            bool passed = false;
            report["result"] = selfcheck(g, passed);
            if (!passed) {
                report["error"] = {{"code", "selfcheck_failed"}, {"message", "one or more invariant checks failed"}};
                ok = false;
            }
        }
    } catch (const rl::Error& e) {
        report["error"] = {{"code", e.code()}, {"message", e.what()}};
        ok = false;
    } catch (const std::exception& e) {
        report["error"] = {{"code", "internal"}, {"message", e.what()}};
        ok = false;
    }

    try {
        emit(report, g.output);
    } catch (const std::exception& e) {
        std::cerr << "failed to write report: " << e.what() << "\n";
        return 1;
    }
    return ok ? 0 : 1;
}
