#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "webdir/error.hpp"
#include "webdir/io.hpp"
#include "webdir/simulation.hpp"

namespace {

using namespace webdir;

int cmd_build(const std::string& resources_path, double mindist_h,
              double mindist_v, double sim_floor, bool horizontal_first,
              const std::string& topics_path, const std::string& overrides_path,
              const std::string& out_path, const std::string& log_path) {
    std::vector<Resource> resources = ingest_resources(resources_path);
    std::vector<TopicSeed> topics;
    if (!topics_path.empty())
        topics = load_topic_seeds(topics_path);
    AssignmentHook hook = identity_hook();
    if (!overrides_path.empty())
        hook = override_hook(load_assign_overrides(overrides_path));

    ThresholdConfig cfg;
    cfg.mindist_h = mindist_h;
    cfg.mindist_v = mindist_v;
    cfg.sim_floor = sim_floor;
    cfg.branch_order = horizontal_first ? BranchOrder::HorizontalFirst
                                        : BranchOrder::VerticalFirst;

    BuildResult result = build_directory(resources, cfg, hook, topics);
    std::string log_ref =
        log_path.empty()
            ? std::string{}
            : std::filesystem::path(log_path).filename().string();
    save_schema_file({result.directory, result.binding, log_ref}, out_path);
    if (!log_path.empty())
        save_build_log(result.log, log_path);

    std::cout << "placed " << resources.size() << " resources into "
              << result.directory.category_count() << " categories (depth "
              << result.directory.depth() << ")\n";
    return 0;
}

int cmd_audit(const std::string& schema_path, const std::string& traces_path,
              bool bypass, bool undirected, double sim_floor,
              double ddp_tolerance, const std::string& out_path,
              const std::string& out_json_path) {
    auto [wd, binding] = load_schema(schema_path);
    if (undirected)
        wd.set_cross_link_traversal(CrossLinkTraversal::Undirected);
    std::vector<BrowseTrace> traces = load_traces(traces_path);

    MetricsOptions options;
    options.bypass_non_semantic = bypass;
    options.sim_floor = sim_floor;
    options.ddp_tolerance = ddp_tolerance;

    std::vector<MetricsReport> reports;
    reports.reserve(traces.size());
    for (const BrowseTrace& t : traces)
        reports.push_back(evaluate_trace(wd, binding, t, options));
    AggregateSummary summary = aggregate(reports);

    write_text_file(out_path, report_csv(reports, summary));
    if (!out_json_path.empty())
        write_text_file(out_json_path,
                        report_json(reports, summary).dump(2) + "\n");

    std::cout << "traces: " << summary.total
              << "  mean PR: " << format_number(summary.pr.mean)
              << "  mean MR: " << format_number(summary.mr.mean)
              << "  truncated: " << summary.truncated << "\n";
    return 0;
}

int cmd_simulate(const std::string& schema_path, const std::string& strategy,
                 const std::string& targets_arg, std::size_t reps,
                 std::uint64_t seed, std::size_t budget, double sim_floor,
                 bool undirected, const std::string& traces_path,
                 const std::string& report_path) {
    auto [wd, binding] = load_schema(schema_path);
    if (undirected)
        wd.set_cross_link_traversal(CrossLinkTraversal::Undirected);

    SimulationRun run;
    run.directory = &wd;
    run.binding = &binding;
    if (strategy == "bfs")
        run.strategy.kind = StrategyKind::OptimalBfs;
    else if (strategy == "greedy")
        run.strategy.kind = StrategyKind::GreedySemantic;
    else if (strategy == "random")
        run.strategy.kind = StrategyKind::RandomWalk;
    else
        throw Error(Errc::ParseError,
                    "strategy must be bfs, greedy or random");
    run.strategy.rng_seed = seed;
    run.strategy.step_budget = budget;

    if (targets_arg == "all") {
        for (const auto& [id, c] : wd.categories())
            for (const auto& r : c.resources)
                run.targets.push_back(r);
        std::sort(run.targets.begin(), run.targets.end());
    } else {
        std::string cur;
        for (char ch : targets_arg + ",") {
            if (ch == ',') {
                if (!cur.empty())
                    run.targets.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
    }
    if (run.targets.empty())
        throw Error(Errc::UnknownTarget, "no targets to browse for");

    MetricsOptions options;
    options.sim_floor = sim_floor;
    ExperimentResult result = run_experiment_full(run, reps, options);
    AggregateSummary summary = aggregate(result.reports);

    if (!traces_path.empty())
        save_traces(result.traces, traces_path);
    if (!report_path.empty())
        write_text_file(report_path, report_csv(result.reports, summary));

    std::cout << "traces: " << summary.total
              << "  mean PR: " << format_number(summary.pr.mean)
              << "  mean MR: " << format_number(summary.mr.mean)
              << "  truncated: " << summary.truncated << "\n";
    return 0;
}

int cmd_export(const std::string& schema_path, const std::string& dot_path) {
    auto [wd, binding] = load_schema(schema_path);
    export_dot(wd, dot_path);
    std::cout << "wrote " << dot_path << "\n";
    return 0;
}

int cmd_validate(const std::string& schema_path, double epsilon,
                 bool check_ideality) {
    // load without the validity gate: this command reports problems as data
    auto doc = nlohmann::json::parse(read_text_file(schema_path));
    WebDirectory wd;
    SemanticsBinding binding;
    try {
        DirectorySchema schema = schema_from_json(doc);
        wd = std::move(schema.directory);
        binding = std::move(schema.binding);
    } catch (const Error& e) {
        if (e.code() != Errc::SchemaInvalid)
            throw;
        std::cout << e.message() << "\n";
        return 0;
    }
    auto violations = wd.validate();
    if (violations.empty())
        std::cout << "structure: ok (" << wd.category_count()
                  << " categories, depth " << wd.depth() << ")\n";
    for (const auto& v : violations)
        std::cout << violation_name(v.kind) << " (category " << v.category
                  << "): " << v.detail << "\n";
    if (check_ideality) {
        EpsilonConfig cfg;
        cfg.epsilon = epsilon;
        IdealityReport report = ideality_audit(wd, binding, cfg);
        std::cout << "ideal: " << (report.ideal ? "yes" : "no")
                  << "  realistically ideal (epsilon="
                  << format_number(epsilon) << "): "
                  << (report.realistically_ideal ? "yes" : "no") << "\n";
        for (const auto& [id, gap] : report.gaps)
            if (gap > 0.0)
                std::cout << "  gap at category " << id << ": "
                          << format_number(gap) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"build and evaluate Web-directory category structures"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand(
        "build", "construct a directory from a resource stream");
    std::string resources_path, topics_path, overrides_path, out_path,
        log_path;
    double mindist_h = 1.0, mindist_v = 1.0, sim_floor = webdir::kDefaultSimFloor;
    bool horizontal_first = false;
    build->add_option("--resources", resources_path, "resource JSONL")
        ->required();
    build->add_option("--mindist-h", mindist_h, "sibling distance threshold")
        ->required();
    build->add_option("--mindist-v", mindist_v, "child distance threshold")
        ->required();
    build->add_option("--seed-topics", topics_path, "topic seed JSON");
    build->add_option("--assign-overrides", overrides_path,
                      "resource id -> vector overrides JSON");
    build->add_option("--out", out_path, "output schema JSON")->required();
    build->add_option("--log", log_path, "output build log JSON");
    build->add_option("--sim-floor", sim_floor, "similarity clamp");
    build->add_flag("--horizontal-first", horizontal_first,
                    "give the sibling threshold precedence");

    // audit
    auto* audit = app.add_subcommand(
        "audit", "score recorded browse traces against a schema");
    std::string schema_path, traces_path, out_json_path;
    bool bypass = false, undirected = false;
    double ddp_tolerance = 1e-6;
    audit->add_option("--schema", schema_path, "schema JSON")->required();
    audit->add_option("--traces", traces_path, "trace JSONL")->required();
    audit->add_flag("--bypass-non-semantic", bypass,
                    "contract flagged levels before scoring");
    audit->add_flag("--undirected-cross-links", undirected,
                    "treat cross-links as two-way");
    audit->add_option("--out", out_path, "report CSV")->required();
    audit->add_option("--out-json", out_json_path, "report JSON");
    audit->add_option("--sim-floor", sim_floor, "similarity clamp");
    audit->add_option("--ddp-tolerance", ddp_tolerance,
                      "|final DDP sum| counted as converged");

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "generate browse traces with an agent");
    std::string strategy = "bfs", targets_arg = "all", out_traces_path,
        out_report_path;
    std::size_t reps = 1, budget = 0;
    std::uint64_t seed = 0;
    simulate->add_option("--schema", schema_path, "schema JSON")->required();
    simulate->add_option("--strategy", strategy, "bfs | greedy | random");
    simulate->add_option("--targets", targets_arg,
                         "'all' or comma-separated resource ids");
    simulate->add_option("--reps", reps, "repetitions per target");
    simulate->add_option("--seed", seed, "base RNG seed");
    simulate->add_option("--budget", budget,
                         "move budget per trace (0 = 10 x depth)");
    simulate->add_option("--sim-floor", sim_floor, "similarity clamp");
    simulate->add_flag("--undirected-cross-links", undirected,
                       "treat cross-links as two-way");
    simulate->add_option("--out-traces", out_traces_path, "trace JSONL");
    simulate->add_option("--out-report", out_report_path, "report CSV");

    // export
    auto* export_cmd = app.add_subcommand("export", "write a Graphviz view");
    std::string dot_path;
    export_cmd->add_option("--schema", schema_path, "schema JSON")->required();
    export_cmd->add_option("--dot", dot_path, "output DOT file")->required();

    // validate
    auto* validate_cmd = app.add_subcommand(
        "validate", "check structural invariants (and optionally ideality)");
    double epsilon = 0.0;
    bool check_ideality = false;
    validate_cmd->add_option("--schema", schema_path, "schema JSON")
        ->required();
    validate_cmd
        ->add_option("--epsilon", epsilon, "ideality slack")
        ->check(CLI::NonNegativeNumber);
    validate_cmd->add_flag("--check-ideality", check_ideality,
                           "also audit semantic ideality");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(build))
            return cmd_build(resources_path, mindist_h, mindist_v, sim_floor,
                             horizontal_first, topics_path, overrides_path,
                             out_path, log_path);
        if (app.got_subcommand(audit))
            return cmd_audit(schema_path, traces_path, bypass, undirected,
                             sim_floor, ddp_tolerance, out_path,
                             out_json_path);
        if (app.got_subcommand(simulate))
            return cmd_simulate(schema_path, strategy, targets_arg, reps,
                                seed, budget, sim_floor, undirected,
                                out_traces_path, out_report_path);
        if (app.got_subcommand(export_cmd))
            return cmd_export(schema_path, dot_path);
        if (app.got_subcommand(validate_cmd))
            return cmd_validate(schema_path, epsilon,
                                check_ideality || epsilon > 0.0);
    } catch (const webdir::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
