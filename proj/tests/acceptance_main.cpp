// Acceptance suite: reproduces the committed worked examples and the
// statistical properties end to end, one pass/fail line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "webdir/error.hpp"
#include "webdir/io.hpp"
#include "webdir/simulation.hpp"

using namespace webdir;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures{WEBDIR_FIXTURE_DIR};
const std::string kCli{WEBDIR_CLI_PATH};

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok)
        throw CheckFailure(what);
}

std::string num(double v) { return format_number(v); }

// ---------------------------------------------------------------- helpers

struct RandomWorld {
    WebDirectory wd;
    SemanticsBinding binding;
    std::vector<CategoryId> ids;
};

RandomWorld random_world(std::mt19937& rng, std::size_t n,
                         std::size_t cross_attempts) {
    RandomWorld w;
    w.binding.bind(w.wd.root(), {});
    w.ids.push_back(w.wd.root());
    std::uniform_int_distribution<int> token(0, 9);
    std::uniform_int_distribution<int> weight(1, 4);
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, w.ids.size() - 1);
        CategoryId c =
            w.wd.add_category(w.ids[pick(rng)], "/c" + std::to_string(i));
        w.wd.add_resource(c, "r" + std::to_string(i));
        std::map<std::string, double> weights;
        int k = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < k; ++j)
            weights["t" + std::to_string(token(rng))] = weight(rng);
        w.binding.bind(c, ConceptVector(weights));
        w.ids.push_back(c);
    }
    std::uniform_int_distribution<std::size_t> pick(0, w.ids.size() - 1);
    for (std::size_t i = 0; i < cross_attempts; ++i) {
        try {
            w.wd.add_cross_link(w.ids[pick(rng)], w.ids[pick(rng)]);
        } catch (const Error&) {
        }
    }
    return w;
}

std::vector<Resource> random_stream(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> n_terms(1, 4);
    std::uniform_int_distribution<int> token(0, 7);
    std::uniform_int_distribution<int> count(1, 3);
    std::vector<Resource> out;
    for (std::size_t i = 0; i < n; ++i) {
        Resource r{"r" + std::to_string(i), "", {}};
        int k = n_terms(rng);
        for (int j = 0; j < k; ++j)
            r.terms.push_back({"t" + std::to_string(token(rng)),
                               static_cast<std::uint32_t>(count(rng))});
        out.push_back(std::move(r));
    }
    return out;
}

/// Independent breadth-first search over an explicit edge list.
std::size_t oracle_bfs(const WebDirectory& wd, CategoryId from,
                       CategoryId to) {
    std::map<CategoryId, std::vector<CategoryId>> adj;
    for (const auto& [id, c] : wd.categories())
        if (c.parent != kNoCategory) {
            adj[id].push_back(c.parent);
            adj[c.parent].push_back(id);
        }
    for (const auto& l : wd.cross_links())
        adj[l.from].push_back(l.to);
    std::map<CategoryId, std::size_t> dist;
    dist[from] = 1;
    std::deque<CategoryId> queue{from};
    while (!queue.empty()) {
        CategoryId cur = queue.front();
        queue.pop_front();
        if (cur == to)
            return dist[cur];
        for (CategoryId next : adj[cur])
            if (!dist.count(next)) {
                dist[next] = dist[cur] + 1;
                queue.push_back(next);
            }
    }
    return 0;
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
    std::string cmd = kCli + " " + args + " > " + stdout_file.string();
    return std::system(cmd.c_str());
}

// -------------------------------------------------------------- criteria

void criterion_detour_path_ratio() {
    auto [wd, binding] = load_schema(kFixtures / "detour.json");
    double optimal = path_ratio(wd, {{1, 2, 3}, "r-web", 3, false});
    double detour = path_ratio(wd, {{1, 4, 5, 6, 7, 3}, "r-web", 3, false});
    require(optimal == 0.0, "optimal browse must score 0, got " +
                                num(optimal));
    require(detour == 0.5, "six-step browse must score 1/2, got " +
                               num(detour));
}

void criterion_loop_max_revisit() {
    auto [wd, binding] = load_schema(kFixtures / "loop.json");
    BrowseTrace direct{{1, 2, 3}, "r-news", 3, false};
    BrowseTrace loop{{1, 2, 4, 5, 1, 2, 3}, "r-news", 3, false};
    validate_trace(wd, direct);
    validate_trace(wd, loop);
    require(max_revisit(direct) == 0, "1-2-3 must have no revisits");
    require(max_revisit(loop) == 1,
            "the looping browse must revisit once, got " +
                std::to_string(max_revisit(loop)));
}

void criterion_ddp_telescoping() {
    std::mt19937 rng(1009);
    std::size_t traces = 0;
    while (traces < 1000) {
        RandomWorld w = random_world(rng, 6 + rng() % 15, 4);
        for (int t = 0; t < 20 && traces < 1000; ++t) {
            // random valid walk from the root
            BrowseTrace b;
            CategoryId cur = w.wd.root();
            b.steps.push_back(cur);
            std::size_t moves = 1 + rng() % 14;
            for (std::size_t i = 0; i < moves; ++i) {
                auto neighbors = w.wd.out_neighbors(cur);
                cur = neighbors[rng() % neighbors.size()];
                b.steps.push_back(cur);
            }
            if (w.wd.category(cur).resources.empty())
                continue;
            b.target_category = cur;
            b.target_resource = w.wd.category(cur).resources.front();
            ++traces;

            DdpSeries s = ddp(w.wd, w.binding, b);
            ConceptVector goal =
                resolve_semantics(w.wd, w.binding, b.target_category);
            double first = distance(
                resolve_semantics(w.wd, w.binding, b.steps.front()), goal);
            double last = distance(
                resolve_semantics(w.wd, w.binding, b.steps.back()), goal);
            double gap = std::fabs(s.final_sum - (first - last));
            require(gap <= 1e-9,
                    "telescoping off by " + num(gap) + " on trace " +
                        std::to_string(traces));
        }
    }
}

void criterion_bfs_oracle() {
    std::mt19937 rng(2003);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 2 + rng() % 49; // up to 50 categories
        RandomWorld w = random_world(rng, n, 6);
        std::uniform_int_distribution<std::size_t> pick(0, w.ids.size() - 1);
        // every pair involving the root plus a random sample
        for (CategoryId to : w.ids) {
            require(w.wd.shortest_path_length(w.wd.root(), to) ==
                        oracle_bfs(w.wd, w.wd.root(), to),
                    "root path mismatch in round " + std::to_string(round));
        }
        for (int s = 0; s < 250; ++s) {
            CategoryId a = w.ids[pick(rng)];
            CategoryId b = w.ids[pick(rng)];
            require(w.wd.shortest_path_length(a, b) == oracle_bfs(w.wd, a, b),
                    "path mismatch " + std::to_string(a) + "->" +
                        std::to_string(b) + " in round " +
                        std::to_string(round));
        }
    }
}

void criterion_placement_bands() {
    std::mt19937 rng(3001);
    std::uniform_real_distribution<double> h_dist(1.0, 4.0);
    std::uniform_real_distribution<double> gap(0.0, 3.0);
    for (int round = 0; round < 500; ++round) {
        ThresholdConfig cfg;
        cfg.mindist_h = h_dist(rng);
        cfg.mindist_v = cfg.mindist_h + gap(rng);
        std::vector<Resource> stream = random_stream(rng, 6 + rng() % 12);
        BuildResult built = build_directory(stream, cfg);
        require(built.log.size() == stream.size(), "log entry per resource");
        for (const BuildLogEntry& e : built.log) {
            double d = e.decision.distance;
            bool ok = false;
            switch (e.decision.kind) {
            case PlacementKind::NewChildCategory:
                ok = d > cfg.mindist_v;
                break;
            case PlacementKind::NewSiblingCategory:
                ok = d > cfg.mindist_h && d <= cfg.mindist_v;
                break;
            case PlacementKind::MergeIntoExisting:
                ok = d <= cfg.mindist_h;
                break;
            }
            require(ok, "band breach for '" + e.resource + "' at d=" +
                            num(d));
        }
        require(built.directory.validate().empty(),
                "built directory must validate");
    }

    // single-cluster limit: both thresholds at the distance ceiling
    std::vector<Resource> stream = random_stream(rng, 10);
    BuildResult merged = build_directory(stream, ThresholdConfig{1e6, 1e6});
    require(merged.directory.category_count() == 2,
            "ceiling thresholds must merge everything into one category");
    // one-category-per-resource limit: both thresholds at the floor
    std::vector<Resource> distinct;
    for (int i = 0; i < 10; ++i)
        distinct.push_back(
            {"d" + std::to_string(i), "", {{"u" + std::to_string(i), 1}}});
    BuildResult shattered =
        build_directory(distinct, ThresholdConfig{1.0, 1.0});
    require(shattered.directory.category_count() == 1 + distinct.size(),
            "floor thresholds must open one category per distinct resource");
}

void criterion_merge_homomorphism() {
    std::mt19937 rng(4001);
    std::uniform_int_distribution<int> n_terms(1, 8);
    std::uniform_int_distribution<int> token(0, 11);
    std::uniform_int_distribution<int> count(1, 9);
    for (int round = 0; round < 200; ++round) {
        auto make = [&](const std::string& id) {
            Resource r{id, "", {}};
            int k = n_terms(rng);
            for (int j = 0; j < k; ++j)
                r.terms.push_back({"t" + std::to_string(token(rng)),
                                   static_cast<std::uint32_t>(count(rng))});
            return r;
        };
        Resource a = make("a");
        Resource b = make("b");
        Resource joined{"ab", "", a.terms};
        joined.terms.insert(joined.terms.end(), b.terms.begin(),
                            b.terms.end());
        double gap = magnitude(diff(merge(sem(a), sem(b)), sem(joined)));
        require(gap <= 1e-9, "homomorphism off by " + num(gap));
    }
}

void criterion_ideality_audit() {
    // two mid categories whose own resources mirror their leaves exactly
    WebDirectory wd;
    SemanticsBinding binding;
    binding.bind(wd.root(), {});
    std::vector<Resource> leaf_resources;
    std::mt19937 rng(5003);
    for (int p = 0; p < 2; ++p) {
        CategoryId mid =
            wd.add_category(wd.root(), "/mid" + std::to_string(p));
        wd.add_resource(mid, "rm" + std::to_string(p));
        ConceptVector total;
        for (int l = 0; l < 3; ++l) {
            CategoryId leaf = wd.add_category(
                mid, "/mid" + std::to_string(p) + "/leaf" + std::to_string(l));
            Resource r{"rl" + std::to_string(p) + std::to_string(l), "", {}};
            for (int j = 0; j < 2; ++j)
                r.terms.push_back(
                    {"w" + std::to_string(rng() % 6),
                     static_cast<std::uint32_t>(1 + rng() % 3)});
            wd.add_resource(leaf, r.id);
            binding.bind(leaf, sem(r));
            total = merge(total, sem(r));
            leaf_resources.push_back(r);
        }
        binding.bind(mid, total);
    }

    IdealityReport before = ideality_audit(wd, binding, {});
    require(before.ideal, "mirrored fixture must be ideal");
    for (const auto& [id, gap] : before.gaps)
        require(gap == 0.0, "expected zero gap at category " +
                                std::to_string(id));

    // perturb one leaf resource's terms
    Resource perturbed = leaf_resources.front();
    perturbed.terms.push_back({"stray", 2});
    CategoryId touched_leaf = *wd.category_of_resource(perturbed.id);
    CategoryId touched_mid = *wd.parent_of(touched_leaf);
    binding.bind(touched_leaf, sem(perturbed));

    IdealityReport after = ideality_audit(wd, binding, {});
    require(!after.ideal, "perturbed fixture cannot stay ideal");
    double gap = after.gaps.at(touched_mid);
    require(gap > 0.0, "the touched category must show the gap");
    for (const auto& [id, g] : after.gaps)
        require(id == touched_mid || g == 0.0,
                "gap leaked to category " + std::to_string(id));

    EpsilonConfig loose{gap + 1e-9, kDefaultSimFloor};
    EpsilonConfig tight{gap - 1e-9, kDefaultSimFloor};
    require(ideality_audit(wd, binding, loose).realistically_ideal,
            "gap within epsilon must stay realistically ideal");
    require(!ideality_audit(wd, binding, tight).realistically_ideal,
            "gap beyond epsilon must flip the verdict");
}

void criterion_determinism_and_replay() {
    fs::path tmp = fs::temp_directory_path() /
                   ("webdir-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    struct Cleanup {
        fs::path p;
        ~Cleanup() { fs::remove_all(p); }
    } cleanup{tmp};

    // library determinism: build - save - load - replay
    std::vector<Resource> stream =
        ingest_resources(kFixtures / "resources.jsonl");
    ThresholdConfig cfg{1.3, 2.0};
    BuildResult one = build_directory(stream, cfg);
    BuildResult two = build_directory(stream, cfg);
    require(schema_to_json(one.directory, one.binding) ==
                schema_to_json(two.directory, two.binding),
            "two builds of the same stream must match");

    save_schema(one.directory, one.binding, tmp / "schema.json");
    auto [loaded, loaded_binding] = load_schema(tmp / "schema.json");
    require(loaded == one.directory && loaded_binding == one.binding,
            "save/load must round-trip the build");

    auto [replayed, replayed_binding] = replay_log(stream, one.log);
    require(replayed == one.directory && replayed_binding == one.binding,
            "replaying the log must rebuild the directory");

    // CLI determinism: identical flags and seed, byte-identical outputs
    std::string res = (kFixtures / "resources.jsonl").string();
    for (int run = 1; run <= 2; ++run) {
        fs::path dir = tmp / ("run" + std::to_string(run));
        fs::create_directories(dir);
        int rc = run_cli("build --resources " + res +
                             " --mindist-h 1.3 --mindist-v 2.0 --out " +
                             (dir / "schema.json").string() + " --log " +
                             (dir / "log.json").string(),
                         dir / "build-out.txt");
        require(rc == 0, "cli build run " + std::to_string(run) + " failed");
        rc = run_cli("simulate --schema " + (dir / "schema.json").string() +
                         " --strategy random --targets all --reps 2 --seed "
                         "99 --out-traces " +
                         (dir / "traces.jsonl").string() + " --out-report " +
                         (dir / "report.csv").string(),
                     dir / "sim-out.txt");
        require(rc == 0,
                "cli simulate run " + std::to_string(run) + " failed");
    }
    for (const char* name :
         {"schema.json", "log.json", "traces.jsonl", "report.csv",
          "build-out.txt", "sim-out.txt"}) {
        require(read_text_file(tmp / "run1" / name) ==
                    read_text_file(tmp / "run2" / name),
                std::string(name) + " must be byte-identical across runs");
    }
}

void criterion_simulation_sanity() {
    auto [wd, binding] = load_schema(kFixtures / "fixture30.json");
    std::vector<ResourceId> targets;
    for (const auto& [id, c] : wd.categories())
        for (const auto& rid : c.resources)
            targets.push_back(rid);

    SimulationRun bfs{&wd, &binding, targets,
                      {StrategyKind::OptimalBfs, 0, 42}};
    for (const MetricsReport& r : run_experiment(bfs, 2)) {
        require(!r.truncated, "optimal browse cannot be truncated");
        require(r.pr == 0.0, "optimal browse must have PR 0");
        require(r.mr == 0, "optimal browse must have MR 0");
    }

    SimulationRun greedy{&wd, &binding, targets,
                         {StrategyKind::GreedySemantic, 0, 42}};
    SimulationRun random{&wd, &binding, targets,
                         {StrategyKind::RandomWalk, 0, 42}};
    AggregateSummary g = aggregate(run_experiment(greedy, 2));
    AggregateSummary r = aggregate(run_experiment(random, 2));
    require(r.pr.mean > g.pr.mean,
            "random wandering must cost more than greedy descent (random " +
                num(r.pr.mean) + " vs greedy " + num(g.pr.mean) + ")");
}

struct Criterion {
    std::string name;
    std::function<void()> body;
    double time_limit_s; // 0 = no stated bound
};

} // namespace

int main() {
    std::vector<Criterion> criteria{
        {"committed detour fixture: PR 0 and 1/2", criterion_detour_path_ratio, 1.0},
        {"committed loop fixture: MR 0 and 1", criterion_loop_max_revisit, 1.0},
        {"DDP telescoping over 1000 random traces",
         criterion_ddp_telescoping, 10.0},
        {"shortest paths match the BFS oracle on 200 directories",
         criterion_bfs_oracle, 10.0},
        {"placement bands and degenerate-threshold limits",
         criterion_placement_bands, 30.0},
        {"merge/concatenation homomorphism on 200 pairs",
         criterion_merge_homomorphism, 0.0},
        {"ideality audit and epsilon flip", criterion_ideality_audit, 0.0},
        {"determinism: rebuild, reload, replay, CLI bytes",
         criterion_determinism_and_replay, 0.0},
        {"simulation sanity: optimal agents and strategy ordering",
         criterion_simulation_sanity, 0.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        auto start = std::chrono::steady_clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            c.body();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (verdict == "PASS" && c.time_limit_s > 0.0 &&
            elapsed > c.time_limit_s) {
            verdict = "FAIL";
            detail = "exceeded the " + num(c.time_limit_s) + "s budget";
        }
        if (verdict == "FAIL")
            ++failures;
        std::printf("[%s] %zu. %s (%.3fs)%s%s\n", verdict.c_str(), i + 1,
                    c.name.c_str(), elapsed,
                    detail.empty() ? "" : " -- ", detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
