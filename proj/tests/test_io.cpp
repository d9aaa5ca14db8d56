#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "webdir/error.hpp"
#include "webdir/io.hpp"

using namespace webdir;

namespace {

const std::filesystem::path kFixtures{WEBDIR_FIXTURE_DIR};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("webdir-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path file(const std::string& name) const {
        return path / name;
    }
    static int counter;
};
int TempDir::counter = 0;

} // namespace

TEST_CASE("resource ingestion") {
    TempDir tmp;
    SUBCASE("records parse in file order") {
        write_text_file(tmp.file("r.jsonl"),
                        R"({"id":"r1","url":"http://a","terms":["x","x","y"]})"
                        "\n"
                        R"({"id":"r2","terms":[{"token":"z","count":3}]})"
                        "\n"
                        "\n" // blank lines are fine
                        R"({"id":"r3","terms":["w"]})"
                        "\n");
        std::vector<Resource> rs = ingest_resources(tmp.file("r.jsonl"));
        REQUIRE(rs.size() == 3);
        CHECK(rs[0].id == "r1");
        CHECK(rs[1].id == "r2");
        CHECK(rs[2].id == "r3");
        CHECK(sem(rs[0]) == ConceptVector({{"x", 2.0}, {"y", 1.0}}));
        CHECK(sem(rs[1]) == ConceptVector({{"z", 3.0}}));
    }
    SUBCASE("empty terms are a parse error with the line number") {
        write_text_file(tmp.file("bad.jsonl"),
                        R"({"id":"r1","terms":["x"]})"
                        "\n"
                        R"({"id":"r2","terms":[]})"
                        "\n");
        try {
            ingest_resources(tmp.file("bad.jsonl"));
            FAIL("expected ParseError");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ParseError);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("duplicate ids are rejected") {
        write_text_file(tmp.file("dup.jsonl"),
                        R"({"id":"r1","terms":["x"]})"
                        "\n"
                        R"({"id":"r1","terms":["y"]})"
                        "\n");
        try {
            ingest_resources(tmp.file("dup.jsonl"));
            FAIL("expected DuplicateId");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DuplicateId);
        }
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(ingest_resources(tmp.file("absent.jsonl")), Error);
    }
}

TEST_CASE("schema round trip") {
    TempDir tmp;
    WebDirectory wd;
    CategoryId a = wd.add_category(wd.root(), "/arts");
    CategoryId b = wd.add_category(a, "/arts/film");
    CategoryId c = wd.add_category(wd.root(), "/science");
    wd.add_cross_link(c, b);
    wd.add_resource(b, "r-film");
    wd.set_non_semantic(c, true);
    SemanticsBinding binding;
    binding.bind(wd.root(), {});
    binding.bind(a, ConceptVector({{"arts", 1.0}}));
    binding.bind(b, ConceptVector({{"film", 2.0}, {"arts", 0.5}}));
    binding.bind(c, ConceptVector({{"science", 1.0}}));

    save_schema(wd, binding, tmp.file("schema.json"));
    auto [loaded, loaded_binding] = load_schema(tmp.file("schema.json"));
    CHECK(loaded == wd);
    CHECK(loaded_binding == binding);

    SUBCASE("serialization is canonical: save(load(x)) == x") {
        save_schema(loaded, loaded_binding, tmp.file("schema2.json"));
        CHECK(read_text_file(tmp.file("schema.json")) ==
              read_text_file(tmp.file("schema2.json")));
    }
    SUBCASE("the build-log reference survives the round trip") {
        save_schema_file({wd, binding, "buildlog.json"},
                         tmp.file("ref.json"));
        DirectorySchema schema = load_schema_file(tmp.file("ref.json"));
        CHECK(schema.build_log_ref == "buildlog.json");
        save_schema_file(schema, tmp.file("ref2.json"));
        CHECK(read_text_file(tmp.file("ref.json")) ==
              read_text_file(tmp.file("ref2.json")));
    }
}

TEST_CASE("schema loading rejects invalid structures") {
    TempDir tmp;
    SUBCASE("duplicate url") {
        write_text_file(tmp.file("dup.json"), R"({
          "version": 1, "root": 1,
          "categories": [
            {"id":1,"level":1,"url":"/","parent":null,"children":[2,3],"resources":[],"non_semantic":false},
            {"id":2,"level":2,"url":"/same","parent":1,"children":[],"resources":[],"non_semantic":false},
            {"id":3,"level":2,"url":"/same","parent":1,"children":[],"resources":[],"non_semantic":false}
          ],
          "cross_links": [], "semantics": {}
        })");
        try {
            load_schema(tmp.file("dup.json"));
            FAIL("expected SchemaInvalid");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::SchemaInvalid);
            CHECK(std::string(e.what()).find("DuplicateUrl") !=
                  std::string::npos);
        }
    }
    SUBCASE("broken json is an io error") {
        write_text_file(tmp.file("broken.json"), "{not json");
        CHECK_THROWS_AS(load_schema(tmp.file("broken.json")), Error);
    }
    SUBCASE("semantics for unknown categories") {
        write_text_file(tmp.file("ghost.json"), R"({
          "version": 1, "root": 1,
          "categories": [
            {"id":1,"level":1,"url":"/","parent":null,"children":[],"resources":[],"non_semantic":false}
          ],
          "cross_links": [], "semantics": {"9": {"x": 1.0}}
        })");
        CHECK_THROWS_AS(load_schema(tmp.file("ghost.json")), Error);
    }
}

TEST_CASE("the committed six-category fixture loads") {
    auto [wd, binding] = load_schema(kFixtures / "small_directory.json");
    CHECK(wd.category_count() == 6);
    CHECK(wd.depth() == 4);
    CHECK(wd.cross_links().size() == 2);
    CHECK(wd.validate().empty());
    CHECK(binding.contains(wd.root()));
}

TEST_CASE("dot export") {
    SUBCASE("a fresh directory is a single node") {
        WebDirectory wd;
        std::string dot = to_dot(wd);
        CHECK(dot.find("n1 [label=\"/\"]") != std::string::npos);
        CHECK(dot.find("->") == std::string::npos);
    }
    SUBCASE("tree edges solid, cross-links dashed") {
        auto [wd, binding] = load_schema(kFixtures / "small_directory.json");
        std::string dot = to_dot(wd);
        std::size_t arrows = 0, dashed = 0;
        for (std::size_t pos = 0;
             (pos = dot.find("->", pos)) != std::string::npos; ++pos)
            ++arrows;
        for (std::size_t pos = 0;
             (pos = dot.find("[style=dashed]", pos)) != std::string::npos;
             ++pos)
            ++dashed;
        CHECK(arrows == 7);  // 5 tree edges + 2 cross-links
        CHECK(dashed == 2);
        // byte-identical on repeat
        CHECK(to_dot(wd) == dot);
    }
}

TEST_CASE("traces round trip through jsonl") {
    TempDir tmp;
    std::vector<BrowseTrace> traces{
        {{1, 2, 3}, "r-a", 3, false},
        {{1, 4}, "r-b", 9, true},
    };
    save_traces(traces, tmp.file("t.jsonl"));
    std::vector<BrowseTrace> loaded = load_traces(tmp.file("t.jsonl"));
    CHECK(loaded == traces);
}

TEST_CASE("build logs round trip") {
    TempDir tmp;
    BuildLog log{
        {"r1",
         {PlacementKind::NewChildCategory, 1,
          std::numeric_limits<double>::infinity()},
         2},
        {"r2", {PlacementKind::NewSiblingCategory, 2, 1.4142135623}, 3},
        {"r3", {PlacementKind::MergeIntoExisting, 2, 1.0}, 2},
    };
    save_build_log(log, tmp.file("log.json"));
    BuildLog loaded = load_build_log(tmp.file("log.json"));
    REQUIRE(loaded.size() == 3);
    CHECK(std::isinf(loaded[0].decision.distance));
    CHECK(loaded[1].decision.kind == PlacementKind::NewSiblingCategory);
    // distances persist at nine significant digits
    CHECK(loaded[1].decision.distance == canonical_weight(1.4142135623));
    CHECK(loaded[2].category == 2);
}

TEST_CASE("number formatting is canonical at nine significant digits") {
    CHECK(canonical_weight(2.0) == 2.0);
    CHECK(canonical_weight(1.0 / 3.0) == canonical_weight(0.333333333));
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1e6) == "1000000");
    // idempotent: rounding a rounded value changes nothing
    double w = canonical_weight(0.12345678912345);
    CHECK(canonical_weight(w) == w);
}

TEST_CASE("report rendering") {
    MetricsReport a;
    a.target_resource = "r-x";
    a.target_category = 3;
    a.trace_len = 3;
    a.min_len = 3;
    a.pr = 0.0;
    a.mr = 0;
    a.ddp_final = 0.25;
    a.ddp_converged = false;
    a.root_monotone = true;
    MetricsReport b = a;
    b.pr = 0.5;
    b.truncated = true;
    std::vector<MetricsReport> rs{a, b};
    AggregateSummary s = aggregate(rs);

    std::string csv = report_csv(rs, s);
    CHECK(csv.find("trace,target_resource") == 0);
    CHECK(csv.find("\naggregate,") != std::string::npos);
    // header + two data rows + aggregate
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n')
            ++lines;
    CHECK(lines == 4);

    nlohmann::json js = report_json(rs, s);
    CHECK(js["traces"].size() == 2);
    CHECK(js["aggregate"]["total"] == 2);
    CHECK(js["aggregate"]["truncated"] == 1);
    // truncated rows carry no path ratio
    CHECK_FALSE(js["traces"][1].contains("pr"));
}

TEST_CASE("topic seeds and overrides load") {
    TempDir tmp;
    write_text_file(tmp.file("topics.json"), R"([
      {"url": "/news", "semantics": {"news": 1.0}},
      {"url": "/sport", "semantics": {"sport": 2.0}}
    ])");
    std::vector<TopicSeed> topics = load_topic_seeds(tmp.file("topics.json"));
    REQUIRE(topics.size() == 2);
    CHECK(topics[0].url == "/news");
    CHECK(topics[1].semantics == ConceptVector({{"sport", 2.0}}));

    write_text_file(tmp.file("ov.json"), R"({"r7": {"alpha": 1.5}})");
    auto overrides = load_assign_overrides(tmp.file("ov.json"));
    CHECK(overrides.at("r7") == ConceptVector({{"alpha", 1.5}}));
}
