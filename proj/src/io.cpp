#include "webdir/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "webdir/error.hpp"

namespace webdir {

using nlohmann::json;

double canonical_weight(double w) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", w);
    return std::strtod(buf, nullptr);
}

std::string format_number(double w) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", w);
    return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::IoError, "cannot open '" + path.string() +
                                       "' for writing");
    out << content;
    if (!out)
        throw Error(Errc::IoError, "write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

json vector_to_json(const ConceptVector& v) {
    json obj = json::object();
    for (const auto& [token, w] : v.weights())
        obj[token] = canonical_weight(w);
    return obj;
}

ConceptVector vector_from_json(const json& obj, const std::string& where) {
    if (!obj.is_object())
        throw Error(Errc::ParseError, where + ": expected an object of weights");
    std::map<std::string, double> weights;
    for (const auto& [token, w] : obj.items()) {
        if (!w.is_number())
            throw Error(Errc::ParseError,
                        where + ": weight of '" + token + "' is not a number");
        weights[token] = w.get<double>();
    }
    try {
        return ConceptVector(std::move(weights));
    } catch (const Error& e) {
        throw Error(Errc::ParseError, where + ": " + e.message());
    }
}

} // namespace

std::vector<Resource> ingest_resources(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoError, "cannot open '" + path.string() + "'");
    std::vector<Resource> out;
    std::set<ResourceId> seen;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const std::string where = "line " + std::to_string(lineno);
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, where + ": " + e.what());
        }
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
            throw Error(Errc::ParseError, where + ": missing string 'id'");
        Resource r;
        r.id = rec["id"].get<std::string>();
        if (rec.contains("url")) {
            if (!rec["url"].is_string())
                throw Error(Errc::ParseError, where + ": 'url' must be a string");
            r.url = rec["url"].get<std::string>();
        }
        if (!rec.contains("terms") || !rec["terms"].is_array() ||
            rec["terms"].empty())
            throw Error(Errc::ParseError,
                        where + ": 'terms' must be a non-empty array");
        for (const auto& t : rec["terms"]) {
            if (t.is_string()) {
                r.terms.push_back({t.get<std::string>(), 1});
            } else if (t.is_object() && t.contains("token") &&
                       t["token"].is_string()) {
                std::uint32_t count = 1;
                if (t.contains("count")) {
                    if (!t["count"].is_number_unsigned() ||
                        t["count"].get<std::uint64_t>() == 0)
                        throw Error(Errc::ParseError,
                                    where + ": 'count' must be a natural number");
                    count = t["count"].get<std::uint32_t>();
                }
                r.terms.push_back({t["token"].get<std::string>(), count});
            } else {
                throw Error(Errc::ParseError,
                            where + ": term entries must be strings or "
                                    "{token, count} objects");
            }
        }
        if (!seen.insert(r.id).second)
            throw Error(Errc::DuplicateId,
                        where + ": resource id '" + r.id + "' repeats");
        out.push_back(std::move(r));
    }
    return out;
}

json schema_to_json(const WebDirectory& wd, const SemanticsBinding& binding,
                    const std::string& build_log_ref) {
    json doc;
    doc["version"] = 1;
    doc["root"] = wd.root();
    if (!build_log_ref.empty())
        doc["build_log"] = build_log_ref;
    json cats = json::array();
    for (const auto& [id, c] : wd.categories()) {
        json jc;
        jc["id"] = c.id;
        jc["level"] = c.level;
        jc["url"] = c.url;
        if (c.parent == kNoCategory)
            jc["parent"] = nullptr;
        else
            jc["parent"] = c.parent;
        jc["children"] = c.children;
        jc["resources"] = c.resources;
        jc["non_semantic"] = c.non_semantic;
        cats.push_back(std::move(jc));
    }
    doc["categories"] = std::move(cats);
    json links = json::array();
    for (const auto& l : wd.cross_links())
        links.push_back({{"from", l.from}, {"to", l.to}});
    doc["cross_links"] = std::move(links);
    json semantics = json::object();
    for (const auto& [id, v] : binding.entries())
        semantics[std::to_string(id)] = vector_to_json(v);
    doc["semantics"] = std::move(semantics);
    return doc;
}

DirectorySchema schema_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("categories") ||
        !doc["categories"].is_array() || !doc.contains("root") ||
        !doc["root"].is_number_unsigned())
        throw Error(Errc::ParseError,
                    "schema needs a 'categories' array and a 'root' id");
    std::vector<Category> cats;
    for (const auto& jc : doc["categories"]) {
        Category c;
        if (!jc.contains("id") || !jc["id"].is_number_unsigned() ||
            !jc.contains("level") || !jc["level"].is_number_unsigned() ||
            !jc.contains("url") || !jc["url"].is_string())
            throw Error(Errc::ParseError,
                        "every category needs id, level and url");
        c.id = jc["id"].get<CategoryId>();
        if (c.id == kNoCategory)
            throw Error(Errc::ParseError,
                        "category ids start at 1; 0 marks 'no parent'");
        c.level = jc["level"].get<std::uint32_t>();
        c.url = jc["url"].get<std::string>();
        if (jc.contains("parent") && !jc["parent"].is_null())
            c.parent = jc["parent"].get<CategoryId>();
        if (jc.contains("children"))
            c.children = jc["children"].get<std::vector<CategoryId>>();
        if (jc.contains("resources"))
            c.resources = jc["resources"].get<std::vector<ResourceId>>();
        if (jc.contains("non_semantic"))
            c.non_semantic = jc["non_semantic"].get<bool>();
        cats.push_back(std::move(c));
    }
    std::vector<CrossLink> links;
    if (doc.contains("cross_links"))
        for (const auto& jl : doc["cross_links"])
            links.push_back({jl.at("from").get<CategoryId>(),
                             jl.at("to").get<CategoryId>()});

    WebDirectory wd = WebDirectory::from_parts(
        std::move(cats), std::move(links), doc["root"].get<CategoryId>());

    SemanticsBinding binding;
    if (doc.contains("semantics")) {
        for (const auto& [key, jv] : doc["semantics"].items()) {
            if (key.empty() ||
                key.find_first_not_of("0123456789") != std::string::npos)
                throw Error(Errc::ParseError,
                            "semantics key '" + key + "' is not a category id");
            CategoryId id =
                static_cast<CategoryId>(std::strtoul(key.c_str(), nullptr, 10));
            if (!wd.contains(id))
                throw Error(Errc::SchemaInvalid,
                            "semantics entry for unknown category " + key);
            binding.bind(id, vector_from_json(jv, "semantics[" + key + "]"));
        }
    }
    binding.fill_missing(wd);

    auto violations = wd.validate();
    if (!violations.empty()) {
        std::string msg = "schema violates directory invariants:";
        for (const auto& v : violations)
            msg += std::string("\n  ") + violation_name(v.kind) +
                   " (category " + std::to_string(v.category) + "): " +
                   v.detail;
        throw Error(Errc::SchemaInvalid, msg);
    }
    DirectorySchema schema;
    schema.directory = std::move(wd);
    schema.binding = std::move(binding);
    if (doc.contains("build_log")) {
        if (!doc["build_log"].is_string())
            throw Error(Errc::ParseError, "'build_log' must be a string");
        schema.build_log_ref = doc["build_log"].get<std::string>();
    }
    return schema;
}

void save_schema_file(const DirectorySchema& schema,
                      const std::filesystem::path& path) {
    auto violations = schema.directory.validate();
    if (!violations.empty())
        throw Error(Errc::SchemaInvalid,
                    "refusing to save an invalid directory (" +
                        std::to_string(violations.size()) + " violations)");
    write_text_file(path,
                    schema_to_json(schema.directory, schema.binding,
                                   schema.build_log_ref)
                            .dump(2) +
                        "\n");
}

DirectorySchema load_schema_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::IoError,
                    "'" + path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        return schema_from_json(doc);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.message());
    }
}

void save_schema(const WebDirectory& wd, const SemanticsBinding& binding,
                 const std::filesystem::path& path) {
    save_schema_file({wd, binding, ""}, path);
}

std::pair<WebDirectory, SemanticsBinding>
load_schema(const std::filesystem::path& path) {
    DirectorySchema schema = load_schema_file(path);
    return {std::move(schema.directory), std::move(schema.binding)};
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        out += ch;
    }
    return out;
}

} // namespace

std::string to_dot(const WebDirectory& wd) {
    std::ostringstream out;
    out << "digraph webdir {\n  rankdir=TB;\n";
    for (const auto& [id, c] : wd.categories())
        out << "  n" << id << " [label=\"" << dot_escape(c.url) << "\"];\n";
    for (const auto& [id, c] : wd.categories())
        for (CategoryId child : c.children)
            out << "  n" << id << " -> n" << child << ";\n";
    for (const auto& l : wd.cross_links())
        out << "  n" << l.from << " -> n" << l.to << " [style=dashed];\n";
    out << "}\n";
    return out.str();
}

void export_dot(const WebDirectory& wd, const std::filesystem::path& path) {
    write_text_file(path, to_dot(wd));
}

std::vector<BrowseTrace> load_traces(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoError, "cannot open '" + path.string() + "'");
    std::vector<BrowseTrace> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const std::string where = "line " + std::to_string(lineno);
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, where + ": " + e.what());
        }
        BrowseTrace t;
        try {
            t.steps = rec.at("steps").get<std::vector<CategoryId>>();
            t.target_resource = rec.at("target_resource").get<std::string>();
            t.target_category = rec.at("target_category").get<CategoryId>();
            if (rec.contains("truncated"))
                t.truncated = rec["truncated"].get<bool>();
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, where + ": " + e.what());
        }
        out.push_back(std::move(t));
    }
    return out;
}

void save_traces(std::span<const BrowseTrace> traces,
                 const std::filesystem::path& path) {
    std::ostringstream out;
    for (const BrowseTrace& t : traces) {
        json rec;
        rec["steps"] = t.steps;
        rec["target_resource"] = t.target_resource;
        rec["target_category"] = t.target_category;
        rec["truncated"] = t.truncated;
        out << rec.dump() << "\n";
    }
    write_text_file(path, out.str());
}

namespace {

PlacementKind placement_from_name(const std::string& name) {
    if (name == "new_child")
        return PlacementKind::NewChildCategory;
    if (name == "new_sibling")
        return PlacementKind::NewSiblingCategory;
    if (name == "merge")
        return PlacementKind::MergeIntoExisting;
    throw Error(Errc::ParseError, "unknown placement kind '" + name + "'");
}

} // namespace

void save_build_log(const BuildLog& log, const std::filesystem::path& path) {
    json arr = json::array();
    for (const auto& entry : log) {
        json je;
        je["resource"] = entry.resource;
        je["kind"] = placement_name(entry.decision.kind);
        je["anchor"] = entry.decision.anchor;
        if (std::isfinite(entry.decision.distance))
            je["distance"] = canonical_weight(entry.decision.distance);
        else
            je["distance"] = nullptr; // first placement: nothing to compare
        je["category"] = entry.category;
        arr.push_back(std::move(je));
    }
    write_text_file(path, arr.dump(2) + "\n");
}

BuildLog load_build_log(const std::filesystem::path& path) {
    json arr;
    try {
        arr = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::IoError,
                    "'" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!arr.is_array())
        throw Error(Errc::ParseError, "build log must be an array");
    BuildLog log;
    for (const auto& je : arr) {
        BuildLogEntry entry;
        try {
            entry.resource = je.at("resource").get<std::string>();
            entry.decision.kind =
                placement_from_name(je.at("kind").get<std::string>());
            entry.decision.anchor = je.at("anchor").get<CategoryId>();
            entry.decision.distance =
                je.at("distance").is_null()
                    ? std::numeric_limits<double>::infinity()
                    : je.at("distance").get<double>();
            entry.category = je.at("category").get<CategoryId>();
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, std::string("build log: ") + e.what());
        }
        log.push_back(std::move(entry));
    }
    return log;
}

std::map<ResourceId, ConceptVector>
load_assign_overrides(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::IoError,
                    "'" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw Error(Errc::ParseError,
                    "overrides must map resource ids to weight objects");
    std::map<ResourceId, ConceptVector> out;
    for (const auto& [id, jv] : doc.items())
        out.emplace(id, vector_from_json(jv, "override '" + id + "'"));
    return out;
}

std::vector<TopicSeed> load_topic_seeds(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::IoError,
                    "'" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_array())
        throw Error(Errc::ParseError, "topic seeds must be an array");
    std::vector<TopicSeed> out;
    for (const auto& jt : doc) {
        if (!jt.is_object() || !jt.contains("url") || !jt["url"].is_string())
            throw Error(Errc::ParseError, "every topic needs a string 'url'");
        TopicSeed seed;
        seed.url = jt["url"].get<std::string>();
        if (jt.contains("semantics"))
            seed.semantics =
                vector_from_json(jt["semantics"], "topic '" + seed.url + "'");
        out.push_back(std::move(seed));
    }
    return out;
}

namespace {

std::string csv_bool(bool b) { return b ? "true" : "false"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"')
            quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

} // namespace

std::string report_csv(std::span<const MetricsReport> reports,
                       const AggregateSummary& summary) {
    std::ostringstream out;
    out << "trace,target_resource,target_category,trace_len,min_len,pr,mr,"
           "ddp_final,ddp_converged,root_monotone,truncated\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const MetricsReport& r = reports[i];
        out << i << ',' << csv_field(r.target_resource) << ','
            << r.target_category
            << ',' << r.trace_len << ',' << r.min_len << ','
            << (r.truncated ? "" : format_number(r.pr)) << ',' << r.mr << ','
            << format_number(r.ddp_final) << ','
            << csv_bool(r.ddp_converged) << ','
            << (r.root_monotone ? csv_bool(*r.root_monotone) : "") << ','
            << csv_bool(r.truncated) << "\n";
    }
    out << "aggregate,,,,," << format_number(summary.pr.mean) << ','
        << format_number(summary.mr.mean) << ",,"
        << format_number(summary.ddp_converged_fraction) << ','
        << format_number(summary.root_monotone_fraction) << ','
        << summary.truncated << "\n";
    return out.str();
}

json report_json(std::span<const MetricsReport> reports,
                 const AggregateSummary& summary) {
    json traces = json::array();
    for (const MetricsReport& r : reports) {
        json jr;
        jr["target_resource"] = r.target_resource;
        jr["target_category"] = r.target_category;
        jr["trace_len"] = r.trace_len;
        jr["min_len"] = r.min_len;
        if (!r.truncated)
            jr["pr"] = canonical_weight(r.pr);
        jr["mr"] = r.mr;
        json terms = json::array();
        for (double t : r.ddp_terms)
            terms.push_back(canonical_weight(t));
        jr["ddp_terms"] = std::move(terms);
        json sums = json::array();
        for (double s : r.ddp_partial_sums)
            sums.push_back(canonical_weight(s));
        jr["ddp_partial_sums"] = std::move(sums);
        jr["ddp_final"] = canonical_weight(r.ddp_final);
        jr["ddp_converged"] = r.ddp_converged;
        if (r.root_monotone)
            jr["root_monotone"] = *r.root_monotone;
        jr["truncated"] = r.truncated;
        traces.push_back(std::move(jr));
    }
    auto stats_json = [](const Stats& s) {
        json js;
        js["count"] = s.count;
        js["mean"] = canonical_weight(s.mean);
        js["min"] = canonical_weight(s.min);
        js["max"] = canonical_weight(s.max);
        js["stddev"] = canonical_weight(s.stddev);
        return js;
    };
    json agg;
    agg["total"] = summary.total;
    agg["truncated"] = summary.truncated;
    agg["pr"] = stats_json(summary.pr);
    agg["mr"] = stats_json(summary.mr);
    agg["ddp_converged_fraction"] =
        canonical_weight(summary.ddp_converged_fraction);
    agg["root_monotone_fraction"] =
        canonical_weight(summary.root_monotone_fraction);
    return json{{"traces", std::move(traces)}, {"aggregate", std::move(agg)}};
}

} // namespace webdir
