#ifndef WEBDIR_IO_HPP
#define WEBDIR_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "webdir/construction.hpp"
#include "webdir/metrics.hpp"

namespace webdir {

/// Rounds to 9 significant digits, the precision every serialized weight and
/// metric value carries. Keeps golden files stable and round-trips exact.
double canonical_weight(double w);

/// %.9g rendering used in CSV output.
std::string format_number(double w);

/// Reads one resource record per line: {"id", "url", "terms"} where terms is
/// either a token array (repeats accumulate) or an array of
/// {"token", "count"} objects. File order is preserved; it determines the
/// built structure. Throws ParseError (with line number) or DuplicateId.
std::vector<Resource> ingest_resources(const std::filesystem::path& path);

/// Complete in-memory image of a schema file: the directory, its semantics,
/// and an optional pointer to the build log that produced it.
struct DirectorySchema {
    WebDirectory directory;
    SemanticsBinding binding;
    std::string build_log_ref; // empty = absent
};

nlohmann::json schema_to_json(const WebDirectory& wd,
                              const SemanticsBinding& binding,
                              const std::string& build_log_ref = "");
DirectorySchema schema_from_json(const nlohmann::json& doc);

/// Canonical schema document: categories sorted by id, weights rounded.
/// Saving a structurally invalid directory throws SchemaInvalid; loading
/// re-validates and does the same.
void save_schema_file(const DirectorySchema& schema,
                      const std::filesystem::path& path);
DirectorySchema load_schema_file(const std::filesystem::path& path);

void save_schema(const WebDirectory& wd, const SemanticsBinding& binding,
                 const std::filesystem::path& path);
std::pair<WebDirectory, SemanticsBinding>
load_schema(const std::filesystem::path& path);

/// Graphviz rendering: tree edges solid, cross-links dashed, labels are
/// urls. Output is deterministic.
std::string to_dot(const WebDirectory& wd);
void export_dot(const WebDirectory& wd, const std::filesystem::path& path);

std::vector<BrowseTrace> load_traces(const std::filesystem::path& path);
void save_traces(std::span<const BrowseTrace> traces,
                 const std::filesystem::path& path);

void save_build_log(const BuildLog& log, const std::filesystem::path& path);
BuildLog load_build_log(const std::filesystem::path& path);

/// {"resource id": {token: weight, ...}, ...}
std::map<ResourceId, ConceptVector>
load_assign_overrides(const std::filesystem::path& path);

/// [{"url": ..., "semantics": {token: weight, ...}}, ...]
std::vector<TopicSeed> load_topic_seeds(const std::filesystem::path& path);

/// One row per trace plus a closing "aggregate" row (means, fractions and
/// the truncated count).
std::string report_csv(std::span<const MetricsReport> reports,
                       const AggregateSummary& summary);
nlohmann::json report_json(std::span<const MetricsReport> reports,
                           const AggregateSummary& summary);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace webdir

#endif
