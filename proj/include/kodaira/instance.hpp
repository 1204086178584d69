#pragma once

#include "kodaira/fibration.hpp"
#include "kodaira/semigroup.hpp"
#include "kodaira/toric.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kodaira {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr std::int64_t kDefaultMaxDegree = 24;

enum ExitCode : int { exit_ok = 0, exit_verdict = 1, exit_input = 2, exit_degenerate = 3, exit_cross_check = 4 };

enum class Format { text, json, csv };
std::optional<Format> parse_format(const std::string& s);

struct SemigroupBody {
  std::size_t n = 0;
  bool from_levels = false;
  std::vector<LatticePoint> generators;           // n+1 coordinates, level last
  std::vector<std::vector<LatticePoint>> levels;  // levels[k] for k = 0..K
  bool product_closed = true;
  std::int64_t growth_k = 200;
};

struct ToricKappaBody {
  ToricVariety x;
  ToricDivisorData m;
  SingularMetricData h;
  std::optional<ToricDivisorData> ample;
  std::int64_t okounkov_degree = 6;
};

struct FibrationBody {
  std::string variant;
  bool sweep = false;
  std::vector<FiberSpaceInstance> instances;
};

struct MultiplierBody {
  std::vector<Rational> mu;
  std::int64_t k_max = 100;
  std::vector<std::int64_t> levels;  // table of c_k at these levels
};

struct FileOptions {
  std::optional<std::int64_t> max_degree;
  std::vector<std::int64_t> strides;
  std::optional<Format> format;
  std::optional<bool> addti;
};

struct InstanceFile {
  std::string schema_version;
  std::string kind;
  std::string id;
  FileOptions options;
  std::variant<SemigroupBody, ToricKappaBody, FibrationBody, MultiplierBody> body;
};

// Parses and validates; unknown fields, wrong types and malformed domain data
// throw InputError naming the offending path.
InstanceFile parse_instance(const std::string& text);

// Command-line settings; each set field overrides the file.
struct RunSettings {
  std::optional<std::int64_t> max_degree;
  std::optional<std::int64_t> stride;
  bool unclamped = false;
  bool timestamps = false;
  unsigned jobs = 1;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct NamedPolytope {
  std::string name;
  Polytope poly;
};

struct RunResult {
  int exit_code = exit_ok;
  nlohmann::json report;
  Table table;
  std::vector<NamedPolytope> polytopes;
};

// Never throws for computation errors: they become the exit code and an
// "error" field of the report.
RunResult run_instance(const InstanceFile& file, const RunSettings& settings);

// Report for a file that failed to parse.
RunResult input_failure(const std::string& message);

std::string render(const RunResult& r, Format f, bool color = false);
// Vertex lists in nOFF form, one block per polytope.
std::string export_polytopes(const RunResult& r);

}  // namespace kodaira
