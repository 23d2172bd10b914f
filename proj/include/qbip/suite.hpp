#pragma once

// Suite runner: selects identities, chains and families, runs them (in
// parallel at case level) and produces a JSON report that renders as text,
// JSON or CSV. The report schema is documented in docs/report-format.md.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qbip {

enum class Format { text, json, csv };

Format parse_format(std::string_view s);

struct SuiteConfig {
  /// identities | chains | families | all
  std::string suite = "all";
  std::vector<std::string> ids;
  std::vector<std::string> chains;
  std::vector<std::string> families;
  /// Truncation order for identities and chains (0 = each case's default).
  std::size_t order = 0;
  /// Upper end of every family's n range (0 = each instance's default).
  std::size_t n_max = 0;
  /// Check identities modulo this instead of over the integers (0 = off).
  std::uint64_t modulus = 0;
  Format format = Format::text;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> cache_dir;
  /// Extra identities, one `id | mode | order | lhs | rhs` record per line.
  std::optional<std::filesystem::path> registry_file;

  /// Throws Error(invalid_argument) for unknown suites or keys and bad values.
  static SuiteConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Runs the selected cases. Each case carries id, kind, status and runtime_ms.
nlohmann::json run_suite(const SuiteConfig& cfg);

/// Counts per status over a case list, as stored under "summary".
nlohmann::json summarize(const nlohmann::json& cases);

/// 0 iff no case failed; skipped, refuted and erratum-candidate cases do not fail a run.
int exit_code(const nlohmann::json& report);

std::string render(const nlohmann::json& report, Format f);

}  // namespace qbip
