#pragma once

// JSON / CSV persistence for certificates, search records and checkpoints.
// JSON objects keep insertion order so every file has a stable key order.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "facteq/solver.hpp"

namespace facteq::io {

using Json = nlohmann::ordered_json;

inline constexpr int kCheckpointVersion = 1;

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

Json to_json(const FactorizationSketch& sk);
FactorizationSketch sketch_from_json(const Json& j);

Json to_json(const FactorList& fl);
FactorList factor_list_from_json(const Json& j);

/// {"target": "form"|"poly", "coeffs": [descending decimal strings], "factor_list"?}
Json rhs_to_json(const RightSide& rhs);
RightSide rhs_from_json(const Json& j);

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

/// Short stable name, e.g. "cert_SUM_FACT_BINARY_12_7_q11".
std::string certificate_id(const Certificate& c);

Json to_json(const CellRecord& r);
CellRecord record_from_json(const Json& j);

/// The parts of a task that determine its output (not workers, paths, hooks).
Json canonical_task_json(const SearchTask& t);
std::string task_hash(const SearchTask& t);

Json checkpoint_json(const std::string& hash, const std::vector<CellRecord>& records);

struct Checkpoint {
  std::string task_hash;
  std::vector<CellRecord> records;
};
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Writes path.tmp then renames over path.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view s);
std::string csv_row(std::span<const std::string> fields);

std::string report_csv(const SearchReport& report, const Equation& eq, std::string_view config_hash);
Json summary_json(const SearchReport& report, const SearchTask& task, std::string_view config_hash);

/// Decimal string when |v| <= 10^40, empty otherwise.
std::string small_decimal(const mpz_class& v);

}  // namespace facteq::io
