#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "facteq/bounds.hpp"
#include "facteq/io.hpp"
#include "facteq/solver.hpp"

namespace facteq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitUnknown = 2;

/// Runs the command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Preset {
  std::string name;
  SearchTask task;
  // Bundled expected solution cells.
  std::vector<std::vector<std::uint64_t>> expected;
  std::string description;
};

std::vector<std::string> preset_names();
/// Throws InputError for an unknown name.
Preset make_preset(std::string_view name);

struct PresetOutcome {
  Preset preset;
  SearchReport report;
  std::vector<std::vector<std::uint64_t>> found;
  bool match = false;
  double seconds = 0;
};

PresetOutcome run_preset(std::string_view name, unsigned workers = 1);

/// Writes report.csv, summary.json and certificates/*.json under dir.
void write_search_outputs(const std::filesystem::path& dir, const SearchReport& report, const SearchTask& task);

io::Json bound_report_json(const BoundReport& rep);

}  // namespace facteq::cli
