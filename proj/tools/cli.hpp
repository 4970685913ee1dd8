#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "vdsim/juror.hpp"
#include "vdsim/strike_sheet.hpp"

namespace vdsim::cli {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 2;
inline constexpr int kExitInternalError = 3;

struct RunManifest {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
};

// Replays a strike sheet file. The strike limit only affects the
// exhaustion note in the summary.
ReplayResult cmd_replay(const std::filesystem::path& sheet_path);
std::string format_replay(const ReplayResult& r, int limit);

// Parses argv-style arguments (without the program name), runs the command
// and maps errors to exit codes: 2 for bad input, 3 for internal failures.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace vdsim::cli
