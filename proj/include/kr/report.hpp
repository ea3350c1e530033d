#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "kr/io.hpp"

namespace kr {

inline constexpr const char* kSchema = "kr-report/1";
inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  u32 k = 0;
  std::size_t budget_states = 100000;
  std::uint64_t budget_nodes = 2000000;
  std::uint64_t seed = 1;
  u32 gm = 0;  // GM image index for flow-verify
};

enum class ExitCode { Ok = 0, HardError = 1, BoundsOnly = 2 };

struct Report {
  nlohmann::ordered_json body;
  ExitCode code = ExitCode::Ok;
};

/// Commands: green, bounds, complexity, eval, flow-verify, divides.
/// other is the second semigroup for divides; flow_text the flow file for flow-verify.
Report run(const std::string& command, const InputDocument& doc, const RunConfig& cfg,
           const std::optional<InputDocument>& other = std::nullopt, const std::string& flow_text = {});

/// Report for a hard error (exit code 1).
Report error_report(const std::string& command, const std::string& message);

std::string emit_json(const Report& r);
std::string emit_text(const Report& r);

}  // namespace kr
