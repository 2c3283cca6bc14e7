#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omerdf/links/link_registry.hpp"

namespace omerdf::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

/// Process context that tests replace.
struct CliContext {
  /// Value of OME_RDF_CONFIG; nullopt when unset.
  std::optional<std::string> config_env;
  /// Used by link-check instead of the HTTP fetcher when set.
  links::Fetcher* fetcher = nullptr;
};

/// Reads OME_RDF_CONFIG from the environment.
CliContext process_context();

/// Runs one invocation. `args` excludes the program name. Data goes to
/// `out` unless an output path is given; diagnostics always go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const CliContext& ctx);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Global help followed by the help of every subcommand.
std::string help_text();

}  // namespace omerdf::cli
