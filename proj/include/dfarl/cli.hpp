#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace dfarl {

inline constexpr const char* kToolVersion = "dfarl 0.1.0";

/**
 * Record of one command invocation. `run` is the digest of everything that
 * determines the outputs (command, resolved config, seed, version, input
 * digests); every output file carries it. Output digests are listed here.
 */
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, digest
  std::vector<std::pair<std::string, std::string>> outputs;  // path, digest

  std::string run_digest() const;
  nlohmann::json to_json() const;
};

std::string file_digest(const std::string& path);

/// Entry point of the command-line tool. Exit codes: 0 success, 1 invalid
/// input, 2 internal invariant violated, 3 other runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfarl
