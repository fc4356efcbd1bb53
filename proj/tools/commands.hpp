#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "wpg/error.hpp"

namespace wpg::cli {

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

// Format, parameter and input errors are usage errors; the rest are runtime
// failures.
int exit_code_for(const Error& e);

struct SolveOptions {
  std::filesystem::path input;
  std::filesystem::path output_dir;
};

// Writes w.txt, A.txt, trace.txt and report.txt into output_dir.
void cmd_solve(const SolveOptions& opt, const RunConfig& config, std::ostream& log);

struct TrackOptions {
  std::filesystem::path sequence;
  std::filesystem::path output;  // per-frame CSV; the report goes to <output>.report
  int max_frames = 0;            // 0 for all
};

void cmd_track(const TrackOptions& opt, const RunConfig& config, std::ostream& log);

struct EvalOptions {
  std::filesystem::path root;
  std::filesystem::path output_dir;
  std::vector<std::string> variants;  // empty for the configured one
  int jobs = 0;                       // 0 for hardware concurrency
  int max_frames = 0;
};

// Returns the number of sequences evaluated successfully over all variants.
int cmd_eval(const EvalOptions& opt, const RunConfig& config, std::ostream& log);

struct SynthOptions {
  std::string kind;  // linear, zoom or static
  std::filesystem::path output_dir;
  int frames = 0;    // 0 for the generator default
  std::uint64_t seed = 7;
};

void cmd_synth(const SynthOptions& opt, std::ostream& log);

// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wpg::cli
