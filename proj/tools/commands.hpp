#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctxgeom/scenarios.hpp"

namespace ctxgeom::cli {

enum ExitCode : int { kOk = 0, kIoError = 2, kBadArguments = 3, kNumericalFailure = 4 };

enum class Format { Json, Csv };

struct RunConfig {
  std::filesystem::path output_dir;
  Format format = Format::Json;
  int precision = 6;
  std::uint64_t seed = 42;
  std::size_t trials = 10000;
  std::size_t threads = 1;
  std::vector<int> n_values{5, 7, 9, 11, 13, 15};
  std::vector<double> p_grid;  // empty: default KCBS grid
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CTXGEOM_OUT";

std::vector<double> default_p_grid();

/// Locale-independent fixed-point formatting; -0 prints as 0.
std::string format_fixed(double value, int precision);

// Each command writes its files under config.output_dir and returns the list
// of paths written. Errors surface as ctxgeom exceptions or std::ios_base::failure.
std::vector<std::filesystem::path> cmd_kcbs(const RunConfig& config);
std::vector<std::filesystem::path> cmd_chsh(const RunConfig& config, const ChshConfig& angles, const std::string& regime);
std::vector<std::filesystem::path> cmd_ncycle(const RunConfig& config);
std::vector<std::filesystem::path> cmd_verify(const RunConfig& config);

/// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctxgeom::cli
