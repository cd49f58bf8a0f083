#pragma once

// Subcommand implementations behind the `qmc` executable. Each returns its
// stdout/stderr text and exit code so the commands can be exercised without
// spawning a process.

#include "qmc/channel.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitPartial = 3;

enum class OutputFormat { csv, json };

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

// Either (a, d) or (x0, x1) must be supplied alongside mu.
struct ParamInput {
  std::optional<double> mu;
  std::optional<double> a;
  std::optional<double> d;
  std::optional<double> x0;
  std::optional<double> x1;
  ParamDomain domain = ParamDomain::completely_positive;
};

// Resolves to a validated ChannelParams or a message naming the problem.
struct ResolvedParams {
  std::optional<ChannelParams> params;
  std::string error;
};
ResolvedParams resolve(const ParamInput& input);

// Largest-magnitude d keeping both branch parameters completely positive for
// the given a; negative by convention. NaN when no such d exists.
double max_valid_d(double a);

enum class SweepAxis { mu, a, d };
enum class DMode { explicit_value, max_valid };

struct SweepSpec {
  SweepAxis axis = SweepAxis::mu;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 10;  // number of intervals; steps + 1 grid points
  ParamInput fixed;
  DMode d_mode = DMode::explicit_value;
};

enum class QuantityKind { f, c2, i_n, c_prod, bound };

struct SweepQuantity {
  QuantityKind kind = QuantityKind::f;
  int n = 2;
  std::vector<std::string> families = {"product", "ghz", "w", "max_entangled"};
  double tolerance = 1e-6;
  int n_max = 20;
};

std::optional<SweepAxis> parse_axis(const std::string& s);
std::optional<QuantityKind> parse_quantity(const std::string& s);
// "all" or a comma-separated list of family names.
std::vector<std::string> parse_families(const std::string& s);

CommandResult cmd_two_qubit(const ParamInput& input, OutputFormat format);
CommandResult cmd_sweep(const SweepSpec& spec, const SweepQuantity& quantity,
                        OutputFormat format);
CommandResult cmd_entropy_rate(const ParamInput& input, double tolerance, int n_max,
                               OutputFormat format);
CommandResult cmd_mutual_info(const ParamInput& input, int n,
                              const std::vector<std::string>& families, OutputFormat format);
CommandResult cmd_figures(const std::filesystem::path& out_dir);

const char* version();

}  // namespace qmc::cli
