#ifndef ODICKE_CLI_HPP
#define ODICKE_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odicke/model.hpp"
#include "odicke/scaling.hpp"
#include "odicke/types.hpp"

namespace odicke {

inline constexpr std::string_view kToolName = "odicke";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Bad flag, key, or value; maps to exit code 2.
class UsageError : public Error {
public:
  using Error::Error;
};

/// Flat key = value run configuration shared by every subcommand.
/// Keys are the long flag names without dashes.
struct RunConfig {
  double omega = 1.0;
  double kappa = 1.0;
  double delta_kappa = 0.5;
  bool delta_ep = true;  // resolve delta with ep_detuning(kappa, delta_kappa)
  double delta = 0.0;
  std::string g = "critical";  // "critical" or a number
  std::optional<double> g_rel;  // g = g_rel * g_c, overrides g

  std::string side = "both";
  double eps_min = 1e-4;
  double eps_max = 1e-2;
  int points_per_decade = 20;
  std::string observables = "all";

  double freq_min = 1e-4;
  double freq_max = 1e-2;
  int freq_points = 21;
  std::string freq_scale = "log";
  bool full = false;

  std::string input;
  std::string column;
  std::string out;
  std::string format = "csv";
  int threads = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Keys accepted in config files and as --flags.
const std::vector<std::string>& config_keys();

/// Applies one key = value pair; throws UsageError naming the key.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

std::string get_config_value(const RunConfig& cfg, std::string_view key);

std::string serialize_config(const RunConfig& cfg);

/// Parses key = value lines ('#' starts a comment) on top of base.
RunConfig parse_config(std::string_view text, RunConfig base = {});

struct ResolvedModel {
  ModelParamsd params;  // g holds the resolved coupling
  double g_c = 0;
};

/// Resolves "ep" detuning and the coupling spec, then validates.
ResolvedModel resolve_model(const RunConfig& cfg);

SweepSpec sweep_spec_from(const RunConfig& cfg);

/// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace odicke

#endif // ODICKE_CLI_HPP
