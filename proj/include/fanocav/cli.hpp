#ifndef FANOCAV_CLI_HPP
#define FANOCAV_CLI_HPP

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "fanocav/model.hpp"

namespace fanocav {

// One sweep axis. `variable` names what the grid parametrizes: "delta"
// (probe detuning) for transmission/compare, "g" for cooling, "omega"
// (drive-frame sideband frequency) for sf-spectrum, "t" (time) for kernels.
struct SweepSpec {
  std::string variable;
  double min = 0.0;
  double max = 0.0;
  int points = 1;
  bool log_scale = false;

  void validate() const;
  Eigen::VectorXd grid() const;
};

enum class OutputFormat { csv, json };

// Parsed parameter file. JSON schema (all physics keys optional, defaulting to
// the struct defaults; unknown keys are rejected at every nesting level):
//   {
//     "version": 1,
//     "setup":    {"zeta0", "zeta_r" | "one_sided": true, "fsr", "gamma",
//                  "omega_d", "s"},
//     "optomech": {"omega_m", "gamma_m", "nbar" (number or array), "g",
//                  "delta_d", "delta_a" (optional, else derived from the
//                  identified mode splitting)},
//     "sweep":    {"variable", "min", "max", "points", "scale": "linear"|"log"},
//     "outputs":  ["transmission" | "cooling" | "sf_spectrum" | "kernels" |
//                  "compare", ...]  (optional),
//     "output_path": "...", (optional here; --out overrides)
//     "format": "csv"|"json" (optional, default csv)
//   }
struct RunConfig {
  PhysicalSetup setup;
  bool has_optomech = false;
  OptomechParams optomech;          // delta_a already resolved when delta_a_explicit
  bool delta_a_explicit = false;
  std::vector<double> nbar_values;  // thermal occupations for cooling tables
  SweepSpec sweep;
  std::vector<std::string> outputs;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;

  void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

// Rectangular result table; cells are doubles or short labels ("summary",
// "unstable", "n/a", ...).
using Cell = std::variant<double, std::string>;
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// CSV: header row, '.' decimal separator, 17-significant-digit doubles, LF
// line endings. JSON: {"columns": [...], "rows": [[...], ...]}.
std::string render_csv(const Table& table);
std::string render_json(const Table& table);
void write_table(const Table& table, const std::string& path, OutputFormat format);

// Table builders behind the CLI verbs (pure: no I/O), so tests can inspect
// products without touching the filesystem.
Table make_transmission_table(const RunConfig& config, int threads);
Table make_cooling_table(const RunConfig& config, int threads);
Table make_sf_table(const RunConfig& config, int threads);
Table make_kernels_table(const RunConfig& config);
Table make_compare_table(const RunConfig& config, int threads);

// Full command: load config, apply overrides, build the product, write it.
// Returns the process exit status (0 iff the product was written and every
// validation gate passed).
int run_cli(int argc, const char* const* argv);

}  // namespace fanocav

#endif  // FANOCAV_CLI_HPP
