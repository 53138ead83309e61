#include "fanocav/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fanocav/coupled_mode.hpp"
#include "fanocav/optomech.hpp"
#include "fanocav/parallel.hpp"
#include "fanocav/transfer_matrix.hpp"

namespace fanocav {

namespace {

using json = nlohmann::json;

const std::set<std::string>& known_products() {
  static const std::set<std::string> products{"transmission", "cooling", "sf_spectrum",
                                              "kernels", "compare"};
  return products;
}

void require_known_keys(const std::string& context, const json& j,
                        std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("parse_config_text(): unknown key \"" + item.key() +
                                  "\" in " + context);
    }
  }
}

double as_number(const std::string& context, const json& j) {
  if (!j.is_number()) {
    throw std::invalid_argument("parse_config_text(): " + context + " must be a number");
  }
  return j.get<double>();
}

void parse_setup(const json& j, PhysicalSetup& setup) {
  if (!j.is_object()) {
    throw std::invalid_argument("parse_config_text(): \"setup\" must be an object");
  }
  require_known_keys("\"setup\"", j,
                     {"zeta0", "zeta_r", "one_sided", "fsr", "gamma", "omega_d", "s"});
  if (j.contains("zeta0")) setup.zeta0 = as_number("setup.zeta0", j.at("zeta0"));
  const bool one_sided = j.contains("one_sided") && [&] {
    if (!j.at("one_sided").is_boolean()) {
      throw std::invalid_argument("parse_config_text(): setup.one_sided must be a boolean");
    }
    return j.at("one_sided").get<bool>();
  }();
  if (one_sided) {
    if (j.contains("zeta_r")) {
      throw std::invalid_argument(
          "parse_config_text(): setup.zeta_r and setup.one_sided = true are mutually "
          "exclusive");
    }
    setup.zeta_r = std::numeric_limits<double>::infinity();
  } else if (j.contains("zeta_r")) {
    setup.zeta_r = as_number("setup.zeta_r", j.at("zeta_r"));
  }
  if (j.contains("fsr")) setup.fsr = as_number("setup.fsr", j.at("fsr"));
  if (j.contains("gamma")) setup.gamma = as_number("setup.gamma", j.at("gamma"));
  if (j.contains("omega_d")) setup.omega_d = as_number("setup.omega_d", j.at("omega_d"));
  if (j.contains("s")) setup.s = as_number("setup.s", j.at("s"));
}

void parse_optomech(const json& j, RunConfig& cfg) {
  if (!j.is_object()) {
    throw std::invalid_argument("parse_config_text(): \"optomech\" must be an object");
  }
  require_known_keys("\"optomech\"", j,
                     {"omega_m", "gamma_m", "nbar", "g", "delta_d", "delta_a"});
  cfg.has_optomech = true;
  OptomechParams& om = cfg.optomech;
  if (j.contains("omega_m")) om.omega_m = as_number("optomech.omega_m", j.at("omega_m"));
  if (j.contains("gamma_m")) om.gamma_m = as_number("optomech.gamma_m", j.at("gamma_m"));
  if (j.contains("g")) om.g = as_number("optomech.g", j.at("g"));
  if (j.contains("delta_d")) om.delta_d = as_number("optomech.delta_d", j.at("delta_d"));
  if (j.contains("delta_a")) {
    om.delta_a = as_number("optomech.delta_a", j.at("delta_a"));
    cfg.delta_a_explicit = true;
  }
  if (j.contains("nbar")) {
    const json& nb = j.at("nbar");
    cfg.nbar_values.clear();
    if (nb.is_array()) {
      if (nb.empty()) {
        throw std::invalid_argument("parse_config_text(): optomech.nbar array must be non-empty");
      }
      for (const auto& v : nb) cfg.nbar_values.push_back(as_number("optomech.nbar[]", v));
    } else {
      cfg.nbar_values.push_back(as_number("optomech.nbar", nb));
    }
    om.nbar = cfg.nbar_values.front();
  } else {
    cfg.nbar_values = {om.nbar};
  }
}

void parse_sweep(const json& j, SweepSpec& sweep) {
  if (!j.is_object()) {
    throw std::invalid_argument("parse_config_text(): \"sweep\" must be an object");
  }
  require_known_keys("\"sweep\"", j, {"variable", "min", "max", "points", "scale"});
  if (!j.contains("variable") || !j.at("variable").is_string()) {
    throw std::invalid_argument("parse_config_text(): sweep.variable must be a string");
  }
  sweep.variable = j.at("variable").get<std::string>();
  if (!j.contains("min") || !j.contains("max") || !j.contains("points")) {
    throw std::invalid_argument(
        "parse_config_text(): sweep requires \"min\", \"max\" and \"points\"");
  }
  sweep.min = as_number("sweep.min", j.at("min"));
  sweep.max = as_number("sweep.max", j.at("max"));
  if (!j.at("points").is_number_integer()) {
    throw std::invalid_argument("parse_config_text(): sweep.points must be an integer");
  }
  sweep.points = j.at("points").get<int>();
  if (j.contains("scale")) {
    const std::string scale = j.at("scale").is_string() ? j.at("scale").get<std::string>() : "";
    if (scale == "linear") {
      sweep.log_scale = false;
    } else if (scale == "log") {
      sweep.log_scale = true;
    } else {
      throw std::invalid_argument(
          "parse_config_text(): sweep.scale must be \"linear\" or \"log\"");
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
  return std::get<std::string>(cell);
}

// Drive-frame optomech parameters implied by the config (delta_a derived from
// the identified mode splitting unless given explicitly).
OptomechParams resolved_optomech(const RunConfig& cfg, const CoupledModeParams& cm) {
  if (!cfg.has_optomech) {
    throw std::invalid_argument("make_cooling_table(): config has no \"optomech\" block");
  }
  if (cfg.delta_a_explicit) {
    OptomechParams om = cfg.optomech;
    om.validate();
    return om;
  }
  const OptomechParams& base = cfg.optomech;
  return make_optomech(cm, base.omega_m, base.gamma_m, base.nbar, base.g, base.delta_d);
}

void check_product_requested(const char* fn, const RunConfig& cfg, const std::string& product) {
  if (cfg.outputs.empty()) return;
  for (const auto& p : cfg.outputs) {
    if (p == product) return;
  }
  throw std::invalid_argument(std::string(fn) + "(): config \"outputs\" does not request \"" +
                              product + "\"");
}

void check_sweep_variable(const char* fn, const RunConfig& cfg, const char* expected) {
  if (cfg.sweep.variable != expected) {
    throw std::invalid_argument(std::string(fn) + "(): sweep.variable must be \"" +
                                expected + "\", got \"" + cfg.sweep.variable + "\"");
  }
}

Cell fwhm_cell(const ComplexSpectrum& spectrum) {
  try {
    return Cell{effective_linewidth(spectrum)};
  } catch (const std::exception&) {
    return Cell{std::string("n/a")};
  }
}

void append_cooling_rows(Table& table, const std::vector<CoolingPoint>& fano,
                         const std::vector<CoolingPoint>& markov_eq,
                         const std::vector<CoolingPoint>& unresolved,
                         const Eigen::VectorXd& g_values, double nbar,
                         const CoupledModeParams& cm, const OptomechParams& om_base) {
  auto nf_cell = [](const CoolingPoint& pt) {
    return pt.stable ? Cell{pt.n_f} : Cell{std::string("unstable")};
  };
  for (Eigen::Index i = 0; i < g_values.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    OptomechParams om = om_base;
    om.nbar = nbar;
    om.g = g_values[i];
    table.rows.push_back({Cell{nbar}, Cell{g_values[i]},
                          Cell{force_psd(cm, om, om.omega_m)},
                          Cell{force_psd(cm, om, -om.omega_m)}, nf_cell(fano[k]),
                          Cell{fano[k].stable ? 1.0 : 0.0}, nf_cell(markov_eq[k]),
                          Cell{markov_eq[k].stable ? 1.0 : 0.0}, nf_cell(unresolved[k]),
                          Cell{unresolved[k].stable ? 1.0 : 0.0}});
  }
}

}  // namespace

void SweepSpec::validate() const {
  if (variable.empty()) {
    throw std::invalid_argument("SweepSpec::validate(): variable name must be non-empty");
  }
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw std::invalid_argument("SweepSpec::validate(): bounds must be finite");
  }
  if (points < 1) {
    throw std::invalid_argument("SweepSpec::validate(): points must be >= 1");
  }
  if (points == 1) {
    if (min != max) {
      throw std::invalid_argument("SweepSpec::validate(): single-point sweep requires min == max");
    }
  } else if (!(min < max)) {
    throw std::invalid_argument("SweepSpec::validate(): require min < max");
  }
  if (log_scale && !(min > 0.0)) {
    throw std::invalid_argument("SweepSpec::validate(): log sweeps require min > 0");
  }
}

Eigen::VectorXd SweepSpec::grid() const {
  validate();
  if (!log_scale) return linear_grid(min, max, points);
  Eigen::VectorXd g = linear_grid(std::log10(min), std::log10(max), points);
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = std::pow(10.0, g[i]);
  g[0] = min;
  g[g.size() - 1] = max;
  return g;
}

void RunConfig::validate() const {
  setup.validate();
  sweep.validate();
  if (has_optomech) {
    OptomechParams om = optomech;
    for (double nb : nbar_values) {
      om.nbar = nb;
      om.validate();
    }
  }
  for (const auto& product : outputs) {
    if (known_products().count(product) == 0) {
      throw std::invalid_argument("RunConfig::validate(): unknown requested product \"" +
                                  product + "\"");
    }
  }
}

RunConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("parse_config_text(): invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("parse_config_text(): top level must be a JSON object");
  }
  require_known_keys("the top-level object", j,
                     {"version", "setup", "optomech", "sweep", "outputs", "output_path",
                      "format"});
  if (!j.contains("version") || !j.at("version").is_number_integer() ||
      j.at("version").get<long long>() != 1) {
    throw std::invalid_argument("parse_config_text(): config must declare \"version\": 1");
  }

  RunConfig cfg;
  try {
    if (j.contains("setup")) parse_setup(j.at("setup"), cfg.setup);
    if (j.contains("optomech")) parse_optomech(j.at("optomech"), cfg);
    if (!j.contains("sweep")) {
      throw std::invalid_argument("parse_config_text(): config requires a \"sweep\" block");
    }
    parse_sweep(j.at("sweep"), cfg.sweep);
    if (j.contains("outputs")) {
      if (!j.at("outputs").is_array()) {
        throw std::invalid_argument("parse_config_text(): \"outputs\" must be an array");
      }
      for (const auto& v : j.at("outputs")) {
        if (!v.is_string()) {
          throw std::invalid_argument("parse_config_text(): outputs entries must be strings");
        }
        cfg.outputs.push_back(v.get<std::string>());
      }
    }
    if (j.contains("output_path")) {
      if (!j.at("output_path").is_string()) {
        throw std::invalid_argument("parse_config_text(): output_path must be a string");
      }
      cfg.output_path = j.at("output_path").get<std::string>();
    }
    if (j.contains("format")) {
      const std::string f = j.at("format").is_string() ? j.at("format").get<std::string>() : "";
      if (f == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (f == "json") {
        cfg.format = OutputFormat::json;
      } else {
        throw std::invalid_argument("parse_config_text(): format must be \"csv\" or \"json\"");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("parse_config_text(): malformed config: ") +
                                e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_config(): cannot open config file \"" + path + "\"");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string render_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::logic_error("render_csv(): row width does not match column count");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << csv_cell(row[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Table& table) {
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::logic_error("render_json(): row width does not match column count");
    }
    nlohmann::ordered_json jr = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (std::holds_alternative<double>(cell)) {
        jr.push_back(std::get<double>(cell));
      } else {
        jr.push_back(std::get<std::string>(cell));
      }
    }
    j["rows"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

void write_table(const Table& table, const std::string& path, OutputFormat format) {
  const std::string body = (format == OutputFormat::csv) ? render_csv(table) : render_json(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_table(): cannot open output path \"" + path + "\"");
  }
  out << body;
  out.flush();
  if (!out) {
    throw std::runtime_error("write_table(): failed writing to \"" + path + "\"");
  }
}

Table make_transmission_table(const RunConfig& config, int threads) {
  config.validate();
  check_product_requested("make_transmission_table", config, "transmission");
  check_sweep_variable("make_transmission_table", config, "delta");
  const Eigen::VectorXd grid = config.sweep.grid();
  const CoupledModeParams cm = identify_parameters(config.setup);
  const ComplexSpectrum spec_cm = transmission_spectrum_cm(cm, grid, threads);
  const ComplexSpectrum spec_tm = transmission_spectrum_tm(config.setup, grid, threads);
  const Eigen::VectorXd i_cm = spec_cm.intensity();
  const Eigen::VectorXd i_tm = spec_tm.intensity();

  Table table;
  table.columns = {"delta", "t2_coupled_mode", "t2_transfer_matrix", "abs_diff"};
  double max_diff = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double diff = std::abs(i_cm[i] - i_tm[i]);
    max_diff = std::max(max_diff, diff);
    table.rows.push_back({Cell{grid[i]}, Cell{i_cm[i]}, Cell{i_tm[i]}, Cell{diff}});
  }
  // Summary row: FWHM of each model's intensity profile and the max deviation.
  table.rows.push_back(
      {Cell{std::string("summary")}, fwhm_cell(spec_cm), fwhm_cell(spec_tm), Cell{max_diff}});
  return table;
}

Table make_compare_table(const RunConfig& config, int threads) {
  config.validate();
  check_product_requested("make_compare_table", config, "compare");
  check_sweep_variable("make_compare_table", config, "delta");
  const Eigen::VectorXd grid = config.sweep.grid();
  const CoupledModeParams cm = identify_parameters(config.setup);
  const ComplexSpectrum spec_cm = transmission_spectrum_cm(cm, grid, threads);
  const ComplexSpectrum spec_tm = transmission_spectrum_tm(config.setup, grid, threads);
  const Eigen::VectorXd diff = (spec_cm.intensity() - spec_tm.intensity()).cwiseAbs();

  Table table;
  table.columns = {"metric", "value"};
  table.rows.push_back({Cell{std::string("points")}, Cell{static_cast<double>(grid.size())}});
  table.rows.push_back({Cell{std::string("delta_min")}, Cell{grid[0]}});
  table.rows.push_back({Cell{std::string("delta_max")}, Cell{grid[grid.size() - 1]}});
  table.rows.push_back({Cell{std::string("max_abs_diff")}, Cell{diff.maxCoeff()}});
  table.rows.push_back({Cell{std::string("fwhm_coupled_mode")}, fwhm_cell(spec_cm)});
  table.rows.push_back({Cell{std::string("fwhm_transfer_matrix")}, fwhm_cell(spec_tm)});
  return table;
}

Table make_cooling_table(const RunConfig& config, int threads) {
  config.validate();
  check_product_requested("make_cooling_table", config, "cooling");
  check_sweep_variable("make_cooling_table", config, "g");
  if (config.sweep.min < 0.0) {
    throw std::invalid_argument("make_cooling_table(): coupling sweep requires min >= 0");
  }
  const Eigen::VectorXd g_values = config.sweep.grid();
  const CoupledModeParams cm = identify_parameters(config.setup);
  const OptomechParams om_base = resolved_optomech(config, cm);

  // Markovian baselines at the same mechanical parameters, driven on the red
  // sideband: one with the linewidth the dressed cavity would have were it
  // Lorentzian (gamma / (2 zeta0^2)), one with the bare unresolved linewidth
  // kappa_0 + kappa_R.
  const double kappa_equal = config.setup.gamma / (2.0 * config.setup.zeta0 * config.setup.zeta0);
  const double kappa_unresolved = cm.kappa_0 + cm.kappa_r;

  Table table;
  table.columns = {"nbar",
                   "g",
                   "s_f_cooling",
                   "s_f_heating",
                   "n_f_fano",
                   "stable_fano",
                   "n_f_markovian_equal_linewidth",
                   "stable_markovian_equal_linewidth",
                   "n_f_unresolved",
                   "stable_unresolved"};
  for (double nbar : config.nbar_values) {
    OptomechParams om = om_base;
    om.nbar = nbar;
    const auto fano = cooling_curve(cm, om, g_values, threads);
    const auto markov_eq =
        markovian_cooling_curve(kappa_equal, om.omega_m, om, g_values, threads);
    const auto unres =
        markovian_cooling_curve(kappa_unresolved, om.omega_m, om, g_values, threads);
    append_cooling_rows(table, fano, markov_eq, unres, g_values, nbar, cm, om);
  }
  return table;
}

Table make_sf_table(const RunConfig& config, int threads) {
  config.validate();
  check_product_requested("make_sf_table", config, "sf_spectrum");
  check_sweep_variable("make_sf_table", config, "omega");
  const Eigen::VectorXd grid = config.sweep.grid();
  const CoupledModeParams cm = identify_parameters(config.setup);
  const OptomechParams om = resolved_optomech(config, cm);

  Eigen::VectorXd values(grid.size());
  parallel_for(static_cast<std::size_t>(grid.size()), threads, [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    values[k] = force_psd(cm, om, grid[k]);
  });

  Table table;
  table.columns = {"row_kind", "omega", "s_f", "s_f_reference"};
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    table.rows.push_back(
        {Cell{std::string("sweep")}, Cell{grid[i]}, Cell{values[i]}, Cell{std::string()}});
  }
  // Reference values of the two sidebands at the optimal operating point:
  // exact peak value 2 g^2 / (kappa_0 + kappa_R) for the cooling sideband and
  // the broad-mirror heating asymptote 2 g^2 kappa_R zeta0^2 / fsr^2.
  const double g2 = om.g * om.g;
  const double cool_ref = 2.0 * g2 / (cm.kappa_0 + cm.kappa_r);
  const double heat_ref = 2.0 * g2 * cm.kappa_r * config.setup.zeta0 * config.setup.zeta0 /
                          (config.setup.fsr * config.setup.fsr);
  table.rows.push_back({Cell{std::string("sideband_cooling")}, Cell{om.omega_m},
                        Cell{force_psd(cm, om, om.omega_m)}, Cell{cool_ref}});
  table.rows.push_back({Cell{std::string("sideband_heating")}, Cell{-om.omega_m},
                        Cell{force_psd(cm, om, -om.omega_m)}, Cell{heat_ref}});
  return table;
}

Table make_kernels_table(const RunConfig& config) {
  config.validate();
  check_product_requested("make_kernels_table", config, "kernels");
  check_sweep_variable("make_kernels_table", config, "t");
  if (config.sweep.min < 0.0) {
    throw std::invalid_argument("make_kernels_table(): time sweep requires min >= 0");
  }
  const Eigen::VectorXd times = config.sweep.grid();
  const CoupledModeParams cm = identify_parameters(config.setup);

  struct Named {
    const char* name;
    KernelCoefficients k;
  };
  const Named kernels[] = {{"kappa_eff", kernel_kappa_eff(cm)},
                           {"kappa_in", kernel_kappa_in(cm)},
                           {"kappa_in_prime", kernel_kappa_in_prime(cm)},
                           {"kappa_out", kernel_kappa_out(cm)}};

  Table table;
  table.columns = {"row_kind", "kernel", "t", "value_re", "value_im"};
  const Cell no_time{std::string()};
  for (const auto& [name, k] : kernels) {
    const std::string kernel(name);
    table.rows.push_back({Cell{std::string("delta_weight")}, Cell{kernel}, no_time,
                          Cell{k.delta_weight.real()}, Cell{k.delta_weight.imag()}});
    table.rows.push_back({Cell{std::string("exp_amplitude")}, Cell{kernel}, no_time,
                          Cell{k.exp_amplitude.real()}, Cell{k.exp_amplitude.imag()}});
    table.rows.push_back({Cell{std::string("exp_rate")}, Cell{kernel}, no_time,
                          Cell{k.exp_rate.real()}, Cell{k.exp_rate.imag()}});
    std::complex<double> integral{0.0, 0.0};
    std::complex<double> prev = kernel_tail(k, times[0]);
    for (Eigen::Index i = 0; i < times.size(); ++i) {
      const std::complex<double> v = kernel_tail(k, times[i]);
      table.rows.push_back(
          {Cell{std::string("tail_sample")}, Cell{kernel}, Cell{times[i]}, Cell{v.real()},
           Cell{v.imag()}});
      if (i > 0) integral += 0.5 * (times[i] - times[i - 1]) * (prev + v);
      prev = v;
    }
    // Trapezoidal integral of the exponential part over the sampled window;
    // as gamma -> infinity this tends to the kernel's non-delta weight.
    table.rows.push_back({Cell{std::string("integrated_tail_weight")}, Cell{kernel},
                          Cell{times[times.size() - 1]}, Cell{integral.real()},
                          Cell{integral.imag()}});
  }
  return table;
}

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string format;
  int threads = 1;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "Parameter file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_path, "Output file path (overrides config output_path)");
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", opt.threads, "Worker threads for sweeps")
      ->check(CLI::PositiveNumber);
}

int run_product(const CliOptions& opt, const std::string& verb) {
  RunConfig cfg = load_config(opt.config_path);
  if (!opt.out_path.empty()) cfg.output_path = opt.out_path;
  if (!opt.format.empty()) {
    cfg.format = (opt.format == "csv") ? OutputFormat::csv : OutputFormat::json;
  }
  if (cfg.output_path.empty()) {
    throw std::invalid_argument(
        "run_cli(): no output path: set \"output_path\" in the config or pass --out");
  }
  Table table;
  if (verb == "transmission") {
    table = make_transmission_table(cfg, opt.threads);
  } else if (verb == "cooling") {
    table = make_cooling_table(cfg, opt.threads);
  } else if (verb == "sf-spectrum") {
    table = make_sf_table(cfg, opt.threads);
  } else if (verb == "kernels") {
    table = make_kernels_table(cfg);
  } else if (verb == "compare") {
    table = make_compare_table(cfg, opt.threads);
  } else {
    throw std::logic_error("run_cli(): unhandled verb " + verb);
  }
  write_table(table, cfg.output_path, cfg.format);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "Cavity spectra, memory kernels and sideband-cooling tables for a cavity "
      "with a frequency-dependent end mirror"};
  app.require_subcommand(1);

  CliOptions opt;
  const char* verbs[] = {"transmission", "cooling", "sf-spectrum", "kernels", "compare"};
  const char* blurbs[] = {
      "Transmission spectrum from both models plus deviation and linewidth summary",
      "Steady phonon occupation vs coupling, with Markovian baselines",
      "Backaction force spectral density with sideband markers",
      "Memory-kernel coefficients, sampled tails and integrated weights",
      "Model-agreement summary (max deviation, linewidths)"};
  for (std::size_t i = 0; i < 5; ++i) {
    add_common(app.add_subcommand(verbs[i], blurbs[i]), opt);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return run_product(opt, app.get_subcommands().front()->get_name());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fanocav
