#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehrelay/simulator.hpp"

namespace ehrelay {

enum class RunMode { Sim, DtmcProduct, DtmcMc, DtmcMarginal };

RunMode run_mode_from_name(std::string_view name);
std::string_view run_mode_name(RunMode mode);

/// One experiment: a scenario, an evaluation mode, and optionally a sweep.
/// The analytical modes cover BARS only.
struct ExperimentConfig {
  double snr_db = 10.0;
  double noise = 1.0;
  double rate = 1.0;
  double kappa = 0.5;
  double alpha = 1.0;
  int n_relays = 2;
  int levels = 1;
  std::vector<double> mean_g;  // empty = unit means; single value broadcasts
  std::vector<double> mean_h;
  Policy policy = Policy::Bars;
  RunMode mode = RunMode::Sim;
  std::int64_t slots = 1'000'000;
  std::int64_t warmup_slots = 0;
  std::uint64_t seed = 1;
  std::int64_t mc_samples_per_state = 1'000'000;
  std::optional<SweepAxis> sweep_axis;
  std::vector<std::string> sweep_values;
  std::string out;  // output path; empty writes to stdout

  void validate() const;  // throws std::invalid_argument naming the key
  SystemParams to_params() const;
  SimConfig to_sim_config() const;
};

/// Applies one config key; shared by the config-file parser and the CLI
/// flag layer. Throws std::invalid_argument naming the key on unknown keys
/// or malformed values.
void apply_config_key(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

/// Parses flat key=value lines ('#' starts a comment). Unknown keys are an
/// error; the result is validated.
ExperimentConfig parse_config(std::string_view text);

inline constexpr std::string_view kCsvHeader =
    "policy,mode,snr_db,n_relays,levels,alpha,kappa,rate,p_out,ci_low,ci_high,slots,seed";

/// Locale-independent shortest-of-9-significant-digits float formatting,
/// byte-stable across runs.
std::string format_double(double value);

/// Runs the experiment (single point or sweep) and returns the CSV text,
/// header included. Sweep points run in parallel up to the EHRELAY_WORKERS
/// cap; rows appear in sweep order.
std::string run_experiment_csv(const ExperimentConfig& config);

/// run_experiment_csv plus writing to config.out (or stdout when empty).
void run_experiment(const ExperimentConfig& config);

struct FigureOptions {
  std::int64_t slots = 1'000'000;           // raised to slots_deep for deep-tail curves
  std::int64_t slots_deep = 10'000'000;     // L=100 curves probe below 1e-4
  std::int64_t mc_samples_per_state = 200'000;
  std::uint64_t seed = 1;
};

/// Emits the plot-ready CSV files for one of the canned studies
/// {fig2, fig3, fig4, fig5} into out_dir; returns the written paths.
/// Grids: fig2/fig5 sweep SNR 0:5:40 dB, fig3 sweeps kappa 0.1:0.1:1.0,
/// fig4 sweeps alpha 0.2:0.1:1.4.
std::vector<std::string> write_figures(const std::string& name,
                                       const std::string& out_dir,
                                       const FigureOptions& options = {});

}  // namespace ehrelay
