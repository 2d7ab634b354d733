#include "ehrelay/experiment.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "ehrelay/dtmc.hpp"
#include "parallel.hpp"

namespace ehrelay {

namespace {

double parse_f64(const std::string& value, const std::string& key) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument(key + ": malformed number '" + value + "'");
  return v;
}

std::int64_t parse_i64(const std::string& value, const std::string& key) {
  std::int64_t v = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument(key + ": malformed integer '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  std::uint64_t v = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument(key + ": malformed unsigned integer '" + value + "'");
  return v;
}

int parse_int(const std::string& value, const std::string& key) {
  const std::int64_t v = parse_i64(value, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw std::invalid_argument(key + ": value out of range '" + value + "'");
  return static_cast<int>(v);
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value, const std::string& key) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::size_t stop = comma == std::string::npos ? value.size() : comma;
    const std::string item = trim(std::string_view(value).substr(start, stop - start));
    if (item.empty()) throw std::invalid_argument(key + ": empty list entry");
    items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<double> parse_list_f64(const std::string& value, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(value, key)) out.push_back(parse_f64(item, key));
  return out;
}

std::vector<double> resolve_means(const std::vector<double>& means, int n) {
  if (means.empty()) return std::vector<double>(static_cast<std::size_t>(n), 1.0);
  if (means.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), means.front());
  return means;
}

}  // namespace

RunMode run_mode_from_name(std::string_view name) {
  if (name == "sim") return RunMode::Sim;
  if (name == "dtmc-product") return RunMode::DtmcProduct;
  if (name == "dtmc-mc") return RunMode::DtmcMc;
  if (name == "dtmc-marginal") return RunMode::DtmcMarginal;
  throw std::invalid_argument("mode: unknown name '" + std::string(name) +
                              "' (expected sim|dtmc-product|dtmc-mc|dtmc-marginal)");
}

std::string_view run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Sim: return "sim";
    case RunMode::DtmcProduct: return "dtmc-product";
    case RunMode::DtmcMc: return "dtmc-mc";
    case RunMode::DtmcMarginal: return "dtmc-marginal";
  }
  return "?";
}

SystemParams ExperimentConfig::to_params() const {
  SystemParams p;
  p.n_relays = n_relays;
  p.levels = levels;
  p.rate = rate;
  p.noise_power = noise;
  p.source_power = snr_db_to_power(snr_db, noise);
  p.kappa = kappa;
  p.alpha = alpha;
  p.mean_g = resolve_means(mean_g, n_relays);
  p.mean_h = resolve_means(mean_h, n_relays);
  return p;
}

SimConfig ExperimentConfig::to_sim_config() const {
  SimConfig sim;
  sim.params = to_params();
  sim.policy = policy;
  sim.slots = slots;
  sim.warmup_slots = warmup_slots;
  sim.seed = seed;
  return sim;
}

void ExperimentConfig::validate() const {
  to_params().validate();
  if (slots < 1) throw std::invalid_argument("slots: must be >= 1");
  if (warmup_slots < 0) throw std::invalid_argument("warmup_slots: must be >= 0");
  if (warmup_slots >= slots) throw std::invalid_argument("warmup_slots: must be < slots");
  if (mc_samples_per_state < 1)
    throw std::invalid_argument("mc_samples_per_state: must be >= 1");
  if (mode != RunMode::Sim && policy != Policy::Bars)
    throw std::invalid_argument("mode: " + std::string(run_mode_name(mode)) +
                                " analysis covers policy=bars only");
  if (sweep_axis.has_value() && sweep_values.empty())
    throw std::invalid_argument("sweep_values: must be non-empty when sweep_axis is set");
  if (!sweep_axis.has_value() && !sweep_values.empty())
    throw std::invalid_argument("sweep_axis: required when sweep_values are given");
  if (sweep_axis == SweepAxis::PolicyAxis && mode != RunMode::Sim)
    throw std::invalid_argument("sweep_axis: policy sweeps require mode=sim");
}

void apply_config_key(ExperimentConfig& config, const std::string& key,
                      const std::string& value) {
  if (key == "policy") {
    config.policy = policy_from_name(value);
  } else if (key == "mode") {
    config.mode = run_mode_from_name(value);
  } else if (key == "snr_db") {
    config.snr_db = parse_f64(value, key);
  } else if (key == "n_relays") {
    config.n_relays = parse_int(value, key);
  } else if (key == "levels") {
    config.levels = parse_int(value, key);
  } else if (key == "alpha") {
    config.alpha = parse_f64(value, key);
  } else if (key == "kappa") {
    config.kappa = parse_f64(value, key);
  } else if (key == "rate") {
    config.rate = parse_f64(value, key);
  } else if (key == "noise") {
    config.noise = parse_f64(value, key);
  } else if (key == "mean_g") {
    config.mean_g = parse_list_f64(value, key);
  } else if (key == "mean_h") {
    config.mean_h = parse_list_f64(value, key);
  } else if (key == "slots") {
    config.slots = parse_i64(value, key);
  } else if (key == "warmup_slots") {
    config.warmup_slots = parse_i64(value, key);
  } else if (key == "seed") {
    config.seed = parse_u64(value, key);
  } else if (key == "mc_samples_per_state") {
    config.mc_samples_per_state = parse_i64(value, key);
  } else if (key == "sweep_axis") {
    config.sweep_axis = sweep_axis_from_name(value);
  } else if (key == "sweep_values") {
    config.sweep_values = split_list(value, key);
  } else if (key == "out") {
    config.out = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::size_t stop = eol == std::string_view::npos ? text.size() : eol;
    std::string line = trim(text.substr(pos, stop - pos));
    pos = stop + 1;
    if (eol == std::string_view::npos && line.empty()) break;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed config line (expected key=value): '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("malformed config line (empty key): '" + line + "'");
    apply_config_key(config, key, value);
  }
  config.validate();
  return config;
}

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 9);
  return std::string(buf, static_cast<std::size_t>(ptr - buf));
}

namespace {

ExperimentConfig apply_experiment_axis(ExperimentConfig cfg, SweepAxis axis,
                                       const std::string& value) {
  const std::string key(sweep_axis_name(axis));
  switch (axis) {
    case SweepAxis::SnrDb:
      cfg.snr_db = parse_f64(value, key);
      break;
    case SweepAxis::Kappa:
      cfg.kappa = parse_f64(value, key);
      break;
    case SweepAxis::Alpha:
      cfg.alpha = parse_f64(value, key);
      break;
    case SweepAxis::Rate:
      cfg.rate = parse_f64(value, key);
      break;
    case SweepAxis::Levels:
      cfg.levels = parse_int(value, key);
      break;
    case SweepAxis::NRelays: {
      auto collapse_uniform = [&key](std::vector<double>& means) {
        for (double v : means)
          if (v != means.front())
            throw std::invalid_argument(key + ": sweep requires uniform channel means");
        if (!means.empty()) means.resize(1);
      };
      collapse_uniform(cfg.mean_g);
      collapse_uniform(cfg.mean_h);
      cfg.n_relays = parse_int(value, key);
      break;
    }
    case SweepAxis::PolicyAxis:
      cfg.policy = policy_from_name(value);
      break;
  }
  return cfg;
}

OutageEstimate exact_estimate(double p, std::uint64_t seed) {
  OutageEstimate est;
  est.p_out = p;
  est.std_err = 0.0;
  est.ci_low = p;
  est.ci_high = p;
  est.counted_slots = 0;
  est.seed = seed;
  return est;
}

OutageEstimate evaluate_point(const ExperimentConfig& pt) {
  const SystemParams prm = pt.to_params();
  switch (pt.mode) {
    case RunMode::Sim:
      return run(pt.to_sim_config());
    case RunMode::DtmcProduct: {
      const TransitionMatrix m = joint_matrix_product_form(prm);
      return exact_estimate(outage_probability(steady_state(m), prm), pt.seed);
    }
    case RunMode::DtmcMc: {
      const TransitionMatrix m = joint_matrix_mc(prm, pt.mc_samples_per_state, pt.seed);
      return exact_estimate(outage_probability(steady_state(m), prm), pt.seed);
    }
    case RunMode::DtmcMarginal:
      return exact_estimate(marginal_product_outage(prm), pt.seed);
  }
  throw std::logic_error("unreachable run mode");
}

std::string csv_row(const ExperimentConfig& pt, const OutageEstimate& est) {
  const std::int64_t slots_column = pt.mode == RunMode::Sim ? pt.slots
                                    : pt.mode == RunMode::DtmcMc ? pt.mc_samples_per_state
                                                                 : 0;
  std::string row;
  row += policy_name(pt.policy);
  row += ',';
  row += run_mode_name(pt.mode);
  row += ',';
  row += format_double(pt.snr_db);
  row += ',';
  row += std::to_string(pt.n_relays);
  row += ',';
  row += std::to_string(pt.levels);
  row += ',';
  row += format_double(pt.alpha);
  row += ',';
  row += format_double(pt.kappa);
  row += ',';
  row += format_double(pt.rate);
  row += ',';
  row += format_double(est.p_out);
  row += ',';
  row += format_double(est.ci_low);
  row += ',';
  row += format_double(est.ci_high);
  row += ',';
  row += std::to_string(slots_column);
  row += ',';
  row += std::to_string(est.seed);
  return row;
}

}  // namespace

std::string run_experiment_csv(const ExperimentConfig& config) {
  config.validate();

  std::vector<ExperimentConfig> points;
  if (config.sweep_axis.has_value()) {
    points.reserve(config.sweep_values.size());
    for (std::size_t i = 0; i < config.sweep_values.size(); ++i) {
      ExperimentConfig pt = apply_experiment_axis(config, *config.sweep_axis,
                                                  config.sweep_values[i]);
      pt.sweep_axis.reset();
      pt.sweep_values.clear();
      pt.seed = derive_seed(config.seed, i);
      pt.validate();
      points.push_back(std::move(pt));
    }
  } else {
    points.push_back(config);
    points.back().validate();
  }

  std::vector<std::string> rows(points.size());
  detail::parallel_for(static_cast<std::int64_t>(points.size()), worker_limit(),
                       [&](std::int64_t i) {
                         const auto u = static_cast<std::size_t>(i);
                         rows[u] = csv_row(points[u], evaluate_point(points[u]));
                       });

  std::string text(kCsvHeader);
  text += '\n';
  for (const auto& row : rows) {
    text += row;
    text += '\n';
  }
  return text;
}

void run_experiment(const ExperimentConfig& config) {
  const std::string text = run_experiment_csv(config);
  if (config.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(config.out, std::ios::binary);
  if (!os) throw std::runtime_error("out: cannot open '" + config.out + "'");
  os << text;
  if (!os) throw std::runtime_error("out: failed writing '" + config.out + "'");
}

}  // namespace ehrelay
