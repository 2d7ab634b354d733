#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehrelay/experiment.hpp"

namespace ehrelay {

namespace {

std::vector<std::string> snr_grid_db() {
  std::vector<std::string> values;
  for (int snr = 0; snr <= 40; snr += 5) values.push_back(std::to_string(snr));
  return values;
}

std::vector<std::string> tenths_grid(int from, int to) {
  std::vector<std::string> values;
  for (int k = from; k <= to; ++k) values.push_back(format_double(k / 10.0));
  return values;
}

// strips the header line of a run_experiment_csv result
std::string_view body_of(const std::string& csv) {
  const std::size_t eol = csv.find('\n');
  return std::string_view(csv).substr(eol + 1);
}

class FigureWriter {
 public:
  FigureWriter(std::string out_dir, const FigureOptions& options)
      : out_dir_(std::move(out_dir)), options_(options) {
    if (out_dir_.empty()) out_dir_ = ".";
    std::filesystem::create_directories(out_dir_);
  }

  // runs each variant's sweep and concatenates the row blocks into one file
  void emit(const std::string& filename, const std::vector<ExperimentConfig>& variants) {
    std::string text(kCsvHeader);
    text += '\n';
    for (ExperimentConfig variant : variants) {
      variant.seed = derive_seed(options_.seed, curve_index_++);
      text += body_of(run_experiment_csv(variant));
    }
    const std::string path = out_dir_ + "/" + filename;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("out: cannot open '" + path + "'");
    os << text;
    if (!os) throw std::runtime_error("out: failed writing '" + path + "'");
    written_.push_back(path);
  }

  std::vector<std::string> take() { return std::move(written_); }

 private:
  std::string out_dir_;
  FigureOptions options_;
  std::uint64_t curve_index_ = 0;
  std::vector<std::string> written_;
};

ExperimentConfig bars_base(int n_relays, int levels, double rate, double kappa,
                           double alpha) {
  ExperimentConfig cfg;
  cfg.policy = Policy::Bars;
  cfg.n_relays = n_relays;
  cfg.levels = levels;
  cfg.rate = rate;
  cfg.kappa = kappa;
  cfg.alpha = alpha;
  return cfg;
}

}  // namespace

std::vector<std::string> write_figures(const std::string& name,
                                       const std::string& out_dir,
                                       const FigureOptions& options) {
  FigureWriter writer(out_dir, options);

  if (name == "fig2") {
    // outage vs SNR under varied N and L; theory alongside where tractable
    for (int n : {2, 3}) {
      for (int levels : {1, 100}) {
        ExperimentConfig base = bars_base(n, levels, 1.0, 0.5, 1.0);
        base.sweep_axis = SweepAxis::SnrDb;
        base.sweep_values = snr_grid_db();
        std::vector<ExperimentConfig> variants;
        ExperimentConfig sim = base;
        sim.mode = RunMode::Sim;
        sim.slots = levels == 100 ? options.slots_deep : options.slots;
        variants.push_back(sim);
        if (levels == 1) {
          ExperimentConfig product = base;
          product.mode = RunMode::DtmcProduct;
          variants.push_back(product);
          ExperimentConfig mc = base;
          mc.mode = RunMode::DtmcMc;
          mc.mc_samples_per_state = options.mc_samples_per_state;
          variants.push_back(mc);
        } else {
          ExperimentConfig marginal = base;
          marginal.mode = RunMode::DtmcMarginal;
          variants.push_back(marginal);
        }
        writer.emit("fig2_n" + std::to_string(n) + "_L" + std::to_string(levels) + ".csv",
                    variants);
      }
    }
    return writer.take();
  }

  if (name == "fig3") {
    // outage vs conversion efficiency for N=3 under varied L and SNR
    const std::pair<int, int> curves[] = {{1, 20}, {10, 20}, {100, 20}, {100, 10}};
    for (const auto& [levels, snr] : curves) {
      ExperimentConfig cfg = bars_base(3, levels, 1.0, 0.5, 1.0);
      cfg.snr_db = snr;
      cfg.mode = RunMode::Sim;
      cfg.slots = levels == 100 ? options.slots_deep : options.slots;
      cfg.sweep_axis = SweepAxis::Kappa;
      cfg.sweep_values = tenths_grid(1, 10);
      writer.emit("fig3_L" + std::to_string(levels) + "_snr" + std::to_string(snr) + ".csv",
                  {cfg});
    }
    return writer.take();
  }

  if (name == "fig4") {
    // outage vs battery scaling factor, L=100, SNR=20 dB, R=2
    for (int n : {2, 3, 4}) {
      ExperimentConfig cfg = bars_base(n, 100, 2.0, 0.5, 1.0);
      cfg.snr_db = 20;
      cfg.mode = RunMode::Sim;
      cfg.slots = options.slots;
      cfg.sweep_axis = SweepAxis::Alpha;
      cfg.sweep_values = tenths_grid(2, 14);
      writer.emit("fig4_n" + std::to_string(n) + ".csv", {cfg});
    }
    return writer.take();
  }

  if (name == "fig5") {
    // policy comparison vs SNR, L=10
    for (int n : {2, 3}) {
      for (Policy policy : {Policy::Bars, Policy::Csi, Policy::Benchmark}) {
        ExperimentConfig cfg = bars_base(n, 10, 1.0, 0.5, 1.0);
        cfg.policy = policy;
        cfg.mode = RunMode::Sim;
        // only the battery-aware curve keeps falling at high SNR
        cfg.slots = policy == Policy::Bars ? options.slots_deep : options.slots;
        cfg.sweep_axis = SweepAxis::SnrDb;
        cfg.sweep_values = snr_grid_db();
        writer.emit("fig5_n" + std::to_string(n) + "_" + std::string(policy_name(policy)) +
                        ".csv",
                    {cfg});
      }
    }
    return writer.take();
  }

  throw std::invalid_argument("figure: unknown name '" + name +
                              "' (expected fig2|fig3|fig4|fig5)");
}

}  // namespace ehrelay
