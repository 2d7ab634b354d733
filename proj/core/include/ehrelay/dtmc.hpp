#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ehrelay/params.hpp"

namespace ehrelay {

inline constexpr std::int64_t kDefaultStateCap = 65536;

/// Mixed-radix codec between joint battery-level vectors and flat state
/// indices, relay 0 most significant. Base is L+2.
struct JointStateCodec {
  int n_relays = 1;
  int base = 3;

  static JointStateCodec from_params(const SystemParams& params) {
    return {params.n_relays, params.levels + 2};
  }

  std::int64_t state_count() const;
  std::int64_t encode(const std::vector<int>& levels) const;
  void decode(std::int64_t index, std::vector<int>& levels) const;
};

enum class MatrixMode { PerRelay, ProductForm, McJoint };
std::string_view matrix_mode_name(MatrixMode mode);

/// Row-stochastic square matrix, dense row-major storage.
struct TransitionMatrix {
  std::int64_t order = 0;
  MatrixMode mode = MatrixMode::PerRelay;
  std::vector<double> p;

  double at(std::int64_t row, std::int64_t col) const { return p[row * order + col]; }
  double& at(std::int64_t row, std::int64_t col) { return p[row * order + col]; }
  const double* row(std::int64_t r) const { return p.data() + r * order; }

  /// max over rows of |sum(row) - 1|.
  double max_row_sum_error() const;

  /// Plain text: header line "order=<n> mode=<tag>", then one row per line,
  /// entries as shortest round-trip decimals separated by single spaces.
  void dump(std::ostream& os) const;
};

/// Variant switch for the single-relay transition entries. `Consistent`
/// (default) is the event algebra whose rows sum to one: every
/// charging-branch term carries its relay->destination factor and decode
/// thresholds compare T*N0 against the energy increment. `Uncorrected`
/// reproduces the commonly quoted closed forms that drop that factor in the
/// stay-put, full-charge and partial-charge branches; kept for side-by-side
/// comparison only, its rows generally do not sum to one.
enum class PerRelayForm { Consistent, Uncorrected };

/// Battery-level chain of one relay under forward-whenever-able dynamics:
/// order L+2, entry (m,n) = probability of moving from level m to n in one
/// slot, with independent exponential g and h.
TransitionMatrix per_relay_matrix(int relay, const SystemParams& params,
                                  PerRelayForm form = PerRelayForm::Consistent);

/// Joint chain assembled as the product of independent per-relay entries.
/// Over-counts discharges whenever several relays are simultaneously able
/// to forward; joint_matrix_mc is the corrected reference.
TransitionMatrix joint_matrix_product_form(const SystemParams& params,
                                           std::int64_t state_cap = kDefaultStateCap);

/// Joint chain estimated from exact BARS slot dynamics: per joint state,
/// `samples_per_state` channel draws run through selection and battery
/// updates. Rows sum to one by construction; deterministic for a fixed seed.
TransitionMatrix joint_matrix_mc(const SystemParams& params,
                                 std::int64_t samples_per_state,
                                 std::uint64_t seed,
                                 std::int64_t state_cap = kDefaultStateCap);

struct SteadyState {
  std::vector<double> pi;
  double residual = 0.0;  // max-norm of pi*P - pi
};

/// Stationary distribution of a row-stochastic matrix: direct dense solve
/// (one balance equation replaced by normalization) up to order 4096,
/// damped power iteration beyond. Default tolerance 1e-12 direct / 1e-10
/// iterative; throws std::runtime_error when the residual target cannot be
/// met (reducible or degenerate chains).
SteadyState steady_state(const TransitionMatrix& matrix, double tol = -1.0);

/// Outage probability from a joint-chain stationary distribution:
/// sum over states of pi_j * prod_i Pr[relay i charging at its level].
double outage_probability(const SteadyState& steady, const SystemParams& params);

/// Independence approximation that sidesteps the joint state space: solves
/// each relay's own chain and multiplies the per-relay charging-mode
/// probabilities. Exact for N = 1.
double marginal_product_outage(const SystemParams& params, double tol = 1e-12);

}  // namespace ehrelay
