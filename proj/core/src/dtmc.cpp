#include "ehrelay/dtmc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ehrelay/battery.hpp"
#include "ehrelay/channel.hpp"
#include "ehrelay/modes.hpp"
#include "ehrelay/selection.hpp"
#include "parallel.hpp"

namespace ehrelay {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kDirectSolveLimit = 4096;

void check_state_cap(std::int64_t states, std::int64_t cap) {
  if (states > cap)
    throw std::runtime_error("state cap exceeded: (L+2)^N = " + std::to_string(states) +
                             " > " + std::to_string(cap) +
                             "; use the marginal-product mode or simulation");
}

}  // namespace

std::int64_t JointStateCodec::state_count() const {
  std::int64_t count = 1;
  for (int i = 0; i < n_relays; ++i) {
    if (count > std::numeric_limits<std::int64_t>::max() / base)
      return std::numeric_limits<std::int64_t>::max();
    count *= base;
  }
  return count;
}

std::int64_t JointStateCodec::encode(const std::vector<int>& levels) const {
  std::int64_t index = 0;
  for (int v : levels) index = index * base + v;
  return index;
}

void JointStateCodec::decode(std::int64_t index, std::vector<int>& levels) const {
  levels.resize(static_cast<std::size_t>(n_relays));
  for (int i = n_relays - 1; i >= 0; --i) {
    levels[static_cast<std::size_t>(i)] = static_cast<int>(index % base);
    index /= base;
  }
}

std::string_view matrix_mode_name(MatrixMode mode) {
  switch (mode) {
    case MatrixMode::PerRelay: return "per-relay";
    case MatrixMode::ProductForm: return "product-form";
    case MatrixMode::McJoint: return "mc-joint";
  }
  return "?";
}

double TransitionMatrix::max_row_sum_error() const {
  double worst = 0.0;
  for (std::int64_t r = 0; r < order; ++r) {
    double sum = 0.0;
    const double* row_p = row(r);
    for (std::int64_t c = 0; c < order; ++c) sum += row_p[c];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

void TransitionMatrix::dump(std::ostream& os) const {
  os << "order=" << order << " mode=" << matrix_mode_name(mode) << '\n';
  char buf[32];
  for (std::int64_t r = 0; r < order; ++r) {
    const double* row_p = row(r);
    for (std::int64_t c = 0; c < order; ++c) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), row_p[c]);
      if (c) os << ' ';
      os.write(buf, ptr - buf);
    }
    os << '\n';
  }
}

namespace {

// Consistent single-relay entries: split the charging mode into the two
// disjoint events "h below the forwarding threshold" (g unconstrained) and
// "h above it but decoding failed" (g capped by the decode threshold), then
// intersect each with the harvest interval that lands the battery at the
// target level.
void fill_consistent(TransitionMatrix& M, const SystemParams& prm, int relay) {
  const int n = prm.levels + 2;
  const double t = prm.threshold();
  const LevelBoundaries bounds(prm.levels, prm.battery_capacity());
  const auto& b = bounds.values();
  const auto u = static_cast<std::size_t>(relay);
  const double gm = prm.mean_g[u];
  const double hm = prm.mean_h[u];

  if (t == 0.0) {
    // every relay always decodes and transmits at zero power: levels freeze
    for (int m = 0; m < n; ++m) M.at(m, m) = 1.0;
    return;
  }

  const double g_dec = t * prm.noise_power / prm.source_power;
  const double sg = exp_survival(g_dec, gm);
  const double fg = exp_cdf(g_dec, gm);
  const double harvest_per_gain = prm.source_power * prm.kappa;

  for (int m = 0; m < n; ++m) {
    const auto bm = b[static_cast<std::size_t>(m)];
    const double h_fwd = forwarding_gain_threshold(t, bm);
    const double fh = exp_cdf(h_fwd, hm);
    const double sh = exp_survival(h_fwd, hm);

    // forwarding: residual b_m - t/h in [b_k, b_{k+1})
    for (int k = 0; k < m; ++k) {
      const double lo = t / (bm - b[static_cast<std::size_t>(k)]);
      const double hi =
          k + 1 == m ? kInf : t / (bm - b[static_cast<std::size_t>(k + 1)]);
      M.at(m, k) += sg * (exp_cdf(hi, hm) - exp_cdf(lo, hm));
    }

    // charging: harvested P*g*kappa lands the battery in [b_k, b_{k+1})
    if (harvest_per_gain == 0.0) {
      M.at(m, m) += fh + sh * fg;
      continue;
    }
    for (int k = m; k < n; ++k) {
      const double lo_g = (b[static_cast<std::size_t>(k)] - bm) / harvest_per_gain;
      const double hi_g =
          k == n - 1 ? kInf : (b[static_cast<std::size_t>(k + 1)] - bm) / harvest_per_gain;
      const double span = exp_cdf(hi_g, gm) - exp_cdf(lo_g, gm);
      const double span_decode_failed =
          std::max(0.0, exp_cdf(std::min(hi_g, g_dec), gm) - exp_cdf(lo_g, gm));
      M.at(m, k) += fh * span + sh * span_decode_failed;
    }
  }
}

// Commonly quoted closed forms with the uncorrected charging-branch terms:
// the stay-put, full-charge and partial-charge case additions miss their
// (1 - F_h) factor, and the partial-charge base term uses the b_{k+1}-b_k
// width and an h-threshold of t/kappa. Rows generally exceed one.
void fill_uncorrected(TransitionMatrix& M, const SystemParams& prm, int relay) {
  const int n = prm.levels + 2;
  const int full = n - 1;
  const double t = prm.threshold();
  const LevelBoundaries bounds(prm.levels, prm.battery_capacity());
  const auto& b = bounds.values();
  const auto u = static_cast<std::size_t>(relay);
  const double gm = prm.mean_g[u];
  const double hm = prm.mean_h[u];
  const double g_dec = t * prm.noise_power / prm.source_power;
  const double pk = prm.source_power * prm.kappa;
  const double b1 = b[1];

  auto fg = [&](double x) { return exp_cdf(x, gm); };
  auto fh = [&](double x) { return exp_cdf(x, hm); };

  for (int m = 0; m < n; ++m) {
    const double bm = b[static_cast<std::size_t>(m)];
    for (int k = 0; k < n; ++k) {
      const double bk = b[static_cast<std::size_t>(k)];
      double p = 0.0;
      if (k == m && m < full) {
        p = fg(b1 / pk) * fh(forwarding_gain_threshold(t, bm)) +
            (t < b1 / prm.kappa ? fg(g_dec) : fg(b1 / pk));
      } else if (m == 0 && k == full) {
        p = exp_survival(prm.alpha / prm.kappa, gm);
      } else if (m == 0 && k > 0 && k < full) {
        p = fg(b[static_cast<std::size_t>(k + 1)] / pk) - fg(bk / pk);
      } else if (m > 0 && k < m) {
        const double hi = k + 1 == m ? kInf : t / (bm - b[static_cast<std::size_t>(k + 1)]);
        p = exp_survival(g_dec, gm) * (fh(hi) - fh(t / (bm - bk)));
      } else if (m > 0 && m < full && k == full) {
        const double room = (prm.alpha * prm.source_power - bm) / pk;
        p = fh(t / bm) * (1.0 - fg(room));
        if (t > (prm.alpha * prm.source_power - bm) / prm.kappa) p += fg(g_dec) - fg(room);
      } else if (m > 0 && m < k && k < full) {
        p = fh(t / prm.kappa) *
            (fg((b[static_cast<std::size_t>(k + 1)] - bk) / pk) - fg((bk - bm) / pk));
        if (t >= (b[static_cast<std::size_t>(k + 1)] - bm) / prm.kappa)
          p += fg((b[static_cast<std::size_t>(k + 1)] - bm) / pk) - fg((bk - bm) / pk);
        else if (t >= (bk - bm) / prm.kappa)
          p += fg(g_dec) - fg((bk - bm) / pk);
      } else if (m == full && k == full) {
        const double hf = forwarding_gain_threshold(t, bm);
        p = fh(hf) + exp_survival(hf, hm) * fg(g_dec);
      }
      M.at(m, k) = p;
    }
  }
}

}  // namespace

TransitionMatrix per_relay_matrix(int relay, const SystemParams& params,
                                  PerRelayForm form) {
  params.validate();
  if (relay < 0 || relay >= params.n_relays)
    throw std::out_of_range("relay index out of range");
  const int n = params.levels + 2;
  TransitionMatrix M;
  M.order = n;
  M.mode = MatrixMode::PerRelay;
  M.p.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  if (form == PerRelayForm::Consistent)
    fill_consistent(M, params, relay);
  else
    fill_uncorrected(M, params, relay);
  return M;
}

TransitionMatrix joint_matrix_product_form(const SystemParams& params,
                                           std::int64_t state_cap) {
  params.validate();
  const JointStateCodec codec = JointStateCodec::from_params(params);
  const std::int64_t states = codec.state_count();
  check_state_cap(states, state_cap);

  std::vector<TransitionMatrix> per;
  per.reserve(static_cast<std::size_t>(params.n_relays));
  for (int i = 0; i < params.n_relays; ++i) per.push_back(per_relay_matrix(i, params));

  std::vector<std::vector<int>> decoded(static_cast<std::size_t>(states));
  for (std::int64_t j = 0; j < states; ++j) codec.decode(j, decoded[static_cast<std::size_t>(j)]);

  TransitionMatrix M;
  M.order = states;
  M.mode = MatrixMode::ProductForm;
  M.p.assign(static_cast<std::size_t>(states) * static_cast<std::size_t>(states), 0.0);
  for (std::int64_t j = 0; j < states; ++j) {
    const auto& from = decoded[static_cast<std::size_t>(j)];
    for (std::int64_t k = 0; k < states; ++k) {
      const auto& to = decoded[static_cast<std::size_t>(k)];
      double p = 1.0;
      for (int i = 0; i < params.n_relays; ++i)
        p *= per[static_cast<std::size_t>(i)].at(from[static_cast<std::size_t>(i)],
                                                 to[static_cast<std::size_t>(i)]);
      M.at(j, k) = p;
    }
  }
  return M;
}

TransitionMatrix joint_matrix_mc(const SystemParams& params,
                                 std::int64_t samples_per_state,
                                 std::uint64_t seed, std::int64_t state_cap) {
  params.validate();
  if (samples_per_state < 1)
    throw std::invalid_argument("mc_samples_per_state: must be >= 1");
  const JointStateCodec codec = JointStateCodec::from_params(params);
  const std::int64_t states = codec.state_count();
  check_state_cap(states, state_cap);

  const LevelBoundaries bounds = LevelBoundaries::from_params(params);
  const double t = params.threshold();
  const double harvest_per_gain = params.source_power * params.kappa;
  const int n = params.n_relays;

  TransitionMatrix M;
  M.order = states;
  M.mode = MatrixMode::McJoint;
  M.p.assign(static_cast<std::size_t>(states) * static_cast<std::size_t>(states), 0.0);

  detail::parallel_for(states, worker_limit(), [&](std::int64_t j) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    std::vector<int> from;
    codec.decode(j, from);
    std::vector<int> next(static_cast<std::size_t>(n));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(states), 0);
    ChannelDraw draw;
    draw.g.resize(static_cast<std::size_t>(n));
    draw.h.resize(static_cast<std::size_t>(n));
    for (std::int64_t s = 0; s < samples_per_state; ++s) {
      sample_channels(params, rng, draw);
      const Selection sel = choose_relay(Policy::Bars, draw, from, bounds, params);
      for (int i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (!sel.outage && i == sel.relay)
          next[u] = bounds.discharge(from[u], required_power(t, draw.h[u]));
        else
          next[u] = bounds.charge(from[u], harvest_per_gain * draw.g[u]);
      }
      ++counts[static_cast<std::size_t>(codec.encode(next))];
    }
    const double inv = 1.0 / static_cast<double>(samples_per_state);
    for (std::int64_t k = 0; k < states; ++k)
      M.at(j, k) = static_cast<double>(counts[static_cast<std::size_t>(k)]) * inv;
  });
  return M;
}

namespace {

double residual_max_norm(const TransitionMatrix& M, const std::vector<double>& pi,
                         std::vector<double>& scratch) {
  const std::int64_t n = M.order;
  scratch.assign(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const double w = pi[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    const double* row = M.row(i);
    for (std::int64_t j = 0; j < n; ++j) scratch[static_cast<std::size_t>(j)] += w * row[j];
  }
  double worst = 0.0;
  for (std::int64_t j = 0; j < n; ++j)
    worst = std::max(worst, std::abs(scratch[static_cast<std::size_t>(j)] -
                                     pi[static_cast<std::size_t>(j)]));
  return worst;
}

SteadyState finish_steady_state(const TransitionMatrix& M, std::vector<double> pi,
                                double tol) {
  double negligible = 0.0;
  for (double& v : pi) {
    if (!(v >= -1e-9))
      throw std::runtime_error(
          "steady_state: stationary vector has negative entries; chain is "
          "reducible or degenerate");
    if (v < 0.0) {
      negligible = std::min(negligible, v);
      v = 0.0;
    }
  }
  double sum = 0.0;
  for (double v : pi) sum += v;
  if (!(std::abs(sum - 1.0) <= 1e-6))
    throw std::runtime_error("steady_state: solution does not normalize; chain is degenerate");
  for (double& v : pi) v /= sum;

  std::vector<double> scratch;
  const double residual = residual_max_norm(M, pi, scratch);
  if (!(residual <= tol))
    throw std::runtime_error("steady_state: residual " + std::to_string(residual) +
                             " above tolerance " + std::to_string(tol));
  (void)negligible;
  return SteadyState{std::move(pi), residual};
}

SteadyState steady_state_direct(const TransitionMatrix& M, double tol) {
  const auto n = static_cast<Eigen::Index>(M.order);
  // balance equations pi (P - I) = 0 transposed, last one swapped for the
  // normalization constraint
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      A(i, j) = M.at(j, i) - (i == j ? 1.0 : 0.0);
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd x = A.partialPivLu().solve(rhs);
  std::vector<double> pi(x.data(), x.data() + n);
  return finish_steady_state(M, std::move(pi), tol);
}

}  // namespace

namespace detail {

// Damped (lazy) power iteration: pi <- (pi + pi P) / 2 removes periodicity
// without changing the stationary vector.
SteadyState steady_state_power(const TransitionMatrix& M, double tol,
                               std::int64_t max_iters) {
  const std::int64_t n = M.order;
  std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  std::vector<double> next;
  for (std::int64_t iter = 0; iter < max_iters; ++iter) {
    const double residual = residual_max_norm(M, pi, next);
    double sum = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      const auto u = static_cast<std::size_t>(j);
      pi[u] = 0.5 * (pi[u] + next[u]);
      sum += pi[u];
    }
    for (double& v : pi) v /= sum;
    if (residual <= tol) return finish_steady_state(M, std::move(pi), tol);
  }
  throw std::runtime_error(
      "steady_state: power iteration did not converge; chain may be reducible "
      "or degenerate");
}

}  // namespace detail

SteadyState steady_state(const TransitionMatrix& matrix, double tol) {
  if (matrix.order < 1) throw std::invalid_argument("steady_state: empty matrix");
  for (double v : matrix.p)
    if (!(v >= 0.0))
      throw std::invalid_argument("steady_state: matrix entries must be >= 0");
  if (matrix.max_row_sum_error() > 1e-9)
    throw std::invalid_argument("steady_state: matrix is not row-stochastic");
  const bool direct = matrix.order <= kDirectSolveLimit;
  if (tol <= 0.0) tol = direct ? 1e-12 : 1e-10;
  return direct ? steady_state_direct(matrix, tol)
                : detail::steady_state_power(matrix, tol, 100000);
}

double outage_probability(const SteadyState& steady, const SystemParams& params) {
  params.validate();
  const JointStateCodec codec = JointStateCodec::from_params(params);
  const std::int64_t states = codec.state_count();
  if (static_cast<std::int64_t>(steady.pi.size()) != states)
    throw std::invalid_argument("outage_probability: dimension mismatch between pi and (L+2)^N");

  // Pr[charging] per relay and level
  const int base = params.levels + 2;
  std::vector<double> charging(static_cast<std::size_t>(params.n_relays * base));
  for (int i = 0; i < params.n_relays; ++i)
    for (int m = 0; m < base; ++m)
      charging[static_cast<std::size_t>(i * base + m)] = prob_charging(m, i, params);

  std::vector<int> levels;
  double outage = 0.0;
  for (std::int64_t j = 0; j < states; ++j) {
    const double pj = steady.pi[static_cast<std::size_t>(j)];
    if (pj == 0.0) continue;
    codec.decode(j, levels);
    double all_charging = 1.0;
    for (int i = 0; i < params.n_relays; ++i)
      all_charging *=
          charging[static_cast<std::size_t>(i * base + levels[static_cast<std::size_t>(i)])];
    outage += pj * all_charging;
  }
  return outage;
}

double marginal_product_outage(const SystemParams& params, double tol) {
  params.validate();
  double product = 1.0;
  for (int i = 0; i < params.n_relays; ++i) {
    const TransitionMatrix chain = per_relay_matrix(i, params);
    const SteadyState ss = steady_state(chain, tol);
    double q = 0.0;
    for (int m = 0; m <= params.levels + 1; ++m)
      q += ss.pi[static_cast<std::size_t>(m)] * prob_charging(m, i, params);
    product *= q;
  }
  return product;
}

}  // namespace ehrelay
