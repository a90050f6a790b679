#include "maqkd/timeline_mc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "maqkd/protocol.hpp"

namespace maqkd::mc {
namespace {

// Fixed chunking keeps the floating-point summation order independent of
// the number of worker threads.
constexpr std::int64_t kChunks = 64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::int64_t trial) {
  return std::mt19937_64(splitmix64(seed + static_cast<std::uint64_t>(trial)));
}

std::int64_t geometric_trials(std::mt19937_64& eng, double p) {
  if (p >= 1.0) return 1;
  std::geometric_distribution<std::int64_t> g(p);
  return g(eng) + 1;
}

// Running mean and centered second moment, merged pairwise.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double delta = o.mean - mean;
    mean += delta * o.n / total;
    m2 += o.m2 + delta * delta * n * o.n / total;
    n = total;
  }
  Estimate estimate(std::int64_t trials) const {
    const double var = trials > 1 ? std::max(0.0, m2 / double(trials - 1)) : 0.0;
    return {mean, std::sqrt(var / double(trials))};
  }
};

// Runs `trial(engine, accumulators)` for every trial index with per-chunk
// accumulators merged in chunk order.
template <std::size_t K, typename Fn>
std::array<Moments, K> run_trials(std::int64_t n, std::uint64_t seed, Fn trial) {
  std::vector<std::array<Moments, K>> partial(kChunks);
  const auto work = [&](std::int64_t chunk) {
    const std::int64_t begin = n * chunk / kChunks;
    const std::int64_t end = n * (chunk + 1) / kChunks;
    for (std::int64_t i = begin; i < end; ++i) {
      auto eng = trial_engine(seed, i);
      trial(eng, partial[chunk]);
    }
  };

  const auto workers = std::max<std::int64_t>(
      1, std::min<std::int64_t>(kChunks, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t c = w; c < kChunks; c += workers) work(c);
    });
  }
  for (auto& t : pool) t.join();

  std::array<Moments, K> total{};
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < K; ++k) total[k].merge(p[k]);
  }
  return total;
}

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
  }
}

}  // namespace

void McConfig::validate() const {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
}

MaLinkInputs ma_link_inputs(const PhysicalParams& params, double L) {
  const auto side = protocol::load_all(L / 2.0, params);
  MaLinkInputs in;
  in.P_A = params.load_efficiency() * side.probability;
  in.P_B = in.P_A;
  in.T = params.timing.period();
  in.t_fixed = params.timing.tau_swap + params.timing.tau_BSM;
  in.T_n = params.coherence.T_n;
  return in;
}

McReport simulate_ma_link(const MaLinkInputs& in, const McConfig& mc) {
  mc.validate();
  require_probability(in.P_A, "P_A");
  require_probability(in.P_B, "P_B");
  const auto m = run_trials<3>(mc.n_trials, mc.seed, [&](auto& eng, auto& acc) {
    const auto alice = geometric_trials(eng, in.P_A);
    const auto bob = geometric_trials(eng, in.P_B);
    acc[0].add(double(alice + bob));
    acc[1].add(double(bob));
    acc[2].add(std::exp(-(double(bob) * in.T + in.t_fixed) / in.T_n));
  });
  McReport r;
  r.n_trials = mc.n_trials;
  r.mean_load_trials = m[0].estimate(mc.n_trials);
  r.mean_storage_rounds = m[1].estimate(mc.n_trials);
  r.empirical_dephasing = m[2].estimate(mc.n_trials);
  return r;
}

McReport simulate_ma_link(const PhysicalParams& params, double L, const McConfig& mc) {
  return simulate_ma_link(ma_link_inputs(params, L), mc);
}

RepeaterInputs repeater_inputs(const rates::RepeaterParams& rp) {
  const auto t = rates::repeater_timing(rp);
  return {t.P_ent, t.T_0, rp.p_load, rp.timing.period(), t.tau_r};
}

McReport simulate_repeater(const RepeaterInputs& in, const McConfig& mc) {
  mc.validate();
  require_probability(in.P_ent, "P_ent");
  require_probability(in.P_A, "P_A");
  const auto m = run_trials<3>(mc.n_trials, mc.seed, [&](auto& eng, auto& acc) {
    const auto attempts = geometric_trials(eng, in.P_ent);
    const auto left = geometric_trials(eng, in.P_A);
    const auto right = geometric_trials(eng, in.P_A);
    const double base = double(attempts) * in.T_0 + in.tau_r;
    acc[0].add(base + double(std::max(left, right)) * in.T);
    acc[1].add(base + double(left + right) * in.T);
    acc[2].add(double(left + right));
  });
  McReport r;
  r.n_trials = mc.n_trials;
  r.mean_T_rep = m[0].estimate(mc.n_trials);
  r.mean_T_rep_sequential = m[1].estimate(mc.n_trials);
  r.mean_load_trials = m[2].estimate(mc.n_trials);
  return r;
}

McReport simulate_repeater(const rates::RepeaterParams& rp, const McConfig& mc) {
  return simulate_repeater(repeater_inputs(rp), mc);
}

Estimate simulate_qber(double e_fresh, double e_dephased, const MaLinkInputs& in,
                       const McConfig& mc) {
  mc.validate();
  require_probability(in.P_B, "P_B");
  const auto m = run_trials<1>(mc.n_trials, mc.seed, [&](auto& eng, auto& acc) {
    const auto bob = geometric_trials(eng, in.P_B);
    const double factor = std::exp(-(double(bob) * in.T + in.t_fixed) / in.T_n);
    const double e = e_dephased + factor * (e_fresh - e_dephased);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    acc[0].add(u(eng) < e ? 1.0 : 0.0);
  });
  return m[0].estimate(mc.n_trials);
}

std::vector<std::int64_t> sample_waits(double p, std::int64_t n, std::uint64_t seed) {
  require_probability(p, "p");
  std::vector<std::int64_t> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    auto eng = trial_engine(seed, i);
    out[static_cast<std::size_t>(i)] = geometric_trials(eng, p);
  }
  return out;
}

double expected_max_geometric(double p) {
  require_probability(p, "p");
  return 2.0 / p - 1.0 / (1.0 - (1.0 - p) * (1.0 - p));
}

std::vector<ValidationCheck> validate_against_analytic(const PhysicalParams& params,
                                                       double L, const McConfig& mc,
                                                       double n_se) {
  std::vector<ValidationCheck> checks;
  const auto add = [&](std::string name, double expected, Estimate est) {
    // A zero-variance estimate must match exactly up to rounding.
    const bool pass = est.se > 0.0 ? est.within(expected, n_se)
                                   : std::abs(est.mean - expected) <= 1e-12 * std::abs(expected);
    checks.push_back({std::move(name), expected, est, pass});
  };

  const auto in = ma_link_inputs(params, L);
  const auto link = simulate_ma_link(in, mc);
  add("ma.load_trials", 1.0 / in.P_A + 1.0 / in.P_B, link.mean_load_trials);
  add("ma.storage_rounds", 1.0 / in.P_B, link.mean_storage_rounds);
  const double m = protocol::storage_factor(in.P_B, params);
  add("ma.storage_dephasing", m, link.empirical_dephasing);

  const auto side = protocol::load_all(L / 2.0, params);
  const auto fresh = protocol::qber(side, side, 1.0, params);
  const auto dephased = protocol::qber(side, side, 0.0, params);
  const auto expected = protocol::qber(side, side, m, params);
  McConfig qmc = mc;
  qmc.seed = mc.seed + 0x51ed270b27ULL;
  add("ma.e_X", expected.e_x, simulate_qber(fresh.e_x, dephased.e_x, in, qmc));
  add("ma.e_Z", expected.e_z, simulate_qber(fresh.e_z, dephased.e_z, in, qmc));

  const auto rp = rates::repeater_params(params, L);
  const auto rin = repeater_inputs(rp);
  const auto rep = simulate_repeater(rin, mc);
  const double base = rin.T_0 / rin.P_ent + rin.tau_r;
  add("repeater.T_rep", base + rin.T * expected_max_geometric(rin.P_A), rep.mean_T_rep);
  add("repeater.T_rep_sequential", base + 2.0 * rin.T / rin.P_A,
      rep.mean_T_rep_sequential);
  return checks;
}

}  // namespace maqkd::mc
