#include "crntime/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "crntime/analysis.hpp"
#include "crntime/error.hpp"
#include "crntime/parallel.hpp"
#include "crntime/stats.hpp"

namespace crntime {

Crn leader_election_crn() {
  return CrnBuilder().reaction({{"L", 2}}, {{"L", 1}, {"N", 1}}, 1.0).build();
}

Crn chain_crn(std::size_t m) {
  if (m == 0) throw DomainError("chain length m must be at least 1");
  CrnBuilder b;
  for (std::size_t i = 1; i <= m; ++i) {
    const std::string xi = "X" + std::to_string(i);
    const std::string next = "X" + std::to_string(i + 1);
    b.reaction({{xi, 1}}, {}, 1.0);
    b.reaction({{xi, 2}}, {{next, 1}}, 1.0);
  }
  return b.build();
}

LeaderElectionStats leader_election_experiment(std::uint64_t n, std::size_t trials,
                                               std::uint64_t seed, unsigned threads) {
  if (n < 2) throw DomainError("leader election needs n >= 2");
  if (trials == 0) throw DomainError("trials must be at least 1");
  const Crn crn = leader_election_crn();
  const SpeciesId leader = crn.species().at("L");
  Configuration init(crn.species_count());
  init.set(leader, n);
  const Simulator proto(crn, static_cast<double>(n));

  LeaderElectionStats stats;
  stats.n = n;
  stats.times.resize(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    const Simulator sim = proto;
    Rng rng = Rng::substream(seed, i);
    SimState state{init, 0.0, sim.volume(), 0};
    while (state.config[leader] > 1) {
      auto p = sim.propose(state.config, rng);
      if (!p) break;
      sim.commit(state, *p);
    }
    stats.times[i] = state.time;
  });

  const Moments m = moments(stats.times);
  stats.mean = m.mean;
  stats.stddev = std::sqrt(m.variance);
  stats.ci95_half_width =
      trials > 1 ? 1.96 * stats.stddev / std::sqrt(static_cast<double>(trials)) : 0.0;
  stats.analytic_mean = 2.0 * static_cast<double>(n - 1);
  return stats;
}

ChainStats chain_experiment(std::size_t m, std::uint64_t n, std::size_t trials, double t_cap,
                            std::uint64_t seed, unsigned threads) {
  if (m < 1) throw DomainError("chain length m must be at least 1");
  if (n < 2) throw DomainError("chain experiment needs n >= 2");
  const Crn crn = chain_crn(m);
  Configuration init(crn.species_count());
  init.set(crn.species().at("X1"), n);
  const SpeciesId target = crn.species().at("X" + std::to_string(m + 1));

  ChainStats out;
  out.m = m;
  out.n = n;
  out.t_cap = t_cap;
  out.production = first_production_times(crn, init, static_cast<double>(n), target, t_cap,
                                           trials, seed, threads);
  out.produced_fraction = static_cast<double>(trials - out.production.censored) /
                          static_cast<double>(trials);
  return out;
}

Configuration scale_configuration(const Configuration& tmpl, Count n) {
  if (tmpl.is_zero()) throw DomainError("cannot scale the zero configuration");
  std::vector<Count> counts(tmpl.size(), 0);
  Count assigned = 0;
  SpeciesId largest = 0;
  for (SpeciesId s = 0; s < tmpl.size(); ++s) {
    const unsigned __int128 share =
        static_cast<unsigned __int128>(tmpl[s]) * n / tmpl.total();
    counts[s] = static_cast<Count>(share);
    assigned += counts[s];
    if (tmpl[s] > tmpl[largest]) largest = s;
  }
  counts[largest] += n - assigned;
  return Configuration(std::move(counts));
}

std::string crn_digest(const Crn& crn) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_crn(crn)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScanResult constant_time_scan(const Crn& crn, const Configuration& init_template, double alpha,
                              std::span<const Count> n_grid, std::size_t trials,
                              std::optional<double> t_cap, std::uint64_t seed,
                              unsigned threads) {
  if (n_grid.empty()) throw DomainError("n grid must be nonempty");
  if (trials == 0) throw DomainError("trials must be at least 1");
  if (init_template.size() != crn.species_count()) {
    throw DomainError("template configuration does not match the CRN's species table");
  }
  const StageDecomposition stages = stage_decomposition(crn, init_template);
  const SpeciesSet& base = stages.stages.front();
  std::vector<SpeciesId> targets;
  for (SpeciesId s : stages.closure()) {
    if (!base.contains(s)) targets.push_back(s);
  }

  ScanResult out;
  out.seed = seed;
  out.crn_digest = crn_digest(crn);
  out.m = stages.m;
  out.t_cap = t_cap.value_or(static_cast<double>(stages.m + 1));
  out.alpha = alpha;
  if (!(out.t_cap > 0.0)) throw DomainError("t_cap must be positive");

  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const Count n = n_grid[g];
    const Configuration init = scale_configuration(init_template, n);
    if (support(init) != base) {
      throw DomainError("scaled configuration at n=" + std::to_string(n) +
                        " does not keep the template's species set");
    }
    if (!is_alpha_dense(init, alpha)) {
      throw DomainError("scaled configuration at n=" + std::to_string(n) + " is not " +
                        format_double(alpha) + "-dense");
    }
    const Simulator proto(crn, default_volume(init));
    const std::uint64_t grid_seed = mix64(seed) + g;
    std::vector<std::vector<double>> per_trial(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
      const Simulator sim = proto;
      Rng rng = Rng::substream(grid_seed, i);
      per_trial[i] = first_production_trial(sim, init, targets, out.t_cap, rng);
    });

    std::size_t all_produced = 0;
    for (const auto& row : per_trial) {
      if (std::none_of(row.begin(), row.end(), [](double t) { return std::isinf(t); })) {
        ++all_produced;
      }
    }
    out.all_produced_fraction.emplace_back(
        n, static_cast<double>(all_produced) / static_cast<double>(trials));

    for (std::size_t k = 0; k < targets.size(); ++k) {
      std::vector<std::optional<double>> times(trials);
      for (std::size_t i = 0; i < trials; ++i) {
        if (!std::isinf(per_trial[i][k])) times[i] = per_trial[i][k];
      }
      const auto stats = summarize_first_production(std::move(times), out.t_cap);
      ScanRow row;
      row.n = n;
      row.species = targets[k];
      row.species_name = crn.species().name(targets[k]);
      row.trials = trials;
      row.produced_count = trials - stats.censored;
      row.median = stats.median;
      row.p90 = stats.p90;
      row.mean_uncensored = stats.mean;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace crntime
