#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crntime/kinetics.hpp"
#include "crntime/model.hpp"

namespace crntime {

/// L + L -> L + N, k = 1.
Crn leader_election_crn();

/// X_i -> 0 and X_i + X_i -> X_{i+1} for i = 1..m, all k = 1.
Crn chain_crn(std::size_t m);

struct LeaderElectionStats {
  std::uint64_t n = 0;
  std::vector<double> times;  ///< per trial, time until one L remains
  double mean = 0.0;
  double stddev = 0.0;
  double ci95_half_width = 0.0;  ///< 0 for a single trial
  double analytic_mean = 0.0;    ///< 2(n - 1)
};

/// Volume n, init L = n; trial i on substream (seed, i).
LeaderElectionStats leader_election_experiment(std::uint64_t n, std::size_t trials,
                                               std::uint64_t seed, unsigned threads = 0);

struct ChainStats {
  std::size_t m = 0;
  std::uint64_t n = 0;
  double t_cap = 0.0;
  FirstProductionStats production;  ///< first-production time of X_{m+1}
  double produced_fraction = 0.0;   ///< trials producing X_{m+1} by t_cap
};

ChainStats chain_experiment(std::size_t m, std::uint64_t n, std::size_t trials, double t_cap,
                            std::uint64_t seed, unsigned threads = 0);

/// Rescales to total n keeping proportions: floor each share, then give the
/// remainder to the largest-share species (lowest id on ties).
Configuration scale_configuration(const Configuration& tmpl, Count n);

struct ScanRow {
  Count n = 0;
  SpeciesId species = 0;
  std::string species_name;
  std::size_t trials = 0;
  std::size_t produced_count = 0;
  double median = 0.0;  ///< +inf when more than half the trials are censored
  double p90 = 0.0;
  double mean_uncensored = 0.0;  ///< NaN when every trial is censored
};

struct ScanResult {
  std::vector<ScanRow> rows;  ///< grid order, then species id
  std::vector<std::pair<Count, double>> all_produced_fraction;
  std::uint64_t seed = 0;
  std::string crn_digest;
  std::size_t m = 0;
  double t_cap = 0.0;
  double alpha = 0.0;
};

/// First-production summaries of every species in Λm \ Λ0 across the grid.
/// t_cap defaults to m + 1. Throws DomainError when a scaled configuration
/// is not α-dense or loses a species of the template's support.
ScanResult constant_time_scan(const Crn& crn, const Configuration& init_template, double alpha,
                              std::span<const Count> n_grid, std::size_t trials,
                              std::optional<double> t_cap, std::uint64_t seed,
                              unsigned threads = 0);

/// FNV-1a over the canonical text, as 16 hex digits.
std::string crn_digest(const Crn& crn);

}  // namespace crntime
