#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crntime/model.hpp"
#include "crntime/rng.hpp"

namespace crntime {

/// Mass-action propensity under volume v: k·c(X), (k/v)·c(X)·c(Y) or
/// (k/v)·c(X)(c(X)-1)/2. Throws UnsupportedOrderError unless ||r|| ∈ {1, 2}.
double propensity(const Configuration& config, const Reaction& rx, double volume);

/// Volume used when none is given: ||init||, or 1 for the zero configuration.
double default_volume(const Configuration& init);

struct SimState {
  Configuration config;
  double time = 0.0;
  double volume = 1.0;
  std::uint64_t event_count = 0;
};

struct Event {
  double time = 0.0;
  std::uint32_t reaction = 0;

  bool operator==(const Event&) const = default;
};

/// Any combination of bounds; the run stops as soon as one fires.
struct StopCondition {
  std::optional<double> time_horizon;
  std::optional<SpeciesId> species_appears;
  /// Fires once the count reaches the threshold from its starting side.
  std::optional<std::pair<SpeciesId, Count>> count_reaches;
  std::optional<std::uint64_t> max_events;

  bool empty() const noexcept {
    return !time_horizon && !species_appears && !count_reaches && !max_events;
  }
};

enum class TerminalStatus { Stopped, Exhausted };

struct Checkpoint {
  double time = 0.0;
  Configuration config;
};

struct Trace {
  Configuration initial;
  std::vector<Event> events;
  std::vector<Checkpoint> checkpoints;
  TerminalStatus status = TerminalStatus::Stopped;
  Configuration terminal;
  double end_time = 0.0;
  std::uint64_t event_count = 0;
};

/// Direct-method SSA over a fixed CRN and volume. Construction rejects
/// reactions of order other than 1 or 2.
class Simulator {
 public:
  struct Proposal {
    double dt = 0.0;
    std::size_t reaction = 0;
  };

  Simulator(const Crn& crn, double volume);

  const Crn& crn() const noexcept { return *crn_; }
  double volume() const noexcept { return volume_; }

  /// ρ(c), the sum of all propensities.
  double total_propensity(const Configuration& config) const;

  /// Samples Δt ~ Exp(ρ(c)) and then the reaction index with probability
  /// ρ(c, β)/ρ(c). nullopt when ρ(c) = 0.
  std::optional<Proposal> propose(const Configuration& config, Rng& rng) const;

  /// Applies the reaction and advances time and the event counter.
  void commit(SimState& state, const Proposal& proposal) const;

  /// propose + commit. Returns the event, or nullopt when exhausted.
  std::optional<Event> step(SimState& state, Rng& rng) const;

 private:
  struct Term {
    SpeciesId species;
    Count coeff;
  };
  struct Compiled {
    double rate;
    std::vector<Term> reactants;
    std::vector<std::pair<SpeciesId, std::int64_t>> delta;
  };

  double propensity_of(const Compiled& rx, const Configuration& config) const;

  const Crn* crn_;
  double volume_;
  std::vector<Compiled> compiled_;
  mutable std::vector<double> scratch_;
};

/// One SSA step from a state; compiles the CRN on every call.
std::optional<Event> step(SimState& state, const Crn& crn, Rng& rng);

struct SimulateOptions {
  bool record_events = true;
};

/// Runs the SSA until a stop condition fires or no reaction can occur.
/// Checkpoint c(τ) is the configuration after all events at times <= τ.
Trace simulate(const Crn& crn, const Configuration& init, double volume,
               const StopCondition& stop, std::uint64_t seed,
               std::span<const double> checkpoint_times = {},
               const SimulateOptions& options = {});

/// Replays a trace's events from its initial configuration.
Configuration replay(const Crn& crn, const Trace& trace);

/// Time at which each target first has positive count (0 if present at the
/// start, +inf if not produced by t_cap). Ends early once every target has
/// appeared.
std::vector<double> first_production_trial(const Simulator& sim, const Configuration& init,
                                           std::span<const SpeciesId> targets, double t_cap,
                                           Rng& rng);

struct FirstProductionStats {
  /// Per-trial first-production time; nullopt for censored trials.
  std::vector<std::optional<double>> times;
  double t_cap = 0.0;
  std::size_t censored = 0;
  /// Over uncensored trials only.
  double mean = 0.0;
  double variance = 0.0;
  /// Censored trials count as +inf in the quantiles.
  double median = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
};

FirstProductionStats summarize_first_production(std::vector<std::optional<double>> times,
                                                double t_cap);

/// Trial i uses substream (seed, i); results do not depend on `threads`.
FirstProductionStats first_production_times(const Crn& crn, const Configuration& init,
                                            double volume, SpeciesId target, double t_cap,
                                            std::size_t trials, std::uint64_t seed,
                                            unsigned threads = 0);

}  // namespace crntime
