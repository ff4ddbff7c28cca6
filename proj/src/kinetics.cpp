#include "crntime/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crntime/error.hpp"
#include "crntime/parallel.hpp"
#include "crntime/stats.hpp"

namespace crntime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_volume(double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw DomainError("volume must be positive and finite");
  }
}

}  // namespace

double propensity(const Configuration& config, const Reaction& rx, double volume) {
  check_volume(volume);
  const Count order = rx.order();
  if (order != 1 && order != 2) {
    throw UnsupportedOrderError("reaction of order " + std::to_string(order) +
                                " is not supported by the kinetic model");
  }
  std::vector<SpeciesId> present;
  for (SpeciesId s = 0; s < rx.reactants.size(); ++s) {
    if (rx.reactants[s] > 0) present.push_back(s);
  }
  if (order == 1) return rx.rate * static_cast<double>(config[present[0]]);
  if (present.size() == 2) {
    return rx.rate / volume * static_cast<double>(config[present[0]]) *
           static_cast<double>(config[present[1]]);
  }
  const double c = static_cast<double>(config[present[0]]);
  if (c < 2.0) return 0.0;
  return rx.rate / volume * c * (c - 1.0) / 2.0;
}

double default_volume(const Configuration& init) {
  return init.total() > 0 ? static_cast<double>(init.total()) : 1.0;
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(const Crn& crn, double volume) : crn_(&crn), volume_(volume) {
  check_volume(volume);
  compiled_.reserve(crn.reactions().size());
  for (std::size_t j = 0; j < crn.reactions().size(); ++j) {
    const auto& rx = crn.reactions()[j];
    const Count order = rx.order();
    if (order != 1 && order != 2) {
      throw UnsupportedOrderError("reaction " + std::to_string(j) + " has order " +
                                  std::to_string(order) +
                                  "; the kinetic model supports orders 1 and 2");
    }
    Compiled c;
    c.rate = rx.rate;
    for (SpeciesId s = 0; s < rx.reactants.size(); ++s) {
      if (rx.reactants[s] > 0) c.reactants.push_back({s, rx.reactants[s]});
      const auto d = static_cast<std::int64_t>(rx.products[s]) -
                     static_cast<std::int64_t>(rx.reactants[s]);
      if (d != 0) c.delta.emplace_back(s, d);
    }
    compiled_.push_back(std::move(c));
  }
  scratch_.resize(compiled_.size());
}

double Simulator::propensity_of(const Compiled& rx, const Configuration& config) const {
  const auto& r = rx.reactants;
  if (r.size() == 2) {
    return rx.rate / volume_ * static_cast<double>(config[r[0].species]) *
           static_cast<double>(config[r[1].species]);
  }
  const double c = static_cast<double>(config[r[0].species]);
  if (r[0].coeff == 1) return rx.rate * c;
  if (c < 2.0) return 0.0;
  return rx.rate / volume_ * c * (c - 1.0) / 2.0;
}

double Simulator::total_propensity(const Configuration& config) const {
  double total = 0.0;
  for (const auto& rx : compiled_) total += propensity_of(rx, config);
  return total;
}

std::optional<Simulator::Proposal> Simulator::propose(const Configuration& config,
                                                      Rng& rng) const {
  double total = 0.0;
  for (std::size_t j = 0; j < compiled_.size(); ++j) {
    total += propensity_of(compiled_[j], config);
    scratch_[j] = total;
  }
  if (!(total > 0.0)) return std::nullopt;
  Proposal p;
  p.dt = rng.exponential(total);
  const double target = rng.uniform_open() * total;
  p.reaction = compiled_.size() - 1;
  for (std::size_t j = 0; j < compiled_.size(); ++j) {
    if (target < scratch_[j]) {
      p.reaction = j;
      break;
    }
  }
  // Guard against landing on a zero-propensity tail entry through rounding.
  while (p.reaction > 0 && scratch_[p.reaction] == scratch_[p.reaction - 1]) --p.reaction;
  return p;
}

void Simulator::commit(SimState& state, const Proposal& proposal) const {
  const auto& rx = compiled_[proposal.reaction];
  for (const auto& [s, d] : rx.delta) {
    if (d < 0) {
      state.config.remove(s, static_cast<Count>(-d));
    } else {
      state.config.add(s, static_cast<Count>(d));
    }
  }
  double next = state.time + proposal.dt;
  if (next <= state.time) next = std::nextafter(state.time, kInf);
  state.time = next;
  ++state.event_count;
}

std::optional<Event> Simulator::step(SimState& state, Rng& rng) const {
  auto p = propose(state.config, rng);
  if (!p) return std::nullopt;
  commit(state, *p);
  return Event{state.time, static_cast<std::uint32_t>(p->reaction)};
}

std::optional<Event> step(SimState& state, const Crn& crn, Rng& rng) {
  return Simulator(crn, state.volume).step(state, rng);
}

// ---------------------------------------------------------------------------
// simulate

namespace {

void validate_stop(const StopCondition& stop, const Crn& crn) {
  if (stop.empty()) throw DomainError("stop condition must set at least one bound");
  if (stop.time_horizon && !(*stop.time_horizon >= 0.0)) {
    throw DomainError("time horizon must be nonnegative");
  }
  const auto n = crn.species_count();
  if (stop.species_appears && *stop.species_appears >= n) {
    throw DomainError("stop condition names an unknown species");
  }
  if (stop.count_reaches && stop.count_reaches->first >= n) {
    throw DomainError("stop condition names an unknown species");
  }
}

class StopTracker {
 public:
  StopTracker(const StopCondition& stop, const Configuration& init) : stop_(stop) {
    if (stop.count_reaches) from_above_ = init[stop.count_reaches->first] > stop.count_reaches->second;
  }

  bool fired(const SimState& state) const {
    if (stop_.species_appears && state.config[*stop_.species_appears] > 0) return true;
    if (stop_.count_reaches) {
      const auto [s, threshold] = *stop_.count_reaches;
      if (from_above_ ? state.config[s] <= threshold : state.config[s] >= threshold) return true;
    }
    if (stop_.max_events && state.event_count >= *stop_.max_events) return true;
    return false;
  }

 private:
  const StopCondition& stop_;
  bool from_above_ = false;
};

}  // namespace

Trace simulate(const Crn& crn, const Configuration& init, double volume,
               const StopCondition& stop, std::uint64_t seed,
               std::span<const double> checkpoint_times, const SimulateOptions& options) {
  if (init.size() != crn.species_count()) {
    throw DomainError("initial configuration does not match the CRN's species table");
  }
  validate_stop(stop, crn);
  std::vector<double> checkpoints(checkpoint_times.begin(), checkpoint_times.end());
  for (double t : checkpoints) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("checkpoint times must be finite and nonnegative");
  }
  std::sort(checkpoints.begin(), checkpoints.end());

  const Simulator sim(crn, volume);
  Rng rng(seed);
  SimState state{init, 0.0, volume, 0};
  Trace trace;
  trace.initial = init;
  std::size_t next_checkpoint = 0;
  const StopTracker tracker(stop, init);
  const double horizon = stop.time_horizon.value_or(kInf);

  auto flush_checkpoints = [&](double before) {
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] < before) {
      trace.checkpoints.push_back({checkpoints[next_checkpoint], state.config});
      ++next_checkpoint;
    }
  };

  trace.status = TerminalStatus::Stopped;
  if (!tracker.fired(state)) {
    while (true) {
      auto p = sim.propose(state.config, rng);
      if (!p) {
        trace.status = TerminalStatus::Exhausted;
        break;
      }
      if (state.time + p->dt > horizon) {
        state.time = horizon;
        break;
      }
      flush_checkpoints(state.time + p->dt);
      sim.commit(state, *p);
      if (options.record_events) {
        trace.events.push_back({state.time, static_cast<std::uint32_t>(p->reaction)});
      }
      if (tracker.fired(state)) break;
    }
  }
  // The terminal state persists until the horizon (or forever once exhausted).
  const double fill_until = trace.status == TerminalStatus::Exhausted ? kInf : state.time;
  while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= fill_until) {
    trace.checkpoints.push_back({checkpoints[next_checkpoint], state.config});
    ++next_checkpoint;
  }
  trace.terminal = state.config;
  trace.end_time = state.time;
  trace.event_count = state.event_count;
  return trace;
}

Configuration replay(const Crn& crn, const Trace& trace) {
  Configuration c = trace.initial;
  for (const auto& e : trace.events) apply_reaction_inplace(c, crn.reactions().at(e.reaction));
  return c;
}

// ---------------------------------------------------------------------------
// First-production times

std::vector<double> first_production_trial(const Simulator& sim, const Configuration& init,
                                           std::span<const SpeciesId> targets, double t_cap,
                                           Rng& rng) {
  std::vector<double> times(targets.size(), kInf);
  std::size_t remaining = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (init[targets[i]] > 0) {
      times[i] = 0.0;
    } else {
      ++remaining;
    }
  }
  SimState state{init, 0.0, sim.volume(), 0};
  while (remaining > 0) {
    auto p = sim.propose(state.config, rng);
    if (!p || state.time + p->dt > t_cap) break;
    sim.commit(state, *p);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (std::isinf(times[i]) && state.config[targets[i]] > 0) {
        times[i] = state.time;
        --remaining;
      }
    }
  }
  return times;
}

FirstProductionStats summarize_first_production(std::vector<std::optional<double>> times,
                                                double t_cap) {
  FirstProductionStats stats;
  stats.t_cap = t_cap;
  std::vector<double> uncensored;
  std::vector<double> sorted;
  sorted.reserve(times.size());
  for (const auto& t : times) {
    if (t) {
      uncensored.push_back(*t);
      sorted.push_back(*t);
    } else {
      ++stats.censored;
      sorted.push_back(kInf);
    }
  }
  const Moments m = moments(uncensored);
  stats.mean = uncensored.empty() ? std::numeric_limits<double>::quiet_NaN() : m.mean;
  stats.variance = m.variance;
  std::sort(sorted.begin(), sorted.end());
  stats.median = quantile_sorted(sorted, 0.5);
  stats.p10 = quantile_sorted(sorted, 0.1);
  stats.p90 = quantile_sorted(sorted, 0.9);
  stats.times = std::move(times);
  return stats;
}

FirstProductionStats first_production_times(const Crn& crn, const Configuration& init,
                                            double volume, SpeciesId target, double t_cap,
                                            std::size_t trials, std::uint64_t seed,
                                            unsigned threads) {
  if (trials == 0) throw DomainError("trials must be at least 1");
  if (!(t_cap > 0.0)) throw DomainError("t_cap must be positive");
  if (target >= crn.species_count()) throw DomainError("unknown target species");
  if (init.size() != crn.species_count()) {
    throw DomainError("initial configuration does not match the CRN's species table");
  }
  const Simulator proto(crn, volume);
  std::vector<std::optional<double>> times(trials);
  const SpeciesId targets[] = {target};
  parallel_for(trials, threads, [&](std::size_t i) {
    const Simulator sim = proto;
    Rng rng = Rng::substream(seed, i);
    const double t = first_production_trial(sim, init, targets, t_cap, rng)[0];
    if (!std::isinf(t)) times[i] = t;
  });
  return summarize_first_production(std::move(times), t_cap);
}

}  // namespace crntime
