#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crntime/model.hpp"

namespace crntime {

/// The chain Λ0 ⊊ Λ1 ⊊ ... ⊊ Λm obtained by iterating
/// Λ_{i+1} = Λ_i ∪ PROD(Λ_i) from Λ0 = [init] until PROD adds nothing.
struct StageDecomposition {
  struct Witness {
    SpeciesId species;
    std::size_t stage;     ///< stage at which the species first appears
    std::size_t reaction;  ///< index of a reaction producing it from stage - 1
  };

  std::vector<SpeciesSet> stages;
  std::size_t m = 0;
  std::vector<Witness> witnesses;

  const SpeciesSet& closure() const { return stages.back(); }
};

/// Species produced by some reaction whose reactant support lies in `present`.
SpeciesSet prod_set(const Crn& crn, const SpeciesSet& present);

/// Throws DomainError if `init` is the zero configuration.
StageDecomposition stage_decomposition(const Crn& crn, const Configuration& init);
/// Same, starting from an explicit Λ0 (must be nonempty).
StageDecomposition stage_decomposition(const Crn& crn, const SpeciesSet& initial_support);

/// Every present species has count >= alpha * total. The comparison carries
/// a 1e-12 relative slack so decimal alphas such as 0.1 behave as written.
/// Throws DomainError for the zero configuration or alpha outside (0, 1].
bool is_alpha_dense(const Configuration& config, double alpha);

/// Exact positive mass function m with m·r = m·p for every reaction.
struct ConservationCertificate {
  std::optional<std::vector<mpq_class>> mass;  ///< min-normalized (min entry is 1)
  std::optional<mpq_class> ratio;              ///< max(mass) / min(mass)

  bool conserving() const noexcept { return mass.has_value(); }
};

ConservationCertificate check_mass_conserving(const Crn& crn);

enum class FiniteDensityKind { PopulationProtocol, MassConserving, Unknown };

std::string to_string(FiniteDensityKind kind);

struct FiniteDensityStatus {
  FiniteDensityKind kind = FiniteDensityKind::Unknown;
  /// Bound ĉ with ||c|| <= ĉ ||i|| for every reachable c; absent when Unknown.
  std::optional<mpq_class> c_hat;
  ConservationCertificate certificate;
};

/// Sufficient conditions only: population protocol (ĉ = 1), then an exact
/// mass-conservation certificate (ĉ = its max/min ratio), else Unknown.
FiniteDensityStatus finite_density_status(const Crn& crn);

struct ReachabilityReport {
  SpeciesSet producible;
  std::size_t visited = 0;
  bool truncated = false;
  std::size_t max_configs = 0;
  Count max_count = 0;
};

/// Breadth-first exploration of the reachability relation. Successors with a
/// species count above `max_count`, or beyond `max_configs` distinct
/// configurations, are dropped and the report is marked truncated.
ReachabilityReport reachable_set(const Crn& crn, const Configuration& init,
                                 std::size_t max_configs, Count max_count);

struct ClosureComparison {
  struct AtScale {
    Count scale = 0;
    ReachabilityReport report;
    bool subset = false;  ///< producible ⊆ Λm
    bool equal = false;
    bool inconclusive = false;  ///< BFS was truncated
  };

  SpeciesSet closure;
  std::vector<AtScale> scales;
  std::optional<Count> least_equal_scale;
};

/// Compares exact BFS producibility from s·init, s = 1..scale_limit, with
/// the stage closure Λm.
ClosureComparison closure_vs_oracle(const Crn& crn, const Configuration& init,
                                    Count scale_limit, std::size_t max_configs = 1'000'000,
                                    Count max_count = 1'000'000);

}  // namespace crntime
