#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crntime {

using SpeciesId = std::uint32_t;
using Count = std::uint64_t;
using SpeciesSet = std::set<SpeciesId>;

/// Interned species names. Ids are dense, assigned in insertion order and
/// never reused.
class SpeciesTable {
 public:
  /// Returns the id of `name`, adding it if absent.
  SpeciesId intern(std::string_view name);
  std::optional<SpeciesId> find(std::string_view name) const;
  /// Like find() but throws DomainError for unknown names.
  SpeciesId at(std::string_view name) const;

  const std::string& name(SpeciesId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

  bool operator==(const SpeciesTable& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, SpeciesId, std::less<>> index_;
};

/// A reaction (r, p, k). Stoichiometry vectors are dense over the owning
/// CRN's species table.
struct Reaction {
  std::vector<Count> reactants;
  std::vector<Count> products;
  double rate = 1.0;
  std::string label;

  /// ||r||, the molecularity.
  Count order() const;
  /// ||p||
  Count product_count() const;
  /// True iff p(S) - r(S) > 0.
  bool produces(SpeciesId s) const { return products[s] > reactants[s]; }

  bool operator==(const Reaction& other) const = default;
};

/// Immutable chemical reaction network.
class Crn {
 public:
  Crn() = default;
  /// Pads every stoichiometry vector to the table size and validates rates,
  /// no-op reactions and species indices. Throws DomainError.
  Crn(SpeciesTable species, std::vector<Reaction> reactions);

  const SpeciesTable& species() const noexcept { return species_; }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
  std::size_t species_count() const noexcept { return species_.size(); }
  std::size_t reaction_count() const noexcept { return reactions_.size(); }

  bool operator==(const Crn& other) const = default;

 private:
  SpeciesTable species_;
  std::vector<Reaction> reactions_;
};

/// Convenience builder for CRNs assembled in code.
class CrnBuilder {
 public:
  using Side = std::vector<std::pair<std::string, Count>>;

  CrnBuilder& species(std::string_view name);
  CrnBuilder& reaction(const Side& reactants, const Side& products,
                       double rate = 1.0, std::string label = {});
  Crn build() const;

 private:
  SpeciesTable table_;
  std::vector<std::pair<std::map<SpeciesId, Count>, std::map<SpeciesId, Count>>> sides_;
  std::vector<std::pair<double, std::string>> params_;
};

/// Nonnegative count vector with a cached, overflow-checked total.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t species_count) : counts_(species_count, 0) {}
  /// Throws OverflowError if the counts sum past 2^64 - 1.
  explicit Configuration(std::vector<Count> counts);

  Count operator[](SpeciesId s) const { return counts_[s]; }
  Count total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::span<const Count> counts() const noexcept { return counts_; }
  bool is_zero() const noexcept { return total_ == 0; }

  void set(SpeciesId s, Count value);
  void add(SpeciesId s, Count amount);
  /// Throws NotApplicableError if the count would go negative.
  void remove(SpeciesId s, Count amount);

  /// Componentwise multiplication by `factor`, overflow checked.
  Configuration scaled(Count factor) const;

  bool operator==(const Configuration& other) const = default;
  auto operator<=>(const Configuration& other) const = default;

 private:
  std::vector<Count> counts_;
  Count total_ = 0;
};

struct ParsedCrn {
  Crn crn;
  std::optional<Configuration> init;
};

/// Parses the line-oriented CRN text format. Throws ParseError with the
/// 1-based line and column of the offending token.
ParsedCrn parse_crn(std::string_view text);

/// Canonical text; parse_crn(format_crn(x)) reproduces x exactly.
std::string format_crn(const Crn& crn,
                       const std::optional<Configuration>& init = std::nullopt);

/// "A + 2B -> A + 3C" without the rate clause.
std::string format_reaction(const Crn& crn, const Reaction& rx);

/// Shortest decimal that round-trips through strtod.
std::string format_double(double value);

/// Parses "A=10, B=3" (commas or whitespace separate entries) against the
/// CRN's species table; unnamed species are zero.
Configuration parse_assignments(const Crn& crn, std::string_view text);

bool is_applicable(const Configuration& config, const Reaction& rx);

/// c + p - r. Throws NotApplicableError when r > c in some component.
Configuration apply_reaction(const Configuration& config, const Reaction& rx);

/// In-place variant used on hot simulation paths.
void apply_reaction_inplace(Configuration& config, const Reaction& rx);

/// [c], the species with positive count.
SpeciesSet support(const Configuration& config);

std::vector<std::string> species_names(const Crn& crn, const SpeciesSet& set);

}  // namespace crntime
