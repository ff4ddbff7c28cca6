#include "crntime/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "crntime/error.hpp"

namespace crntime {

// ---------------------------------------------------------------------------
// SpeciesTable

SpeciesId SpeciesTable::intern(std::string_view name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  const auto id = static_cast<SpeciesId>(names_.size());
  names_.emplace_back(name);
  index_.emplace(std::string(name), id);
  return id;
}

std::optional<SpeciesId> SpeciesTable::find(std::string_view name) const {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  return std::nullopt;
}

SpeciesId SpeciesTable::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw DomainError("unknown species '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Reaction / Crn

namespace {

Count checked_sum(std::span<const Count> values) {
  Count total = 0;
  for (Count v : values) {
    if (v > std::numeric_limits<Count>::max() - total) {
      throw OverflowError("count total exceeds 64 bits");
    }
    total += v;
  }
  return total;
}

}  // namespace

Count Reaction::order() const { return checked_sum(reactants); }
Count Reaction::product_count() const { return checked_sum(products); }

Crn::Crn(SpeciesTable species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  const std::size_t n = species_.size();
  for (std::size_t i = 0; i < reactions_.size(); ++i) {
    auto& rx = reactions_[i];
    if (rx.reactants.size() > n || rx.products.size() > n) {
      throw DomainError("reaction " + std::to_string(i) +
                        " references a species outside the table");
    }
    rx.reactants.resize(n, 0);
    rx.products.resize(n, 0);
    if (!(rx.rate > 0.0) || !std::isfinite(rx.rate)) {
      throw DomainError("reaction " + std::to_string(i) +
                        ": rate constant must be positive and finite");
    }
    if (rx.reactants == rx.products) {
      throw DomainError("reaction " + std::to_string(i) + " is a no-op");
    }
  }
}

CrnBuilder& CrnBuilder::species(std::string_view name) {
  table_.intern(name);
  return *this;
}

CrnBuilder& CrnBuilder::reaction(const Side& reactants, const Side& products,
                                 double rate, std::string label) {
  std::map<SpeciesId, Count> r, p;
  for (const auto& [name, n] : reactants) r[table_.intern(name)] += n;
  for (const auto& [name, n] : products) p[table_.intern(name)] += n;
  sides_.emplace_back(std::move(r), std::move(p));
  params_.emplace_back(rate, std::move(label));
  return *this;
}

Crn CrnBuilder::build() const {
  std::vector<Reaction> reactions;
  reactions.reserve(sides_.size());
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    Reaction rx;
    rx.reactants.assign(table_.size(), 0);
    rx.products.assign(table_.size(), 0);
    for (const auto& [s, n] : sides_[i].first) rx.reactants[s] = n;
    for (const auto& [s, n] : sides_[i].second) rx.products[s] = n;
    rx.rate = params_[i].first;
    rx.label = params_[i].second;
    reactions.push_back(std::move(rx));
  }
  return Crn(table_, std::move(reactions));
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::vector<Count> counts)
    : counts_(std::move(counts)), total_(checked_sum(counts_)) {}

void Configuration::set(SpeciesId s, Count value) {
  const Count rest = total_ - counts_[s];
  if (value > std::numeric_limits<Count>::max() - rest) {
    throw OverflowError("count total exceeds 64 bits");
  }
  counts_[s] = value;
  total_ = rest + value;
}

void Configuration::add(SpeciesId s, Count amount) {
  if (amount > std::numeric_limits<Count>::max() - total_) {
    throw OverflowError("count total exceeds 64 bits");
  }
  counts_[s] += amount;
  total_ += amount;
}

void Configuration::remove(SpeciesId s, Count amount) {
  if (counts_[s] < amount) {
    throw NotApplicableError("count of species " + std::to_string(s) +
                             " would become negative");
  }
  counts_[s] -= amount;
  total_ -= amount;
}

Configuration Configuration::scaled(Count factor) const {
  std::vector<Count> out(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (factor != 0 && counts_[i] > std::numeric_limits<Count>::max() / factor) {
      throw OverflowError("scaled count exceeds 64 bits");
    }
    out[i] = counts_[i] * factor;
  }
  return Configuration(std::move(out));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct RawReaction {
  std::map<SpeciesId, Count> reactants;
  std::map<SpeciesId, Count> products;
  double rate = 1.0;
  std::string label;
  std::size_t line = 0;
};

/// Cursor over a single line; columns are 1-based.
class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  std::size_t column() const { return pos_ + 1; }
  std::size_t pos() const { return pos_; }
  std::string_view rest() const { return s_.substr(pos_); }

  bool consume(std::string_view token) {
    skip_ws();
    if (s_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!consume(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string_view identifier() {
    skip_ws();
    if (!is_ident_start(peek())) fail("expected species identifier");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  std::optional<Count> integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) return std::nullopt;
    Count value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("integer out of range");
    }
    return value;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, pos_ + 1, message);
  }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
    throw ParseError(line_, pos + 1, message);
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

/// side := '0' | term ('+' term)*,  term := [coeff] species
std::map<SpeciesId, Count> parse_side(LineCursor& cur, SpeciesTable& table) {
  std::map<SpeciesId, Count> side;
  cur.skip_ws();
  const std::size_t start = cur.pos();
  if (cur.peek() == '0') {
    auto rest = cur.rest().substr(1);
    const auto next = rest.find_first_not_of(" \t\r");
    if (next == std::string_view::npos || rest.substr(next, 2) == "->" || rest[next] == ';') {
      cur.consume("0");
      return side;
    }
  }
  while (true) {
    cur.skip_ws();
    const std::size_t term_pos = cur.pos();
    Count coeff = 1;
    if (auto n = cur.integer()) {
      if (*n == 0) cur.fail_at(term_pos, "stoichiometric coefficient must be positive");
      coeff = *n;
    }
    const SpeciesId id = table.intern(cur.identifier());
    if (side[id] > std::numeric_limits<Count>::max() - coeff) {
      cur.fail_at(term_pos, "stoichiometric coefficient overflow");
    }
    side[id] += coeff;
    if (!cur.consume("+")) break;
  }
  if (side.empty()) cur.fail_at(start, "empty reaction side (write 0)");
  return side;
}

double parse_rate(std::string_view text, LineCursor& cur, std::size_t at) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    cur.fail_at(at, "malformed rate constant '" + std::string(text) + "'");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    cur.fail_at(at, "rate constant must be positive");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void write_side(std::ostringstream& out, const Crn& crn, std::span<const Count> side) {
  bool first = true;
  for (SpeciesId s = 0; s < side.size(); ++s) {
    if (side[s] == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (side[s] != 1) out << side[s];
    out << crn.species().name(s);
  }
  if (first) out << '0';
}

}  // namespace

ParsedCrn parse_crn(std::string_view text) {
  SpeciesTable table;
  std::vector<RawReaction> raw;
  std::map<SpeciesId, Count> init;
  bool has_init = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    LineCursor cur(line, line_no);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }

    if (cur.consume("species:")) {
      while (!cur.at_end()) {
        const std::size_t at = cur.pos();
        const auto name = cur.identifier();
        if (table.find(name)) cur.fail_at(at, "species '" + std::string(name) + "' declared twice");
        table.intern(name);
        cur.consume(",");
      }
    } else if (cur.consume("init:")) {
      has_init = true;
      cur.skip_ws();
      const std::size_t at = cur.pos();
      const SpeciesId id = table.intern(cur.identifier());
      cur.expect("=");
      auto n = cur.integer();
      if (!n) cur.fail("expected nonnegative integer count");
      if (!cur.at_end()) cur.fail("unexpected trailing text");
      if (init.contains(id)) {
        cur.fail_at(at, "duplicate init for species '" + table.name(id) + "'");
      }
      init[id] = *n;
    } else {
      RawReaction rx;
      rx.line = line_no;
      const std::size_t rx_pos = cur.pos();
      rx.reactants = parse_side(cur, table);
      cur.expect("->");
      rx.products = parse_side(cur, table);
      bool have_rate = false;
      bool have_label = false;
      while (cur.consume(";")) {
        cur.skip_ws();
        const std::size_t clause_pos = cur.pos();
        auto clause = cur.rest();
        const auto semi = clause.find(';');
        clause = clause.substr(0, semi);
        const auto eq = clause.find('=');
        if (eq == std::string_view::npos) cur.fail("expected key=value clause");
        const auto key = trim(clause.substr(0, eq));
        const auto value = trim(clause.substr(eq + 1));
        if (key == "k") {
          if (have_rate) cur.fail("duplicate rate clause");
          rx.rate = parse_rate(value, cur, clause_pos + eq + 1);
          have_rate = true;
        } else if (key == "label") {
          if (have_label) cur.fail("duplicate label clause");
          if (value.empty()) cur.fail("empty label");
          rx.label = std::string(value);
          have_label = true;
        } else {
          cur.fail("unknown clause '" + std::string(key) + "'");
        }
        cur.consume(clause);
      }
      if (!cur.at_end()) cur.fail("unexpected trailing text");
      if (rx.reactants == rx.products) cur.fail_at(rx_pos, "no-op reaction (reactants equal products)");
      raw.push_back(std::move(rx));
    }
    if (end == text.size()) break;
  }

  std::vector<Reaction> reactions;
  reactions.reserve(raw.size());
  for (const auto& r : raw) {
    Reaction rx;
    rx.reactants.assign(table.size(), 0);
    rx.products.assign(table.size(), 0);
    for (const auto& [s, n] : r.reactants) rx.reactants[s] = n;
    for (const auto& [s, n] : r.products) rx.products[s] = n;
    rx.rate = r.rate;
    rx.label = r.label;
    reactions.push_back(std::move(rx));
  }

  ParsedCrn out{Crn(table, std::move(reactions)), std::nullopt};
  if (has_init) {
    std::vector<Count> counts(table.size(), 0);
    for (const auto& [s, n] : init) counts[s] = n;
    out.init = Configuration(std::move(counts));
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_reaction(const Crn& crn, const Reaction& rx) {
  std::ostringstream out;
  write_side(out, crn, rx.reactants);
  out << " -> ";
  write_side(out, crn, rx.products);
  return out.str();
}

std::string format_crn(const Crn& crn, const std::optional<Configuration>& init) {
  std::ostringstream out;
  out << "species:";
  const auto& names = crn.species().names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i == 0 ? " " : ", ") << names[i];
  }
  out << '\n';
  for (const auto& rx : crn.reactions()) {
    out << format_reaction(crn, rx) << " ; k=" << format_double(rx.rate);
    if (!rx.label.empty()) out << " ; label=" << rx.label;
    out << '\n';
  }
  if (init) {
    for (SpeciesId s = 0; s < crn.species_count(); ++s) {
      out << "init: " << names[s] << " = " << (*init)[s] << '\n';
    }
  }
  return out.str();
}

Configuration parse_assignments(const Crn& crn, std::string_view text) {
  Configuration config(crn.species_count());
  std::set<SpeciesId> seen;
  LineCursor cur(text, 1);
  while (!cur.at_end()) {
    const std::size_t at = cur.pos();
    const auto name = cur.identifier();
    const auto id = crn.species().find(name);
    if (!id) cur.fail_at(at, "unknown species '" + std::string(name) + "'");
    if (!seen.insert(*id).second) cur.fail_at(at, "duplicate species '" + std::string(name) + "'");
    cur.expect("=");
    auto n = cur.integer();
    if (!n) cur.fail("expected nonnegative integer count");
    config.set(*id, *n);
    cur.consume(",");
  }
  return config;
}

// ---------------------------------------------------------------------------
// Reaction semantics

bool is_applicable(const Configuration& config, const Reaction& rx) {
  for (SpeciesId s = 0; s < rx.reactants.size(); ++s) {
    if (rx.reactants[s] > config[s]) return false;
  }
  return true;
}

void apply_reaction_inplace(Configuration& config, const Reaction& rx) {
  if (!is_applicable(config, rx)) {
    throw NotApplicableError("reaction is not applicable to the configuration");
  }
  for (SpeciesId s = 0; s < rx.reactants.size(); ++s) {
    if (rx.reactants[s] > rx.products[s]) {
      config.remove(s, rx.reactants[s] - rx.products[s]);
    } else if (rx.products[s] > rx.reactants[s]) {
      config.add(s, rx.products[s] - rx.reactants[s]);
    }
  }
}

Configuration apply_reaction(const Configuration& config, const Reaction& rx) {
  Configuration next = config;
  apply_reaction_inplace(next, rx);
  return next;
}

SpeciesSet support(const Configuration& config) {
  SpeciesSet out;
  for (SpeciesId s = 0; s < config.size(); ++s) {
    if (config[s] > 0) out.insert(s);
  }
  return out;
}

std::vector<std::string> species_names(const Crn& crn, const SpeciesSet& set) {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (SpeciesId s : set) out.push_back(crn.species().name(s));
  return out;
}

}  // namespace crntime
