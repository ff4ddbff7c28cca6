#include "crntime/analysis.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "crntime/error.hpp"

namespace crntime {

SpeciesSet prod_set(const Crn& crn, const SpeciesSet& present) {
  SpeciesSet out;
  for (const auto& rx : crn.reactions()) {
    bool enabled = true;
    for (SpeciesId s = 0; s < rx.reactants.size() && enabled; ++s) {
      if (rx.reactants[s] > 0 && !present.contains(s)) enabled = false;
    }
    if (!enabled) continue;
    for (SpeciesId s = 0; s < rx.products.size(); ++s) {
      if (rx.produces(s)) out.insert(s);
    }
  }
  return out;
}

StageDecomposition stage_decomposition(const Crn& crn, const SpeciesSet& initial_support) {
  if (initial_support.empty()) {
    throw DomainError("stage decomposition needs a nonempty initial support");
  }
  StageDecomposition out;
  out.stages.push_back(initial_support);
  while (true) {
    const SpeciesSet& current = out.stages.back();
    SpeciesSet next = current;
    const std::size_t stage = out.stages.size();
    for (std::size_t j = 0; j < crn.reactions().size(); ++j) {
      const auto& rx = crn.reactions()[j];
      bool enabled = true;
      for (SpeciesId s = 0; s < rx.reactants.size() && enabled; ++s) {
        if (rx.reactants[s] > 0 && !current.contains(s)) enabled = false;
      }
      if (!enabled) continue;
      for (SpeciesId s = 0; s < rx.products.size(); ++s) {
        if (rx.produces(s) && next.insert(s).second) {
          out.witnesses.push_back({s, stage, j});
        }
      }
    }
    if (next.size() == current.size()) break;
    out.stages.push_back(std::move(next));
  }
  out.m = out.stages.size() - 1;
  return out;
}

StageDecomposition stage_decomposition(const Crn& crn, const Configuration& init) {
  if (init.is_zero()) throw DomainError("stage decomposition needs a nonzero initial configuration");
  return stage_decomposition(crn, support(init));
}

bool is_alpha_dense(const Configuration& config, double alpha) {
  if (config.is_zero()) throw DomainError("alpha-density is undefined for the zero configuration");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  const double threshold = alpha * static_cast<double>(config.total()) * (1.0 - 1e-12);
  for (Count c : config.counts()) {
    if (c > 0 && static_cast<double>(c) < threshold) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Mass conservation: find m >= 1 with M m = 0, M[j][s] = p_j(s) - r_j(s).

namespace {

using RationalMatrix = std::vector<std::vector<mpq_class>>;

/// Row-reduces in place and drops zero rows; returns the rank.
std::size_t row_reduce(RationalMatrix& a, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < a.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < a.size() && a[pivot][col] == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[rank], a[pivot]);
    const mpq_class inv = 1 / a[rank][col];
    for (auto& v : a[rank]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const mpq_class f = a[r][col];
      for (std::size_t c = 0; c < cols; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  a.resize(rank);
  return rank;
}

/// Phase-one simplex (Bland's rule) for A y = b, y >= 0. Returns a feasible
/// y or nullopt.
std::optional<std::vector<mpq_class>> feasible_point(RationalMatrix a, std::vector<mpq_class> b,
                                                     std::size_t n) {
  const std::size_t rows = a.size();
  for (std::size_t i = 0; i < rows; ++i) {
    if (b[i] < 0) {
      for (auto& v : a[i]) v = -v;
      b[i] = -b[i];
    }
  }
  // Columns: y (n), artificials (rows), rhs.
  const std::size_t width = n + rows + 1;
  RationalMatrix t(rows + 1, std::vector<mpq_class>(width, 0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  // Objective row holds reduced costs of minimizing the artificial sum.
  auto& obj = t[rows];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) obj[j] -= t[i][j];
    obj[width - 1] -= t[i][width - 1];
  }

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    mpq_class best;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      const mpq_class ratio = t[i][width - 1] / t[i][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded; cannot happen in phase one
    const mpq_class inv = 1 / t[leave][enter];
    for (auto& v : t[leave]) v *= inv;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const mpq_class f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  if (obj[width - 1] != 0) return std::nullopt;
  std::vector<mpq_class> y(n, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < n) y[basis[i]] = t[i][width - 1];
  }
  return y;
}

bool verify_mass(const Crn& crn, const std::vector<mpq_class>& mass) {
  for (const auto& m : mass) {
    if (m <= 0) return false;
  }
  for (const auto& rx : crn.reactions()) {
    mpq_class lhs = 0, rhs = 0;
    for (SpeciesId s = 0; s < mass.size(); ++s) {
      lhs += mass[s] * mpz_class(std::to_string(rx.reactants[s]));
      rhs += mass[s] * mpz_class(std::to_string(rx.products[s]));
    }
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace

ConservationCertificate check_mass_conserving(const Crn& crn) {
  const std::size_t n = crn.species_count();
  RationalMatrix a;
  for (const auto& rx : crn.reactions()) {
    std::vector<mpq_class> row(n);
    for (SpeciesId s = 0; s < n; ++s) {
      row[s] = mpq_class(mpz_class(std::to_string(rx.products[s]))) -
               mpq_class(mpz_class(std::to_string(rx.reactants[s])));
    }
    a.push_back(std::move(row));
  }
  row_reduce(a, n);

  // Substitute m = 1 + y: A y = -A·1, y >= 0.
  std::vector<mpq_class> b(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const auto& v : a[i]) b[i] -= v;
  }
  ConservationCertificate cert;
  auto y = feasible_point(a, b, n);
  if (!y) return cert;

  std::vector<mpq_class> mass(n);
  for (std::size_t s = 0; s < n; ++s) mass[s] = 1 + (*y)[s];
  if (n > 0) {
    const mpq_class lo = *std::min_element(mass.begin(), mass.end());
    const mpq_class hi = *std::max_element(mass.begin(), mass.end());
    for (auto& m : mass) {
      m /= lo;
      m.canonicalize();
    }
    cert.ratio = mpq_class(hi / lo);
  } else {
    cert.ratio = mpq_class(1);
  }
  if (!verify_mass(crn, mass)) {
    throw std::logic_error("mass-conservation certificate failed exact verification");
  }
  cert.mass = std::move(mass);
  return cert;
}

std::string to_string(FiniteDensityKind kind) {
  switch (kind) {
    case FiniteDensityKind::PopulationProtocol: return "PopulationProtocol";
    case FiniteDensityKind::MassConserving: return "MassConserving";
    case FiniteDensityKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

FiniteDensityStatus finite_density_status(const Crn& crn) {
  FiniteDensityStatus status;
  status.certificate = check_mass_conserving(crn);
  const bool protocol = std::all_of(crn.reactions().begin(), crn.reactions().end(),
                                    [](const Reaction& rx) {
                                      return rx.order() == 2 && rx.product_count() == 2;
                                    });
  if (protocol) {
    status.kind = FiniteDensityKind::PopulationProtocol;
    status.c_hat = mpq_class(1);
  } else if (status.certificate.conserving()) {
    status.kind = FiniteDensityKind::MassConserving;
    status.c_hat = *status.certificate.ratio;
  }
  return status;
}

// ---------------------------------------------------------------------------
// Reachability

namespace {

struct CountsHash {
  std::size_t operator()(const std::vector<Count>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Count c : v) {
      h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

ReachabilityReport reachable_set(const Crn& crn, const Configuration& init,
                                 std::size_t max_configs, Count max_count) {
  if (max_configs == 0 || max_count == 0) throw DomainError("reachability caps must be positive");
  ReachabilityReport report;
  report.max_configs = max_configs;
  report.max_count = max_count;

  using Key = std::vector<Count>;
  std::unordered_set<Key, CountsHash> visited;
  std::deque<Configuration> queue;
  visited.emplace(init.counts().begin(), init.counts().end());
  queue.push_back(init);

  while (!queue.empty()) {
    Configuration current = std::move(queue.front());
    queue.pop_front();
    for (SpeciesId s : support(current)) report.producible.insert(s);
    for (const auto& rx : crn.reactions()) {
      if (!is_applicable(current, rx)) continue;
      Configuration next = current;
      bool over_cap = false;
      for (SpeciesId s = 0; s < rx.reactants.size(); ++s) {
        const Count after = next[s] - rx.reactants[s];
        if (rx.products[s] > max_count || after > max_count - rx.products[s]) {
          over_cap = true;
          break;
        }
      }
      if (over_cap) {
        report.truncated = true;
        continue;
      }
      apply_reaction_inplace(next, rx);
      Key key(next.counts().begin(), next.counts().end());
      if (visited.contains(key)) continue;
      if (visited.size() >= max_configs) {
        report.truncated = true;
        continue;
      }
      visited.insert(std::move(key));
      queue.push_back(std::move(next));
    }
  }
  report.visited = visited.size();
  return report;
}

ClosureComparison closure_vs_oracle(const Crn& crn, const Configuration& init, Count scale_limit,
                                    std::size_t max_configs, Count max_count) {
  if (scale_limit == 0) throw DomainError("scale limit must be positive");
  ClosureComparison out;
  out.closure = stage_decomposition(crn, init).closure();
  for (Count s = 1; s <= scale_limit; ++s) {
    ClosureComparison::AtScale row;
    row.scale = s;
    row.report = reachable_set(crn, init.scaled(s), max_configs, max_count);
    row.subset = std::includes(out.closure.begin(), out.closure.end(),
                               row.report.producible.begin(), row.report.producible.end());
    row.equal = row.report.producible == out.closure;
    row.inconclusive = row.report.truncated;
    if (row.equal && !out.least_equal_scale) out.least_equal_scale = s;
    out.scales.push_back(std::move(row));
  }
  return out;
}

}  // namespace crntime
