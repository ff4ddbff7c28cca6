#include "crntime/io.hpp"

#include <cmath>

namespace crntime {

namespace {

std::string fraction(const mpq_class& q) { return q.get_str(); }

Json names(const Crn& crn, const SpeciesSet& set) { return species_names(crn, set); }

/// JSON has no infinities; censored quantiles become null.
Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string csv_number(double x) { return format_double(x); }

}  // namespace

std::string reaction_label(const Crn& crn, std::size_t index) {
  const auto& rx = crn.reactions().at(index);
  return rx.label.empty() ? format_reaction(crn, rx) : rx.label;
}

Json to_json(const Crn& crn, const StageDecomposition& stages) {
  Json j;
  j["m"] = stages.m;
  Json list = Json::array();
  for (const auto& s : stages.stages) list.push_back(names(crn, s));
  j["stages"] = std::move(list);
  Json witnesses = Json::array();
  for (const auto& w : stages.witnesses) {
    witnesses.push_back({{"species", crn.species().name(w.species)},
                         {"stage", w.stage},
                         {"reaction", reaction_label(crn, w.reaction)}});
  }
  j["witnesses"] = std::move(witnesses);
  return j;
}

Json to_json(const Crn& crn, const ConservationCertificate& cert) {
  Json j;
  j["conserving"] = cert.conserving();
  if (cert.mass) {
    Json mass = Json::object();
    for (SpeciesId s = 0; s < cert.mass->size(); ++s) {
      mass[crn.species().name(s)] = fraction((*cert.mass)[s]);
    }
    j["mass"] = std::move(mass);
    j["ratio"] = fraction(*cert.ratio);
  }
  return j;
}

Json to_json(const Crn& crn, const FiniteDensityStatus& status) {
  Json j;
  j["classification"] = to_string(status.kind);
  if (status.c_hat) {
    j["c_hat"] = fraction(*status.c_hat);
  } else {
    j["c_hat"] = nullptr;
  }
  j["certificate"] = to_json(crn, status.certificate);
  return j;
}

Json to_json(const Crn& crn, const ReachabilityReport& report) {
  return {{"producible", names(crn, report.producible)},
          {"visited", report.visited},
          {"truncated", report.truncated},
          {"max_configs", report.max_configs},
          {"max_count", report.max_count}};
}

Json to_json(const Crn& crn, const ClosureComparison& cmp) {
  Json j;
  j["closure"] = names(crn, cmp.closure);
  Json scales = Json::array();
  for (const auto& s : cmp.scales) {
    scales.push_back({{"scale", s.scale},
                      {"producible", names(crn, s.report.producible)},
                      {"visited", s.report.visited},
                      {"subset", s.subset},
                      {"equal", s.equal},
                      {"inconclusive", s.inconclusive}});
  }
  j["scales"] = std::move(scales);
  if (cmp.least_equal_scale) {
    j["least_equal_scale"] = *cmp.least_equal_scale;
  } else {
    j["least_equal_scale"] = nullptr;
  }
  return j;
}

Json to_json(const FirstProductionStats& stats, bool include_times) {
  Json j;
  j["trials"] = stats.times.size();
  j["t_cap"] = stats.t_cap;
  j["censored"] = stats.censored;
  j["mean"] = number(stats.mean);
  j["variance"] = number(stats.variance);
  j["p10"] = number(stats.p10);
  j["median"] = number(stats.median);
  j["p90"] = number(stats.p90);
  if (include_times) {
    Json times = Json::array();
    for (const auto& t : stats.times) times.push_back(t ? Json(*t) : Json(nullptr));
    j["times"] = std::move(times);
  }
  return j;
}

Json to_json(const TheoremConstants& k) {
  Json j;
  j["alpha"] = k.alpha;
  j["c_hat_input"] = k.c_hat_input;
  j["c_hat"] = k.c_hat;
  j["K_hat"] = k.K_hat;
  j["k_hat"] = k.k_hat;
  j["lambda"] = k.lambda;
  j["m"] = k.m;
  j["species_count"] = k.species_count;
  j["t"] = k.t;
  j["log2_c"] = k.log2_c;
  j["log2_delta"] = k.log2_delta;
  j["log2_lower_base"] = number(k.log2_lower_base);
  j["log2_delta_m_lower"] = number(k.log2_delta_m_lower);
  j["log2_epsilon_prime"] = number(k.log2_epsilon_prime);
  j["log2_epsilon"] = number(k.log2_epsilon);
  Json thresholds = Json::array();
  for (const auto& t : k.n_thresholds) {
    Json row{{"condition", t.description}, {"log2_n", number(t.log2_value)}};
    if (!t.warning.empty()) row["warning"] = t.warning;
    thresholds.push_back(std::move(row));
  }
  j["n_thresholds"] = std::move(thresholds);
  j["log2_n_required"] = number(k.log2_n_required);
  return j;
}

Json to_json(const BoundCase& c, const BoundReport& report) {
  Json params;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DecayCase>) {
          params = {{"N", p.N}, {"lambda", p.lambda}, {"t", p.t}, {"delta", p.delta}};
        } else if constexpr (std::is_same_v<T, PoissonCase>) {
          params = {{"lambda", p.lambda}, {"n", p.n}, {"side", to_string(p.side)}};
        } else if constexpr (std::is_same_v<T, WalkCase>) {
          params = {{"f_hat", p.f_hat}, {"r_hat", p.r_hat}, {"t", p.t}, {"eps_hat", p.eps_hat}};
        } else {
          params = {{"delta_f", p.delta_f},
                    {"lambda_r", p.lambda_r},
                    {"delta_r", p.delta_r},
                    {"N", p.N}};
        }
      },
      c);
  return {{"process", case_name(c)},
          {"params", params},
          {"log2_bound", report.log2_bound},
          {"vacuous", report.vacuous},
          {"empirical_hits", report.empirical_hits},
          {"trials", report.trials},
          {"upper_confidence", report.upper_confidence},
          {"verdict", to_string(report.verdict)}};
}

Json to_json(const LeaderElectionStats& stats) {
  return {{"n", stats.n},
          {"trials", stats.times.size()},
          {"mean", stats.mean},
          {"stddev", stats.stddev},
          {"ci95_half_width", stats.ci95_half_width},
          {"analytic_mean", stats.analytic_mean}};
}

Json to_json(const ChainStats& stats) {
  return {{"m", stats.m},
          {"n", stats.n},
          {"t_cap", stats.t_cap},
          {"produced_fraction", stats.produced_fraction},
          {"first_production", to_json(stats.production)}};
}

Json to_json(const ScanResult& scan) {
  Json j;
  j["seed"] = scan.seed;
  j["crn_digest"] = scan.crn_digest;
  j["m"] = scan.m;
  j["t_cap"] = scan.t_cap;
  j["alpha"] = scan.alpha;
  Json fractions = Json::array();
  for (const auto& [n, f] : scan.all_produced_fraction) {
    fractions.push_back({{"n", n}, {"all_produced_fraction", f}});
  }
  j["all_produced"] = std::move(fractions);
  Json rows = Json::array();
  for (const auto& r : scan.rows) {
    rows.push_back({{"n", r.n},
                    {"species", r.species_name},
                    {"trials", r.trials},
                    {"produced_count", r.produced_count},
                    {"median", number(r.median)},
                    {"p90", number(r.p90)},
                    {"mean_uncensored", number(r.mean_uncensored)}});
  }
  j["rows"] = std::move(rows);
  return j;
}

void write_trace_csv(std::ostream& out, const Crn& crn, const Trace& trace) {
  out << "event_index,time,reaction_label\n";
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    out << i << ',' << csv_number(trace.events[i].time) << ','
        << reaction_label(crn, trace.events[i].reaction) << '\n';
  }
}

void write_checkpoints_csv(std::ostream& out, const Crn& crn, const Trace& trace) {
  out << "time";
  for (const auto& name : crn.species().names()) out << ',' << name;
  out << '\n';
  for (const auto& cp : trace.checkpoints) {
    out << csv_number(cp.time);
    for (Count c : cp.config.counts()) out << ',' << c;
    out << '\n';
  }
}

void write_leader_csv(std::ostream& out, std::span<const LeaderElectionStats> runs) {
  out << "n,trial,time\n";
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.times.size(); ++i) {
      out << run.n << ',' << i << ',' << csv_number(run.times[i]) << '\n';
    }
  }
}

void write_chain_csv(std::ostream& out, std::span<const ChainStats> runs) {
  out << "m,n,trial,time_or_censored\n";
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.production.times.size(); ++i) {
      const auto& t = run.production.times[i];
      out << run.m << ',' << run.n << ',' << i << ',' << (t ? csv_number(*t) : "censored")
          << '\n';
    }
  }
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  out << "n,species,trials,produced_count,median,p90,mean_uncensored\n";
  for (const auto& r : scan.rows) {
    out << r.n << ',' << r.species_name << ',' << r.trials << ',' << r.produced_count << ','
        << csv_number(r.median) << ',' << csv_number(r.p90) << ','
        << csv_number(r.mean_uncensored) << '\n';
  }
}

}  // namespace crntime
