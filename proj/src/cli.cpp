#include "crntime/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "crntime/analysis.hpp"
#include "crntime/bounds.hpp"
#include "crntime/error.hpp"
#include "crntime/harness.hpp"
#include "crntime/io.hpp"
#include "crntime/kinetics.hpp"
#include "crntime/model.hpp"
#include "crntime/processes.hpp"

namespace crntime::cli {

namespace {

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  std::string format = "text";
  std::string out_dir;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path.string() + "'");
  out << content;
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return format_double(x);
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return "{" + out + "}";
}

/// Model file plus the initial configuration resolved from --init or the file.
struct Loaded {
  ParsedCrn parsed;
  std::optional<Configuration> init;
};

Loaded load(const std::string& path, const std::string& init_text) {
  Loaded l{parse_crn(read_file(path)), std::nullopt};
  if (!init_text.empty()) {
    l.init = parse_assignments(l.parsed.crn, init_text);
  } else {
    l.init = l.parsed.init;
  }
  return l;
}

const Configuration& require_init(const Loaded& l) {
  if (!l.init) throw DomainError("an initial configuration is required (init: lines or --init)");
  return *l.init;
}

std::string stages_text(const Crn& crn, const StageDecomposition& st) {
  std::ostringstream out;
  out << "stages: " << st.stages.size() << " (m=" << st.m << ")\n";
  for (std::size_t i = 0; i < st.stages.size(); ++i) {
    out << "  stage " << i << ": " << join(species_names(crn, st.stages[i])) << '\n';
  }
  for (const auto& w : st.witnesses) {
    out << "  witness " << crn.species().name(w.species) << " @" << w.stage << ": "
        << reaction_label(crn, w.reaction) << '\n';
  }
  return out.str();
}

std::string density_text(const FiniteDensityStatus& st) {
  std::string s = "finite density: " + to_string(st.kind);
  if (st.c_hat) s += ", c_hat=" + st.c_hat->get_str();
  return s + "\n";
}

std::string certificate_text(const Crn& crn, const ConservationCertificate& cert) {
  if (!cert.conserving()) return "mass conservation: none\n";
  std::string s = "mass conservation: ";
  for (SpeciesId i = 0; i < cert.mass->size(); ++i) {
    if (i) s += ", ";
    s += crn.species().name(i) + "=" + (*cert.mass)[i].get_str();
  }
  return s + " (ratio " + cert.ratio->get_str() + ")\n";
}

std::string bound_text(const LogBound& b) {
  return "log2 bound: " + fmt(b.log2) + (b.vacuous() ? " (vacuous: bound >= 1)" : "") + "\n";
}

std::string report_text(const BoundReport& r) {
  std::ostringstream out;
  out << "trials: " << r.trials << "\n"
      << "tail hits: " << r.empirical_hits << "\n"
      << "upper confidence (99%): " << fmt(r.upper_confidence) << "\n"
      << "verdict: " << to_string(r.verdict) << "\n";
  return out.str();
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T value{};
    if (!(is >> value) || !is.eof()) {
      throw DomainError(std::string("malformed ") + what + " entry '" + item + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw DomainError(std::string(what) + " must list at least one value");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic CRN simulation, producibility analysis and Chernoff-bound checks",
               "crntime"};
  app.require_subcommand(1);
  Globals g;
  if (const char* env = std::getenv(kOutDirEnv)) g.out_dir = env;
  app.add_option("--seed", g.seed, "Random seed")->default_val(kDefaultSeed);
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores); results do not depend on it");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out-dir", g.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or .)");

  std::function<void()> action;
  auto emit = [&](const std::string& text, const Json& json) {
    if (g.format == "json") {
      out << json.dump(2) << '\n';
    } else {
      out << text;
    }
  };
  auto out_path = [&](const std::string& name) {
    return std::filesystem::path(g.out_dir.empty() ? "." : g.out_dir) / name;
  };

  // validate --------------------------------------------------------------
  std::string file, init_text;
  auto* validate = app.add_subcommand("validate", "Parse a CRN file and classify finite density");
  validate->add_option("file", file, "CRN file")->required();
  validate->callback([&] {
    action = [&] {
      const auto l = load(file, "");
      const Crn& crn = l.parsed.crn;
      const auto status = finite_density_status(crn);
      std::vector<std::string> unsupported;
      for (std::size_t j = 0; j < crn.reactions().size(); ++j) {
        const Count order = crn.reactions()[j].order();
        if (order != 1 && order != 2) unsupported.push_back(reaction_label(crn, j));
      }
      std::ostringstream text;
      text << "species: " << crn.species_count() << "\nreactions: " << crn.reaction_count()
           << "\n" << density_text(status);
      text << "kinetics: "
           << (unsupported.empty() ? std::string("supported") : "unsupported order in " + join(unsupported))
           << "\n";
      Json j;
      j["species"] = crn.species().names();
      j["reactions"] = crn.reaction_count();
      j["finite_density"] = to_json(crn, status);
      j["kinetics_unsupported"] = unsupported;
      emit(text.str(), j);
    };
  });

  // analyze ---------------------------------------------------------------
  std::optional<double> alpha_opt;
  auto* analyze = app.add_subcommand("analyze", "Stages, density, conservation and finite density");
  analyze->add_option("file", file, "CRN file")->required();
  analyze->add_option("--init", init_text, "Initial counts, e.g. \"X1=1000,Y=5\"");
  analyze->add_option("--alpha", alpha_opt, "Check alpha-density of the initial configuration");
  analyze->callback([&] {
    action = [&] {
      const auto l = load(file, init_text);
      const Crn& crn = l.parsed.crn;
      std::ostringstream text;
      Json j;
      if (l.init) {
        const auto st = stage_decomposition(crn, *l.init);
        text << stages_text(crn, st);
        j["stages"] = to_json(crn, st);
        if (alpha_opt) {
          const bool dense = is_alpha_dense(*l.init, *alpha_opt);
          text << "alpha-dense (alpha=" << fmt(*alpha_opt) << "): " << (dense ? "yes" : "no") << "\n";
          j["alpha"] = *alpha_opt;
          j["alpha_dense"] = dense;
        }
      } else {
        if (alpha_opt) throw DomainError("--alpha needs an initial configuration");
        text << "stages: no initial configuration given\n";
      }
      const auto status = finite_density_status(crn);
      text << certificate_text(crn, status.certificate) << density_text(status);
      j["finite_density"] = to_json(crn, status);
      emit(text.str(), j);
    };
  });

  // constants -------------------------------------------------------------
  double alpha = 0.0;
  std::optional<double> c_hat_opt;
  auto* constants = app.add_subcommand("constants", "Constants of the constant-time production bound");
  constants->add_option("file", file, "CRN file")->required();
  constants->add_option("--alpha", alpha, "Density alpha in (0, 1]")->required();
  constants->add_option("--c-hat", c_hat_opt, "Finite-density constant (default: derived)");
  constants->add_option("--init", init_text, "Initial counts (support gives the first stage)");
  constants->callback([&] {
    action = [&] {
      const auto l = load(file, init_text);
      const Crn& crn = l.parsed.crn;
      double c_hat = 0.0;
      if (c_hat_opt) {
        c_hat = *c_hat_opt;
      } else {
        const auto status = finite_density_status(crn);
        if (!status.c_hat) {
          throw DomainError("finite density is not certified for this CRN; pass --c-hat");
        }
        c_hat = status.c_hat->get_d();
      }
      const auto k = compute_theorem_constants(crn, alpha, c_hat, require_init(l));
      std::ostringstream text;
      text << "K_hat: " << fmt(k.K_hat) << "\nk_hat: " << fmt(k.k_hat) << "\nc_hat: " << fmt(k.c_hat)
           << "\nlambda: " << fmt(k.lambda) << "\nm: " << k.m << "\nt: " << fmt(k.t)
           << "\nlog2 c: " << fmt(k.log2_c) << "\n";
      for (std::size_t i = 0; i < k.log2_delta.size(); ++i) {
        text << "log2 delta_" << i << ": " << fmt(k.log2_delta[i]) << "\n";
      }
      text << "log2 delta_m lower bound: " << fmt(k.log2_delta_m_lower)
           << "\nlog2 eps': " << fmt(k.log2_epsilon_prime) << "\nlog2 eps: " << fmt(k.log2_epsilon)
           << "\n";
      for (const auto& t : k.n_thresholds) {
        text << "threshold " << t.description << ": log2 n >= " << fmt(t.log2_value);
        if (!t.warning.empty()) text << "  [warning: " << t.warning << "]";
        text << "\n";
      }
      text << "log2 n required: " << fmt(k.log2_n_required) << "\n";
      emit(text.str(), to_json(k));
    };
  });

  // simulate --------------------------------------------------------------
  std::optional<double> volume_opt, t_max;
  std::optional<std::uint64_t> max_events;
  std::string until_appears, until_count, checkpoint_list, trace_out, checkpoints_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one exact stochastic simulation");
  simulate_cmd->add_option("file", file, "CRN file")->required();
  simulate_cmd->add_option("--init", init_text, "Initial counts");
  simulate_cmd->add_option("--volume", volume_opt, "Volume (default: total initial count)");
  simulate_cmd->add_option("--t-max", t_max, "Stop at this time");
  simulate_cmd->add_option("--max-events", max_events, "Stop after this many reactions");
  simulate_cmd->add_option("--until-appears", until_appears, "Stop once this species is present");
  simulate_cmd->add_option("--until-count", until_count, "Stop once S reaches a count, e.g. L=1");
  simulate_cmd->add_option("--checkpoints", checkpoint_list, "Comma-separated sample times");
  simulate_cmd->add_option("--trace-out", trace_out, "Write the event trace CSV here");
  simulate_cmd->add_option("--checkpoints-out", checkpoints_out, "Write checkpoint CSV here");
  simulate_cmd->callback([&] {
    action = [&] {
      const auto l = load(file, init_text);
      const Crn& crn = l.parsed.crn;
      const Configuration& init = require_init(l);
      StopCondition stop;
      stop.time_horizon = t_max;
      stop.max_events = max_events;
      if (!until_appears.empty()) stop.species_appears = crn.species().at(until_appears);
      if (!until_count.empty()) {
        const auto eq = until_count.find('=');
        if (eq == std::string::npos) throw DomainError("--until-count expects S=n");
        const auto counts = parse_list<Count>(until_count.substr(eq + 1), "--until-count");
        stop.count_reaches = {crn.species().at(until_count.substr(0, eq)), counts.front()};
      }
      std::vector<double> checkpoints;
      if (!checkpoint_list.empty()) checkpoints = parse_list<double>(checkpoint_list, "--checkpoints");
      const double volume = volume_opt.value_or(default_volume(init));
      const Trace trace = simulate(crn, init, volume, stop, g.seed, checkpoints);
      if (!trace_out.empty()) {
        std::ostringstream csv;
        write_trace_csv(csv, crn, trace);
        write_file(trace_out, csv.str());
      }
      if (!checkpoints_out.empty()) {
        std::ostringstream csv;
        write_checkpoints_csv(csv, crn, trace);
        write_file(checkpoints_out, csv.str());
      }
      std::ostringstream text;
      text << "status: " << (trace.status == TerminalStatus::Exhausted ? "Exhausted" : "Stopped")
           << "\nend time: " << fmt(trace.end_time) << "\nevents: " << trace.event_count
           << "\nterminal:";
      Json terminal = Json::object();
      for (SpeciesId s = 0; s < crn.species_count(); ++s) {
        text << ' ' << crn.species().name(s) << '=' << trace.terminal[s];
        terminal[crn.species().name(s)] = trace.terminal[s];
      }
      text << "\n";
      Json j{{"status", trace.status == TerminalStatus::Exhausted ? "Exhausted" : "Stopped"},
             {"end_time", trace.end_time},
             {"events", trace.event_count},
             {"volume", volume},
             {"seed", g.seed},
             {"terminal", terminal}};
      emit(text.str(), j);
    };
  });

  // first-production --------------------------------------------------------
  std::string target;
  double t_cap = 1.0;
  std::size_t trials = 1000;
  bool with_times = false;
  auto* first = app.add_subcommand("first-production", "First-production time statistics");
  first->add_option("file", file, "CRN file")->required();
  first->add_option("--target", target, "Target species")->required();
  first->add_option("--t-cap", t_cap, "Censoring time")->required();
  first->add_option("--trials", trials, "Number of trials")->default_val(1000);
  first->add_option("--init", init_text, "Initial counts");
  first->add_option("--volume", volume_opt, "Volume (default: total initial count)");
  first->add_flag("--times", with_times, "Include per-trial times in JSON output");
  first->callback([&] {
    action = [&] {
      const auto l = load(file, init_text);
      const Crn& crn = l.parsed.crn;
      const Configuration& init = require_init(l);
      const auto id = crn.species().find(target);
      if (!id) throw DomainError("unknown target species '" + target + "'");
      const auto stats = first_production_times(crn, init, volume_opt.value_or(default_volume(init)),
                                                *id, t_cap, trials, g.seed, g.threads);
      std::ostringstream text;
      text << "trials: " << trials << "\ncensored: " << stats.censored << "\nmean (uncensored): "
           << fmt(stats.mean) << "\nvariance (uncensored): " << fmt(stats.variance)
           << "\np10: " << fmt(stats.p10) << "\nmedian: " << fmt(stats.median)
           << "\np90: " << fmt(stats.p90) << "\n";
      emit(text.str(), to_json(stats, with_times));
    };
  });

  // reachable ---------------------------------------------------------------
  std::size_t max_configs = 100000;
  Count max_count = 1000;
  bool compare_closure = false;
  Count scale_limit = 8;
  auto* reach = app.add_subcommand("reachable", "Exact breadth-first producibility");
  reach->add_option("file", file, "CRN file")->required();
  reach->add_option("--init", init_text, "Initial counts");
  reach->add_option("--max-configs", max_configs, "Cap on distinct configurations")->default_val(100000);
  reach->add_option("--max-count", max_count, "Cap on any species count")->default_val(1000);
  reach->add_flag("--compare-closure", compare_closure, "Compare with the stage closure over scales");
  reach->add_option("--scale-limit", scale_limit, "Largest scale for --compare-closure")->default_val(8);
  reach->callback([&] {
    action = [&] {
      const auto l = load(file, init_text);
      const Crn& crn = l.parsed.crn;
      const Configuration& init = require_init(l);
      std::ostringstream text;
      if (compare_closure) {
        const auto cmp = closure_vs_oracle(crn, init, scale_limit, max_configs, max_count);
        text << "closure: " << join(species_names(crn, cmp.closure)) << "\n";
        for (const auto& s : cmp.scales) {
          text << "scale " << s.scale << ": producible " << join(species_names(crn, s.report.producible))
               << ", visited " << s.report.visited << (s.equal ? ", equal" : s.subset ? ", subset" : ", NOT SUBSET")
               << (s.inconclusive ? " (truncated)" : "") << "\n";
        }
        text << "least equal scale: "
             << (cmp.least_equal_scale ? std::to_string(*cmp.least_equal_scale) : std::string("none")) << "\n";
        emit(text.str(), to_json(crn, cmp));
      } else {
        const auto r = reachable_set(crn, init, max_configs, max_count);
        text << "producible: " << join(species_names(crn, r.producible)) << "\nvisited: " << r.visited
             << "\ntruncated: " << (r.truncated ? "yes" : "no") << "\n";
        emit(text.str(), to_json(crn, r));
      }
    };
  });

  // bounds ------------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "Evaluate and optionally validate tail bounds");
  bounds->require_subcommand(1);
  bool validate_flag = false;
  std::size_t bound_trials = 100000;
  std::size_t samples = 0;
  std::string samples_out;
  DecayCase decay;
  PoissonCase poisson;
  std::string side = "upper";
  WalkCase walk;
  ReflectingCase reflecting;
  double reflecting_t = 1.0;

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--validate", validate_flag, "Monte Carlo dominance check");
    sub->add_option("--trials", bound_trials, "Monte Carlo draws")->default_val(100000);
  };
  auto sample_opts = [&](CLI::App* sub) {
    sub->add_option("--samples", samples, "Draw this many samples of the process");
    sub->add_option("--samples-out", samples_out, "CSV file for --samples (default <out-dir>/samples.csv)");
  };
  auto finish_bound = [&](const BoundCase& c, const std::function<void(std::ostream&, Rng&)>& draw_row,
                          const std::string& header) {
    const LogBound b = analytic_bound(c);
    std::ostringstream text;
    text << bound_text(b);
    Json j{{"process", case_name(c)}, {"log2_bound", b.log2}, {"vacuous", b.vacuous()}};
    if (validate_flag) {
      const auto report = monte_carlo_validate(c, bound_trials, g.seed, g.threads);
      text << report_text(report);
      j = to_json(c, report);
    }
    if (samples > 0) {
      std::ostringstream csv;
      csv << header << '\n';
      for (std::size_t i = 0; i < samples; ++i) {
        Rng rng = Rng::substream(g.seed, i);
        csv << i << ',';
        draw_row(csv, rng);
        csv << '\n';
      }
      const auto path = samples_out.empty() ? out_path("samples.csv") : std::filesystem::path(samples_out);
      write_file(path, csv.str());
      text << "samples: " << samples << " -> " << path.string() << "\n";
    }
    emit(text.str(), j);
  };

  auto* b_decay = bounds->add_subcommand("decay", "Exponential decay lower tail");
  b_decay->add_option("--N", decay.N, "Initial value")->required();
  b_decay->add_option("--lambda", decay.lambda, "Decay constant")->required();
  b_decay->add_option("--t", decay.t, "Time")->required();
  b_decay->add_option("--delta", decay.delta, "Fraction in (0, 1)")->required();
  common(b_decay);
  sample_opts(b_decay);
  b_decay->callback([&] {
    action = [&] {
      finish_bound(decay, [&](std::ostream& o, Rng& rng) {
        o << sample_decay({decay.N, decay.lambda, decay.t}, rng);
      }, "draw_index,value");
    };
  });

  auto* b_poisson = bounds->add_subcommand("poisson", "Poisson tail");
  b_poisson->add_option("--lambda", poisson.lambda, "Poisson mean")->required();
  b_poisson->add_option("--n", poisson.n, "Threshold")->required();
  b_poisson->add_option("--side", side, "upper or lower")->check(CLI::IsMember({"upper", "lower"}));
  common(b_poisson);
  sample_opts(b_poisson);
  b_poisson->callback([&] {
    action = [&] {
      poisson.side = side == "upper" ? PoissonSide::Upper : PoissonSide::Lower;
      finish_bound(poisson, [&](std::ostream& o, Rng& rng) { o << sample_poisson(poisson.lambda, rng); },
                   "draw_index,value");
    };
  });

  auto* b_walk = bounds->add_subcommand("walk", "Biased walk on the integers");
  b_walk->add_option("--f-hat", walk.f_hat, "Forward rate")->required();
  b_walk->add_option("--r-hat", walk.r_hat, "Reverse rate")->required();
  b_walk->add_option("--t", walk.t, "Time")->required();
  b_walk->add_option("--eps-hat", walk.eps_hat, "Relative slack")->required();
  common(b_walk);
  sample_opts(b_walk);
  b_walk->callback([&] {
    action = [&] {
      finish_bound(walk, [&](std::ostream& o, Rng& rng) {
        o << sample_walk_z({walk.f_hat, walk.r_hat, walk.t}, rng);
      }, "draw_index,value");
    };
  });

  auto* b_refl = bounds->add_subcommand("reflecting", "Reflecting walk running maximum");
  b_refl->add_option("--delta-f", reflecting.delta_f, "Forward fraction")->required();
  b_refl->add_option("--lambda-r", reflecting.lambda_r, "Reverse proportionality")->required();
  b_refl->add_option("--delta-r", reflecting.delta_r, "Target fraction")->required();
  b_refl->add_option("--N", reflecting.N, "Scale")->required();
  b_refl->add_option("--t", reflecting_t, "Horizon for --samples")->default_val(1.0);
  common(b_refl);
  sample_opts(b_refl);
  b_refl->callback([&] {
    action = [&] {
      finish_bound(reflecting, [&](std::ostream& o, Rng& rng) {
        const auto s = sample_walk_reflecting(
            {reflecting.N, reflecting.delta_f, reflecting.lambda_r, reflecting_t}, rng);
        o << s.value_at_t << ',' << s.running_max;
      }, "draw_index,value,running_max");
    };
  });

  // demo --------------------------------------------------------------------
  auto* demo = app.add_subcommand("demo", "Prebuilt experiments writing CSV + JSON");
  demo->require_subcommand(1);
  std::string n_list = "10,100,1000", m_list = "1,2,3", grid_list = "100,1000,10000";
  std::uint64_t chain_n = 1000;
  std::optional<double> demo_t_cap;
  double scan_alpha = 0.1;

  auto* d_leader = demo->add_subcommand("leader", "Leader election timing");
  d_leader->add_option("--n", n_list, "Comma-separated population sizes")->default_val("10,100,1000");
  d_leader->add_option("--trials", trials, "Trials per n")->default_val(1000);
  d_leader->callback([&] {
    action = [&] {
      std::vector<LeaderElectionStats> runs;
      Json summary = Json::array();
      std::ostringstream text;
      for (auto n : parse_list<std::uint64_t>(n_list, "--n")) {
        runs.push_back(leader_election_experiment(n, trials, g.seed, g.threads));
        const auto& r = runs.back();
        summary.push_back(to_json(r));
        text << "n=" << n << ": mean " << fmt(r.mean) << " +/- " << fmt(r.ci95_half_width)
             << " (analytic " << fmt(r.analytic_mean) << ")\n";
      }
      std::ostringstream csv;
      write_leader_csv(csv, runs);
      write_file(out_path("leader.csv"), csv.str());
      write_file(out_path("leader.json"), summary.dump(2) + "\n");
      text << "wrote " << out_path("leader.csv").string() << "\n";
      emit(text.str(), summary);
    };
  });

  auto* d_chain = demo->add_subcommand("chain", "Chain CRN first production of X_{m+1}");
  d_chain->add_option("--m", m_list, "Comma-separated chain lengths")->default_val("1,2,3");
  d_chain->add_option("--n", chain_n, "Initial X1 count and volume")->default_val(1000);
  d_chain->add_option("--trials", trials, "Trials per m")->default_val(1000);
  d_chain->add_option("--t-cap", demo_t_cap, "Censoring time (default m + 1)");
  d_chain->callback([&] {
    action = [&] {
      std::vector<ChainStats> runs;
      Json summary = Json::array();
      std::ostringstream text;
      for (auto m : parse_list<std::size_t>(m_list, "--m")) {
        const double cap = demo_t_cap.value_or(static_cast<double>(m + 1));
        runs.push_back(chain_experiment(m, chain_n, trials, cap, g.seed, g.threads));
        const auto& r = runs.back();
        summary.push_back(to_json(r));
        text << "m=" << m << ": produced fraction " << fmt(r.produced_fraction) << ", median "
             << fmt(r.production.median) << "\n";
      }
      std::ostringstream csv;
      write_chain_csv(csv, runs);
      write_file(out_path("chain.csv"), csv.str());
      write_file(out_path("chain.json"), summary.dump(2) + "\n");
      text << "wrote " << out_path("chain.csv").string() << "\n";
      emit(text.str(), summary);
    };
  });

  auto* d_scan = demo->add_subcommand("scan", "Constant-time production scan over n");
  d_scan->add_option("file", file, "CRN file")->required();
  d_scan->add_option("--init", init_text, "Template counts (proportions are kept)");
  d_scan->add_option("--alpha", scan_alpha, "Density alpha")->default_val(0.1);
  d_scan->add_option("--n-grid", grid_list, "Comma-separated totals")->default_val("100,1000,10000");
  d_scan->add_option("--trials", trials, "Trials per n")->default_val(1000);
  d_scan->add_option("--t-cap", demo_t_cap, "Censoring time (default m + 1)");
  d_scan->callback([&] {
    action = [&] {
      const auto l = load(file, init_text);
      const auto grid = parse_list<Count>(grid_list, "--n-grid");
      const auto scan = constant_time_scan(l.parsed.crn, require_init(l), scan_alpha, grid, trials,
                                           demo_t_cap, g.seed, g.threads);
      std::ostringstream csv;
      write_scan_csv(csv, scan);
      write_file(out_path("scan.csv"), csv.str());
      const Json summary = to_json(scan);
      write_file(out_path("scan.json"), summary.dump(2) + "\n");
      std::ostringstream text;
      for (const auto& r : scan.rows) {
        text << "n=" << r.n << " " << r.species_name << ": produced " << r.produced_count << "/"
             << r.trials << ", median " << fmt(r.median) << "\n";
      }
      text << "wrote " << out_path("scan.csv").string() << "\n";
      emit(text.str(), summary);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace crntime::cli
