#pragma once

#include <json.hpp>
#include <ostream>
#include <span>

#include "crntime/analysis.hpp"
#include "crntime/bounds.hpp"
#include "crntime/harness.hpp"
#include "crntime/kinetics.hpp"
#include "crntime/processes.hpp"

// JSON reports and CSV exports. Floating-point CSV fields use the shortest
// round-trip decimal so identical runs give byte-identical files.

namespace crntime {

using Json = nlohmann::ordered_json;

Json to_json(const Crn& crn, const StageDecomposition& stages);
Json to_json(const Crn& crn, const ConservationCertificate& cert);
Json to_json(const Crn& crn, const FiniteDensityStatus& status);
Json to_json(const Crn& crn, const ReachabilityReport& report);
Json to_json(const Crn& crn, const ClosureComparison& cmp);
Json to_json(const FirstProductionStats& stats, bool include_times = false);
Json to_json(const TheoremConstants& k);
Json to_json(const BoundCase& c, const BoundReport& report);
Json to_json(const LeaderElectionStats& stats);
Json to_json(const ChainStats& stats);
Json to_json(const ScanResult& scan);

/// event_index,time,reaction_label
void write_trace_csv(std::ostream& out, const Crn& crn, const Trace& trace);
/// time,<species...>
void write_checkpoints_csv(std::ostream& out, const Crn& crn, const Trace& trace);
/// n,trial,time
void write_leader_csv(std::ostream& out, std::span<const LeaderElectionStats> runs);
/// m,n,trial,time_or_censored
void write_chain_csv(std::ostream& out, std::span<const ChainStats> runs);
/// n,species,trials,produced_count,median,p90,mean_uncensored
void write_scan_csv(std::ostream& out, const ScanResult& scan);

/// Label of a reaction for exports: its label, or its formatted text.
std::string reaction_label(const Crn& crn, std::size_t index);

}  // namespace crntime
