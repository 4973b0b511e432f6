#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rankone/analysis.hpp"
#include "rankone/resolvent.hpp"
#include "rankone/trajectory.hpp"
#include "rankone/types.hpp"

namespace rankone {

// Shortest decimal that parses back to exactly the same double. Every CSV
// number goes through this so identical runs give byte-identical files.
std::string format_double(double value);

// Trajectory CSV, schema: t,j,re,im,method. Rows grouped by grid time,
// ascending j inside each group.
void write_trajectory_csv(std::ostream& out, const TrajectoryBundle& bundle);

// Inverse of write_trajectory_csv. Diagnostics do not travel through CSV
// (they live in the JSON sidecar), so the parsed bundle carries none.
TrajectoryBundle read_trajectory_csv(std::istream& in);

// Local-law CSV, schema: re,im,raw_error,normalized_error.
void write_local_law_csv(std::ostream& out, const LocalLawReport& report);

// Emergence CSV, schema: t,frequency,trials,n.
void write_emergence_csv(std::ostream& out, const EmergenceCurve& curve);

// Origin CSV, schema: rank,count.
void write_origin_csv(std::ostream& out, const OriginHistogram& hist);

// Metadata blob persisted next to every artifact:
// {n, ensemble, seed, rng, tolerances}.
nlohmann::json run_metadata(const RunConfig& config, const TraceOptions& tols = {});

// ADL hooks so reports drop into nlohmann::json directly.
void to_json(nlohmann::json& j, const StepDiagnostics& d);
void to_json(nlohmann::json& j, const OutlierReport& r);
void to_json(nlohmann::json& j, const ConfinementReport& r);
void to_json(nlohmann::json& j, const SmallTReport& r);
void to_json(nlohmann::json& j, const LargeTReport& r);
void to_json(nlohmann::json& j, const EmergenceCurve& c);
void to_json(nlohmann::json& j, const OriginHistogram& h);
void to_json(nlohmann::json& j, const LocalLawReport& r);
void to_json(nlohmann::json& j, const DomainParams& p);

}  // namespace rankone
