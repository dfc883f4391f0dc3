#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pkrg/covering.hpp"
#include "pkrg/dimension.hpp"
#include "pkrg/estimates.hpp"

namespace pkrg {

/// energy.csv: time, energy, dissipation, defect. The defect column is the
/// worst inequality defect ending at that row, max_{s<=t} [g(t) - g(s)] with
/// g = E/2 + D.
void write_energy_csv(std::ostream& os, const Trajectory& tr);

/// packets.csv: time, j, cube_id, center_xyz, u_Qj.
void write_packets_csv(std::ostream& os, const std::vector<PacketSeries>& series);

/// estimates.csv: one row per (time, cube, j) with every budget term.
void write_estimates_csv(std::ostream& os, const std::vector<EstimateTerms>& terms);

/// covers.json round trip.
std::string covers_to_json(const std::map<std::string, CoverFamily>& families,
                           const CoverParams& params);
std::pair<std::map<std::string, CoverFamily>, CoverParams> covers_from_json(
    const std::string& text);

/// dimension.csv (r, N, provenance) and dimension.json (fit + bounds).
void write_dimension_csv(std::ostream& os, const DimensionEstimate& est,
                         const std::string& provenance);
std::string dimension_to_json(const DimensionEstimate& est, const std::string& provenance,
                              Real window_lo, Real window_hi);

}  // namespace pkrg
