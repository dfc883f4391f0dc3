#include "pkrg/reports.hpp"

#include <json.hpp>

#include <ostream>

namespace pkrg {

using nlohmann::json;

void write_energy_csv(std::ostream& os, const Trajectory& tr) {
  os << "time,energy,dissipation,defect\n";
  Real min_g = std::numeric_limits<Real>::max();
  char buf[160];
  for (const auto& e : tr.energy) {
    const Real g = 0.5 * e.energy + e.dissipation;
    min_g = std::min(min_g, g);
    std::snprintf(buf, sizeof buf, "%.12g,%.17g,%.17g,%.3e\n", e.time, e.energy, e.dissipation,
                  g - min_g);
    os << buf;
  }
}

void write_packets_csv(std::ostream& os, const std::vector<PacketSeries>& series) {
  os << "time,j,cube_id,center_x,center_y,center_z,u_Qj\n";
  char buf[240];
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g,%d,q%d_%.6g_%.6g_%.6g,%.6g,%.6g,%.6g,%.17g\n",
                    s.times[i], s.band, s.cube.level, s.cube.center[0], s.cube.center[1],
                    s.cube.center[2], s.cube.center[0], s.cube.center[1], s.cube.center[2],
                    s.values[i]);
      os << buf;
    }
  }
}

void write_estimates_csv(std::ostream& os, const std::vector<EstimateTerms>& terms) {
  os << "time,cube_id,j,I,J,G_diss,G_low_loc,G_loc,G_hh,e_diss,e_vl,theta,lhs_rate,"
        "measured_c,bands_clipped,smallness_waived\n";
  char buf[512];
  for (const auto& t : terms) {
    std::snprintf(buf, sizeof buf,
                  "%.12g,%s,%d,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%.12g,%.10e,"
                  "%.10e,%d,%d\n",
                  t.time, t.cube_id.c_str(), t.j, t.I, t.J, t.G_diss, t.G_low_loc, t.G_loc,
                  t.G_hh, t.e_diss, t.e_vl, t.theta, t.lhs_rate, t.measured_c,
                  t.bands_clipped ? 1 : 0, t.smallness_waived ? 1 : 0);
    os << buf;
  }
}

namespace {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::A_j:
      return "A_j";
    case Provenance::B_jk:
      return "B_jk";
    case Provenance::B_j:
      return "B_j";
    case Provenance::C_j:
      return "C_j";
  }
  return "?";
}

Provenance provenance_from(const std::string& s) {
  if (s == "A_j") return Provenance::A_j;
  if (s == "B_jk") return Provenance::B_jk;
  if (s == "B_j") return Provenance::B_j;
  if (s == "C_j") return Provenance::C_j;
  throw std::invalid_argument("unknown provenance " + s);
}

}  // namespace

std::string covers_to_json(const std::map<std::string, CoverFamily>& families,
                           const CoverParams& params) {
  json root;
  root["alpha"] = params.alpha;
  root["epsilon"] = params.epsilon;
  root["eta"] = params.eta;
  json fams = json::object();
  for (const auto& [name, fam] : families) {
    json f;
    f["level"] = fam.level;
    f["provenance"] = provenance_name(fam.provenance);
    f["k"] = fam.k;
    f["cardinality_budget"] = fam.cardinality_budget;
    f["measured_c"] = fam.measured_c;
    json cubes = json::array();
    for (const auto& q : fam.cubes) {
      cubes.push_back({{"center", {q.center[0], q.center[1], q.center[2]}},
                       {"level", q.level},
                       {"side", cube_side(q)}});
    }
    f["cubes"] = std::move(cubes);
    fams[name] = std::move(f);
  }
  root["families"] = std::move(fams);
  return root.dump(2);
}

std::pair<std::map<std::string, CoverFamily>, CoverParams> covers_from_json(
    const std::string& text) {
  const json root = json::parse(text);
  CoverParams params;
  params.alpha = root.at("alpha").get<Real>();
  params.epsilon = root.at("epsilon").get<Real>();
  params.eta = root.at("eta").get<Real>();
  std::map<std::string, CoverFamily> families;
  for (const auto& [name, f] : root.at("families").items()) {
    CoverFamily fam;
    fam.level = f.at("level").get<int>();
    fam.provenance = provenance_from(f.at("provenance").get<std::string>());
    fam.k = f.at("k").get<int>();
    fam.cardinality_budget = f.at("cardinality_budget").get<Real>();
    fam.measured_c = f.at("measured_c").get<Real>();
    for (const auto& c : f.at("cubes")) {
      Cube q;
      q.center = Vec3(c.at("center")[0].get<Real>(), c.at("center")[1].get<Real>(),
                      c.at("center")[2].get<Real>());
      q.level = c.at("level").get<int>();
      q.epsilon = params.epsilon;
      fam.cubes.push_back(q);
    }
    families.emplace(name, std::move(fam));
  }
  return {std::move(families), params};
}

void write_dimension_csv(std::ostream& os, const DimensionEstimate& est,
                         const std::string& provenance) {
  os << "r,N,provenance\n";
  char buf[128];
  for (const auto& [r, nn] : est.scales) {
    std::snprintf(buf, sizeof buf, "%.12g,%ld,%s\n", r, nn, provenance.c_str());
    os << buf;
  }
}

std::string dimension_to_json(const DimensionEstimate& est, const std::string& provenance,
                              Real window_lo, Real window_hi) {
  json root;
  root["provenance"] = provenance;
  root["slope"] = est.slope;
  root["residual"] = est.residual;
  root["bound_naive"] = est.bound_naive;
  root["bound_refined"] = est.bound_refined;
  root["bound_hausdorff"] = est.bound_hausdorff;
  root["analysis_window"] = {window_lo, window_hi};
  json scales = json::array();
  for (const auto& [r, nn] : est.scales) scales.push_back({{"r", r}, {"N", nn}});
  root["scales"] = std::move(scales);
  return root.dump(2);
}

}  // namespace pkrg
