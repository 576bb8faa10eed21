#pragma once

#include "rotkit/markov_graph.hpp"
#include "rotkit/model_io.hpp"
#include "rotkit/orbit_engine.hpp"

#include <json.hpp>

#include <string>

namespace rotkit {

using Json = nlohmann::ordered_json;

struct AnalyzeOptions {
  int horizon = 256;  // enclosure iterations for rho
  int qmax = 12;      // exact rho search bound
  int max_power = 3;  // (1/n) Rot(F^r_n) for n = 1..max_power
  unsigned long seed = 0;
  int samples = 1000;  // envelope spot checks
};

Json point_json(const LiftedGraph& graph, const Point& p);
Json loop_json(const MarkovGraph& graph, const Loop& loop);

Json analyze_report(const Model& model, const AnalyzeOptions& options = {});

Json periods_report(const Model& model, const PeriodResult& result, long budget);
std::string periods_csv(const Model& model, const PeriodResult& result);

Json orbit_report(const Model& model, const OrbitStats& stats);
std::string orbit_csv(const Model& model, const OrbitStats& stats);

// One "path: value" line per scalar, in document order.
std::string render_text(const Json& doc);

}  // namespace rotkit
