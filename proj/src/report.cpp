#include "rotkit/report.hpp"

#include "rotkit/circle_lift.hpp"

#include <random>
#include <sstream>

namespace rotkit {

namespace {

Json exact_value(const Rational& v) { return Json{{"value", to_string(v)}, {"certification", "exact"}}; }

Json rho_json(const RhoResult& r) {
  if (r.exact) return exact_value(r.value);
  return Json{{"lo", to_string(r.lo)}, {"hi", to_string(r.hi)},
              {"certification", "enclosure(" + to_string(r.hi - r.lo) + ")"}};
}

Json names(const MarkovGraph& g, const std::vector<int>& nodes) {
  Json out = Json::array();
  for (int v : nodes) out.push_back(g.node_names[v]);
  return out;
}

std::string render_scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const Json& v, const std::string& path, std::ostringstream& os) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(*it, path.empty() ? it.key() : path + "." + it.key(), os);
  } else if (v.is_array()) {
    bool scalars = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
    if (scalars) {
      os << path << ": [";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << render_scalar(v[i]);
      os << "]\n";
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", os);
    }
  } else {
    os << path << ": " << render_scalar(v) << "\n";
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

Json point_json(const LiftedGraph& graph, const Point& p) {
  Point c = graph.canonical(p);
  Json out{{"edge", graph.edges()[c.edge].id}, {"t", to_string(c.t)}, {"shift", c.shift},
           {"r", to_string(graph.retract(c))}};
  if (auto n = graph.node_of(c)) out["node"] = graph.nodes()[n->node].id;
  return out;
}

Json loop_json(const MarkovGraph& graph, const Loop& loop) {
  Json arrows = Json::array();
  for (int a : loop.arrows) {
    const Arrow& ar = graph.digraph.arrows[a];
    arrows.push_back(graph.node_names[ar.from] + " -" + std::to_string(ar.label) + "-> " + graph.node_names[ar.to]);
  }
  return Json{{"arrows", arrows}, {"length", loop.length()}, {"weight", loop.weight}, {"mean", to_string(loop.mean())}};
}

Json analyze_report(const Model& model, const AnalyzeOptions& options) {
  const MarkovMap& map = model.map;
  const LiftedGraph& lg = map.graph();
  MarkovGraph mg = build_markov_graph(map);
  Json doc;
  Json bps = Json::array();
  for (const auto& z : lg.branching_points()) bps.push_back(to_string(z));
  doc["model"] = Json{{"name", model.name}, {"source", model.source}, {"nodes", lg.node_count()},
                      {"edges", lg.edge_count()}, {"branching_points", bps}};
  doc["markov_graph"] = Json{{"nodes", mg.digraph.node_count}, {"arrows", mg.digraph.arrows.size()}};

  std::optional<RotationInterval> rot;
  try {
    rot = rotation_set(mg);
    Json rs{{"min", to_string(rot->min)}, {"max", to_string(rot->max)}, {"certification", "exact"},
            {"min_witness", loop_json(mg, rot->min_witness)}, {"max_witness", loop_json(mg, rot->max_witness)},
            {"hull", rot->hull}};
    if (!rot->caveat.empty()) rs["caveat"] = rot->caveat;
    if (rot->hull) {
      Json comps = Json::array();
      for (const auto& c : rot->components) {
        comps.push_back(Json{{"nodes", names(mg, c.nodes)}, {"min", to_string(c.min)}, {"max", to_string(c.max)}});
      }
      rs["components"] = comps;
    }
    doc["rotation_set"] = rs;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoLoop) throw;
    doc["rotation_set"] = Json{{"status", "empty"}, {"caveat", e.what()}};
  }

  TransitivityReport tr = check_transitive(mg);
  Json comps = Json::array();
  for (const auto& c : tr.components) comps.push_back(names(mg, c));
  doc["transitivity"] = Json{{"transitive", tr.transitive}, {"strongly_connected", tr.strongly_connected},
                             {"single_cycle", tr.single_cycle}, {"components", comps}};

  Json powers = Json::array();
  for (int n = 1; n <= options.max_power; ++n) {
    try {
      RotationInterval p = rotation_set_of_power(map, n);
      powers.push_back(Json{{"n", n}, {"min", to_string(p.min)}, {"max", to_string(p.max)}, {"certification", "exact"}});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoLoop) throw;
      powers.push_back(Json{{"n", n}, {"status", "empty"}});
    }
  }
  doc["spine_power_rotation"] = powers;
  doc["displacement_bound"] = exact_value(map.displacement_bound());

  PLLift lift = map.circle_restriction();
  BranchData branches = map.branch_value_ranges();
  CombedCheck cc = check_combed(lift, branches);
  Json pts = Json::array();
  for (const auto& [z, c] : cc.points) pts.push_back(Json{{"z", to_string(z)}, {"status", combedness_name(c)}});
  doc["combedness"] = Json{{"combed", cc.combed}, {"points", pts}};

  try {
    CombedRotation cr = rotation_interval_combed(lift, branches, options.horizon, options.qmax);
    Json j{{"lower", rho_json(cr.lower)}, {"upper", rho_json(cr.upper)}};
    if (rot && cr.lower.exact && cr.upper.exact) {
      j["agrees_with_rotation_set"] = cr.lower.value == rot->min && cr.upper.value == rot->max;
    }
    doc["combed_rotation"] = j;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotCombed && e.kind() != ErrorKind::NotMonotone) throw;
    doc["combed_rotation"] = Json{{"status", "refused"}, {"reason", e.what()}};
  }

  // Spot check F_l <= r o F <= F_u on seeded rational samples.
  PLLift lower = lower_map(lift, branches), upper = upper_map(lift, branches);
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<long> pick(0, 999999);
  int bad = 0;
  for (int i = 0; i < options.samples; ++i) {
    Rational x(pick(rng), 1000000);
    x.canonicalize();
    Rational y = lift(x);
    if (lower(x) > y || y > upper(x)) ++bad;
  }
  doc["envelope_check"] = Json{{"samples", options.samples}, {"seed", options.seed}, {"violations", bad},
                               {"certification", "empirical(" + std::to_string(options.samples) + ")"}};
  return doc;
}

Json periods_report(const Model& model, const PeriodResult& result, long budget) {
  const LiftedGraph& lg = model.map.graph();
  MarkovGraph mg = build_markov_graph(model.map);
  Json doc;
  doc["model"] = model.name;
  doc["rho"] = std::to_string(result.p) + "/" + std::to_string(result.q);
  doc["n_max"] = result.n_max;
  doc["budget"] = budget;
  doc["expansions"] = result.expansions;
  doc["complete"] = result.complete;
  doc["periods"] = Json(std::vector<int>(result.periods.begin(), result.periods.end()));
  doc["certification"] = result.complete ? "exact" : "exact(partial)";
  Json ws = Json::array();
  for (const auto& [n, w] : result.witnesses) {
    Json j{{"period", w.period}, {"shift", w.shift}, {"point", point_json(lg, w.point)},
           {"boundary", w.boundary}, {"node_orbit", w.node_orbit}, {"twist", w.twist}};
    j["loop"] = w.node_orbit ? Json() : loop_json(mg, w.loop);
    j["verified"] = verify_witness(model.map, w);
    ws.push_back(j);
  }
  doc["witnesses"] = ws;
  return doc;
}

std::string periods_csv(const Model& model, const PeriodResult& result) {
  const LiftedGraph& lg = model.map.graph();
  std::ostringstream os;
  os << "p,q,n,confirmed,edge,t,shift,boundary,twist\n";
  for (long n = result.q; n <= result.n_max; n += result.q) {
    os << result.p << "," << result.q << "," << n << ",";
    auto it = result.witnesses.find(static_cast<int>(n));
    if (it == result.witnesses.end()) {
      os << "no,,,,,\n";
      continue;
    }
    const Point c = lg.canonical(it->second.point);
    os << "yes," << csv_field(lg.edges()[c.edge].id) << "," << to_string(c.t) << "," << c.shift << ","
       << (it->second.boundary ? "yes" : "no") << "," << (it->second.twist ? "yes" : "no") << "\n";
  }
  return os.str();
}

Json orbit_report(const Model& model, const OrbitStats& st) {
  const LiftedGraph& lg = model.map.graph();
  Json doc;
  doc["model"] = model.name;
  doc["start"] = point_json(lg, st.start);
  doc["horizon"] = st.horizon;
  if (st.rho) doc["rho"] = to_string(*st.rho);
  doc["lower"] = to_string(st.lower);
  doc["upper"] = to_string(st.upper);
  if (st.period) doc["period"] = Json{{"q", st.period->first}, {"p", st.period->second}};
  if (st.eventual) doc["eventual_cycle"] = Json{{"length", st.eventual->first}, {"shift", st.eventual->second}};
  if (st.inexact) doc["error_bound"] = to_string(st.error_bound);
  doc["certification"] = st.certification == "empirical" ? "empirical(" + std::to_string(st.horizon) + ")" : st.certification;
  return doc;
}

std::string orbit_csv(const Model& model, const OrbitStats& st) {
  const LiftedGraph& lg = model.map.graph();
  std::ostringstream os;
  os << "k,edge,t,shift,r,estimate\n";
  for (std::size_t k = 1; k < st.orbit.size(); ++k) {
    const Point& p = st.orbit[k];
    os << k << "," << csv_field(lg.edges()[p.edge].id) << "," << to_string(p.t) << "," << p.shift << ","
       << to_string(lg.retract(p)) << "," << to_string(st.samples[k - 1]) << "\n";
  }
  return os.str();
}

std::string render_text(const Json& doc) {
  std::ostringstream os;
  flatten(doc, "", os);
  return os.str();
}

}  // namespace rotkit
