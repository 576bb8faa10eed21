#include "rotkit/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace rotkit {

using json = nlohmann::json;

namespace {

struct FieldError {
  std::string pointer;
  std::string message;
};

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const json& need(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw FieldError{where, "expected an object"};
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError{where, "missing field '" + key + "'"};
  return *it;
}

std::string need_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw FieldError{where, "expected a string"};
  return v.get<std::string>();
}

long need_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw FieldError{where, "expected an integer"};
  return v.get<long>();
}

Rational need_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) throw FieldError{where, "floating-point values are not allowed; write \"p/q\""};
  if (!v.is_string()) throw FieldError{where, "expected a rational written as \"p/q\""};
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    throw FieldError{where, e.what()};
  }
}

int orientation_of(const json& v, const std::string& where) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "+") return 1;
    if (s == "-") return -1;
  } else if (v.is_number_integer()) {
    long o = v.get<long>();
    if (o == 1 || o == -1) return static_cast<int>(o);
  }
  throw FieldError{where, "orientation must be \"+\" or \"-\""};
}

Point parse_point_object(const LiftedGraph& g, const json& v, const std::string& where) {
  std::string edge_id = need_string(need(v, "edge", where), where + "/edge");
  int e = g.edge_index(edge_id);
  if (e < 0) throw FieldError{where + "/edge", "unknown edge '" + edge_id + "'"};
  Rational t = need_rational(need(v, "t", where), where + "/t");
  if (t < 0 || t > 1) throw FieldError{where + "/t", "local parameter must lie in [0,1]"};
  long shift = v.contains("shift") ? need_integer(v["shift"], where + "/shift") : 0;
  return g.canonical(Point{e, t, shift});
}

Model build(const json& doc) {
  Model m;
  if (!doc.is_object()) throw FieldError{"", "top level must be an object"};
  if (doc.contains("name")) m.name = need_string(doc["name"], "/name");
  if (doc.contains("source")) m.source = need_string(doc["source"], "/source");
  const json& graph = need(doc, "graph", "");
  const json& nodes = need(graph, "nodes", "/graph");
  const json& edges = need(graph, "edges", "/graph");
  if (!nodes.is_array()) throw FieldError{"/graph/nodes", "expected an array"};
  if (!edges.is_array()) throw FieldError{"/graph/edges", "expected an array"};
  std::vector<NodeSpec> node_specs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string at = "/graph/nodes/" + std::to_string(i);
    NodeSpec n;
    n.id = need_string(need(nodes[i], "id", at), at + "/id");
    if (nodes[i].contains("spine")) n.spine_coord = need_rational(nodes[i]["spine"], at + "/spine");
    node_specs.push_back(std::move(n));
  }
  std::vector<EdgeSpec> edge_specs;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string at = "/graph/edges/" + std::to_string(i);
    EdgeSpec e;
    e.id = need_string(need(edges[i], "id", at), at + "/id");
    e.from = need_string(need(edges[i], "from", at), at + "/from");
    e.to = need_string(need(edges[i], "to", at), at + "/to");
    e.length = need_rational(need(edges[i], "length", at), at + "/length");
    if (edges[i].contains("spine")) {
      if (!edges[i]["spine"].is_boolean()) throw FieldError{at + "/spine", "expected true or false"};
      e.on_spine = edges[i]["spine"].get<bool>();
    }
    edge_specs.push_back(std::move(e));
  }
  LiftedGraph g;
  try {
    g = LiftedGraph(node_specs, edge_specs);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("/graph: ") + e.what());
  }
  const json& chains = need(doc, "map", "");
  if (!chains.is_object()) throw FieldError{"/map", "expected an object keyed by edge id"};
  std::vector<std::vector<ChainEntry>> chain_list(g.edge_count());
  std::vector<bool> seen(g.edge_count(), false);
  for (auto it = chains.begin(); it != chains.end(); ++it) {
    std::string at = "/map/" + it.key();
    int src = g.edge_index(it.key());
    if (src < 0) throw FieldError{at, "unknown edge '" + it.key() + "'"};
    seen[src] = true;
    if (!it->is_array()) throw FieldError{at, "expected an array of [edge, shift, orientation] entries"};
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& entry = (*it)[k];
      std::string eat = at + "/" + std::to_string(k);
      json id, shift, orient;
      if (entry.is_array() && entry.size() == 3) {
        id = entry[0];
        shift = entry[1];
        orient = entry[2];
      } else if (entry.is_object()) {
        id = need(entry, "edge", eat);
        shift = entry.contains("shift") ? entry["shift"] : json(0);
        orient = entry.contains("orientation") ? entry["orientation"] : json("+");
      } else {
        throw FieldError{eat, "expected [edge, shift, orientation]"};
      }
      std::string target = need_string(id, eat);
      int tgt = g.edge_index(target);
      if (tgt < 0) throw FieldError{eat, "unknown edge '" + target + "'"};
      chain_list[src].push_back({tgt, need_integer(shift, eat), orientation_of(orient, eat)});
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!seen[e]) throw FieldError{"/map", "no image chain for edge '" + g.edges()[e].id + "'"};
  }
  try {
    m.map = MarkovMap(g, chain_list);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("/map: ") + e.what());
  }
  if (doc.contains("points")) {
    const json& pts = doc["points"];
    if (!pts.is_object()) throw FieldError{"/points", "expected an object"};
    for (auto it = pts.begin(); it != pts.end(); ++it) {
      m.points[it.key()] = parse_point_object(m.map.graph(), *it, "/points/" + it.key());
    }
  }
  return m;
}

}  // namespace

Model parse_model(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorKind::ParseError, origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
  try {
    return build(doc);
  } catch (const FieldError& f) {
    throw Error(ErrorKind::ParseError, origin + ": " + (f.pointer.empty() ? "/" : f.pointer) + ": " + f.message);
  } catch (const Error& e) {
    throw Error(e.kind(), origin + ": " + e.what());
  }
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path);
}

Point parse_point_spec(const Model& model, const std::string& spec) {
  const auto& g = model.map.graph();
  if (auto it = model.points.find(spec); it != model.points.end()) return it->second;
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string piece;
  while (std::getline(ss, piece, ':')) parts.push_back(piece);
  auto bad = [&](const std::string& why) { return Error(ErrorKind::ParseError, "point '" + spec + "': " + why); };
  auto integer = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      long v = std::stol(s, &used);
      if (used != s.size()) throw bad("bad shift '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw bad("bad shift '" + s + "'");
    }
  };
  if (parts.empty()) throw bad("empty point");
  if (parts[0] == "spine" && parts.size() == 2) return g.spine_point(parse_rational(parts[1]));
  if (parts[0] == "node" && (parts.size() == 2 || parts.size() == 3)) {
    int n = g.node_index(parts[1]);
    if (n < 0) throw bad("unknown node '" + parts[1] + "'");
    long shift = parts.size() == 3 ? integer(parts[2]) : 0;
    return g.point_at(g.canonical(n, shift));
  }
  if (parts[0] == "edge" && (parts.size() == 3 || parts.size() == 4)) {
    int e = g.edge_index(parts[1]);
    if (e < 0) throw bad("unknown edge '" + parts[1] + "'");
    Rational t = parse_rational(parts[2]);
    if (t < 0 || t > 1) throw bad("local parameter must lie in [0,1]");
    long shift = parts.size() == 4 ? integer(parts[3]) : 0;
    return g.canonical(Point{e, t, shift});
  }
  throw bad("expected a named point, node:ID[:shift], edge:ID:t[:shift] or spine:x");
}

}  // namespace rotkit
