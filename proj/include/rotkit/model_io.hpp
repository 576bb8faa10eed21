#pragma once

#include "rotkit/markov_map.hpp"

#include <map>
#include <string>

namespace rotkit {

struct Model {
  std::string name;
  std::string source;
  MarkovMap map;
  std::map<std::string, Point> points;  // named points from the file
};

// Diagnostics carry "origin:line:col" for syntax errors and a JSON pointer
// for field errors. Graph and map validation failures keep their kind.
Model parse_model(const std::string& text, const std::string& origin = "<input>");
Model load_model(const std::string& path);

// Accepted forms: a named point, "node:ID[:shift]", "edge:ID:t[:shift]", "spine:x".
Point parse_point_spec(const Model& model, const std::string& spec);

}  // namespace rotkit
