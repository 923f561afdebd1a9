#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "germflow/germ.hpp"
#include "germflow/group.hpp"
#include "germflow/sigma.hpp"
#include "germflow/weights.hpp"

namespace germflow {

// Parsed germ document. Besides the map, weights, Sigma and group lines, a
// document may carry `job <key> <value>` lines with run defaults (for example
// `job r 3`); command-line flags take precedence over them.
struct GermSpec {
  MapGerm germ;
  WeightSystem weights;
  SigmaSet sigma;
  GroupAction group;
  std::map<std::string, std::string> job;

  bool operator==(const GermSpec& other) const;
};

GermSpec parse_germ_spec(const std::string& text);
GermSpec load_germ_spec(const std::string& path);
std::string print_germ_spec(const GermSpec& spec);

}  // namespace germflow
