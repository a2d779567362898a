#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnsl/bayesnet.hpp"

namespace bnsl {

// Network JSON:
//   {"variables":[{"name":..,"arity":..}], "parents":[[..],..], "cpts":[[[row probs]..]..]}
// The "cpts" member is optional for structure-only files.

struct Structure {
  std::vector<Variable> variables;
  Dag dag;
};

BayesianNetwork parse_network(std::istream& in, const std::string& source = "<stream>",
                              bool renormalize = false);
BayesianNetwork load_network(const std::filesystem::path& path, bool renormalize = false);
void write_network(std::ostream& out, const BayesianNetwork& net);
void save_network(const std::filesystem::path& path, const BayesianNetwork& net);

// Accepts network files with or without CPTs; CPTs, when present, are ignored.
Structure parse_structure(std::istream& in, const std::string& source = "<stream>");
Structure load_structure(const std::filesystem::path& path);
void write_structure(std::ostream& out, const Structure& s);
void save_structure(const std::filesystem::path& path, const Structure& s);

// Dataset CSV: header of `name:arity` cells, then one row of integer codes per line.
Dataset parse_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::filesystem::path& path, const Dataset& data);

}  // namespace bnsl
