#include "bnsl/network_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bnsl/error.hpp"

namespace bnsl {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  return out;
}

json read_json(std::istream& in, const std::string& source) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& what) {
  throw ParseError(source + ": field '" + field + "': " + what);
}

const json& member(const json& doc, const char* key, const std::string& source) {
  if (!doc.is_object()) field_error(source, "<root>", "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) field_error(source, key, "missing");
  return *it;
}

Structure structure_from_json(const json& doc, const std::string& source) {
  const auto& jvars = member(doc, "variables", source);
  if (!jvars.is_array()) field_error(source, "variables", "expected an array");
  Structure s;
  for (std::size_t i = 0; i < jvars.size(); ++i) {
    const auto& v = jvars[i];
    const auto field = "variables[" + std::to_string(i) + "]";
    if (!v.is_object() || !v.contains("name") || !v["name"].is_string())
      field_error(source, field + ".name", "expected a string");
    if (!v.contains("arity") || !v["arity"].is_number_integer())
      field_error(source, field + ".arity", "expected an integer");
    s.variables.push_back({v["name"].get<std::string>(), v["arity"].get<int>()});
  }
  const auto& jparents = member(doc, "parents", source);
  if (!jparents.is_array()) field_error(source, "parents", "expected an array");
  std::vector<std::vector<int>> parents;
  for (std::size_t i = 0; i < jparents.size(); ++i) {
    const auto& ps = jparents[i];
    const auto field = "parents[" + std::to_string(i) + "]";
    if (!ps.is_array()) field_error(source, field, "expected an array");
    std::vector<int> set;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (!ps[k].is_number_integer())
        field_error(source, field + "[" + std::to_string(k) + "]", "expected an integer");
      set.push_back(ps[k].get<int>());
    }
    parents.push_back(std::move(set));
  }
  try {
    validate_variables(s.variables);
    if (parents.size() != s.variables.size()) {
      throw ValidationError("'parents' has " + std::to_string(parents.size()) + " entries, expected " +
                            std::to_string(s.variables.size()));
    }
    s.dag = Dag(std::move(parents));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return s;
}

json structure_to_json(const std::vector<Variable>& vars, const Dag& dag) {
  json doc;
  doc["variables"] = json::array();
  for (const auto& v : vars) doc["variables"].push_back({{"name", v.name}, {"arity", v.arity}});
  doc["parents"] = json::array();
  for (int i = 0; i < dag.size(); ++i) doc["parents"].push_back(dag.parents(i));
  return doc;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int parse_int(const std::string& text, const std::string& where) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ParseError(where + ": '" + text + "' is not an integer");
  return value;
}

}  // namespace

BayesianNetwork parse_network(std::istream& in, const std::string& source, bool renormalize) {
  const auto doc = read_json(in, source);
  auto s = structure_from_json(doc, source);
  const auto& jcpts = member(doc, "cpts", source);
  if (!jcpts.is_array()) field_error(source, "cpts", "expected an array");
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < jcpts.size(); ++i) {
    const auto& table = jcpts[i];
    const auto field = "cpts[" + std::to_string(i) + "]";
    if (!table.is_array() || table.empty()) field_error(source, field, "expected a non-empty array of rows");
    Cpt cpt;
    cpt.rows = static_cast<int>(table.size());
    cpt.cols = table[0].is_array() ? static_cast<int>(table[0].size()) : 0;
    for (std::size_t r = 0; r < table.size(); ++r) {
      const auto rfield = field + "[" + std::to_string(r) + "]";
      if (!table[r].is_array() || static_cast<int>(table[r].size()) != cpt.cols)
        field_error(source, rfield, "expected " + std::to_string(cpt.cols) + " probabilities");
      for (std::size_t c = 0; c < table[r].size(); ++c) {
        if (!table[r][c].is_number())
          field_error(source, rfield + "[" + std::to_string(c) + "]", "expected a number");
        cpt.probs.push_back(table[r][c].get<double>());
      }
    }
    cpts.push_back(std::move(cpt));
  }
  try {
    return BayesianNetwork(std::move(s.variables), std::move(s.dag), std::move(cpts), renormalize);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

BayesianNetwork load_network(const std::filesystem::path& path, bool renormalize) {
  auto in = open_in(path);
  return parse_network(in, path.string(), renormalize);
}

void write_network(std::ostream& out, const BayesianNetwork& net) {
  auto doc = structure_to_json(net.variables(), net.dag());
  doc["cpts"] = json::array();
  for (const auto& cpt : net.cpts()) {
    json table = json::array();
    for (int r = 0; r < cpt.rows; ++r) {
      const auto row = cpt.row(r);
      table.push_back(std::vector<double>(row.begin(), row.end()));
    }
    doc["cpts"].push_back(std::move(table));
  }
  out << doc.dump(2) << '\n';
}

void save_network(const std::filesystem::path& path, const BayesianNetwork& net) {
  auto out = open_out(path);
  write_network(out, net);
}

Structure parse_structure(std::istream& in, const std::string& source) {
  return structure_from_json(read_json(in, source), source);
}

Structure load_structure(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_structure(in, path.string());
}

void write_structure(std::ostream& out, const Structure& s) {
  out << structure_to_json(s.variables, s.dag).dump(2) << '\n';
}

void save_structure(const std::filesystem::path& path, const Structure& s) {
  auto out = open_out(path);
  write_structure(out, s);
}

Dataset parse_dataset(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<Variable> vars;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError(source + ": missing header row");
  const auto header = split_csv(line);
  for (std::size_t f = 0; f < header.size(); ++f) {
    const auto where = source + ":" + std::to_string(line_no) + ": header field " + std::to_string(f + 1);
    const auto colon = header[f].rfind(':');
    if (colon == std::string::npos) throw ParseError(where + ": expected 'name:arity', got '" + header[f] + "'");
    vars.push_back({header[f].substr(0, colon), parse_int(header[f].substr(colon + 1), where)});
  }
  Dataset data;
  try {
    data = Dataset(vars);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ":" + std::to_string(line_no) + ": " + e.what());
  }
  std::vector<int> values(vars.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    const auto where = source + ":" + std::to_string(line_no);
    if (cells.size() != vars.size()) {
      throw ParseError(where + ": expected " + std::to_string(vars.size()) + " fields, got " +
                       std::to_string(cells.size()));
    }
    for (std::size_t f = 0; f < cells.size(); ++f)
      values[f] = parse_int(cells[f], where + ": field " + std::to_string(f + 1));
    try {
      data.append_row(values);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const Dataset& data) {
  const auto& vars = data.variables();
  for (std::size_t c = 0; c < vars.size(); ++c) out << (c ? "," : "") << vars[c].name << ':' << vars[c].arity;
  out << '\n';
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (int c = 0; c < data.num_vars(); ++c) out << (c ? "," : "") << data.at(r, c);
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  auto out = open_out(path);
  write_dataset(out, data);
}

}  // namespace bnsl
