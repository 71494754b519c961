#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace support {

inline std::string data_path(const std::string& name) { return std::string(ASIANSPEC_TEST_DATA) + "/" + name; }

// Whitespace-separated numeric rows; strtod keeps subnormal values.
inline std::vector<std::vector<double>> read_rows(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing test data " + name);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(std::strtod(tok.c_str(), nullptr));
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

// name value pairs from scalars.txt
inline const std::map<std::string, double>& scalars() {
  static const std::map<std::string, double> table = [] {
    std::ifstream in(data_path("scalars.txt"));
    if (!in) throw std::runtime_error("missing test data scalars.txt");
    std::map<std::string, double> t;
    std::string name, value;
    while (in >> name >> value) t[name] = std::strtod(value.c_str(), nullptr);
    return t;
  }();
  return table;
}

inline double oracle(const std::string& name) { return scalars().at(name); }

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace support
