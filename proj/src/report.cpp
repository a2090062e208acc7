#include "nchodge/report.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nchodge {

void write_spectrum_csv(const std::string& path, const std::vector<RealVec>& by_degree) {
  std::ostringstream out;
  out << "degree,index,eigenvalue\n";
  for (std::size_t k = 0; k < by_degree.size(); ++k)
    for (Eigen::Index i = 0; i < by_degree[k].size(); ++i)
      out << k << ',' << i << ',' << format_g17(by_degree[k](i)) << '\n';
  write_text_file(path, out.str());
}

std::vector<RealVec> read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spectrum csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "degree,index,eigenvalue")
    throw std::runtime_error("bad spectrum csv header in " + path);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("bad spectrum csv row in " + path + ": " + line);
    const std::size_t degree = std::strtoull(line.c_str(), nullptr, 10);
    const std::size_t index = std::strtoull(line.c_str() + c1 + 1, nullptr, 10);
    const double value = std::strtod(line.c_str() + c2 + 1, nullptr);
    if (degree >= rows.size()) rows.resize(degree + 1);
    if (index != rows[degree].size())
      throw std::runtime_error("non-contiguous index in " + path + ": " + line);
    rows[degree].push_back(value);
  }
  std::vector<RealVec> out;
  for (const std::vector<double>& r : rows)
    out.push_back(Eigen::Map<const RealVec>(r.data(), static_cast<Eigen::Index>(r.size())));
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json invariant_to_json(const InvariantResult& r) {
  return nlohmann::json{{"name", r.name},
                        {"residual", r.residual},
                        {"bound", r.bound},
                        {"pass", r.pass},
                        {"approximate", r.approximate}};
}

void InvariantTable::add(const std::string& name, double residual, double bound,
                         bool approximate) {
  InvariantResult r;
  r.name = name;
  r.residual = residual;
  r.bound = bound;
  r.pass = residual <= bound;
  r.approximate = approximate;
  merge(r);
}

void InvariantTable::merge(const InvariantResult& r) {
  for (InvariantResult& row : rows_) {
    if (row.name != r.name) continue;
    row.pass = row.pass && r.pass;
    // keep the evaluation with the smallest margin as the displayed one
    const double old_ratio = row.residual / std::max(row.bound, 1e-300);
    const double new_ratio = r.residual / std::max(r.bound, 1e-300);
    if (new_ratio > old_ratio) {
      row.residual = r.residual;
      row.bound = r.bound;
      row.approximate = r.approximate;
    }
    return;
  }
  rows_.push_back(r);
}

bool InvariantTable::all_pass() const {
  for (const InvariantResult& r : rows_)
    if (!r.pass) return false;
  return true;
}

std::string InvariantTable::first_failure() const {
  for (const InvariantResult& r : rows_)
    if (!r.pass) return r.name;
  return "";
}

nlohmann::json InvariantTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const InvariantResult& r : rows_) arr.push_back(invariant_to_json(r));
  return arr;
}

}  // namespace nchodge
