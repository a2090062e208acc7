// Artifact serialization: flat CSV spectra (columns: degree,index,eigenvalue)
// whose floats round-trip IEEE doubles exactly, plus small file helpers for
// the deterministic JSON report and its timing sidecar.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nchodge/linalg.hpp"
#include "nchodge/model.hpp"

namespace nchodge {

void write_spectrum_csv(const std::string& path, const std::vector<RealVec>& by_degree);
std::vector<RealVec> read_spectrum_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

nlohmann::json invariant_to_json(const InvariantResult& r);

// Aggregates repeated evaluations of one named invariant (across (h, u) cells
// or sizes) into a single row showing the worst offender; pass is the AND over
// all evaluations. Rows keep insertion order, so "first failure" is the first
// breach in execution order.
class InvariantTable {
 public:
  void add(const std::string& name, double residual, double bound, bool approximate);
  void merge(const InvariantResult& r);

  const std::vector<InvariantResult>& rows() const { return rows_; }
  bool all_pass() const;
  std::string first_failure() const;  // empty when everything passes
  nlohmann::json to_json() const;

 private:
  std::vector<InvariantResult> rows_;
};

}  // namespace nchodge
