// Run configuration: a single JSON document with nested sections, strict
// unknown-key rejection, defaults filled in, and validation errors that name
// the offending field path. The canonical echo (sorted keys, defaults
// materialized) is hashed to content-address the output directory.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "nchodge/model.hpp"

namespace nchodge {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ToleranceSet {
  double kernel_tau = 1e-9;        // eigenvalue <= tau * lambda_max counts as zero
  double min_gap_ratio = 100.0;    // audited gap above the kernel threshold
  double exact_residual = 1e-10;   // matrix-identity bound on exact models
  double truncated_residual = 1e-6;  // same identities on truncated products
  double orthogonality = 1e-9;     // Hodge basis cross terms
  double mckean_singer = 1e-8;     // alternating heat trace vs chi
  double conjugation = 1e-9;       // pushforward identity at u = 1/2
  double growth_factor = 2.0;      // untwisted norm: largest/smallest size
  double twisted_variation = 0.5;  // twisted norm: relative spread across sizes
};

struct FamilySetting {
  double amplitude = 0.0;
  double u = 0.0;
};

struct RunConfig {
  // model section
  std::string model_type;  // "fuzzy_sphere" | "nc_torus"
  int N = 3;               // fuzzy sphere size
  Eigen::MatrixXd theta;   // torus deformation, antisymmetric n x n
  int M = 4;               // torus mode-window radius
  int padding = 0;         // extra window margin for truncation diagnostics

  // lie section
  std::string lie_preset;             // "su2" | "abelian_<n>" | "" when explicit
  int lie_n = 0;                      // explicit structure constants
  std::vector<double> lie_constants;  // row-major c[k][i][j], n^3 entries

  // conformal section
  std::string conformal_template;  // "j3" (sphere) | "cos1" (torus)
  std::vector<double> amplitudes;  // default {0, 0.3}

  std::vector<double> u_values;  // default {0, 0.5, 1}

  // analysis grids
  double t_min = 0.01;
  double t_max = 10.0;
  int t_points_per_decade = 16;
  std::vector<double> p_values;  // default {1, 2, 3}

  // family section
  std::vector<int> family_sizes;  // default {4, 8, 12, 16} sphere, {4, 8, 16} torus
  std::vector<FamilySetting> family_settings;  // default {(0,0), (0.3, 0.5)}

  ToleranceSet tol;
  std::string output_dir = "runs";
  std::uint64_t seed = 1;

  std::vector<std::string> warnings;  // non-fatal validation notes

  int lie_dimension() const;  // n implied by the lie section
  nlohmann::json echo() const;
  std::string content_hash() const;  // FNV-1a of the canonical echo
};

// Parse + validate a config document; unknown keys and invalid values raise
// ConfigError with the field path. Warnings accumulate on the config.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

LieAlgebra build_lie(const RunConfig& cfg);

// Model at the configured size, with the lie section cross-checked against
// the model's derivations (bracket consistency is re-validated downstream).
SystemModel build_model(const RunConfig& cfg);
// Same model shape at a family size (sphere N or torus M = size).
SystemModel build_model_at_size(const RunConfig& cfg, int size);

}  // namespace nchodge
