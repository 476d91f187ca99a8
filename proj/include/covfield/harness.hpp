#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covfield/channels.hpp"

namespace covfield {

struct SuiteConfig {
  std::vector<AlgebraShape> shapes;
  int trials = 20;
  std::uint64_t seed = 42;
  std::map<std::string, double> tolerance_overrides;
  std::vector<std::string> catalog_subset;  // empty means the whole catalog
  std::string output_path;
  bool inject_transpose = false;  // adds a non-CP map to the certified set
  bool timestamps = true;

  /// Throws InvalidInput on an unusable configuration.
  void validate() const;
  std::vector<MonotoneFunction> functions() const;
  nlohmann::json to_json() const;
};

SuiteConfig default_suite_config();
/// Fields absent from `j` keep their defaults.
SuiteConfig suite_config_from_json(const nlohmann::json& j);

struct PropertyRecord {
  std::string name;
  std::string anchor;
  int trials = 0;
  double worst = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
  std::string error;
};

struct PropertyReport {
  SuiteConfig config;
  std::vector<PropertyRecord> properties;
  bool verdict = false;
  double runtime_seconds = 0;
  std::string timestamp;

  nlohmann::json to_json() const;
  /// Serialized report; byte-identical for identical configs when timestamps are off.
  std::string dump() const;
};

/// Names of every property the suite evaluates, in report order.
std::vector<std::string> suite_property_names();

PropertyReport run_suite(const SuiteConfig& config);

struct ProbeRow {
  long n = 0;
  double epsilon = 0;
  double projected = 0;         // 𝔠_{ρn}(ξ_{ap})
  double unprojected = 0;       // 𝔠_{ρn}(ξ_a)
  double w_norm = 0;            // ‖W_{ρn}‖ on 𝓗_τ
  double restricted_delta = 0;  // ‖(Δ̃_{ρn} − Δ̃_ρ)|_{A·p}‖
};

struct ProbeTable {
  AlgebraElement a;
  std::optional<double> limit_value;  // 𝔠_ρ(ξ_a) when the limit covariance exists
  double radial_limit = 0;            // p_j·F(0) for the reduced direction, else the projected limit
  std::vector<ProbeRow> rows;

  nlohmann::json to_json() const;
};

/// Default direction: |v_j⟩⟨v_N| with v_j a support and v_N a null eigenvector of one block;
/// for faithful states the off-diagonal unit in the first block of size ≥ 2.
AlgebraElement default_probe_direction(const State& rho);

/// ε_n = 1/n with `steps` log-spaced integers n from 1 to max_n.
ProbeTable continuity_probe(const State& rho, const MonotoneFunction& f, int steps,
                            std::optional<AlgebraElement> a = std::nullopt, long max_n = 1000000);

struct MetricRow {
  int state_index = 0;
  std::vector<double> p;
  std::string direction;
  std::optional<double> fisher_rao;
  std::vector<double> values;  // one per function
};

/// Ordinary-trace probability vectors: first entry g/(n+1), g = 1..n; the rest ∝ 1, 2, …, K−1.
std::vector<std::vector<double>> metric_grid(const AlgebraShape& shape, int n);
std::vector<MetricRow> metric_table(const AlgebraShape& shape, const std::vector<MonotoneFunction>& fs,
                                    const std::vector<std::vector<double>>& points);
std::string metric_table_csv(const std::vector<MonotoneFunction>& fs, const std::vector<MetricRow>& rows);

}  // namespace covfield
