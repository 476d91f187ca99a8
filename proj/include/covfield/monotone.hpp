#pragma once

#include <functional>
#include <string>
#include <vector>

#include "covfield/gns.hpp"

namespace covfield {

/// Operator monotone F: [0,∞) → [0,∞) with its metadata.
struct MonotoneFunction {
  std::string name;
  std::function<double(double)> rule;  // valid for t > 0
  double f0 = 0;                       // γ = lim_{t→0⁺} F(t)
  double f1 = 1;                       // β = F(1)
  bool petz_symmetric = false;

  /// F(0) = 0: the radial extension to non-faithful states degenerates.
  bool radial_degenerate() const { return f0 == 0.0; }
};

const std::vector<MonotoneFunction>& function_catalog();
/// Catalog lookup; accepts "bures", "harmonic", "geometric", "kubo-mori", "wigner-yanase".
const MonotoneFunction& catalog_function(const std::string& name);

/// User function from an expression in t; F(0) and F(1) are taken as limits where needed.
MonotoneFunction function_from_expression(const std::string& name, const std::string& expr);

double eval_scalar(const MonotoneFunction& f, double t);
/// Spectral calculus on a Hermitian matrix. Eigenvalues in [−1e−10, 1e−13] (relative to the
/// spectral radius, floored at 1) are read as exact zeros; anything more negative is a DomainError.
Matrix eval_hermitian(const MonotoneFunction& f, const Matrix& h);
GnsOperator eval_hermitian(const MonotoneFunction& f, const GnsOperator& h);

struct LoewnerResult {
  bool psd = false;
  double min_eigenvalue = 0;
  double norm = 0;
};

/// PSD check of the divided-difference matrix on distinct positive points.
LoewnerResult loewner_test(const std::function<double(double)>& f, const std::vector<double>& points);
LoewnerResult loewner_test(const MonotoneFunction& f, const std::vector<double>& points);

bool petz_symmetry_test(const std::function<double(double)>& f, const std::vector<double>& grid);
bool petz_symmetry_test(const MonotoneFunction& f, const std::vector<double>& grid);

/// `size` distinct log-uniform points in [lo, hi], sorted.
std::vector<double> random_log_grid(Rng& rng, int size, double lo, double hi);
/// Geometric grid from lo to hi with `size` points.
std::vector<double> log_grid(double lo, double hi, int size);

/// Löwner test on a fixed family of seeded 12-point grids.
bool certify_monotone(const MonotoneFunction& f);

/// |F(t) − F(0)| for t = 10⁻⁶, 10⁻⁷, …, 10⁻¹².
std::vector<double> f0_limit_gaps(const MonotoneFunction& f);

}  // namespace covfield
