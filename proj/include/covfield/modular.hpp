#pragma once

#include "covfield/gns.hpp"

namespace covfield {

/// Modular data of ρ: trace-picture factors on 𝓗_τ and the modular operator on 𝓗_ρ.
struct ModularData {
  State rho;
  GnsSpace tau_space;
  GnsOperator L;            // ξ_a ↦ ξ_{ϱa} on 𝓗_τ
  GnsOperator R;            // ξ_a ↦ ξ_{aϱ} on 𝓗_τ
  GnsOperator W;            // ξ_a ↦ ξ_{aϱ⁺} on 𝓗_τ
  GnsOperator delta_tilde;  // L·W
  GnsSpace space;           // 𝓗_ρ
  GnsOperator delta;        // Δρ on 𝓗_ρ, symmetrized
  Eigen::VectorXd spectrum; // ascending
};

/// 𝓗_τ for the canonical trace; its basis is √K times the matrix units in compact order,
/// so operator matrices coincide with compact-coordinate matrices.
GnsSpace tracial_space(const AlgebraShape& shape);

GnsOperator left_mult(const State& rho, const GnsSpace& tau_space);
GnsOperator right_mult(const State& rho, const GnsSpace& tau_space);
/// Zero on ker R_ρ, right multiplication by ϱ⁺ on A·p.
GnsOperator partial_inverse_W(const State& rho, const GnsSpace& tau_space);

ModularData modular_operator(const State& rho);
/// Modular operator on an already constructed 𝓗_ρ.
GnsOperator modular_on(const GnsSpace& space);

/// Φ_t(a) = ϱ^{it} a ϱ^{−it}. Requires a faithful state.
AlgebraElement modular_flow(const State& rho, double t, const AlgebraElement& a);

/// Operator norm of X restricted to A·p, with 𝓗_τ-norms on both sides.
double restricted_norm(const GnsOperator& x, const AlgebraElement& p);

/// Operator norm (largest singular value).
double op_norm(const Matrix& m);
/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const Matrix& m);
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

}  // namespace covfield
