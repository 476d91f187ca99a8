#pragma once

#include <optional>

#include "covfield/modular.hpp"
#include "covfield/monotone.hpp"

namespace covfield {

struct CovarianceSpec {
  MonotoneFunction F;
  double alpha = 1;
  double beta = 1;  // always F(1)
};

/// Builds (F, α, β = F(1)); α defaults to β. Throws DomainError if F fails Löwner certification.
CovarianceSpec make_covariance_spec(const MonotoneFunction& f, std::optional<double> alpha = std::nullopt);

struct CovarianceOperator {
  CovarianceSpec spec;
  GnsOperator delta;
  GnsOperator T;  // F(Δρ) + (α−β)|ψ_𝟙⟩⟨ψ_𝟙|

  const GnsSpace& space() const { return T.space; }
};

/// True when A·p has directions q·a·p, on which Δρ vanishes.
bool has_off_support_directions(const State& rho);

/// Throws DomainError when F(0) = 0 and ρ has off-support directions (T would be singular).
CovarianceOperator covariance_operator(const GnsSpace& space, const CovarianceSpec& spec);
CovarianceOperator covariance_operator(const State& rho, const CovarianceSpec& spec);

/// 𝔠ρ(ξ, η) = ⟨ξ, Tρ η⟩_ρ.
Complex covariance_form(const CovarianceOperator& op, const GnsVector& xi, const GnsVector& eta);
/// 𝔠ρ(ξ_a, ξ_a) built from scratch.
double covariance_value(const State& rho, const CovarianceSpec& spec, const AlgebraElement& a);

/// Tangent vector at a faithful state, stored as ζ̃ with ζ(b) = τ(ζ̃ b).
struct TangentVector {
  AlgebraElement zeta;
};

/// ζ̃ from an ordinary-trace coordinate matrix (K×K, Hermitian, traceless, block-diagonal).
TangentVector tangent_from_ordinary(const AlgebraShape& shape, const Matrix& ordinary);
TangentVector tangent_from_element(const AlgebraElement& zeta_tilde);
/// The ordinary-trace coordinates embed(ζ̃)/K.
Matrix ordinary_coordinates(const TangentVector& v);

/// F(L R⁻¹)·R in compact coordinates.
Matrix covariance_superoperator(const State& rho, const MonotoneFunction& f);
/// [F(L R⁻¹)]⁻¹ R⁻¹ obtained by a dense solve against the covariance superoperator.
Matrix metric_superoperator(const State& rho, const MonotoneFunction& f);

/// Gρ(ζ, η) = τ(ζ̃ · [F(L R⁻¹)]⁻¹ R⁻¹(η̃)). Requires faithful ρ and α = β.
double metric_inner(const State& rho, const CovarianceSpec& spec, const TangentVector& zeta,
                    const TangentVector& eta);

/// Σ_{jk} |⟨j|ζ|k⟩|² / (p_k F(p_j/p_k)) in the eigenbasis of the ordinary density. Single block only.
double metric_spectral_oracle(const State& rho, const MonotoneFunction& f, const TangentVector& zeta);

/// Σ ζ_ii² / p_i for diagonal ζ at a diagonal state (ordinary coordinates).
double fisher_rao(const std::vector<double>& p, const std::vector<double>& zeta);

}  // namespace covfield
