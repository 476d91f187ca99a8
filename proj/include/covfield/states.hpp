#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "covfield/algebra.hpp"

namespace covfield {

/// Relative threshold separating zero eigenvalues from noise.
inline constexpr double kRankCutoff = 1e-9;

/// A state ρ(a) = τ(ϱa) with cached blockwise spectral data.
class State {
 public:
  State() = default;

  const AlgebraShape& shape() const { return density_.shape(); }
  const AlgebraElement& density() const { return density_; }

  /// Ascending eigenvalues of block j.
  const Eigen::VectorXd& block_eigenvalues(int j) const { return evals_[j]; }
  /// Orthonormal eigenvectors of block j (columns).
  const Matrix& block_eigenvectors(int j) const { return evecs_[j]; }
  /// All eigenvalues of embed(ϱ), blocks in order.
  Eigen::VectorXd eigenvalues() const;
  /// Eigenvalues of the ordinary-trace density embed(ϱ)/K.
  Eigen::VectorXd ordinary_probabilities() const;
  Matrix ordinary_density() const;

  double max_eigenvalue() const { return lambda_max_; }
  double min_eigenvalue() const;
  double cutoff() const { return kRankCutoff * lambda_max_; }
  bool in_support(double q) const { return q > cutoff(); }
  int rank() const { return rank_; }
  bool faithful() const { return rank_ == shape().total_dim(); }

  /// ρ(a) = τ(ϱa).
  Complex operator()(const AlgebraElement& a) const;

  /// f applied to the eigenvalues of ϱ; eigenvalues below the cutoff map to `null_value`.
  AlgebraElement spectral_map(const std::function<Complex(double)>& f, Complex null_value) const;
  /// ϱ⁺, the inverse on the support.
  AlgebraElement pseudo_inverse() const;

 private:
  friend State state_from_density(const AlgebraShape&, const AlgebraElement&);
  AlgebraElement density_;
  std::vector<Eigen::VectorXd> evals_;
  std::vector<Matrix> evecs_;
  double lambda_max_ = 0;
  int rank_ = 0;
};

struct SupportProjection {
  AlgebraElement p;
  AlgebraElement q;
};

/// A sequence of faithful states converging to `limit` along a shared eigenbasis.
struct CommutingSequence {
  State limit;
  std::vector<State> terms;
  std::vector<double> epsilons;
};

/// Validates ϱ and builds the spectral data. Throws InvalidState naming the violated invariant.
State state_from_density(const AlgebraShape& shape, const AlgebraElement& density);
/// Density with known eigenbasis: ϱ_j = V_j diag(q_j) V_j†.
State state_from_spectrum(const AlgebraShape& shape, const std::vector<Matrix>& eigenvectors,
                          const std::vector<Eigen::VectorXd>& eigenvalues);

State tracial_state(const AlgebraShape& shape);
/// Vector state of the embedding basis vector `index`.
State pure_state(const AlgebraShape& shape, int index);
/// Diagonal state with ordinary-trace probabilities p (length K).
State diagonal_state(const AlgebraShape& shape, const std::vector<double>& p);
/// Central state putting weight w_j on block j.
State tracial_state_with_weights(const AlgebraShape& shape, const std::vector<double>& w);

SupportProjection support_projection(const State& rho);
/// Compressed density of the faithful reduced state on pAp (support eigenvalues).
Eigen::VectorXd reduced_spectrum(const State& rho);

bool commutes(const State& rho, const State& sigma);
bool is_tracial(const State& rho);

/// G†G per block from Ginibre G, mixed with 𝟙 so every eigenvalue is ≥ 1e-3.
State random_faithful_state(const AlgebraShape& shape, std::uint64_t seed);
/// Random state whose support is a proper subspace whenever the shape allows one.
State random_degenerate_state(const AlgebraShape& shape, std::uint64_t seed);
/// Random central state, faithful or not.
State random_tracial_state(const AlgebraShape& shape, std::uint64_t seed, bool allow_zero_blocks);

/// ε_n = rate^n for n = 1..count.
CommutingSequence commuting_sequence(const State& rho, int count, double rate);
/// Arbitrary strictly decreasing schedule of ε values in (0,1].
CommutingSequence commuting_sequence(const State& rho, const std::vector<double>& epsilons);

State mix(double lambda, const State& rho, const State& sigma);
/// ω_λ(a₁⊕a₂) = λρ(a₁) + (1−λ)σ(a₂) on the doubled shape.
State direct_sum_state(double lambda, const State& rho, const State& sigma);

nlohmann::json to_json(const State& s);
State state_from_json(const nlohmann::json& j);

/// "tracial", "random:SEED", "pure:INDEX" (needs `shape`) or a JSON file path.
State parse_state_spec(const std::string& spec, const std::optional<AlgebraShape>& shape);

}  // namespace covfield
