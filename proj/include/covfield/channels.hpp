#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "covfield/covariance.hpp"

namespace covfield {

/// Unital linear map Φ: 𝓑 → 𝒜 stored as a superoperator on column-stacked embedded matrices.
///
/// Columns for matrix units outside the block structure of 𝓑 are zero; outputs are
/// read back through the block mask of 𝒜.
class CpuMap {
 public:
  CpuMap() = default;
  CpuMap(AlgebraShape source, AlgebraShape target, Matrix superop);

  static CpuMap from_function(const AlgebraShape& source, const AlgebraShape& target,
                              const std::function<AlgebraElement(const AlgebraElement&)>& fn);

  const AlgebraShape& source() const { return source_; }
  const AlgebraShape& target() const { return target_; }
  /// K_𝒜² × K_𝓑² superoperator.
  const Matrix& superop() const { return superop_; }

  AlgebraElement apply(const AlgebraElement& b) const;
  AlgebraElement operator()(const AlgebraElement& b) const { return apply(b); }

  struct Stinespring {
    Matrix isometry;  // K_𝒜 → K_𝓑·r
    int dilation = 1;
  };
  std::optional<Stinespring> stinespring;

 private:
  AlgebraShape source_;
  AlgebraShape target_;
  Matrix superop_;
};

struct ChoiMatrix {
  Matrix m;  // Σ_{rs} E_rs ⊗ Φ(E_rs)
  Eigen::VectorXd eigenvalues;
  double trace = 0;
  bool psd = false;

  double min_eigenvalue() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
};

ChoiMatrix choi_matrix(const CpuMap& phi);

struct CertificationReport {
  double unital_residual = 0;
  bool unital = false;
  double self_adjoint_residual = 0;
  bool self_adjoint = false;
  double choi_min_eigenvalue = 0;
  /// Smallest eigenvalue of Choi/K_𝓑.
  double choi_min_normalized = 0;
  bool completely_positive = false;
  double kadison_min_eigenvalue = 0;
  bool kadison = false;

  bool pass() const { return unital && self_adjoint && completely_positive && kadison; }
};

CertificationReport verify_cpu(const CpuMap& phi, std::uint64_t seed = 0, int kadison_trials = 50);
/// Smallest eigenvalue of Φ(b†b) − Φ(b)†Φ(b) over `trials` random b with ‖b‖ = 1.
double kadison_slack(const CpuMap& phi, std::uint64_t seed, int trials);

/// σ = Φ*ρ, i.e. σ(b) = ρ(Φ(b)). Assumes Φ is CPU.
State dual_state(const CpuMap& phi, const State& rho);

/// Φ̃: 𝓗_σ → 𝓗_ρ, ξ^σ_b ↦ ξ^ρ_{Φ(b)}.
struct InducedContraction {
  GnsSpace source;  // 𝓗_σ
  GnsSpace target;  // 𝓗_ρ
  Matrix m;
  double norm = 0;
  double unitality_residual = 0;  // ‖Φ̃ψ^σ − ψ^ρ‖
};

/// Throws InternalConsistency if Φ does not map the Gelfand ideal of σ into that of ρ.
InducedContraction induced_contraction(const CpuMap& phi, const GnsSpace& rho_space);
InducedContraction induced_contraction(const CpuMap& phi, const State& rho);

/// Smallest eigenvalue of Δσ − Φ̃†ΔρΦ̃.
double modular_slack(const InducedContraction& c);
/// Smallest eigenvalue of Tσ − Φ̃†TρΦ̃.
double covariance_slack(const InducedContraction& c, const CovarianceSpec& spec);
/// ‖Φ̃†TρΦ̃ − Tσ‖_op.
double covariance_invariance_defect(const InducedContraction& c, const CovarianceSpec& spec);

/// a ↦ Σ_j P_j a P_j for an orthogonal resolution of the identity.
CpuMap pinching_expectation(const std::vector<AlgebraElement>& projections);
/// Pinching onto the eigenspaces of ϱ (the conditional expectation onto the centralizer).
CpuMap centralizer_expectation(const State& rho);

CpuMap identity_map(const AlgebraShape& shape);
/// Blockwise transpose; positive but not completely positive.
CpuMap transpose_map(const AlgebraShape& shape);
/// b ↦ U† b U.
CpuMap unitary_conjugation(const AlgebraElement& u);
/// Unitary commuting with ϱ, Haar-random inside each eigenspace.
AlgebraElement random_state_preserving_unitary(const State& rho, std::uint64_t seed);

/// Φ(b) = E_𝒜(V†(embed(b) ⊗ I_r)V) for a seeded isometry V; requires K_𝓑·r ≥ K_𝒜.
CpuMap random_cpu(const AlgebraShape& source, const AlgebraShape& target, int dilation, std::uint64_t seed);

struct Rational {
  long num = 0;
  long den = 1;
};
Rational parse_rational(const std::string& text);

/// Retraction of (A, σ) onto (B(𝒦), τ) for a state σ with rational block weights L_j/M.
struct RationalSplitMono {
  AlgebraShape shape;     // A
  AlgebraShape big;       // B(𝒦), a single block of size M·Π n_k
  std::vector<long> L;
  long M = 1;
  CpuMap phi;             // A → B(𝒦), unital *-homomorphism
  CpuMap E;               // B(𝒦) → A, τ-preserving conditional expectation
  State sigma;            // weights L_j/M on the blocks of A
  State tau;              // canonical trace on B(𝒦)
  double left_inverse_residual = 0;  // max ‖E(φ(e)) − e‖ over matrix units
  double pullback_residual = 0;      // ‖φ*τ − σ‖
  double pushforward_residual = 0;   // ‖E*σ − τ‖
};

RationalSplitMono rational_trace_split_mono(const std::vector<Rational>& weights, const AlgebraShape& shape);

/// i_rs: M_2 ⊕ C → M_n sending the M_2 summand to span{|r⟩,|s⟩} and C to the complement.
CpuMap i_rs_embedding(int n, int r, int s);
/// Left inverse of i_rs: a ↦ (compression of a to {r,s}, ρ(PaP)/ρ(P)).
CpuMap i_rs_expectation(const State& rho, int r, int s);

nlohmann::json to_json(const CpuMap& phi);
CpuMap cpu_map_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CertificationReport& r);

}  // namespace covfield
