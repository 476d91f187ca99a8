#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "covfield/states.hpp"

namespace covfield {

/// The GNS Hilbert space A·p with ⟨a,b⟩_ρ = ρ(a†b), in an orthonormal basis.
///
/// Copies share the same underlying data; two handles denote the same space
/// iff they were produced by the same gns_space call.
class GnsSpace {
 public:
  GnsSpace() = default;

  const State& state() const { return impl_->rho; }
  const SupportProjection& support() const { return impl_->support; }
  int dim() const { return static_cast<int>(impl_->basis.cols()); }
  /// Basis element u_α as an algebra element (u_α = u_α·p).
  AlgebraElement basis_element(int alpha) const;
  /// Basis in compact coordinates, one column per u_α.
  const Matrix& basis_matrix() const { return impl_->basis; }

  /// Coordinates of ξ_a: c_α = ⟨u_α, a⟩_ρ.
  Vector coordinates(const AlgebraElement& a) const;
  /// The representative Σ c_α u_α ∈ A·p.
  AlgebraElement representative(const Vector& c) const;
  /// max |⟨u_α,u_β⟩_ρ − δ_αβ|.
  double gram_error() const;

  bool same_as(const GnsSpace& o) const { return impl_ == o.impl_; }
  bool valid() const { return impl_ != nullptr; }

 private:
  friend GnsSpace gns_space(const State& rho);
  struct Impl {
    State rho;
    SupportProjection support;
    Matrix basis;   // D×d
    Matrix gbasis;  // G·basis, so coordinates are gbasis†·vec(a)
  };
  std::shared_ptr<const Impl> impl_;
};

struct GnsVector {
  GnsSpace space;
  Vector coords;

  double norm() const { return coords.norm(); }
};

struct GnsOperator {
  GnsSpace space;
  Matrix m;

  GnsOperator adjoint() const { return {space, m.adjoint()}; }
  GnsOperator operator*(const GnsOperator& o) const;
  GnsOperator operator+(const GnsOperator& o) const;
  GnsOperator operator-(const GnsOperator& o) const;
  GnsVector operator*(const GnsVector& v) const;
  bool is_hermitian(double tol) const { return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm()); }
};

/// ⟨a,b⟩_ρ = τ(ϱa†b) evaluated directly.
Complex rho_inner(const State& rho, const AlgebraElement& a, const AlgebraElement& b);

/// Orthonormal (Hilbert–Schmidt) basis of {a : ρ(a†a) = 0} = A·q.
std::vector<AlgebraElement> gelfand_ideal_basis(const State& rho);

GnsSpace gns_space(const State& rho);
GnsVector gns_vector(const GnsSpace& space, const AlgebraElement& a);
Complex gns_inner(const GnsVector& xi, const GnsVector& eta);
/// π_ρ(a): ξ_b ↦ ξ_{ab}.
GnsOperator gns_representation(const GnsSpace& space, const AlgebraElement& a);
/// ψ_𝟙 = ξ_𝟙.
GnsVector cyclic_vector(const GnsSpace& space);

/// Operator ξ_b ↦ ξ_{X(b)} for a linear map X on A that preserves the Gelfand ideal.
GnsOperator induced_operator(const GnsSpace& space,
                             const std::function<AlgebraElement(const AlgebraElement&)>& map);
/// Matrix ξ^σ_b ↦ ξ^ρ_{X(b)} between two GNS spaces (possibly of different algebras).
Matrix induced_matrix(const GnsSpace& from, const GnsSpace& to,
                      const std::function<AlgebraElement(const AlgebraElement&)>& map);

GnsOperator identity_operator(const GnsSpace& space);

}  // namespace covfield
