#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "covfield/random.hpp"

namespace covfield {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Block structure of ⊕_j M_{n_j}(C).
class AlgebraShape {
 public:
  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<int> block_dims);

  /// Parses "1,2,2".
  static AlgebraShape parse(const std::string& text);
  /// Parses "2;1,2;3" into a list of shapes.
  static std::vector<AlgebraShape> parse_list(const std::string& text);

  const std::vector<int>& block_dims() const { return dims_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int j) const { return dims_[j]; }
  /// K = Σ n_j.
  int total_dim() const { return total_; }
  /// Σ n_j², the complex dimension of the algebra.
  int vec_dim() const { return vec_total_; }
  int block_offset(int j) const { return offsets_[j]; }
  int vec_offset(int j) const { return vec_offsets_[j]; }
  /// Block containing embedding index i.
  int block_of(int i) const;
  bool is_commutative() const;
  std::string to_string() const;

  bool operator==(const AlgebraShape& o) const { return dims_ == o.dims_; }
  bool operator!=(const AlgebraShape& o) const { return !(*this == o); }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  std::vector<int> vec_offsets_;
  int total_ = 0;
  int vec_total_ = 0;
};

/// Shape of the doubled algebra A ⊕ A.
AlgebraShape direct_sum(const AlgebraShape& a, const AlgebraShape& b);

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks);

  static AlgebraElement zero(const AlgebraShape& shape);
  static AlgebraElement identity(const AlgebraShape& shape);
  /// e^{(j)}_{rs} inside block j.
  static AlgebraElement unit(const AlgebraShape& shape, int j, int r, int s);
  /// |r⟩⟨s| in embedding indices; r and s must lie in the same block.
  static AlgebraElement embedded_unit(const AlgebraShape& shape, int r, int s);
  /// Block-diagonal part of a K×K matrix.
  static AlgebraElement from_embedded(const AlgebraShape& shape, const Matrix& m);
  static AlgebraElement random(const AlgebraShape& shape, Rng& rng);
  static AlgebraElement random_hermitian(const AlgebraShape& shape, Rng& rng);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(int j) const { return blocks_[j]; }
  Matrix& block(int j) { return blocks_[j]; }

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator*(Complex c) const;

  double frobenius_norm() const;
  /// Largest singular value of the embedding.
  double op_norm() const;
  bool is_hermitian(double tol) const;

 private:
  AlgebraShape shape_;
  std::vector<Matrix> blocks_;
};

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement adjoint(const AlgebraElement& a);
Matrix embed(const AlgebraElement& a);
/// τ(a) = (1/K) Σ_j Tr(a_j).
Complex trace_eval(const AlgebraElement& a);

/// Canonical normalized trace of a shape.
struct CanonicalTrace {
  AlgebraShape shape;
  double normalization() const { return 1.0 / shape.total_dim(); }
  Complex operator()(const AlgebraElement& a) const { return trace_eval(a); }
};

/// Compact coordinates: blocks in order, each column-stacked (length Σ n_j²).
Vector vectorize(const AlgebraElement& a);
AlgebraElement devectorize(const AlgebraShape& shape, const Vector& v);

/// Column-stacked embedded K×K matrix (length K²).
Vector embedded_vec(const AlgebraElement& a);
/// Index in the embedded K² vector of compact coordinate i.
std::vector<int> compact_to_embedded_index(const AlgebraShape& shape);

/// Matrices of a ↦ x·a and a ↦ a·x in compact coordinates.
Matrix left_mult_matrix(const AlgebraElement& x);
Matrix right_mult_matrix(const AlgebraElement& x);

Matrix kron(const Matrix& a, const Matrix& b);

nlohmann::json to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const nlohmann::json& j);
nlohmann::json shape_to_json(const AlgebraShape& s);
AlgebraShape shape_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

}  // namespace covfield
