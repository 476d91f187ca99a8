#include "covfield/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "covfield/errors.hpp"

namespace covfield {

AlgebraShape::AlgebraShape(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw InvalidInput("shape must have at least one block");
  int off = 0, voff = 0;
  for (int n : dims_) {
    if (n < 1) throw InvalidInput("block dimensions must be positive");
    offsets_.push_back(off);
    vec_offsets_.push_back(voff);
    off += n;
    voff += n * n;
  }
  total_ = off;
  vec_total_ = voff;
}

AlgebraShape AlgebraShape::parse(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw InvalidInput("empty block dimension in shape '" + text + "'");
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad block dimension '" + tok + "'");
    }
    if (used != tok.size()) throw InvalidInput("bad block dimension '" + tok + "'");
    dims.push_back(n);
  }
  return AlgebraShape(dims);
}

std::vector<AlgebraShape> AlgebraShape::parse_list(const std::string& text) {
  std::vector<AlgebraShape> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (tok.empty()) continue;
    out.push_back(parse(tok));
  }
  return out;
}

int AlgebraShape::block_of(int i) const {
  if (i < 0 || i >= total_) throw InvalidInput("embedding index out of range");
  for (int j = num_blocks() - 1; j >= 0; --j)
    if (i >= offsets_[j]) return j;
  return 0;
}

bool AlgebraShape::is_commutative() const {
  return std::all_of(dims_.begin(), dims_.end(), [](int n) { return n == 1; });
}

std::string AlgebraShape::to_string() const {
  std::string s;
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(dims_[j]);
  }
  return s;
}

AlgebraShape direct_sum(const AlgebraShape& a, const AlgebraShape& b) {
  std::vector<int> d = a.block_dims();
  d.insert(d.end(), b.block_dims().begin(), b.block_dims().end());
  return AlgebraShape(d);
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<Matrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != shape_.num_blocks())
    throw InvalidInput("block count does not match shape");
  for (int j = 0; j < shape_.num_blocks(); ++j) {
    int n = shape_.block_dim(j);
    if (blocks_[j].rows() != n || blocks_[j].cols() != n)
      throw InvalidInput("block " + std::to_string(j) + " has wrong size");
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
  std::vector<Matrix> b;
  for (int n : shape.block_dims()) b.push_back(Matrix::Zero(n, n));
  return {shape, b};
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& shape) {
  std::vector<Matrix> b;
  for (int n : shape.block_dims()) b.push_back(Matrix::Identity(n, n));
  return {shape, b};
}

AlgebraElement AlgebraElement::unit(const AlgebraShape& shape, int j, int r, int s) {
  AlgebraElement e = zero(shape);
  if (j < 0 || j >= shape.num_blocks() || r < 0 || s < 0 || r >= shape.block_dim(j) ||
      s >= shape.block_dim(j))
    throw InvalidInput("matrix unit index out of range");
  e.blocks_[j](r, s) = 1.0;
  return e;
}

AlgebraElement AlgebraElement::embedded_unit(const AlgebraShape& shape, int r, int s) {
  int j = shape.block_of(r);
  if (shape.block_of(s) != j) throw InvalidInput("matrix unit crosses blocks");
  return unit(shape, j, r - shape.block_offset(j), s - shape.block_offset(j));
}

AlgebraElement AlgebraElement::from_embedded(const AlgebraShape& shape, const Matrix& m) {
  if (m.rows() != shape.total_dim() || m.cols() != shape.total_dim())
    throw InvalidInput("embedded matrix has wrong size");
  std::vector<Matrix> b;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    int o = shape.block_offset(j), n = shape.block_dim(j);
    b.push_back(m.block(o, o, n, n));
  }
  return {shape, b};
}

AlgebraElement AlgebraElement::random(const AlgebraShape& shape, Rng& rng) {
  std::vector<Matrix> b;
  for (int n : shape.block_dims()) b.push_back(ginibre(rng, n, n));
  return {shape, b};
}

AlgebraElement AlgebraElement::random_hermitian(const AlgebraShape& shape, Rng& rng) {
  std::vector<Matrix> b;
  for (int n : shape.block_dims()) b.push_back(covfield::random_hermitian(rng, n));
  return {shape, b};
}

namespace {

void require_same(const AlgebraShape& a, const AlgebraShape& b) {
  if (a != b) throw InvalidInput("shape mismatch: [" + a.to_string() + "] vs [" + b.to_string() + "]");
}

}  // namespace

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same(shape_, o.shape_);
  AlgebraElement r = *this;
  for (std::size_t j = 0; j < blocks_.size(); ++j) r.blocks_[j] += o.blocks_[j];
  return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same(shape_, o.shape_);
  AlgebraElement r = *this;
  for (std::size_t j = 0; j < blocks_.size(); ++j) r.blocks_[j] -= o.blocks_[j];
  return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const { return mul(*this, o); }

AlgebraElement AlgebraElement::operator*(Complex c) const {
  AlgebraElement r = *this;
  for (auto& b : r.blocks_) b *= c;
  return r;
}

double AlgebraElement::frobenius_norm() const {
  double s = 0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return std::sqrt(s);
}

double AlgebraElement::op_norm() const {
  double m = 0;
  for (const auto& b : blocks_) {
    Eigen::JacobiSVD<Matrix> svd(b);
    m = std::max(m, svd.singularValues()(0));
  }
  return m;
}

bool AlgebraElement::is_hermitian(double tol) const {
  for (const auto& b : blocks_)
    if ((b - b.adjoint()).norm() > tol) return false;
  return true;
}

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.shape(), b.shape());
  std::vector<Matrix> out;
  for (int j = 0; j < a.shape().num_blocks(); ++j) out.push_back(a.block(j) * b.block(j));
  return {a.shape(), out};
}

AlgebraElement adjoint(const AlgebraElement& a) {
  std::vector<Matrix> out;
  for (const auto& b : a.blocks()) out.push_back(b.adjoint());
  return {a.shape(), out};
}

Matrix embed(const AlgebraElement& a) {
  const auto& s = a.shape();
  Matrix m = Matrix::Zero(s.total_dim(), s.total_dim());
  for (int j = 0; j < s.num_blocks(); ++j) {
    int o = s.block_offset(j), n = s.block_dim(j);
    m.block(o, o, n, n) = a.block(j);
  }
  return m;
}

Complex trace_eval(const AlgebraElement& a) {
  Complex t = 0;
  for (const auto& b : a.blocks()) t += b.trace();
  return t / static_cast<double>(a.shape().total_dim());
}

Vector vectorize(const AlgebraElement& a) {
  const auto& s = a.shape();
  Vector v(s.vec_dim());
  for (int j = 0; j < s.num_blocks(); ++j) {
    int n = s.block_dim(j);
    v.segment(s.vec_offset(j), n * n) = Eigen::Map<const Vector>(a.block(j).data(), n * n);
  }
  return v;
}

AlgebraElement devectorize(const AlgebraShape& shape, const Vector& v) {
  if (v.size() != shape.vec_dim()) throw InvalidInput("coordinate vector has wrong length");
  std::vector<Matrix> b;
  for (int j = 0; j < shape.num_blocks(); ++j) {
    int n = shape.block_dim(j);
    Vector seg = v.segment(shape.vec_offset(j), n * n);
    b.push_back(Eigen::Map<const Matrix>(seg.data(), n, n));
  }
  return {shape, b};
}

Vector embedded_vec(const AlgebraElement& a) {
  Matrix m = embed(a);
  return Eigen::Map<const Vector>(m.data(), m.size());
}

std::vector<int> compact_to_embedded_index(const AlgebraShape& shape) {
  std::vector<int> idx;
  int K = shape.total_dim();
  for (int j = 0; j < shape.num_blocks(); ++j) {
    int o = shape.block_offset(j), n = shape.block_dim(j);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) idx.push_back((o + r) + (o + c) * K);
  }
  return idx;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Matrix left_mult_matrix(const AlgebraElement& x) {
  const auto& s = x.shape();
  Matrix m = Matrix::Zero(s.vec_dim(), s.vec_dim());
  for (int j = 0; j < s.num_blocks(); ++j) {
    int n = s.block_dim(j), o = s.vec_offset(j);
    m.block(o, o, n * n, n * n) = kron(Matrix::Identity(n, n), x.block(j));
  }
  return m;
}

Matrix right_mult_matrix(const AlgebraElement& x) {
  const auto& s = x.shape();
  Matrix m = Matrix::Zero(s.vec_dim(), s.vec_dim());
  for (int j = 0; j < s.num_blocks(); ++j) {
    int n = s.block_dim(j), o = s.vec_offset(j);
    m.block(o, o, n * n, n * n) = kron(x.block(j).transpose(), Matrix::Identity(n, n));
  }
  return m;
}

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidInput("complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json shape_to_json(const AlgebraShape& s) { return s.block_dims(); }

AlgebraShape shape_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("shape must be an array of block dimensions");
  std::vector<int> d;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InvalidInput("block dimensions must be integers");
    d.push_back(x.get<int>());
  }
  return AlgebraShape(d);
}

nlohmann::json to_json(const AlgebraElement& a) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : a.blocks()) {
    nlohmann::json flat = nlohmann::json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) flat.push_back(complex_to_json(b(r, c)));
    blocks.push_back(flat);
  }
  return {{"shape", shape_to_json(a.shape())}, {"blocks", blocks}};
}

AlgebraElement element_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("blocks"))
    throw InvalidInput("algebra element needs 'shape' and 'blocks'");
  AlgebraShape s = shape_from_json(j.at("shape"));
  const auto& blocks = j.at("blocks");
  if (!blocks.is_array() || static_cast<int>(blocks.size()) != s.num_blocks())
    throw InvalidInput("block count does not match shape");
  std::vector<Matrix> out;
  for (int k = 0; k < s.num_blocks(); ++k) {
    int n = s.block_dim(k);
    const auto& flat = blocks[k];
    if (!flat.is_array() || static_cast<int>(flat.size()) != n * n)
      throw InvalidInput("block " + std::to_string(k) + " must have n*n entries");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = complex_from_json(flat[r * n + c]);
    out.push_back(m);
  }
  return {s, out};
}

}  // namespace covfield
