#include "covfield/random.hpp"

#include <complex>

namespace covfield {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a offset basis
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix(splitmix(master ^ h) + index);
}

Eigen::MatrixXcd ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = g(rng);
      double im = g(rng);
      m(i, j) = std::complex<double>(re, im);
    }
  return m;
}

Eigen::MatrixXcd random_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd g = ginibre(rng, rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  // Fix column phases against R's diagonal so the distribution is Haar.
  Eigen::MatrixXcd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    std::complex<double> d = r(j, j);
    double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

Eigen::MatrixXcd haar_unitary(Rng& rng, Eigen::Index n) { return random_isometry(rng, n, n); }

Eigen::MatrixXcd random_hermitian(Rng& rng, Eigen::Index n) {
  Eigen::MatrixXcd g = ginibre(rng, n, n);
  return (g + g.adjoint()) * 0.5;
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

}  // namespace covfield
