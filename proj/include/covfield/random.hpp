#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace covfield {

using Rng = std::mt19937_64;

/// Stable 64-bit mix of a master seed, a label and an index.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

/// n×m matrix with i.i.d. standard complex Gaussian entries.
Eigen::MatrixXcd ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-distributed n×n unitary.
Eigen::MatrixXcd haar_unitary(Rng& rng, Eigen::Index n);

/// Isometry with `cols` orthonormal columns in C^rows.
Eigen::MatrixXcd random_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols);

Eigen::MatrixXcd random_hermitian(Rng& rng, Eigen::Index n);

double uniform(Rng& rng, double lo, double hi);

}  // namespace covfield
