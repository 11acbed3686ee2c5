#pragma once

#include <array>

#include "so3obs/so3.hpp"

namespace so3obs {

struct SymmetricEigen3 {
  std::array<double, 3> values;  // ascending
  Mat3 vectors;                  // column j pairs with values[j]
};

/// Closed-form (trigonometric Cardano) eigenvalues of a symmetric 3x3 matrix,
/// ascending. Only the upper triangle is read.
std::array<double, 3> symmetric_eigenvalues(const Mat3& a);

/// Eigenvalues plus an orthonormal eigenbasis. Eigenvectors come from cross
/// products of rows of (A - lambda I); the middle one is completed as a cross
/// product so the basis is orthonormal to round-off. Column signs are
/// unspecified and must be fixed by the caller. Requires distinct
/// eigenvalues; callers check the gaps first.
SymmetricEigen3 symmetric_eigen(const Mat3& a);

}  // namespace so3obs
