#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace urldet {

/// Number of monomials of n variables up to total degree d: C(n + d, d).
std::size_t poly_width(int n_features, int degree);

/// Exponent vectors for every monomial up to the given total degree,
/// constant term first, then by total degree, lexicographic within a degree
/// (for [x, y], degree 2: 1, x, y, x^2, xy, y^2).
std::vector<std::vector<int>> monomial_exponents(int n_features, int degree);

/// Expands each row into the full monomial basis. Throws ConfigError when
/// the expanded width would exceed 100000 columns.
Eigen::MatrixXd poly_expand(const Eigen::MatrixXd& rows, int degree);

}  // namespace urldet
