#pragma once

#include <span>
#include <vector>

#include "runtrim/matrix.hpp"

namespace runtrim {

/// Non-negative least squares, min ||Ax - b|| s.t. x >= 0, by the
/// Lawson-Hanson active-set method. Throws ParameterError on empty or
/// non-finite input.
std::vector<double> nnls_solve(const Matrix& a, std::span<const double> b);

}  // namespace runtrim
