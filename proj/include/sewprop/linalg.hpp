#pragma once

#include <vector>

#include "sewprop/scalar.hpp"

namespace sewprop {

using Matrix = std::vector<std::vector<Scalar>>;

struct LinearSolution {
    enum class Status { unique, inconsistent, underdetermined } status;
    std::vector<Scalar> x;  // a particular solution unless inconsistent
};

// Exact Gaussian elimination for A x = b.
LinearSolution solve_linear(Matrix a, std::vector<Scalar> b);
// Throws MathError for singular input.
Matrix invert(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);

}  // namespace sewprop
