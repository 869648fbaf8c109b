#pragma once

#include <functional>

#include "inrfort/linalg.hpp"

namespace inrfort {

// Central-difference gradient estimate (f(x + h e_i) - f(x - h e_i)) / (2h).
// Used as the independent oracle for every analytic gradient in the project
// and by the selfcheck battery. Throws NumericError if f returns a non-finite
// value, std::invalid_argument if h <= 0.
Vector finite_difference_gradient(const std::function<double(const Vector&)>& f,
                                  const Vector& theta, double h);

}  // namespace inrfort
