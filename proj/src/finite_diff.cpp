#include "inrfort/finite_diff.hpp"

#include <cmath>
#include <stdexcept>

#include "inrfort/errors.hpp"

namespace inrfort {

Vector finite_difference_gradient(const std::function<double(const Vector&)>& f,
                                  const Vector& theta, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite_difference_gradient: h must be > 0");
  }
  Vector grad(theta.size(), 0.0);
  Vector probe = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double fp = f(probe);
    probe[i] = theta[i] - h;
    const double fm = f(probe);
    probe[i] = theta[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericError("finite_difference_gradient: non-finite f evaluation");
    }
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace inrfort
