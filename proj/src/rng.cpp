#include "mh/rng.hpp"

#include <cmath>

namespace mh {

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::gauss() {
  // Box-Muller; two fresh uniforms per draw keeps the stream position simple.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

Complex Rng::cgauss() {
  const double re = gauss();
  const double im = gauss();
  return Complex(re, im) / std::sqrt(2.0);
}

double Rng::exponential() { return -std::log1p(-uniform()); }

}  // namespace mh
