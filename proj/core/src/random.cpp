#include "ged/random.hpp"

#include "ged/errors.hpp"

namespace ged {

// Marsaglia-Tsang squeeze-rejection; exact for shape >= 1, and shape < 1
// via Gamma(shape) = Gamma(shape + 1) * U^{1/shape}.
double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw domain_error("Rng::gamma: shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, vcub;
    do {
      x = normal();
      vcub = 1.0 + c * x;
    } while (vcub <= 0.0);
    vcub = vcub * vcub * vcub;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * vcub;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - vcub + std::log(vcub))) return d * vcub;
  }
}

}  // namespace ged
