#include "ged/rician.hpp"

#include <cmath>

#include "ged/errors.hpp"
#include "ged/special_functions.hpp"

namespace ged {

RicianChannel::RicianChannel(double los_amplitude_, double los_phase_,
                             double scatter_variance_)
    : los_amplitude(los_amplitude_),
      los_phase(los_phase_),
      scatter_variance(scatter_variance_) {
  if (!(los_amplitude >= 0.0))
    throw domain_error("RicianChannel: LoS amplitude must be nonnegative");
  if (!(scatter_variance > 0.0))
    throw domain_error("RicianChannel: scatter variance must be positive");
}

RicianChannel RicianChannel::from_k_factor(double k_factor, double scatter_variance,
                                           double los_phase) {
  if (!(k_factor >= 0.0))
    throw domain_error("RicianChannel: K-factor must be nonnegative");
  return RicianChannel(std::sqrt(k_factor * scatter_variance), los_phase,
                       scatter_variance);
}

void fill_h(Rng& rng, const RicianChannel& channel,
            std::span<std::complex<double>> out) {
  const double mr = channel.los_amplitude * std::cos(channel.los_phase);
  const double mi = channel.los_amplitude * std::sin(channel.los_phase);
  const double c = std::sqrt(channel.scatter_variance / 2.0);
  for (auto& h : out)
    h = {mr + c * rng.normal(), mi + c * rng.normal()};
}

std::vector<std::complex<double>> sample_h(const RicianChannel& channel,
                                           std::size_t count, std::uint64_t seed) {
  if (count < 1) throw domain_error("sample_h: count must be >= 1");
  std::vector<std::complex<double>> out(count);
  Rng rng(seed);
  fill_h(rng, channel, out);
  return out;
}

double unit_rice_abs_moment(double n, double alpha) {
  if (!(n > -2.0))
    throw domain_error("unit_rice_abs_moment: moment order must exceed -2");
  if (!(alpha >= 0.0))
    throw domain_error("unit_rice_abs_moment: alpha must be nonnegative");
  const double a2 = alpha * alpha;
  return std::exp(ln_gamma(0.5 * n + 1.0) - 0.5 * n * std::log1p(a2)) *
         kummer_1f1(-0.5 * n, 1.0, -a2);
}

}  // namespace ged
