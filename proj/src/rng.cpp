#include "entwit/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace entwit {

std::vector<std::int64_t> multinomial(RngStream& rng, std::int64_t trials,
                                      const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("multinomial: empty probability vector");
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(0.0, probs[i]);
    cum[i] = acc;
  }
  if (acc <= 0.0) throw std::invalid_argument("multinomial: probabilities sum to zero");

  std::vector<std::int64_t> counts(probs.size(), 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    const double u = rng.uniform() * acc;
    size_t k = 0;
    while (k + 1 < cum.size() && u >= cum[k]) ++k;
    ++counts[k];
  }
  return counts;
}

}  // namespace entwit
