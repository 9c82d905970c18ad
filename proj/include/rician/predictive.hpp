#ifndef RICIAN_PREDICTIVE_HPP
#define RICIAN_PREDICTIVE_HPP

#include <cstdint>
#include <vector>

#include "rician/mcmc.hpp"

namespace rician {

/// One new observation per posterior draw, in pooled chain order.
struct PredictiveDraws {
  std::vector<double> values;
};

/// Throws DomainError for an empty chain.
PredictiveDraws draw_predictive(const Chain& c, std::uint64_t seed);

struct PredictiveSummary {
  double level = 0.95;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

PredictiveSummary predictive_summary(const PredictiveDraws& d, double level);

}  // namespace rician

#endif
