#include "rician/predictive.hpp"

#include "rician/error.hpp"
#include "rician/rng.hpp"

namespace rician {

PredictiveDraws draw_predictive(const Chain& c, std::uint64_t seed) {
  if (c.total_draws() == 0) throw DomainError("draw_predictive: chain has no draws");
  Engine engine = make_engine(seed, StreamPurpose::kPredictive);
  PredictiveDraws out;
  out.values.reserve(c.total_draws());
  for (const auto& run : c.runs) {
    for (const auto& d : run.draws) {
      const RicianParams p(d.eta, d.alpha);
      double y;
      do {
        y = draw(p, engine);
      } while (!(y > 0.0));
      out.values.push_back(y);
    }
  }
  return out;
}

PredictiveSummary predictive_summary(const PredictiveDraws& d, double level) {
  if (d.values.empty()) throw DomainError("predictive_summary: no draws");
  const ParamSummary s = summarize_values(d.values, level);
  return {level, s.mean, s.median, s.sd, s.lo, s.hi};
}

}  // namespace rician
