#include "hybcore/duration_monad.hpp"

#include <algorithm>
#include <cmath>

namespace hybcore {

DurationAccumulator::DurationAccumulator(const EvalParams& params)
    : zeno_eps_(params.zeno_eps),
      window_cap_(static_cast<std::size_t>(std::max(1, params.zeno_window))),
      horizon_(params.horizon) {}

void DurationAccumulator::add(double d) {
    total_ += d;
    ++count_;
    window_.push_back(d);
    if (window_.size() > window_cap_) window_.pop_front();
}

SumOutcome DurationAccumulator::classify() const {
    if (count_ == 0) return {SumOutcome::Kind::ZenoLimit, 0.0};
    // Inspect at most the trailing half of what was consumed, so that small
    // budgets still leave a meaningful prefix out of the window.
    std::size_t k = std::min(window_.size(), std::max<std::size_t>(1, count_ / 2));
    double wsum = 0.0;
    for (std::size_t i = window_.size() - k; i < window_.size(); ++i) wsum += window_[i];
    if (wsum < zeno_eps_) return {SumOutcome::Kind::ZenoLimit, total_};
    if (total_ > horizon_)
        return {SumOutcome::Kind::Infinite, std::numeric_limits<double>::infinity()};
    // Trend test on the window halves: non-shrinking increments extrapolate
    // past every horizon; decaying increments may still sum to a finite
    // limit we have not reached, which stays inconclusive.
    std::size_t half = k / 2;
    if (half == 0) return {SumOutcome::Kind::Infinite, std::numeric_limits<double>::infinity()};
    double older = 0.0, newer = 0.0;
    for (std::size_t i = window_.size() - k; i < window_.size() - half; ++i) older += window_[i];
    for (std::size_t i = window_.size() - half; i < window_.size(); ++i) newer += window_[i];
    // The 0.6 cut tolerates window/period misalignment for short cycles
    // (halves then differ by at most one period) while geometric decay
    // drops well below it across a half window.
    if (newer >= 0.6 * older)
        return {SumOutcome::Kind::Infinite, std::numeric_limits<double>::infinity()};
    return {SumOutcome::Kind::Exhausted, total_};
}

SumOutcome classify_stream(DurationStream& s, const EvalParams& params) {
    DurationAccumulator acc(params);
    for (int i = 0; i < params.max_unfold; ++i) {
        std::optional<double> d = s.next();
        if (!d) return {SumOutcome::Kind::Exhausted, acc.total()};
        acc.add(*d);
        if (acc.total() > params.horizon)
            return {SumOutcome::Kind::Infinite, std::numeric_limits<double>::infinity()};
        if (acc.total() == std::numeric_limits<double>::infinity())
            return {SumOutcome::Kind::Infinite, acc.total()};
    }
    return acc.classify();
}

}  // namespace hybcore
