#pragma once

#include <cstdint>
#include <string>

#include "biastol/errors.hpp"

namespace biastol::detail {

struct SearchOutcome {
    std::int64_t n;
    int evaluations;
};

/// Smallest n in [lo, cap] with accept(n) true, for a predicate that is
/// monotone (false ... false true ... true). Exponential bracketing from lo,
/// then bisection. Throws NoSolutionError if accept(cap) is false.
template <class Pred>
SearchOutcome smallest_accepted(std::int64_t lo, std::int64_t cap, Pred&& accept) {
    int evals = 0;
    auto test = [&](std::int64_t n) {
        ++evals;
        return static_cast<bool>(accept(n));
    };
    if (test(lo)) return {lo, evals};
    std::int64_t bad = lo;
    std::int64_t step = 1;
    std::int64_t good = -1;
    while (good < 0) {
        std::int64_t next = bad + step;
        if (next >= cap) {
            if (!test(cap)) throw NoSolutionError("no sample size up to " + std::to_string(cap) + " meets the target");
            good = cap;
            break;
        }
        if (test(next)) {
            good = next;
        } else {
            bad = next;
            step *= 2;
        }
    }
    while (good - bad > 1) {
        const std::int64_t mid = bad + (good - bad) / 2;
        if (test(mid)) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    return {good, evals};
}

}  // namespace biastol::detail
