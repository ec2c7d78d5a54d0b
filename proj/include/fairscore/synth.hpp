#pragma once

#include <cstddef>
#include <cstdint>

#include "fairscore/dataset.hpp"

namespace fairscore {

struct BetaParams {
    double shape1 = 1.0;
    double shape2 = 1.0;
};

/// Beta-mixture generator settings. Pairs are emitted minority first, then
/// majority; each draws its label from Bernoulli(pos_rate of its group) and
/// its score from the Beta of its (group, label) stratum.
struct SynthSpec {
    std::size_t n_minority = 1000;
    std::size_t n_majority = 1000;
    double pos_rate_a = 0.5;
    double pos_rate_b = 0.5;
    BetaParams minority_pos{8.0, 2.0};
    BetaParams minority_neg{2.0, 8.0};
    BetaParams majority_pos{8.0, 2.0};
    BetaParams majority_neg{2.0, 8.0};
    std::uint64_t seed = 0;

    /// Throws InvalidSpec for zero counts, rates outside [0,1] or
    /// non-positive shapes.
    void validate() const;
};

/// Deterministic under `spec.seed` (boost::random::mt19937_64).
ScoreDataset generate(const SynthSpec& spec);

}  // namespace fairscore
