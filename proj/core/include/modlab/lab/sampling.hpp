#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "modlab/grid.hpp"

namespace modlab::lab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Uniform double in [0, 1) keyed by (seed, index); 53 random bits.
double uniform01(std::uint64_t seed, std::uint64_t index);

/// Inverse-CDF sampler over lattice cell probabilities.
class LatticeSampler {
public:
    explicit LatticeSampler(const MomentumAmplitudes& amps);
    explicit LatticeSampler(std::vector<double> cell_probabilities);

    /// Lattice position i (0..n-1, ordered by increasing p) for draw `index`.
    std::size_t draw(std::uint64_t seed, std::uint64_t index) const;
    std::size_t size() const noexcept { return cdf_.size(); }

private:
    std::vector<double> cdf_;
    std::size_t last_positive_ = 0;
};

struct DetectionSample {
    long long trial = 0;
    /// Signed lattice step j = i - n/2, so p_detected = j dp.
    long long lattice_step = 0;
    double p_detected = 0.0;
    /// -(sum of lattice steps so far); recoil_cumulative = recoil_step * dp.
    long long recoil_step = 0;
    double recoil_cumulative = 0.0;
};

/// One detection per trial. Identical for any thread count.
std::vector<DetectionSample> sample_detections(const MomentumAmplitudes& amps, long long n_trials,
                                               std::uint64_t seed, int threads = 1);

}  // namespace modlab::lab
