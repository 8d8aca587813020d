#include "modlab/lab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "modlab/error.hpp"

namespace modlab::lab {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

double uniform01(std::uint64_t seed, std::uint64_t index) {
    const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const PhiloxCounter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u};
    const auto out = philox4x32_10(ctr, key);
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

LatticeSampler::LatticeSampler(const MomentumAmplitudes& amps) : LatticeSampler(amps.cell_probabilities()) {}

LatticeSampler::LatticeSampler(std::vector<double> cell_probabilities) : cdf_(std::move(cell_probabilities)) {
    if (cdf_.empty()) fail(ErrorCode::InvalidArgument, "empty distribution");
    double running = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < cdf_.size(); ++i) {
        const double w = cdf_[i];
        if (!std::isfinite(w) || w < 0.0) fail(ErrorCode::InvalidArgument, "probabilities must be finite and >= 0");
        if (w > 0.0) {
            last_positive_ = i;
            any = true;
        }
        running += w;
        cdf_[i] = running;
    }
    if (!any) fail(ErrorCode::ZeroState, "distribution has no mass");
}

std::size_t LatticeSampler::draw(std::uint64_t seed, std::uint64_t index) const {
    const double target = uniform01(seed, index) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    const auto i = static_cast<std::size_t>(it - cdf_.begin());
    return std::min(i, last_positive_);
}

std::vector<DetectionSample> sample_detections(const MomentumAmplitudes& amps, long long n_trials,
                                               std::uint64_t seed, int threads) {
    if (n_trials < 1) fail(ErrorCode::InvalidArgument, "n_trials must be at least 1");
    const LatticeSampler sampler(amps);
    const auto half = static_cast<long long>(amps.grid().n() / 2);
    const double dp = amps.grid().dp();

    std::vector<DetectionSample> out(static_cast<std::size_t>(n_trials));
    auto fill = [&](long long lo, long long hi) {
        for (long long t = lo; t < hi; ++t) {
            auto& s = out[static_cast<std::size_t>(t)];
            s.trial = t;
            s.lattice_step = static_cast<long long>(sampler.draw(seed, static_cast<std::uint64_t>(t))) - half;
            s.p_detected = static_cast<double>(s.lattice_step) * dp;
        }
    };
    const long long workers = std::clamp<long long>(threads, 1, n_trials);
    if (workers == 1) {
        fill(0, n_trials);
    } else {
        std::vector<std::thread> pool;
        const long long chunk = (n_trials + workers - 1) / workers;
        for (long long w = 0; w < workers; ++w) {
            pool.emplace_back(fill, w * chunk, std::min(n_trials, (w + 1) * chunk));
        }
        for (auto& t : pool) t.join();
    }

    long long recoil = 0;
    for (auto& s : out) {
        recoil -= s.lattice_step;
        s.recoil_step = recoil;
        s.recoil_cumulative = static_cast<double>(recoil) * dp;
    }
    return out;
}

}  // namespace modlab::lab
