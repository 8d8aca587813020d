#include "modlab/evolve.hpp"

#include <cmath>
#include <string>

#include "fft.hpp"
#include "modlab/error.hpp"

namespace modlab {
namespace {

void validate(const PropagatorConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) fail(ErrorCode::InvalidArgument, "dt must be positive");
    if (cfg.steps < 1) fail(ErrorCode::InvalidArgument, "steps must be positive");
    if (!(cfg.mass > 0.0)) fail(ErrorCode::InvalidArgument, "mass must be positive");
    if (cfg.snapshot_every < 1) fail(ErrorCode::InvalidArgument, "snapshot_every must be positive");
}

bool all_finite(std::span<const cplx> values) {
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

CVector half_potential_phase(const std::vector<double>& v, double dt, double hbar) {
    CVector out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::polar(1.0, -0.5 * v[j] * dt / hbar);
    return out;
}

// exp(-i p^2 dt / 2 m hbar) in transform order
std::vector<cplx> kinetic_phase(const Grid& grid, const PropagatorConfig& cfg) {
    CVector out(grid.n());
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double p = grid.p_transform_order(k);
        out[k] = std::polar(1.0, -p * p * cfg.dt / (2.0 * cfg.mass * grid.hbar()));
    }
    return out;
}

bool snapshot_due(int step, const PropagatorConfig& cfg) {
    return step % cfg.snapshot_every == 0 || step == cfg.steps;
}

}  // namespace

double kinetic_phase_per_step(const Grid& grid, const PropagatorConfig& cfg) {
    const double p = grid.p_max();
    return cfg.dt * p * p / (2.0 * cfg.mass * grid.hbar());
}

Trajectory propagate(const WaveFunction& psi, const PotentialSpec& potential, const PropagatorConfig& cfg) {
    validate(cfg);
    const Grid& grid = psi.grid();
    const std::size_t n = grid.n();
    const auto v_half = half_potential_phase(sample_potential(grid, potential), cfg.dt, grid.hbar());
    const auto kin = kinetic_phase(grid, cfg);
    const double inv_n = 1.0 / static_cast<double>(n);

    Trajectory out;
    out.phase_wrap_warning = kinetic_phase_per_step(grid, cfg) >= kPi;
    out.snapshots.push_back(psi);
    out.times.push_back(0.0);

    CVector work(psi.amps().begin(), psi.amps().end());
    for (int step = 1; step <= cfg.steps; ++step) {
        for (std::size_t j = 0; j < n; ++j) work[j] *= v_half[j];
        detail::fft_forward(work);
        for (std::size_t k = 0; k < n; ++k) work[k] *= kin[k] * inv_n;
        detail::fft_backward(work);
        for (std::size_t j = 0; j < n; ++j) work[j] *= v_half[j];

        if (snapshot_due(step, cfg)) {
            if (!all_finite(work)) {
                fail(ErrorCode::NonFiniteAmplitude, "amplitudes diverged at step " + std::to_string(step));
            }
            out.snapshots.emplace_back(grid, work);
            out.times.push_back(step * cfg.dt);
        }
    }
    return out;
}

MomentumAmplitudes free_far_field(const WaveFunction& psi) { return to_momentum(psi); }

// --- two particles ----------------------------------------------------------

TwoParticleState::TwoParticleState(Grid grid, CVector amps) : grid_(grid), amps_(std::move(amps)) {
    if (grid_.n() > kMaxTwoParticleSites) {
        fail(ErrorCode::DimCap, "two-particle grids are limited to 512 sites per axis");
    }
    if (amps_.size() != grid_.n() * grid_.n()) {
        fail(ErrorCode::GridMismatch, "two-particle amplitude count must be n*n");
    }
    const double norm = norm_squared();
    if (!std::isfinite(norm)) fail(ErrorCode::NonFiniteAmplitude, "non-finite amplitudes");
    if (std::abs(norm - 1.0) > 1e-10) {
        fail(ErrorCode::NotNormalized, "two-particle norm is " + std::to_string(norm));
    }
}

TwoParticleState TwoParticleState::normalized(Grid grid, CVector amps) {
    double sum = 0.0;
    for (const auto& a : amps) sum += std::norm(a);
    sum *= grid.dx() * grid.dx();
    if (sum == 0.0) fail(ErrorCode::ZeroState, "cannot normalize the zero state");
    const double scale = 1.0 / std::sqrt(sum);
    for (auto& a : amps) a *= scale;
    return TwoParticleState(grid, std::move(amps));
}

TwoParticleState TwoParticleState::product(const WaveFunction& first, const WaveFunction& second) {
    require_same_grid(first.grid(), second.grid());
    const std::size_t n = first.grid().n();
    if (n > kMaxTwoParticleSites) {
        fail(ErrorCode::DimCap, "two-particle grids are limited to 512 sites per axis");
    }
    CVector amps(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) amps[a * n + b] = first[a] * second[b];
    }
    return normalized(first.grid(), std::move(amps));
}

double TwoParticleState::norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto& a : amps_) sum += std::norm(a);
    return sum * grid_.dx() * grid_.dx();
}

std::vector<double> sample_interaction(const Grid& grid, const PotentialSpec& interaction) {
    const std::size_t n = grid.n();
    if (interaction.kind == PotentialKind::sampled) {
        if (interaction.samples.size() != n) {
            fail(ErrorCode::InvalidArgument, "sampled interaction length must equal the grid size");
        }
        for (double v : interaction.samples) {
            if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "interaction values must be finite");
        }
        return interaction.samples;
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto kk = static_cast<long long>(k);
        if (kk >= static_cast<long long>(n / 2)) kk -= static_cast<long long>(n);
        out[k] = potential_at(interaction, static_cast<double>(kk) * grid.dx());
        if (!std::isfinite(out[k])) fail(ErrorCode::InvalidArgument, "interaction values must be finite");
    }
    return out;
}

TwoParticleTrajectory propagate_two(const TwoParticleState& state, const PotentialSpec& interaction,
                                    const PropagatorConfig& cfg) {
    validate(cfg);
    const Grid& grid = state.grid();
    const std::size_t n = grid.n();
    const auto v12 = sample_interaction(grid, interaction);

    CVector v_half(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double v = v12[(a + n - b) % n];
            v_half[a * n + b] = std::polar(1.0, -0.5 * v * cfg.dt / grid.hbar());
        }
    }
    const double inv_nn = 1.0 / static_cast<double>(n * n);
    CVector kin(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        const double pa = grid.p_transform_order(a);
        for (std::size_t b = 0; b < n; ++b) {
            const double pb = grid.p_transform_order(b);
            const double phase = -(pa * pa + pb * pb) * cfg.dt / (2.0 * cfg.mass * grid.hbar());
            kin[a * n + b] = std::polar(1.0, phase) * inv_nn;
        }
    }

    TwoParticleTrajectory out;
    out.phase_wrap_warning = 2.0 * kinetic_phase_per_step(grid, cfg) >= kPi;
    out.snapshots.push_back(state);
    out.times.push_back(0.0);

    CVector work(state.amps().begin(), state.amps().end());
    for (int step = 1; step <= cfg.steps; ++step) {
        for (std::size_t j = 0; j < work.size(); ++j) work[j] *= v_half[j];
        detail::fft2_forward(work, n, n);
        for (std::size_t j = 0; j < work.size(); ++j) work[j] *= kin[j];
        detail::fft2_backward(work, n, n);
        for (std::size_t j = 0; j < work.size(); ++j) work[j] *= v_half[j];

        if (snapshot_due(step, cfg)) {
            if (!all_finite(work)) {
                fail(ErrorCode::NonFiniteAmplitude, "amplitudes diverged at step " + std::to_string(step));
            }
            out.snapshots.emplace_back(grid, work);
            out.times.push_back(step * cfg.dt);
        }
    }
    return out;
}

}  // namespace modlab
