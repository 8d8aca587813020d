#pragma once

#include <cstddef>
#include <vector>

#include "modlab/grid.hpp"
#include "modlab/potential.hpp"

namespace modlab {

struct PropagatorConfig {
    double dt = 1e-3;
    int steps = 1;
    double mass = 1.0;
    /// Keep a snapshot every this many steps (t = 0 is always kept).
    int snapshot_every = 1;
};

/// dt * max|p|^2 / (2 m hbar): the largest kinetic phase advanced in one step.
double kinetic_phase_per_step(const Grid& grid, const PropagatorConfig& cfg);

struct Trajectory {
    std::vector<WaveFunction> snapshots;
    std::vector<double> times;
    /// Set when the kinetic phase per step reaches pi; the run still completes.
    bool phase_wrap_warning = false;
};

/// Strang-split evolution exp(-iV dt/2h) exp(-i p^2 dt/2mh) exp(-iV dt/2h).
Trajectory propagate(const WaveFunction& psi, const PotentialSpec& potential, const PropagatorConfig& cfg);

/// Detection-screen distribution after unbounded free flight, i.e. the
/// momentum amplitudes of the state.
MomentumAmplitudes free_far_field(const WaveFunction& psi);

inline constexpr std::size_t kMaxTwoParticleSites = 512;

/// Psi(x1, x2) stored row-major: amps[i1 * n + i2].
class TwoParticleState {
public:
    TwoParticleState(Grid grid, CVector amps);

    static TwoParticleState normalized(Grid grid, CVector amps);
    static TwoParticleState product(const WaveFunction& first, const WaveFunction& second);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> amps() const noexcept { return amps_; }
    const cplx& at(std::size_t i1, std::size_t i2) const noexcept { return amps_[i1 * grid_.n() + i2]; }

    double norm_squared() const noexcept;

private:
    Grid grid_;
    CVector amps_;
};

struct TwoParticleTrajectory {
    std::vector<TwoParticleState> snapshots;
    std::vector<double> times;
    bool phase_wrap_warning = false;
};

/// V(x1 - x2) on the periodic difference lattice: entry k holds the
/// interaction at separation d_k = k dx wrapped into [-length/2, length/2).
/// Closed-form kinds are evaluated at d_k; sampled kinds are indexed by k.
std::vector<double> sample_interaction(const Grid& grid, const PotentialSpec& interaction);

TwoParticleTrajectory propagate_two(const TwoParticleState& state, const PotentialSpec& interaction,
                                    const PropagatorConfig& cfg);

}  // namespace modlab
