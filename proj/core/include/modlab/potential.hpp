#pragma once

#include <vector>

#include "modlab/grid.hpp"

namespace modlab {

enum class PotentialKind { zero, harmonic, barrier, gaussian_well, sampled };

/// A static potential V(x).
///
///   harmonic:      V = k_spring / 2 * (x - center)^2
///   barrier:       V = height on [x_lo, x_hi), 0 elsewhere
///   gaussian_well: V = -depth * exp(-(x - center)^2 / (2 width^2))
///   sampled:       V_j = samples[j] on the lattice
struct PotentialSpec {
    PotentialKind kind = PotentialKind::zero;
    double k_spring = 0.0;
    double center = 0.0;
    double height = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double depth = 0.0;
    double width = 1.0;
    std::vector<double> samples;

    static PotentialSpec zero();
    static PotentialSpec harmonic(double k_spring, double center = 0.0);
    static PotentialSpec barrier(double height, double x_lo, double x_hi);
    static PotentialSpec gaussian_well(double depth, double width, double center = 0.0);
    static PotentialSpec sampled(std::vector<double> samples);
};

/// Closed-form value at an arbitrary point. Sampled potentials have no
/// closed form and are rejected here.
double potential_at(const PotentialSpec& spec, double x);

/// V evaluated on every lattice site. Throws InvalidArgument for a sampled
/// spec of the wrong length or for non-finite values.
std::vector<double> sample_potential(const Grid& grid, const PotentialSpec& spec);

/// V(x + shift * dx) on the lattice, i.e. the sampled potential circularly
/// rolled by shift sites.
std::vector<double> shifted_potential(const Grid& grid, const PotentialSpec& spec, long long shift);

/// dV/dx. Sampled potentials use the slope of a periodic cubic Hermite
/// (Catmull-Rom) interpolant; barriers are not differentiable.
double potential_slope(const Grid* grid, const PotentialSpec& spec, double x);
double potential_value(const Grid* grid, const PotentialSpec& spec, double x);

}  // namespace modlab
