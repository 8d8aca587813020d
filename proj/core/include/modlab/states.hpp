#pragma once

#include <utility>
#include <vector>

#include "modlab/grid.hpp"

namespace modlab {

enum class PacketKind { gaussian, bump };

/// Shape of a single localized packet.
///
/// gaussian: psi ~ exp(-(x - center)^2 / (4 width^2)) exp(i p0 x / hbar), width = sigma.
/// bump:     psi ~ exp(-1 / (1 - u^2)) exp(i p0 x / hbar) for |u| < 1, u = (x - center) / width,
///           and exactly zero elsewhere.
struct PacketSpec {
    PacketKind kind = PacketKind::bump;
    double center = 0.0;
    double width = 1.0;
    double p0 = 0.0;
};

/// M copies of one packet at spacing L, each with its own phase and weight.
///
/// With tile_domain set, the copies tile the whole periodic domain
/// (m_slits * spacing == grid length) and wrap around it; this models an
/// unbounded grating and waives the edge-margin requirement for all but the
/// first copy.
struct SlitArraySpec {
    int m_slits = 2;
    double spacing = 1.0;
    PacketSpec packet;
    std::vector<double> phases;   // radians, one per slit
    std::vector<double> weights;  // empty means uniform
    bool tile_domain = false;
};

struct Superposition {
    WaveFunction state;
    /// Largest |<psi_i|psi_j>| over distinct input parts.
    double max_overlap;
};

WaveFunction make_packet(const Grid& grid, const PacketSpec& spec);

Superposition superpose(const std::vector<std::pair<WaveFunction, cplx>>& parts);

/// (psi1 + e^{i alpha} psi2) / sqrt(2) with psi2(x) = psi1(x - L).
WaveFunction make_two_slit(const Grid& grid, double L, const PacketSpec& packet, double alpha);

WaveFunction make_grating(const Grid& grid, const SlitArraySpec& spec);

/// Multiplies the amplitudes at sites with x in [x_lo, x_hi) by e^{i alpha}.
WaveFunction apply_region_phase(const WaveFunction& psi, double x_lo, double x_hi, double alpha);

/// Alternating 0, pi, 0, pi, ... phase pattern of the given length.
std::vector<double> alternating_phases(int m_slits);

}  // namespace modlab
