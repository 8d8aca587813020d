#include "modlab/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modlab/error.hpp"

namespace modlab {
namespace {

void check_resolution(const Grid& grid, const PacketSpec& spec) {
    if (!(spec.width > 4.0 * grid.dx())) {
        fail(ErrorCode::ResolutionGuard,
             "packet width " + std::to_string(spec.width) + " must exceed 4*dx = " +
                 std::to_string(4.0 * grid.dx()));
    }
}

void check_margin(const Grid& grid, double center, double width) {
    const double lo = grid.x0();
    const double hi = grid.x0() + grid.length();
    // support half-extent plus a margin of four widths on each side
    if (center - 5.0 * width < lo - 1e-12 || center + 5.0 * width > hi + 1e-12) {
        fail(ErrorCode::EdgeMargin, "packet at " + std::to_string(center) + " with width " +
                                        std::to_string(width) + " is too close to the domain edge");
    }
}

CVector packet_values(const Grid& grid, const PacketSpec& spec, double center) {
    const double hbar = grid.hbar();
    CVector out(grid.n(), cplx{0.0, 0.0});
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const double x = grid.x(j);
        const double u = (x - center) / spec.width;
        double envelope = 0.0;
        if (spec.kind == PacketKind::gaussian) {
            envelope = std::exp(-0.25 * u * u);
        } else if (std::abs(u) < 1.0) {
            envelope = std::exp(-1.0 / (1.0 - u * u));
        }
        if (envelope == 0.0) continue;
        out[j] = envelope * std::polar(1.0, spec.p0 * x / hbar);
    }
    return out;
}

CVector normalized_values(const Grid& grid, CVector values) {
    const auto psi = WaveFunction::normalized(grid, std::move(values));
    return CVector(psi.amps().begin(), psi.amps().end());
}

void validate_slits(const Grid& grid, const SlitArraySpec& spec) {
    if (spec.m_slits < 2) fail(ErrorCode::InvalidArgument, "a slit array needs at least two slits");
    if (!(spec.spacing > 0.0)) fail(ErrorCode::InvalidArgument, "slit spacing must be positive");
    if (static_cast<int>(spec.phases.size()) != spec.m_slits) {
        fail(ErrorCode::InvalidArgument, "expected one phase per slit");
    }
    if (!spec.weights.empty()) {
        if (static_cast<int>(spec.weights.size()) != spec.m_slits) {
            fail(ErrorCode::InvalidArgument, "expected one weight per slit");
        }
        if (std::any_of(spec.weights.begin(), spec.weights.end(),
                        [](double w) { return !(w >= 0.0) || !std::isfinite(w); })) {
            fail(ErrorCode::InvalidArgument, "slit weights must be finite and non-negative");
        }
    }
    if (spec.packet.kind == PacketKind::bump && !(spec.spacing > 2.0 * spec.packet.width)) {
        fail(ErrorCode::DisjointnessViolated, "bump supports of neighbouring slits intersect");
    }
    if (spec.tile_domain) {
        const double covered = spec.m_slits * spec.spacing;
        if (std::abs(covered - grid.length()) > 1e-9 * grid.length()) {
            fail(ErrorCode::InvalidArgument, "a tiled grating must cover the whole domain");
        }
        if (!grid.lattice_steps(spec.spacing)) {
            fail(ErrorCode::OffLatticeL, "a tiled grating needs spacing on the lattice");
        }
    }
}

}  // namespace

WaveFunction make_packet(const Grid& grid, const PacketSpec& spec) {
    if (!(spec.width > 0.0) || !std::isfinite(spec.width) || !std::isfinite(spec.center) ||
        !std::isfinite(spec.p0)) {
        fail(ErrorCode::InvalidArgument, "packet parameters must be finite with width > 0");
    }
    check_resolution(grid, spec);
    check_margin(grid, spec.center, spec.width);
    return WaveFunction::normalized(grid, packet_values(grid, spec, spec.center));
}

Superposition superpose(const std::vector<std::pair<WaveFunction, cplx>>& parts) {
    if (parts.empty()) fail(ErrorCode::ZeroState, "no parts to superpose");
    const Grid& grid = parts.front().first.grid();
    bool any_nonzero = false;
    for (const auto& [psi, coeff] : parts) {
        require_same_grid(grid, psi.grid());
        any_nonzero = any_nonzero || coeff != cplx{0.0, 0.0};
    }
    if (!any_nonzero) fail(ErrorCode::ZeroState, "all superposition coefficients are zero");

    CVector sum(grid.n(), cplx{0.0, 0.0});
    for (const auto& [psi, coeff] : parts) {
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += coeff * psi[j];
    }

    double max_overlap = 0.0;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        for (std::size_t b = a + 1; b < parts.size(); ++b) {
            max_overlap = std::max(max_overlap, std::abs(inner(parts[a].first, parts[b].first)));
        }
    }
    return Superposition{WaveFunction::normalized(grid, std::move(sum)), max_overlap};
}

WaveFunction make_grating(const Grid& grid, const SlitArraySpec& spec) {
    validate_slits(grid, spec);
    const WaveFunction base = make_packet(grid, spec.packet);
    const auto steps = grid.lattice_steps(spec.spacing);

    CVector sum(grid.n(), cplx{0.0, 0.0});
    for (int m = 0; m < spec.m_slits; ++m) {
        const double weight = spec.weights.empty() ? 1.0 : spec.weights[static_cast<std::size_t>(m)];
        const cplx coeff = weight * std::polar(1.0, spec.phases[static_cast<std::size_t>(m)]);
        const double center = spec.packet.center + m * spec.spacing;

        CVector copy;
        if (m == 0) {
            copy.assign(base.amps().begin(), base.amps().end());
        } else if (steps) {
            // copy(x) = base(x - m L): an exact lattice shift
            if (!spec.tile_domain) check_margin(grid, center, spec.packet.width);
            copy = roll(base.amps(), -(*steps) * m);
        } else {
            check_margin(grid, center, spec.packet.width);
            copy = normalized_values(grid, packet_values(grid, spec.packet, center));
        }
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += coeff * copy[j];
    }
    return WaveFunction::normalized(grid, std::move(sum));
}

WaveFunction make_two_slit(const Grid& grid, double L, const PacketSpec& packet, double alpha) {
    SlitArraySpec spec;
    spec.m_slits = 2;
    spec.spacing = L;
    spec.packet = packet;
    spec.phases = {0.0, alpha};
    return make_grating(grid, spec);
}

WaveFunction apply_region_phase(const WaveFunction& psi, double x_lo, double x_hi, double alpha) {
    const Grid& grid = psi.grid();
    const double lo = grid.x0();
    const double hi = grid.x0() + grid.length();
    if (!(x_lo < x_hi) || x_lo < lo - 1e-12 || x_hi > hi + 1e-12) {
        fail(ErrorCode::BadInterval, "phase region must satisfy x0 <= x_lo < x_hi <= x0 + length");
    }
    CVector out(psi.amps().begin(), psi.amps().end());
    const cplx phase = std::polar(1.0, alpha);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double x = grid.x(j);
        if (x >= x_lo && x < x_hi) out[j] *= phase;
    }
    return WaveFunction(grid, std::move(out));
}

std::vector<double> alternating_phases(int m_slits) {
    std::vector<double> out(static_cast<std::size_t>(std::max(m_slits, 0)));
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = (m % 2 == 0) ? 0.0 : kPi;
    return out;
}

}  // namespace modlab
