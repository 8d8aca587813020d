#include "modlab/potential.hpp"

#include <cmath>

#include "modlab/error.hpp"

namespace modlab {

PotentialSpec PotentialSpec::zero() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::harmonic(double k_spring, double center) {
    PotentialSpec s;
    s.kind = PotentialKind::harmonic;
    s.k_spring = k_spring;
    s.center = center;
    return s;
}

PotentialSpec PotentialSpec::barrier(double height, double x_lo, double x_hi) {
    PotentialSpec s;
    s.kind = PotentialKind::barrier;
    s.height = height;
    s.x_lo = x_lo;
    s.x_hi = x_hi;
    return s;
}

PotentialSpec PotentialSpec::gaussian_well(double depth, double width, double center) {
    PotentialSpec s;
    s.kind = PotentialKind::gaussian_well;
    s.depth = depth;
    s.width = width;
    s.center = center;
    return s;
}

PotentialSpec PotentialSpec::sampled(std::vector<double> samples) {
    PotentialSpec s;
    s.kind = PotentialKind::sampled;
    s.samples = std::move(samples);
    return s;
}

double potential_at(const PotentialSpec& spec, double x) {
    switch (spec.kind) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::harmonic: {
            const double d = x - spec.center;
            return 0.5 * spec.k_spring * d * d;
        }
        case PotentialKind::barrier:
            return (x >= spec.x_lo && x < spec.x_hi) ? spec.height : 0.0;
        case PotentialKind::gaussian_well: {
            const double u = (x - spec.center) / spec.width;
            return -spec.depth * std::exp(-0.5 * u * u);
        }
        case PotentialKind::sampled:
            break;
    }
    fail(ErrorCode::InvalidArgument, "a sampled potential has no closed form");
}

std::vector<double> sample_potential(const Grid& grid, const PotentialSpec& spec) {
    std::vector<double> out;
    if (spec.kind == PotentialKind::sampled) {
        if (spec.samples.size() != grid.n()) {
            fail(ErrorCode::InvalidArgument, "sampled potential length must equal the grid size");
        }
        out = spec.samples;
    } else {
        if (spec.kind == PotentialKind::gaussian_well && !(spec.width > 0.0)) {
            fail(ErrorCode::InvalidArgument, "gaussian well width must be positive");
        }
        out.resize(grid.n());
        for (std::size_t j = 0; j < grid.n(); ++j) out[j] = potential_at(spec, grid.x(j));
    }
    for (double v : out) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "potential values must be finite");
    }
    return out;
}

std::vector<double> shifted_potential(const Grid& grid, const PotentialSpec& spec, long long shift) {
    const auto base = sample_potential(grid, spec);
    const auto n = static_cast<long long>(base.size());
    const long long s = ((shift % n) + n) % n;
    std::vector<double> out(base.size());
    for (long long j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>((j + s) % n)];
    return out;
}

namespace {

struct HermiteCell {
    double y0, y1, m0, m1, t;
};

HermiteCell locate(const Grid& grid, const std::vector<double>& y, double x) {
    const auto n = static_cast<long long>(y.size());
    const double s = (x - grid.x0()) / grid.dx();
    const double fl = std::floor(s);
    const double t = s - fl;
    auto wrap = [n](long long k) { return static_cast<std::size_t>(((k % n) + n) % n); };
    const auto j = static_cast<long long>(fl);
    const double ym1 = y[wrap(j - 1)];
    const double y0 = y[wrap(j)];
    const double y1 = y[wrap(j + 1)];
    const double y2 = y[wrap(j + 2)];
    return HermiteCell{y0, y1, 0.5 * (y1 - ym1), 0.5 * (y2 - y0), t};
}

const Grid& require_grid(const Grid* grid, const PotentialSpec& spec) {
    if (grid == nullptr) fail(ErrorCode::InvalidArgument, "a sampled potential needs its grid");
    if (spec.samples.size() != grid->n()) {
        fail(ErrorCode::InvalidArgument, "sampled potential length must equal the grid size");
    }
    return *grid;
}

}  // namespace

double potential_value(const Grid* grid, const PotentialSpec& spec, double x) {
    if (spec.kind != PotentialKind::sampled) return potential_at(spec, x);
    const Grid& g = require_grid(grid, spec);
    const auto c = locate(g, spec.samples, x);
    const double t = c.t, t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * c.y0 + (t3 - 2 * t2 + t) * c.m0 + (-2 * t3 + 3 * t2) * c.y1 +
           (t3 - t2) * c.m1;
}

double potential_slope(const Grid* grid, const PotentialSpec& spec, double x) {
    switch (spec.kind) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::harmonic:
            return spec.k_spring * (x - spec.center);
        case PotentialKind::barrier:
            fail(ErrorCode::NonDifferentiableV, "barrier potentials have no slope");
        case PotentialKind::gaussian_well: {
            const double u = (x - spec.center) / spec.width;
            return spec.depth * u / spec.width * std::exp(-0.5 * u * u);
        }
        case PotentialKind::sampled: {
            const Grid& g = require_grid(grid, spec);
            const auto c = locate(g, spec.samples, x);
            const double t = c.t, t2 = t * t;
            const double dydt = (6 * t2 - 6 * t) * c.y0 + (3 * t2 - 4 * t + 1) * c.m0 +
                                (-6 * t2 + 6 * t) * c.y1 + (3 * t2 - 2 * t) * c.m1;
            return dydt / g.dx();
        }
    }
    return 0.0;
}

}  // namespace modlab
