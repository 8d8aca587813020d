#include "modlab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "modlab/error.hpp"
#include "modlab/operator_matrix.hpp"

namespace modlab {
namespace {

constexpr double kRouteTolerance = 1e-11;

cplx unit_phase(long long j, double ratio) {
    const double turns = static_cast<double>(j) * ratio;
    const double frac = turns - std::nearbyint(turns);
    return std::polar(1.0, 2.0 * kPi * frac);
}

long long signed_index(std::size_t i, std::size_t n) {
    return static_cast<long long>(i) - static_cast<long long>(n / 2);
}

long long require_lattice(const Grid& grid, double L) {
    const auto steps = grid.lattice_steps(L);
    if (!steps) fail(ErrorCode::OffLatticeL, "L = " + std::to_string(L) + " is not a multiple of dx");
    return *steps;
}

double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

void check_degree(MomentSpec spec) {
    if (spec.n_x < 0 || spec.m_p < 0 || spec.n_x + spec.m_p > kMaxMomentDegree) {
        fail(ErrorCode::DegreeCap, "moment degree must be between 0 and 6");
    }
}

void scale_by_position_power(const Grid& grid, CVector& v, int power) {
    if (power == 0) return;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = grid.x(j);
        double f = 1.0;
        for (int i = 0; i < power; ++i) f *= x;
        v[j] *= f;
    }
}

}  // namespace

// --- translation ------------------------------------------------------------

TranslationRoutes translation_expect_routes(const WaveFunction& psi, double L, int k) {
    if (k < 1) fail(ErrorCode::InvalidArgument, "translation multiple k must be >= 1");
    const Grid& grid = psi.grid();
    const double shift = k * L;

    TranslationRoutes out{};
    if (const auto steps = grid.lattice_steps(shift)) {
        const auto shifted = roll(psi.amps(), *steps);
        out.position = inner(grid, psi.amps(), shifted);
    } else {
        out.position = inner(psi, translate(psi, shift));
    }

    const auto amps = to_momentum(psi);
    const double ratio = shift / grid.length();
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        sum += std::norm(amps[i]) * unit_phase(signed_index(i, grid.n()), ratio);
    }
    out.momentum = sum * grid.dp();
    return out;
}

cplx translation_expect(const WaveFunction& psi, double L, int k) {
    const auto routes = translation_expect_routes(psi, L, k);
    const double gap = std::abs(routes.position - routes.momentum);
    if (gap > kRouteTolerance) {
        fail(ErrorCode::InternalInconsistency,
             "position and momentum evaluations of <T_L> differ by " + std::to_string(gap));
    }
    return routes.position;
}

// --- modular distribution ---------------------------------------------------

std::vector<double> fold_cells(const Grid& grid, std::span<const double> cell_probabilities, double period,
                               int bins) {
    if (bins < 1) fail(ErrorCode::InvalidArgument, "bins must be positive");
    if (cell_probabilities.size() != grid.n()) fail(ErrorCode::GridMismatch, "cell count must equal n");
    const double dp = grid.dp();
    if (!(period >= dp)) fail(ErrorCode::PeriodUnderResolved, "modular period is shorter than a lattice cell");

    const auto nb = static_cast<std::size_t>(bins);
    const double width = period / bins;
    std::vector<double> out(nb, 0.0);
    for (std::size_t i = 0; i < cell_probabilities.size(); ++i) {
        const double q = cell_probabilities[i];
        if (q == 0.0) continue;
        const double lo = grid.p(i) - 0.5 * dp;
        double u = lo - period * std::floor(lo / period);
        auto b = static_cast<std::size_t>(std::floor(u / width));
        if (b >= nb) {
            b = 0;
            u = 0.0;
        }
        double remaining = dp;
        const double rate = q / dp;
        while (remaining > 1e-15 * dp) {
            const double edge = static_cast<double>(b + 1) * width;
            const double segment = std::min(remaining, std::max(edge - u, 0.0));
            out[b] += rate * segment;
            remaining -= segment;
            b = (b + 1) % nb;
            u = static_cast<double>(b) * width;
        }
    }
    return out;
}

ModularDistribution modular_distribution(const WaveFunction& psi, double L, int bins, int k_max) {
    if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "L must be positive");
    if (bins < 8) fail(ErrorCode::InvalidArgument, "at least 8 bins are required");
    if (k_max < 0) fail(ErrorCode::InvalidArgument, "k_max must be non-negative");
    const Grid& grid = psi.grid();
    const double period = grid.planck() / L;
    if (period < 4.0 * grid.dp() * (1.0 - 1e-12)) {
        fail(ErrorCode::PeriodUnderResolved, "modular cell h/L spans fewer than 4 momentum lattice cells");
    }

    ModularDistribution out;
    out.L = L;
    out.period = period;
    out.bins = bins;
    const auto probs = to_momentum(psi).cell_probabilities();
    out.density = fold_cells(grid, probs, period, bins);
    out.fourier.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) out.fourier.push_back(translation_expect(psi, L, k));
    return out;
}

cplx fourier_from_bins(const ModularDistribution& dist, int k) {
    cplx sum{0.0, 0.0};
    const double bins = static_cast<double>(dist.bins);
    for (std::size_t b = 0; b < dist.density.size(); ++b) {
        sum += dist.density[b] * std::polar(1.0, 2.0 * kPi * k * (static_cast<double>(b) + 0.5) / bins);
    }
    return sum;
}

double bin_quadrature_bound(const Grid& grid, double period, int bins, int k) {
    return kPi * std::abs(k) * (1.0 / bins + grid.dp() / period);
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "distributions differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return 0.5 * sum;
}

double tv_from_uniform(std::span<const double> density) {
    if (density.empty()) return 0.0;
    const double u = 1.0 / static_cast<double>(density.size());
    double sum = 0.0;
    for (double d : density) sum += std::abs(d - u);
    return 0.5 * sum;
}

// --- Weyl moments -----------------------------------------------------------

CVector apply_weyl(const WaveFunction& psi, MomentSpec spec) {
    check_degree(spec);
    const Grid& grid = psi.grid();
    CVector out(grid.n(), cplx{0.0, 0.0});
    for (int k = 0; k <= spec.n_x; ++k) {
        CVector v(psi.amps().begin(), psi.amps().end());
        scale_by_position_power(grid, v, spec.n_x - k);
        v = apply_momentum_power(grid, v, spec.m_p);
        scale_by_position_power(grid, v, k);
        const double c = binomial(spec.n_x, k);
        for (std::size_t j = 0; j < v.size(); ++j) out[j] += c * v[j];
    }
    const double norm = std::ldexp(1.0, -spec.n_x);
    for (auto& v : out) v *= norm;
    return out;
}

double momentum_moment(const WaveFunction& psi, int power) {
    if (power < 0) fail(ErrorCode::InvalidArgument, "negative moment order");
    const auto amps = to_momentum(psi);
    const Grid& grid = psi.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) sum += std::norm(amps[i]) * std::pow(grid.p(i), power);
    return sum * grid.dp();
}

double weyl_moment(const WaveFunction& psi, MomentSpec spec, WeylRoute route) {
    check_degree(spec);
    const Grid& grid = psi.grid();
    if (route == WeylRoute::matrix && grid.n() > kMaxOperatorDim) {
        fail(ErrorCode::MatrixPathTooLarge, "matrix route is limited to n <= 1024");
    }
    if (spec.m_p == 0) {
        double sum = 0.0;
        for (std::size_t j = 0; j < grid.n(); ++j) sum += std::norm(psi[j]) * std::pow(grid.x(j), spec.n_x);
        return sum * grid.dx();
    }
    if (spec.n_x == 0) return momentum_moment(psi, spec.m_p);

    cplx value;
    if (route == WeylRoute::matrix) {
        const auto w = weyl_matrix(grid, spec.n_x, spec.m_p);
        value = w.expectation(psi);
    } else {
        value = inner(grid, psi.amps(), apply_weyl(psi, spec));
    }
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
        fail(ErrorCode::InternalInconsistency,
             "Weyl moment has imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

double expect_x(const WaveFunction& psi) { return weyl_moment(psi, {1, 0}); }
double expect_p(const WaveFunction& psi) { return weyl_moment(psi, {0, 1}); }

// --- equation of motion -----------------------------------------------------

cplx eom_force_term(const WaveFunction& psi, const PotentialSpec& potential, double L) {
    const Grid& grid = psi.grid();
    const long long steps = require_lattice(grid, L);
    const auto v = sample_potential(grid, potential);
    const auto v_shift = shifted_potential(grid, potential, steps);
    const auto shifted = roll(psi.amps(), steps);
    cplx sum{0.0, 0.0};
    for (std::size_t j = 0; j < grid.n(); ++j) sum += std::conj(psi[j]) * (v[j] - v_shift[j]) * shifted[j];
    return cplx{0.0, 1.0 / grid.hbar()} * sum * grid.dx();
}

double EomResidual::max_residual() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, r);
    return m;
}

EomResidual eom_residual(std::span<const WaveFunction> snapshots, const PotentialSpec& potential, double L,
                         double dt) {
    if (snapshots.size() < 3) fail(ErrorCode::InvalidArgument, "need at least three snapshots");
    if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
    const Grid& grid = snapshots.front().grid();
    require_lattice(grid, L);

    std::vector<cplx> expectation;
    expectation.reserve(snapshots.size());
    for (const auto& psi : snapshots) {
        require_same_grid(grid, psi.grid());
        expectation.push_back(translation_expect(psi, L, 1));
    }

    EomResidual out;
    for (std::size_t i = 1; i + 1 < snapshots.size(); ++i) {
        const cplx derivative = (expectation[i + 1] - expectation[i - 1]) / (2.0 * dt);
        const cplx force = eom_force_term(snapshots[i], potential, L);
        out.derivative.push_back(derivative);
        out.force_term.push_back(force);
        out.residual.push_back(std::abs(derivative - force));
    }
    return out;
}

EomResidual eom_residual(const Trajectory& trajectory, const PotentialSpec& potential, double L) {
    const auto& t = trajectory.times;
    if (t.size() < 3) fail(ErrorCode::InvalidArgument, "need at least three snapshots");
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt) {
            fail(ErrorCode::NonUniformSampling, "snapshot times are not evenly spaced");
        }
    }
    auto out = eom_residual(trajectory.snapshots, potential, L, dt);
    out.times.assign(t.begin() + 1, t.end() - 1);
    return out;
}

// --- fringe peaks -----------------------------------------------------------

std::vector<Peak> fringe_peaks(const MomentumAmplitudes& amps, double threshold) {
    const auto d = amps.density();
    const Grid& grid = amps.grid();
    const double global = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
    std::vector<Peak> out;
    if (global > 0.0) {
        for (std::size_t i = 1; i + 1 < d.size(); ++i) {
            if (!(d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] >= threshold * global)) continue;
            const double left = d[i - 1], mid = d[i], right = d[i + 1];
            const double curvature = left - 2.0 * mid + right;
            double offset = 0.0;
            if (curvature != 0.0) offset = 0.5 * (left - right) / curvature;
            out.push_back(Peak{grid.p(i) + offset * grid.dp(), mid - 0.25 * (left - right) * offset});
        }
    }
    if (out.empty()) fail(ErrorCode::NoPeaks, "no local maxima above threshold");
    return out;
}

// --- Taylor series ----------------------------------------------------------

TaylorSeries taylor_divergence_demo(const WaveFunction& psi, double L, int orders) {
    if (orders < 0 || orders > kMaxTaylorOrder) {
        fail(ErrorCode::InvalidArgument, "orders must lie in [0, 40]");
    }
    const Grid& grid = psi.grid();
    const auto probs = to_momentum(psi).cell_probabilities();
    std::vector<double> powers(probs.size(), 1.0);

    TaylorSeries out;
    out.exact = translation_expect(psi, L, 1);
    const cplx step{0.0, L / grid.hbar()};
    cplx coefficient{1.0, 0.0};
    cplx partial{0.0, 0.0};
    for (int j = 0; j <= orders; ++j) {
        if (j > 0) {
            coefficient *= step / static_cast<double>(j);
            for (std::size_t i = 0; i < powers.size(); ++i) powers[i] *= grid.p(i);
        }
        double moment = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) moment += probs[i] * powers[i];
        const cplx term = coefficient * moment;
        if (!std::isfinite(moment) || !std::isfinite(term.real()) || !std::isfinite(term.imag())) {
            out.overflow_order = j;
            break;
        }
        partial += term;
        out.partial_sums.push_back(partial);
    }
    return out;
}

// --- two-particle -----------------------------------------------------------

namespace {

CVector two_particle_spectrum(const TwoParticleState& state) {
    CVector work(state.amps().begin(), state.amps().end());
    detail::fft2_forward(work, state.grid().n(), state.grid().n());
    return work;
}

// |F|^2 dx^2 / n^2 is the probability of each lattice cell pair.
double cell_scale(const Grid& grid) {
    const double n = static_cast<double>(grid.n());
    return grid.dx() * grid.dx() / (n * n);
}

}  // namespace

cplx joint_translation_expect(const TwoParticleState& state, double L, int k1, int k2) {
    const Grid& grid = state.grid();
    const std::size_t n = grid.n();
    const long long steps = require_lattice(grid, L);
    const auto nn = static_cast<long long>(n);
    const auto s1 = static_cast<std::size_t>((((k1 * steps) % nn) + nn) % nn);
    const auto s2 = static_cast<std::size_t>((((k2 * steps) % nn) + nn) % nn);

    cplx position{0.0, 0.0};
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t as = (a + s1) % n;
        for (std::size_t b = 0; b < n; ++b) {
            position += std::conj(state.at(a, b)) * state.at(as, (b + s2) % n);
        }
    }
    position *= grid.dx() * grid.dx();

    const auto spectrum = two_particle_spectrum(state);
    const double scale = cell_scale(grid);
    const double r1 = k1 * L / grid.length();
    const double r2 = k2 * L / grid.length();
    cplx momentum{0.0, 0.0};
    for (std::size_t a = 0; a < n; ++a) {
        auto ka = static_cast<long long>(a);
        if (ka >= nn / 2) ka -= nn;
        const cplx pa = unit_phase(ka, r1);
        for (std::size_t b = 0; b < n; ++b) {
            auto kb = static_cast<long long>(b);
            if (kb >= nn / 2) kb -= nn;
            momentum += std::norm(spectrum[a * n + b]) * pa * unit_phase(kb, r2);
        }
    }
    momentum *= scale;

    const double gap = std::abs(position - momentum);
    if (gap > kRouteTolerance) {
        fail(ErrorCode::InternalInconsistency,
             "position and momentum evaluations of the joint translation differ by " + std::to_string(gap));
    }
    return position;
}

std::vector<double> marginal_momentum_probabilities(const TwoParticleState& state, int particle) {
    if (particle != 0 && particle != 1) fail(ErrorCode::InvalidArgument, "particle must be 0 or 1");
    const Grid& grid = state.grid();
    const std::size_t n = grid.n();
    const auto spectrum = two_particle_spectrum(state);
    const double scale = cell_scale(grid);
    std::vector<double> out(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t k = particle == 0 ? a : b;
            // transform slot k holds increasing-p index (k + n/2) mod n
            out[(k + n / 2) % n] += std::norm(spectrum[a * n + b]) * scale;
        }
    }
    return out;
}

double mean_total_momentum(const TwoParticleState& state) {
    const Grid& grid = state.grid();
    double sum = 0.0;
    for (int particle = 0; particle < 2; ++particle) {
        const auto probs = marginal_momentum_probabilities(state, particle);
        for (std::size_t i = 0; i < probs.size(); ++i) sum += probs[i] * grid.p(i);
    }
    return sum;
}

}  // namespace modlab
