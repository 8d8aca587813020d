#include "modlab/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "modlab/error.hpp"

namespace modlab {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// exp(i * 2 pi * j * ratio) with the integer part of j*ratio removed first.
cplx unit_phase(long long j, double ratio) {
    const double turns = static_cast<double>(j) * ratio;
    const double frac = turns - std::nearbyint(turns);
    return std::polar(1.0, 2.0 * kPi * frac);
}

long long signed_index(std::size_t i, std::size_t n) {
    return static_cast<long long>(i) - static_cast<long long>(n / 2);
}

std::size_t transform_slot(std::size_t i, std::size_t n) { return (i + n / 2) % n; }

}  // namespace

Grid::Grid(std::size_t n, double x0, double length, double hbar)
    : n_(n), x0_(x0), length_(length), hbar_(hbar) {
    if (!is_power_of_two(n) || n < 8) {
        fail(ErrorCode::NonPowerOfTwo, "grid size must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !(hbar > 0.0) || !std::isfinite(length) || !std::isfinite(hbar) ||
        !std::isfinite(x0)) {
        fail(ErrorCode::NonPositiveDomain, "length and hbar must be finite and positive");
    }
}

std::vector<double> Grid::positions() const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
    return out;
}

std::vector<double> Grid::momenta() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = p(i);
    return out;
}

std::optional<long long> Grid::lattice_steps(double a) const noexcept {
    const double steps = a / dx();
    const double rounded = std::nearbyint(steps);
    if (std::abs(steps - rounded) > 1e-9) return std::nullopt;
    return static_cast<long long>(rounded);
}

Grid make_grid(std::size_t n, double x0, double length, double hbar) {
    return Grid(n, x0, length, hbar);
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) fail(ErrorCode::GridMismatch, "operands live on different grids");
}

// --- WaveFunction -----------------------------------------------------------

WaveFunction::WaveFunction(Grid grid, CVector amps) : grid_(grid), amps_(std::move(amps)) {
    if (amps_.size() != grid_.n()) {
        fail(ErrorCode::GridMismatch, "amplitude count does not match grid size");
    }
    const double norm = norm_squared();
    if (!std::isfinite(norm)) fail(ErrorCode::NonFiniteAmplitude, "non-finite amplitudes");
    if (std::abs(norm - 1.0) > 1e-10) {
        fail(ErrorCode::NotNormalized, "wavefunction norm is " + std::to_string(norm));
    }
}

WaveFunction WaveFunction::normalized(Grid grid, CVector amps) {
    double sum = 0.0;
    for (const auto& a : amps) sum += std::norm(a);
    sum *= grid.dx();
    if (!std::isfinite(sum)) fail(ErrorCode::NonFiniteAmplitude, "non-finite amplitudes");
    if (sum == 0.0) fail(ErrorCode::ZeroState, "cannot normalize the zero vector");
    const double scale = 1.0 / std::sqrt(sum);
    for (auto& a : amps) a *= scale;
    return WaveFunction(grid, std::move(amps));
}

double WaveFunction::norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto& a : amps_) sum += std::norm(a);
    return sum * grid_.dx();
}

std::vector<double> WaveFunction::density() const {
    std::vector<double> out(amps_.size());
    for (std::size_t j = 0; j < amps_.size(); ++j) out[j] = std::norm(amps_[j]);
    return out;
}

// --- MomentumAmplitudes -----------------------------------------------------

MomentumAmplitudes::MomentumAmplitudes(Grid grid, CVector amps) : grid_(grid), amps_(std::move(amps)) {
    if (amps_.size() != grid_.n()) {
        fail(ErrorCode::GridMismatch, "amplitude count does not match grid size");
    }
}

double MomentumAmplitudes::norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto& a : amps_) sum += std::norm(a);
    return sum * grid_.dp();
}

std::vector<double> MomentumAmplitudes::density() const {
    std::vector<double> out(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) out[i] = std::norm(amps_[i]);
    return out;
}

std::vector<double> MomentumAmplitudes::cell_probabilities() const {
    auto out = density();
    const double dp = grid_.dp();
    for (auto& v : out) v *= dp;
    return out;
}

// --- transforms -------------------------------------------------------------

CVector to_momentum(const Grid& grid, std::span<const cplx> values) {
    const std::size_t n = grid.n();
    if (values.size() != n) fail(ErrorCode::GridMismatch, "vector length does not match grid");
    CVector work(values.begin(), values.end());
    detail::fft_forward(work);

    const double scale = grid.dx() / std::sqrt(grid.planck());
    const double ratio = grid.x0() / grid.length();
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long long j = signed_index(i, n);
        out[i] = scale * std::conj(unit_phase(j, ratio)) * work[transform_slot(i, n)];
    }
    return out;
}

CVector from_momentum(const Grid& grid, std::span<const cplx> values) {
    const std::size_t n = grid.n();
    if (values.size() != n) fail(ErrorCode::GridMismatch, "vector length does not match grid");
    const double ratio = grid.x0() / grid.length();
    CVector work(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long long j = signed_index(i, n);
        work[transform_slot(i, n)] = values[i] * unit_phase(j, ratio);
    }
    detail::fft_backward(work);
    const double scale = grid.dp() / std::sqrt(grid.planck());
    for (auto& v : work) v *= scale;
    return work;
}

MomentumAmplitudes to_momentum(const WaveFunction& psi) {
    return MomentumAmplitudes(psi.grid(), to_momentum(psi.grid(), psi.amps()));
}

WaveFunction from_momentum(const MomentumAmplitudes& phi) {
    return WaveFunction(phi.grid(), from_momentum(phi.grid(), phi.amps()));
}

cplx inner(const Grid& grid, std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != grid.n() || b.size() != grid.n()) {
        fail(ErrorCode::GridMismatch, "vector length does not match grid");
    }
    cplx sum{0.0, 0.0};
    for (std::size_t j = 0; j < a.size(); ++j) sum += std::conj(a[j]) * b[j];
    return sum * grid.dx();
}

cplx inner(const WaveFunction& psi, const WaveFunction& phi) {
    require_same_grid(psi.grid(), phi.grid());
    return inner(psi.grid(), psi.amps(), phi.amps());
}

WaveFunction translate(const WaveFunction& psi, double a) {
    const Grid& grid = psi.grid();
    const std::size_t n = grid.n();
    CVector work(psi.amps().begin(), psi.amps().end());
    detail::fft_forward(work);
    // p_k a / hbar = 2 pi k a / length
    const double ratio = a / grid.length();
    for (std::size_t k = 0; k < n; ++k) {
        long long kk = static_cast<long long>(k);
        if (kk >= static_cast<long long>(n / 2)) kk -= static_cast<long long>(n);
        work[k] *= unit_phase(kk, ratio);
    }
    detail::fft_backward(work);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& v : work) v *= inv_n;
    return WaveFunction(grid, std::move(work));
}

CVector roll(std::span<const cplx> values, long long steps) {
    const auto n = static_cast<long long>(values.size());
    CVector out(values.size());
    if (n == 0) return out;
    const long long shift = ((steps % n) + n) % n;
    for (long long j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>((j + shift) % n)];
    return out;
}

WaveFunction roll(const WaveFunction& psi, long long steps) {
    return WaveFunction(psi.grid(), roll(psi.amps(), steps));
}

CVector apply_momentum_power(const Grid& grid, std::span<const cplx> values, int power) {
    const std::size_t n = grid.n();
    if (values.size() != n) fail(ErrorCode::GridMismatch, "vector length does not match grid");
    if (power < 0) fail(ErrorCode::InvalidArgument, "negative momentum power");
    CVector work(values.begin(), values.end());
    if (power == 0) return work;
    detail::fft_forward(work);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = grid.p_transform_order(k);
        double factor = 1.0;
        for (int m = 0; m < power; ++m) factor *= p;
        work[k] *= factor;
    }
    detail::fft_backward(work);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& v : work) v *= inv_n;
    return work;
}

}  // namespace modlab
