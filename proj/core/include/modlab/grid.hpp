#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace modlab {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/**
 * Uniform periodic lattice on [x0, x0 + length) with n sites, together with
 * its conjugate momentum lattice p_j = (2*pi*hbar/length) * j for
 * j in [-n/2, n/2). Momentum-side indices in this library always run in
 * increasing p, i.e. index i corresponds to j = i - n/2.
 *
 * hbar is a lattice parameter rather than a global constant; h means 2*pi*hbar.
 */
class Grid {
public:
    Grid(std::size_t n, double x0, double length, double hbar = 1.0);

    std::size_t n() const noexcept { return n_; }
    double x0() const noexcept { return x0_; }
    double length() const noexcept { return length_; }
    double hbar() const noexcept { return hbar_; }
    double planck() const noexcept { return 2.0 * kPi * hbar_; }

    double dx() const noexcept { return length_ / static_cast<double>(n_); }
    double dp() const noexcept { return planck() / length_; }

    double x(std::size_t j) const noexcept { return x0_ + static_cast<double>(j) * dx(); }
    /// Momentum at increasing-p index i (i = 0 is the Nyquist point -n/2 * dp).
    double p(std::size_t i) const noexcept {
        return dp() * (static_cast<double>(i) - static_cast<double>(n_ / 2));
    }
    /// Momentum of the k-th bin in unshifted transform order.
    double p_transform_order(std::size_t k) const noexcept {
        const auto nn = static_cast<long long>(n_);
        auto kk = static_cast<long long>(k);
        if (kk >= nn / 2) kk -= nn;
        return dp() * static_cast<double>(kk);
    }
    /// Largest |p| on the lattice (the Nyquist point).
    double p_max() const noexcept { return dp() * static_cast<double>(n_ / 2); }

    std::vector<double> positions() const;
    std::vector<double> momenta() const;

    /// If a is an integer multiple of dx (to within 1e-9 of a site), the
    /// number of sites it spans.
    std::optional<long long> lattice_steps(double a) const noexcept;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t n_;
    double x0_;
    double length_;
    double hbar_;
};

Grid make_grid(std::size_t n, double x0, double length, double hbar = 1.0);

void require_same_grid(const Grid& a, const Grid& b);

/// Unit-normalized position-space amplitudes on a Grid.
class WaveFunction {
public:
    /// Takes amplitudes that are already normalized (within 1e-10).
    WaveFunction(Grid grid, CVector amps);

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static WaveFunction normalized(Grid grid, CVector amps);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> amps() const noexcept { return amps_; }
    std::size_t size() const noexcept { return amps_.size(); }
    const cplx& operator[](std::size_t j) const noexcept { return amps_[j]; }

    double norm_squared() const noexcept;
    std::vector<double> density() const;

private:
    Grid grid_;
    CVector amps_;
};

/// Momentum-space amplitudes ordered by increasing p.
class MomentumAmplitudes {
public:
    MomentumAmplitudes(Grid grid, CVector amps);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> amps() const noexcept { return amps_; }
    std::size_t size() const noexcept { return amps_.size(); }
    const cplx& operator[](std::size_t i) const noexcept { return amps_[i]; }

    /// Sum |amps|^2 dp.
    double norm_squared() const noexcept;
    /// |amps_i|^2, a probability density in p.
    std::vector<double> density() const;
    /// |amps_i|^2 dp, the probability carried by each lattice cell.
    std::vector<double> cell_probabilities() const;

private:
    Grid grid_;
    CVector amps_;
};

/// psi~(p_j) = dx / sqrt(2 pi hbar) * sum_m psi(x_m) exp(-i p_j x_m / hbar).
MomentumAmplitudes to_momentum(const WaveFunction& psi);
WaveFunction from_momentum(const MomentumAmplitudes& phi);

/// Unnormalized variants on raw position-ordered vectors.
CVector to_momentum(const Grid& grid, std::span<const cplx> values);
CVector from_momentum(const Grid& grid, std::span<const cplx> values);

/// sum conj(psi_j) phi_j dx
cplx inner(const WaveFunction& psi, const WaveFunction& phi);
cplx inner(const Grid& grid, std::span<const cplx> a, std::span<const cplx> b);

/// Applies exp(i p a / hbar): the result satisfies out(x) = psi(x + a) with
/// periodic wrap.
WaveFunction translate(const WaveFunction& psi, double a);

/// Exact circular shift: out_j = psi_{(j + steps) mod n}, i.e.
/// out(x) = psi(x + steps * dx).
WaveFunction roll(const WaveFunction& psi, long long steps);
CVector roll(std::span<const cplx> values, long long steps);

/// P^power applied spectrally to an arbitrary vector.
CVector apply_momentum_power(const Grid& grid, std::span<const cplx> values, int power);

}  // namespace modlab
