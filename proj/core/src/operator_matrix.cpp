#include "modlab/operator_matrix.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "fft.hpp"
#include "modlab/error.hpp"

namespace modlab {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;

void check_dim(const Grid& grid) {
    if (grid.n() > kMaxOperatorDim) {
        fail(ErrorCode::DimCap, "operator matrices are limited to 1024 sites, got " + std::to_string(grid.n()));
    }
}

// Circulant matrix whose eigenvalue on the k-th Fourier mode is symbol(p_k).
MatrixXcd circulant(const Grid& grid, const std::function<cplx(double)>& symbol) {
    const std::size_t n = grid.n();
    CVector column(n);
    for (std::size_t k = 0; k < n; ++k) column[k] = symbol(grid.p_transform_order(k));
    detail::fft_backward(column);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& c : column) c *= inv_n;

    MatrixXcd m(static_cast<Index>(n), static_cast<Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            m(static_cast<Index>(a), static_cast<Index>(b)) = column[(a + n - b) % n];
        }
    }
    return m;
}

double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) fail(ErrorCode::InvalidArgument, "operator matrix must be square");
    if (static_cast<std::size_t>(entries_.rows()) > kMaxOperatorDim) {
        fail(ErrorCode::DimCap, "operator matrices are limited to 1024 sites");
    }
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double OperatorMatrix::hermiticity_defect() const { return max_abs(entries_ - entries_.adjoint()); }

CVector OperatorMatrix::apply(std::span<const cplx> values) const {
    if (values.size() != dim()) fail(ErrorCode::GridMismatch, "vector length does not match operator");
    const Eigen::Map<const Eigen::VectorXcd> v(values.data(), static_cast<Index>(values.size()));
    const Eigen::VectorXcd r = entries_ * v;
    return CVector(r.data(), r.data() + r.size());
}

cplx OperatorMatrix::expectation(const WaveFunction& psi) const {
    if (psi.size() != dim()) fail(ErrorCode::GridMismatch, "state size does not match operator");
    const Eigen::Map<const Eigen::VectorXcd> v(psi.amps().data(), static_cast<Index>(psi.size()));
    return v.dot(entries_ * v) * psi.grid().dx();
}

OperatorMatrix build_x(const Grid& grid) {
    check_dim(grid);
    const auto n = static_cast<Index>(grid.n());
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (Index j = 0; j < n; ++j) m(j, j) = grid.x(static_cast<std::size_t>(j));
    return OperatorMatrix(std::move(m));
}

OperatorMatrix build_p(const Grid& grid) {
    check_dim(grid);
    return OperatorMatrix(circulant(grid, [](double p) { return cplx{p, 0.0}; }));
}

OperatorMatrix build_kinetic(const Grid& grid, double mass) {
    check_dim(grid);
    if (!(mass > 0.0)) fail(ErrorCode::InvalidArgument, "mass must be positive");
    return OperatorMatrix(circulant(grid, [mass](double p) { return cplx{p * p / (2.0 * mass), 0.0}; }));
}

OperatorMatrix build_potential(const Grid& grid, const PotentialSpec& potential) {
    check_dim(grid);
    const auto v = sample_potential(grid, potential);
    const auto n = static_cast<Index>(grid.n());
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (Index j = 0; j < n; ++j) m(j, j) = v[static_cast<std::size_t>(j)];
    return OperatorMatrix(std::move(m));
}

OperatorMatrix build_translation(const Grid& grid, double L) {
    check_dim(grid);
    const std::size_t n = grid.n();
    if (const auto steps = grid.lattice_steps(L)) {
        const auto nn = static_cast<long long>(n);
        const auto shift = static_cast<std::size_t>((((*steps) % nn) + nn) % nn);
        MatrixXcd m = MatrixXcd::Zero(static_cast<Index>(n), static_cast<Index>(n));
        for (std::size_t a = 0; a < n; ++a) m(static_cast<Index>(a), static_cast<Index>((a + shift) % n)) = 1.0;
        return OperatorMatrix(std::move(m));
    }
    const double hbar = grid.hbar();
    return OperatorMatrix(circulant(grid, [L, hbar](double p) { return std::polar(1.0, p * L / hbar); }));
}

TranslationIdentityCheck verify_translation_identity(const Grid& grid, const PotentialSpec& potential, double L, double mass) {
    check_dim(grid);
    const auto steps = grid.lattice_steps(L);
    if (!steps) fail(ErrorCode::OffLatticeL, "L must be a multiple of dx for the exact identity");

    const auto kinetic = build_kinetic(grid, mass).entries();
    const auto pot = build_potential(grid, potential).entries();
    const auto t = build_translation(grid, L).entries();
    const auto v = sample_potential(grid, potential);
    const auto v_shift = shifted_potential(grid, potential, *steps);

    const auto n = static_cast<Index>(grid.n());
    MatrixXcd difference = MatrixXcd::Zero(n, n);
    double scale = 0.0;
    for (Index j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        difference(j, j) = v[jj] - v_shift[jj];
        scale = std::max(scale, std::abs(v[jj]));
    }

    const MatrixXcd h = kinetic + pot;
    const cplx factor{0.0, 1.0 / grid.hbar()};
    const MatrixXcd lhs = factor * (h * t - t * h);
    const MatrixXcd correction = difference * t;
    const MatrixXcd rhs = factor * correction;

    TranslationIdentityCheck out;
    out.residual = max_abs(lhs - rhs);
    out.correction_norm = max_abs(correction);
    out.kinetic_commutator = max_abs(kinetic * t - t * kinetic);
    out.potential_scale = scale;
    return out;
}

OperatorMatrix weyl_matrix(const Grid& grid, int n_x, int m_p) {
    check_dim(grid);
    if (n_x < 0 || m_p < 0 || n_x + m_p > 6) fail(ErrorCode::DegreeCap, "Weyl monomials are limited to degree 6");
    MatrixXcd pm = circulant(grid, [m_p](double p) {
        double f = 1.0;
        for (int i = 0; i < m_p; ++i) f *= p;
        return cplx{f, 0.0};
    });
    if (n_x == 0) return OperatorMatrix(std::move(pm));

    // (X^k P^m X^(n-k))_ab = x_a^k (P^m)_ab x_b^(n-k)
    const std::size_t n = grid.n();
    std::vector<std::vector<double>> xpow(static_cast<std::size_t>(n_x) + 1, std::vector<double>(n, 1.0));
    for (int k = 1; k <= n_x; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            xpow[static_cast<std::size_t>(k)][j] = xpow[static_cast<std::size_t>(k) - 1][j] * grid.x(j);
        }
    }
    const double norm = std::ldexp(1.0, -n_x);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            double weight = 0.0;
            for (int k = 0; k <= n_x; ++k) {
                weight += binomial(n_x, k) * xpow[static_cast<std::size_t>(k)][a] *
                          xpow[static_cast<std::size_t>(n_x - k)][b];
            }
            pm(static_cast<Index>(a), static_cast<Index>(b)) *= norm * weight;
        }
    }
    return OperatorMatrix(std::move(pm));
}

// --- classical --------------------------------------------------------------

ClassicalState classical_step(const ClassicalState& state, const PotentialSpec& potential, double dt,
                              double mass, const Grid* grid) {
    if (potential.kind == PotentialKind::barrier) {
        fail(ErrorCode::NonDifferentiableV, "the classical comparator needs a differentiable potential");
    }
    if (!std::isfinite(state.x) || !std::isfinite(state.p)) {
        fail(ErrorCode::InvalidArgument, "classical state must be finite");
    }
    const double p_half = state.p - 0.5 * dt * potential_slope(grid, potential, state.x);
    const double x = state.x + dt * p_half / mass;
    const double p = p_half - 0.5 * dt * potential_slope(grid, potential, x);
    return ClassicalState{x, p};
}

std::vector<ClassicalState> classical_trajectory(const ClassicalState& start, const PotentialSpec& potential,
                                                 double dt, int steps, double mass, const Grid* grid) {
    std::vector<ClassicalState> out;
    out.reserve(static_cast<std::size_t>(std::max(steps, 0)) + 1);
    out.push_back(start);
    for (int s = 0; s < steps; ++s) out.push_back(classical_step(out.back(), potential, dt, mass, grid));
    return out;
}

double classical_energy(const ClassicalState& state, const PotentialSpec& potential, double mass,
                        const Grid* grid) {
    return state.p * state.p / (2.0 * mass) + potential_value(grid, potential, state.x);
}

double conic_residual(double p_total, double L, double hbar, double p1) {
    const double c = p_total * L / hbar;
    const double u = std::cos(p1 * L / hbar);
    const double v = std::cos((p_total - p1) * L / hbar);
    const double s = std::sin(c);
    return std::abs(u * u + v * v - 2.0 * u * v * std::cos(c) - s * s);
}

double ellipse_check(double p_total, double L, double hbar, int samples) {
    if (samples < 16) fail(ErrorCode::InvalidArgument, "ellipse_check needs at least 16 samples");
    if (!(L > 0.0) || !(hbar > 0.0)) fail(ErrorCode::InvalidArgument, "L and hbar must be positive");
    const double period = 2.0 * kPi * hbar / L;
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double p1 = -period + 2.0 * period * j / (samples - 1);
        worst = std::max(worst, conic_residual(p_total, L, hbar, p1));
    }
    return worst;
}

}  // namespace modlab
