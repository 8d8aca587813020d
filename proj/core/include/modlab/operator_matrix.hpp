#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "modlab/grid.hpp"
#include "modlab/potential.hpp"

namespace modlab {

inline constexpr std::size_t kMaxOperatorDim = 1024;

/// Dense operator in the position-lattice basis.
class OperatorMatrix {
public:
    explicit OperatorMatrix(Eigen::MatrixXcd entries);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }

    /// max |A - A^dagger|
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

    CVector apply(std::span<const cplx> values) const;
    /// <psi|A|psi> with the lattice measure dx.
    cplx expectation(const WaveFunction& psi) const;

private:
    Eigen::MatrixXcd entries_;
};

double max_abs(const Eigen::MatrixXcd& m);

OperatorMatrix build_x(const Grid& grid);
/// Spectral momentum: the circulant F^dagger diag(p) F.
OperatorMatrix build_p(const Grid& grid);
/// P^2 / 2m built from its own spectral symbol.
OperatorMatrix build_kinetic(const Grid& grid, double mass = 1.0);
OperatorMatrix build_potential(const Grid& grid, const PotentialSpec& potential);
/// exp(i p L / hbar). When L is a multiple of dx this is the exact circular
/// shift (T psi)_j = psi_{j+m}; otherwise the spectral circulant.
OperatorMatrix build_translation(const Grid& grid, double L);

struct TranslationIdentityCheck {
    /// max | (i/h)[H, T_L] - (i/h) diag(V(x) - V(x+L)) T_L |
    double residual = 0.0;
    /// max | diag(V(x) - V(x+L)) T_L |
    double correction_norm = 0.0;
    /// max | [P^2/2m, T_L] |
    double kinetic_commutator = 0.0;
    /// max |V|
    double potential_scale = 0.0;
};

/// Checks d/dt T_L = (i/h)(V(x) - V(x+L)) T_L as a matrix identity.
/// Requires L on the lattice.
TranslationIdentityCheck verify_translation_identity(const Grid& grid, const PotentialSpec& potential, double L, double mass = 1.0);

/// W(x^n p^m) = 2^-n sum_k C(n,k) X^k P^m X^(n-k).
OperatorMatrix weyl_matrix(const Grid& grid, int n_x, int m_p);

// --- classical comparator ---------------------------------------------------

struct ClassicalState {
    double x = 0.0;
    double p = 0.0;
};

/// One kick-drift-kick leapfrog step. Sampled potentials need their grid.
ClassicalState classical_step(const ClassicalState& state, const PotentialSpec& potential, double dt,
                              double mass = 1.0, const Grid* grid = nullptr);

std::vector<ClassicalState> classical_trajectory(const ClassicalState& start, const PotentialSpec& potential,
                                                 double dt, int steps, double mass = 1.0,
                                                 const Grid* grid = nullptr);

double classical_energy(const ClassicalState& state, const PotentialSpec& potential, double mass = 1.0,
                        const Grid* grid = nullptr);

// --- conserved modular pair -------------------------------------------------

/// |u^2 + v^2 - 2uv cos C - sin^2 C| with u = cos(p1 L/h), v = cos((P - p1) L/h),
/// C = P L / h.
double conic_residual(double p_total, double L, double hbar, double p1);

/// Largest conic_residual over `samples` values of p1 spanning two periods.
double ellipse_check(double p_total, double L, double hbar, int samples);

}  // namespace modlab
