#pragma once

#include <optional>
#include <span>
#include <vector>

#include "modlab/evolve.hpp"
#include "modlab/grid.hpp"
#include "modlab/potential.hpp"

namespace modlab {

// --- translation operator ---------------------------------------------------

/// <exp(i k p L / hbar)> evaluated independently in position space
/// (overlap with the shifted state) and in momentum space (phase-weighted
/// momentum density).
struct TranslationRoutes {
    cplx position;
    cplx momentum;
};

TranslationRoutes translation_expect_routes(const WaveFunction& psi, double L, int k = 1);

/// <exp(i k p L / hbar)>; throws InternalInconsistency when the two routes
/// differ by more than 1e-11.
cplx translation_expect(const WaveFunction& psi, double L, int k = 1);

// --- modular momentum -------------------------------------------------------

/// Distribution of p mod (2 pi hbar / L) on [0, period) together with its
/// Fourier coefficients c_k = <exp(i k p L / hbar)>, k = 1..k_max.
struct ModularDistribution {
    double L = 0.0;
    double period = 0.0;
    int bins = 0;
    std::vector<double> density;  // probability per bin, sums to 1
    std::vector<cplx> fourier;    // fourier[k - 1] = c_k
};

/// Folds lattice cell probabilities into `bins` equal bins of [0, period).
/// Each lattice cell [p_i - dp/2, p_i + dp/2) carries its probability
/// uniformly and is split exactly across the bins it covers.
std::vector<double> fold_cells(const Grid& grid, std::span<const double> cell_probabilities, double period,
                               int bins);

ModularDistribution modular_distribution(const WaveFunction& psi, double L, int bins, int k_max);

/// c_k reconstructed from bin midpoints.
cplx fourier_from_bins(const ModularDistribution& dist, int k);

/// Worst-case |fourier_from_bins - c_k| from quantizing each cell to its bin
/// midpoint: pi k (1/bins + dp/period).
double bin_quadrature_bound(const Grid& grid, double period, int bins, int k);

/// Half the L1 distance between two distributions of equal length.
double tv_distance(std::span<const double> a, std::span<const double> b);
double tv_from_uniform(std::span<const double> density);

// --- Weyl-ordered moments ---------------------------------------------------

struct MomentSpec {
    int n_x = 0;
    int m_p = 0;
};

inline constexpr int kMaxMomentDegree = 6;

enum class WeylRoute {
    /// X and P applied to the state as diagonal and spectral operators.
    operator_action,
    /// Dense Weyl matrix from the operator-matrix engine (n <= 1024).
    matrix,
};

/// W(x^n p^m) psi = 2^-n sum_k C(n,k) X^k P^m X^(n-k) psi.
CVector apply_weyl(const WaveFunction& psi, MomentSpec spec);

/// <W(x^n p^m)>. Pure powers use the position or momentum density; mixed
/// moments go through the chosen route. Throws DegreeCap beyond degree 6,
/// MatrixPathTooLarge for the matrix route on n > 1024, and
/// InternalInconsistency if the imaginary residue exceeds 1e-10 relative.
double weyl_moment(const WaveFunction& psi, MomentSpec spec, WeylRoute route = WeylRoute::operator_action);

double expect_x(const WaveFunction& psi);
double expect_p(const WaveFunction& psi);

/// sum_i |psi~(p_i)|^2 p_i^power dp for any power >= 0.
double momentum_moment(const WaveFunction& psi, int power);

// --- nonlocal equation of motion --------------------------------------------

/// (i/hbar) < (V(x) - V(x + L)) exp(i p L / hbar) >. Requires L on the lattice.
cplx eom_force_term(const WaveFunction& psi, const PotentialSpec& potential, double L);

struct EomResidual {
    std::vector<double> times;       // interior snapshot times (empty for raw input)
    std::vector<cplx> derivative;    // centered difference of <T_L>
    std::vector<cplx> force_term;    // right-hand side
    std::vector<double> residual;    // |derivative - force_term|
    double max_residual() const;
};

EomResidual eom_residual(std::span<const WaveFunction> snapshots, const PotentialSpec& potential, double L,
                         double dt);
/// Same, taking dt from the trajectory; throws NonUniformSampling if the
/// snapshot times are not evenly spaced.
EomResidual eom_residual(const Trajectory& trajectory, const PotentialSpec& potential, double L);

// --- far-field peaks --------------------------------------------------------

struct Peak {
    double p;
    double height;
};

/// Local maxima of |psi~|^2 above `threshold` times the global maximum,
/// refined by a three-point parabola; sorted by p. Throws NoPeaks.
std::vector<Peak> fringe_peaks(const MomentumAmplitudes& amps, double threshold = 0.1);

// --- Taylor series of the translation operator ------------------------------

struct TaylorSeries {
    std::vector<cplx> partial_sums;   // S_J for J = 0..orders (truncated on overflow)
    std::optional<int> overflow_order;
    cplx exact;                       // translation_expect(psi, L, 1)
};

inline constexpr int kMaxTaylorOrder = 40;

/// S_J = sum_{j <= J} (i L / hbar)^j <p^j> / j!
TaylorSeries taylor_divergence_demo(const WaveFunction& psi, double L, int orders);

// --- two-particle observables -----------------------------------------------

/// <exp(i (k1 p1 + k2 p2) L / hbar)>, cross-checked between position and
/// momentum routes like translation_expect. L must be on the lattice.
cplx joint_translation_expect(const TwoParticleState& state, double L, int k1, int k2);

/// Lattice-cell probabilities of p1 (particle = 0) or p2 (particle = 1),
/// ordered by increasing momentum.
std::vector<double> marginal_momentum_probabilities(const TwoParticleState& state, int particle);

double mean_total_momentum(const TwoParticleState& state);

}  // namespace modlab
