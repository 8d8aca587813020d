#pragma once

#include <complex>
#include <vector>

namespace modlab {

/// Enclosed flux in units of the flux quantum h/e.
struct FluxParam {
    double alpha = 0.0;
    /// alpha mod 1, in [0, 1).
    double reduced() const;
};

struct ScatterConfig {
    double k = 1.0;
    double r = 1.0;
    std::vector<double> thetas;
    /// Series runs over n = -n_max..n_max; 0 selects ceil(k r) + 24.
    int n_max = 0;
};

inline constexpr int kMinTruncationMargin = 24;
inline constexpr double kMaxTailBound = 1e-8;
inline constexpr double kBesselMaxOrder = 200.0;
inline constexpr double kBesselMaxArgument = 500.0;

int default_truncation(double kr);

/// Lanczos approximation, x > 0 and x < 171.6 (beyond that Gamma overflows a
/// double). Negative non-integers use the reflection formula.
double gamma_fn(double x);
/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// J_nu(z) for 0 <= nu <= 200, 0 <= z <= 500. Throws OutOfEnvelope.
double bessel_j(double nu, double z);

struct PartialWave {
    std::complex<double> value;
    /// Magnitude of the last four terms at each end of the series plus a
    /// rounding allowance proportional to the sum of |terms|.
    double tail = 0.0;
};

/// psi(r, theta) = sum_n (-i)^|n - alpha| J_|n - alpha|(k r) e^{i n theta}.
/// Throws TruncationTooSmall when n_max is below ceil(k r) + 24 or the tail
/// bound exceeds 1e-8.
PartialWave partial_wave_psi(const FluxParam& flux, const ScatterConfig& cfg, double theta);

struct ProfilePoint {
    double theta;
    double intensity;
    double tail;
};

std::vector<ProfilePoint> scattering_profile(const FluxParam& flux, const ScatterConfig& cfg);

/// max_theta | |psi|^2 - 1 | over the profile.
double profile_deviation(const std::vector<ProfilePoint>& profile);

}  // namespace modlab
