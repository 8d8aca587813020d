#include "modlab/ab_scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "modlab/error.hpp"

namespace modlab {
namespace {

constexpr double kPiD = 3.14159265358979323846;
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};
constexpr double kSeriesLimit = 20.0;
constexpr double kRescale = 1e250;

double lanczos_sum(double xm1) {
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
    return a;
}

void check_envelope(double nu, double z) {
    if (!std::isfinite(nu) || !std::isfinite(z) || nu < 0.0 || z < 0.0 || nu > kBesselMaxOrder ||
        z > kBesselMaxArgument) {
        fail(ErrorCode::OutOfEnvelope, "bessel_j supports 0 <= nu <= 200 and 0 <= z <= 500, got nu=" +
                                           std::to_string(nu) + " z=" + std::to_string(z));
    }
}

double bessel_series(double nu, double z) {
    const long double half = static_cast<long double>(z) / 2.0L;
    const long double q = half * half;
    const long double lead = static_cast<long double>(nu) * std::log(half) - log_gamma(nu + 1.0);
    long double term = std::exp(lead);
    long double sum = term;
    const long double nul = nu;
    for (int k = 1; k < 1000; ++k) {
        term *= -q / (static_cast<long double>(k) * (nul + static_cast<long double>(k)));
        sum += term;
        if (static_cast<long double>(k) > half && std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
}

// Downward recurrence from well above max(nu, z), normalized by
// (z/2)^mu = sum_k (mu + 2k) Gamma(mu + k) / k! J_{mu+2k}(z).
double bessel_miller(double nu, double z) {
    const double mu = nu - std::floor(nu);
    const auto m = static_cast<int>(std::floor(nu));
    const double top = std::max(static_cast<double>(m), z);
    const int start = static_cast<int>(std::ceil(top + 20.0 + std::sqrt(40.0 * top)));

    std::vector<double> weight(static_cast<std::size_t>(start / 2) + 2);
    if (mu == 0.0) {
        std::fill(weight.begin(), weight.end(), 2.0);
        weight[0] = 1.0;
    } else {
        weight[0] = gamma_fn(mu + 1.0);
        double g = weight[0];  // Gamma(mu + k) / k! at k = 1
        for (std::size_t k = 1; k < weight.size(); ++k) {
            weight[k] = (mu + 2.0 * static_cast<double>(k)) * g;
            g *= (mu + static_cast<double>(k)) / static_cast<double>(k + 1);
        }
    }

    double above = 0.0;  // f_{j+1}
    double here = 1.0;   // f_j
    double norm = (start % 2 == 0) ? weight[static_cast<std::size_t>(start / 2)] * here : 0.0;
    double wanted = (start == m) ? here : 0.0;
    for (int j = start; j > 0; --j) {
        const double below = 2.0 * (mu + j) / z * here - above;
        above = here;
        here = below;
        const int order = j - 1;
        if (order == m) wanted = here;
        if (order % 2 == 0) norm += weight[static_cast<std::size_t>(order / 2)] * here;
        if (std::fabs(here) > kRescale) {
            here /= kRescale;
            above /= kRescale;
            norm /= kRescale;
            wanted /= kRescale;
        }
    }
    return wanted * std::pow(z / 2.0, mu) / norm;
}

std::complex<double> minus_i_power(double s) {
    return std::polar(1.0, -0.5 * kPiD * std::fmod(s, 4.0));
}

struct Coefficients {
    int n_max = 0;
    std::vector<std::complex<double>> a;  // a[n + n_max]
};

Coefficients coefficients(const FluxParam& flux, const ScatterConfig& cfg) {
    if (!(cfg.k > 0.0) || !(cfg.r > 0.0) || !std::isfinite(cfg.k) || !std::isfinite(cfg.r)) {
        fail(ErrorCode::InvalidArgument, "k and r must be positive and finite");
    }
    if (!std::isfinite(flux.alpha)) fail(ErrorCode::InvalidArgument, "alpha must be finite");
    const double kr = cfg.k * cfg.r;
    const int minimum = default_truncation(kr);
    const int n_max = cfg.n_max == 0 ? minimum : cfg.n_max;
    if (n_max < minimum) {
        fail(ErrorCode::TruncationTooSmall, "n_max=" + std::to_string(n_max) + " is below ceil(kr)+24=" +
                                                std::to_string(minimum));
    }
    Coefficients out;
    out.n_max = n_max;
    out.a.resize(static_cast<std::size_t>(2 * n_max + 1));
    for (int n = -n_max; n <= n_max; ++n) {
        const double s = std::fabs(static_cast<double>(n) - flux.alpha);
        out.a[static_cast<std::size_t>(n + n_max)] = minus_i_power(s) * bessel_j(s, kr);
    }
    return out;
}

PartialWave sum_series(const Coefficients& c, double theta) {
    const int n_max = c.n_max;
    auto term = [&](int n) {
        return c.a[static_cast<std::size_t>(n + n_max)] * std::polar(1.0, static_cast<double>(n) * theta);
    };
    std::complex<double> sum{0.0, 0.0};
    double magnitude = 0.0;
    double tail = 0.0;
    for (int n = n_max; n >= 1; --n) {
        const auto hi = term(n);
        const auto lo = term(-n);
        sum += hi + lo;
        magnitude += std::abs(hi) + std::abs(lo);
        if (n > n_max - 4) tail += std::abs(hi) + std::abs(lo);
    }
    const auto zero = term(0);
    sum += zero;
    magnitude += std::abs(zero);
    tail += static_cast<double>(2 * n_max + 1) * std::numeric_limits<double>::epsilon() * magnitude;
    return PartialWave{sum, tail};
}

void check_tail(const PartialWave& w) {
    if (!(w.tail <= kMaxTailBound)) {
        fail(ErrorCode::TruncationTooSmall, "partial-wave tail bound " + std::to_string(w.tail) + " exceeds 1e-8");
    }
}

}  // namespace

double FluxParam::reduced() const {
    const double r = alpha - std::floor(alpha);
    return r >= 1.0 ? 0.0 : r;
}

int default_truncation(double kr) { return static_cast<int>(std::ceil(kr)) + kMinTruncationMargin; }

double gamma_fn(double x) {
    if (!std::isfinite(x)) fail(ErrorCode::OutOfEnvelope, "gamma_fn needs a finite argument");
    if (x <= 0.0 && x == std::floor(x)) fail(ErrorCode::OutOfEnvelope, "gamma_fn has poles at non-positive integers");
    if (x > 171.6) fail(ErrorCode::OutOfEnvelope, "gamma_fn overflows above 171.6; use log_gamma");
    if (x < 0.5) return kPiD / (std::sin(kPiD * x) * gamma_fn(1.0 - x));
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    const double half_power = std::pow(t, 0.5 * (xm1 + 0.5));
    return std::sqrt(2.0 * kPiD) * half_power * (half_power * std::exp(-t)) * lanczos_sum(xm1);
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::OutOfEnvelope, "log_gamma needs a positive argument");
    if (x < 0.5) return std::log(kPiD / std::sin(kPiD * x)) - log_gamma(1.0 - x);
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPiD) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

double bessel_j(double nu, double z) {
    check_envelope(nu, z);
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (z <= kSeriesLimit) return bessel_series(nu, z);
    return bessel_miller(nu, z);
}

PartialWave partial_wave_psi(const FluxParam& flux, const ScatterConfig& cfg, double theta) {
    const auto w = sum_series(coefficients(flux, cfg), theta);
    check_tail(w);
    return w;
}

std::vector<ProfilePoint> scattering_profile(const FluxParam& flux, const ScatterConfig& cfg) {
    const auto c = coefficients(flux, cfg);
    std::vector<ProfilePoint> out;
    out.reserve(cfg.thetas.size());
    for (double theta : cfg.thetas) {
        const auto w = sum_series(c, theta);
        check_tail(w);
        out.push_back(ProfilePoint{theta, std::norm(w.value), w.tail});
    }
    return out;
}

double profile_deviation(const std::vector<ProfilePoint>& profile) {
    double worst = 0.0;
    for (const auto& p : profile) worst = std::max(worst, std::fabs(p.intensity - 1.0));
    return worst;
}

}  // namespace modlab
