#include <doctest.h>

#include <cmath>

#include "modlab/ab_scattering.hpp"
#include "modlab/grid.hpp"
#include "support.hpp"

using namespace modlab;

namespace {

std::vector<double> angles(int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(-kPi + 2.0 * kPi * i / count);
    return out;
}

ScatterConfig config(double kr, int count = 73) {
    ScatterConfig cfg;
    cfg.k = 1.0;
    cfg.r = kr;
    cfg.thetas = angles(count);
    return cfg;
}

}  // namespace

TEST_CASE("Bessel values against extended-precision references") {
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(0.3, 0.0) == 0.0);
    CHECK(std::abs(bessel_j(0.5, kPi / 2.0) - 2.0 / kPi) < 1e-12);
    CHECK(std::abs(bessel_j(1.0 / 3.0, 2.0) - 0.442939818148576212250422417736) < 1e-13);
    CHECK(std::abs(bessel_j(0.75, 25.5) - -0.0030524012307148428574866349502) < 1e-12);
    CHECK(std::abs(bessel_j(2.5, 137.0) - 0.0637401235301993653379222087444) < 1e-12);
    CHECK(std::abs(bessel_j(150.25, 300.0) - 0.0202624188395664245403475944881) < 1e-12);
}

TEST_CASE("half-integer closed form") {
    for (double z : {0.1, 1.0, 7.5, 19.9, 20.1, 60.0, 333.3}) {
        CHECK(std::abs(bessel_j(0.5, z) - std::sqrt(2.0 / (kPi * z)) * std::sin(z)) < 1e-12);
        const double j32 = std::sqrt(2.0 / (kPi * z)) * (std::sin(z) / z - std::cos(z));
        CHECK(std::abs(bessel_j(1.5, z) - j32) < 1e-12);
    }
}

TEST_CASE("Bessel sweep against the standard library") {
    double worst = 0.0;
    for (double nu = 0.0; nu <= 200.0; nu += 7.125) {
        for (double z = 0.0; z <= 500.0; z += 3.7) worst = std::max(worst, std::abs(bessel_j(nu, z) - std::cyl_bessel_j(nu, z)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("three-term recurrence") {
    double worst = 0.0;
    for (double nu = 1.0; nu < 199.0; nu += 3.3) {
        for (double z = 0.5; z <= 500.0; z += 4.9) {
            const double lhs = bessel_j(nu - 1.0, z) + bessel_j(nu + 1.0, z);
            worst = std::max(worst, std::abs(lhs - 2.0 * nu / z * bessel_j(nu, z)));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("Bessel envelope") {
    CHECK_ERROR(bessel_j(-0.5, 1.0), ErrorCode::OutOfEnvelope);
    CHECK_ERROR(bessel_j(200.5, 1.0), ErrorCode::OutOfEnvelope);
    CHECK_ERROR(bessel_j(1.0, 500.5), ErrorCode::OutOfEnvelope);
    CHECK_ERROR(bessel_j(1.0, -1.0), ErrorCode::OutOfEnvelope);
}

TEST_CASE("Gamma function") {
    CHECK(std::abs(gamma_fn(0.5) - std::sqrt(kPi)) < 1e-14);
    CHECK(std::abs(gamma_fn(0.3) - 2.9915689876875907446421606752) < 1e-12 * 2.99);
    CHECK(std::abs(log_gamma(200.5) - 860.582203509782491940926815203) < 1e-11);
    for (double s = 0.1; s < 170.0; s += 1.37) {
        CHECK(std::abs(gamma_fn(s + 1.0) / (s * gamma_fn(s)) - 1.0) < 1e-12);
        CHECK(std::abs(gamma_fn(s) / std::tgamma(s) - 1.0) < 1e-12);
    }
    for (double s = 0.5; s < 250.0; s += 2.9) CHECK(std::abs(log_gamma(s) - std::lgamma(s)) < 1e-11 * std::max(1.0, std::abs(std::lgamma(s))));
    CHECK_ERROR(gamma_fn(0.0), ErrorCode::OutOfEnvelope);
    CHECK_ERROR(gamma_fn(-2.0), ErrorCode::OutOfEnvelope);
    CHECK_ERROR(gamma_fn(180.0), ErrorCode::OutOfEnvelope);
    CHECK_ERROR(log_gamma(0.0), ErrorCode::OutOfEnvelope);
}

TEST_CASE("flux reduction") {
    CHECK(FluxParam{2.25}.reduced() == doctest::Approx(0.25));
    CHECK(FluxParam{-0.25}.reduced() == doctest::Approx(0.75));
    CHECK(FluxParam{3.0}.reduced() == 0.0);
    CHECK(default_truncation(10.0) == 34);
    CHECK(default_truncation(10.2) == 35);
}

TEST_CASE("integer flux leaves a plane wave") {
    for (double alpha : {0.0, 1.0, 2.0, -1.0}) {
        const auto profile = scattering_profile(FluxParam{alpha}, config(10.0));
        CHECK(profile_deviation(profile) < 1e-8);
        for (const auto& pt : profile) CHECK(pt.tail < 1e-8);
    }
}

TEST_CASE("unit flux shift multiplies psi by e^{i theta}") {
    const auto cfg = config(10.0, 1);
    for (double theta : {-2.0, 0.3, 1.9}) {
        const auto a = partial_wave_psi(FluxParam{0.3}, cfg, theta).value;
        const auto b = partial_wave_psi(FluxParam{1.3}, cfg, theta).value;
        CHECK(std::abs(b - std::polar(1.0, theta) * a) < 1e-9);
    }
}

TEST_CASE("periodicity and reflection of the intensity") {
    const auto cfg = config(10.0);
    for (double alpha : {0.25, 0.5, 0.75}) {
        const auto base = scattering_profile(FluxParam{alpha}, cfg);
        const auto shifted = scattering_profile(FluxParam{alpha + 3.0}, cfg);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(std::abs(base[i].intensity - shifted[i].intensity) < 1e-9);
            const double theta = base[i].theta;
            const double mirrored = std::norm(partial_wave_psi(FluxParam{-alpha}, cfg, -theta).value);
            const double complement = std::norm(partial_wave_psi(FluxParam{1.0 - alpha}, cfg, -theta).value);
            CHECK(std::abs(base[i].intensity - mirrored) < 1e-9);
            CHECK(std::abs(base[i].intensity - complement) < 1e-9);
        }
    }
}

TEST_CASE("half flux deviates most") {
    const auto cfg = config(10.0);
    std::vector<double> dev;
    for (int i = 0; i < 10; ++i) dev.push_back(profile_deviation(scattering_profile(FluxParam{0.1 * i}, cfg)));
    const auto peak = std::max_element(dev.begin(), dev.end()) - dev.begin();
    CHECK(peak == 5);
    CHECK(dev[0] < 1e-8);
    for (int i = 1; i < 5; ++i) CHECK(std::abs(dev[static_cast<std::size_t>(i)] - dev[static_cast<std::size_t>(10 - i)]) < 1e-9);
}

TEST_CASE("doubling the truncation stays inside the tail bound") {
    auto cfg = config(10.0, 1);
    for (double alpha : {0.25, 0.5, 0.75}) {
        for (double theta : {-1.0, 0.5, 2.5}) {
            cfg.n_max = 0;
            const auto base = partial_wave_psi(FluxParam{alpha}, cfg, theta);
            cfg.n_max = 2 * default_truncation(10.0);
            const auto doubled = partial_wave_psi(FluxParam{alpha}, cfg, theta);
            CHECK(std::abs(base.value - doubled.value) <= base.tail);
        }
    }
}

TEST_CASE("truncation guard") {
    auto cfg = config(10.0, 1);
    cfg.n_max = 20;
    CHECK_ERROR(partial_wave_psi(FluxParam{0.5}, cfg, 0.0), ErrorCode::TruncationTooSmall);
    cfg.n_max = 0;
    cfg.k = -1.0;
    CHECK_ERROR(partial_wave_psi(FluxParam{0.5}, cfg, 0.0), ErrorCode::InvalidArgument);
}
