#include <doctest.h>

#include "modlab/grid.hpp"
#include "modlab/states.hpp"
#include "support.hpp"

using namespace modlab;
using modlab::test::max_diff;

namespace {

// Closed-form transform of the unit-normalized Gaussian (2 pi s^2)^(-1/4) exp(-x^2 / 4 s^2)
// under (1/sqrt(2 pi hbar)) * integral exp(-i p x / hbar) psi(x) dx.
cplx gaussian_ft(double p, double s, double hbar) {
    return std::pow(2.0 * s * s / (kPi * hbar * hbar), 0.25) * std::exp(-s * s * p * p / (hbar * hbar));
}

WaveFunction gaussian(const Grid& g, double s) {
    CVector v(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double x = g.x(j);
        v[j] = std::pow(2.0 * kPi * s * s, -0.25) * std::exp(-x * x / (4.0 * s * s));
    }
    return WaveFunction::normalized(g, std::move(v));
}

}  // namespace

TEST_CASE("grid construction and lattice spacing") {
    const auto g = make_grid(8, 0.0, 8.0);
    CHECK(g.dx() == 1.0);
    CHECK(g.dp() == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(g.p(0) == doctest::Approx(-kPi).epsilon(1e-15));

    const auto g2 = make_grid(256, -64.0, 128.0);
    CHECK(g2.dx() == 0.5);
    CHECK(std::abs(g2.dp() - 0.049087385212340519351) < 1e-16);
    CHECK(g2.dx() * static_cast<double>(g2.n()) == g2.length());

    CHECK_ERROR(make_grid(7, 0.0, 1.0), ErrorCode::NonPowerOfTwo);
    CHECK_ERROR(make_grid(4, 0.0, 1.0), ErrorCode::NonPowerOfTwo);
    CHECK_ERROR(make_grid(16, 0.0, 0.0), ErrorCode::NonPositiveDomain);
    CHECK_ERROR(make_grid(16, 0.0, 1.0, -1.0), ErrorCode::NonPositiveDomain);
}

TEST_CASE("momentum lattice is symmetric apart from the Nyquist point") {
    const auto g = make_grid(64, -3.0, 10.0, 0.7);
    for (std::size_t i = 1; i < g.n(); ++i) CHECK(g.p(i) == doctest::Approx(-g.p(g.n() - i)));
    CHECK(g.p(g.n() / 2) == 0.0);
    CHECK(g.p(0) == -g.p_max());
}

TEST_CASE("plane wave maps to a single momentum cell") {
    const auto g = make_grid(64, -5.0, 16.0);
    const std::size_t target = g.n() / 2 + 5;
    CVector v(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) v[j] = std::polar(1.0 / std::sqrt(g.length()), g.p(target) * g.x(j));
    const auto amps = to_momentum(WaveFunction(g, v));
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double expected = i == target ? 1.0 / std::sqrt(g.dp()) : 0.0;
        CHECK(std::abs(std::abs(amps[i]) - expected) < 1e-12);
    }
}

TEST_CASE("Gaussian transform matches the analytic Fourier pair") {
    for (double hbar : {1.0, 0.3}) {
        const auto g = make_grid(512, -20.0, 40.0, hbar);
        const double s = 1.0;
        const auto amps = to_momentum(gaussian(g, s));
        double worst = 0.0;
        for (std::size_t i = 0; i < g.n(); ++i) worst = std::max(worst, std::abs(amps[i] - gaussian_ft(g.p(i), s, hbar)));
        CHECK(worst < 1e-12);
        CHECK(std::abs(amps.norm_squared() - 1.0) < 1e-12);
    }
}

TEST_CASE("round trip and Parseval") {
    const auto g = make_grid(256, -20.0, 40.0);
    const auto psi = make_packet(g, PacketSpec{PacketKind::bump, 1.3, 2.0, 1.7});
    const auto amps = to_momentum(psi);
    CHECK(std::abs(amps.norm_squared() - 1.0) < 1e-12);
    const auto back = from_momentum(amps);
    CHECK(max_diff(back.amps(), psi.amps()) < 1e-13);
}

TEST_CASE("inner products") {
    const auto g = make_grid(1024, -40.0, 80.0);
    const auto a = make_packet(g, PacketSpec{PacketKind::gaussian, -5.0, 1.0, 0.0});
    const auto b = make_packet(g, PacketSpec{PacketKind::gaussian, 5.0, 1.0, 0.0});
    CHECK(std::abs(inner(a, a) - 1.0) < 1e-14);
    // exp(-L^2 / 8 sigma^2) at L = 10
    CHECK(std::abs(std::abs(inner(a, b)) - 3.7266531720786709929e-6) < 1e-15);

    const auto c = make_packet(g, PacketSpec{PacketKind::bump, -3.0, 2.0, 0.0});
    const auto d = make_packet(g, PacketSpec{PacketKind::bump, 3.0, 2.0, 0.0});
    CHECK(inner(c, d) == cplx{0.0, 0.0});

    const auto other = make_grid(1024, -40.0, 81.0);
    const auto e = make_packet(other, PacketSpec{PacketKind::gaussian, 0.0, 1.0, 0.0});
    CHECK_ERROR(inner(a, e), ErrorCode::GridMismatch);
}

TEST_CASE("translation contract") {
    const auto g = make_grid(512, -16.0, 32.0);
    const auto psi = make_packet(g, PacketSpec{PacketKind::bump, 0.5, 2.0, 0.4});

    CHECK(max_diff(translate(psi, 0.0).amps(), psi.amps()) < 1e-15);
    CHECK(max_diff(translate(psi, g.length()).amps(), psi.amps()) < 1e-13);

    // bump at c moved by a = m dx lands at c - m dx, matching a direct index roll
    const long long m = 37;
    const auto moved = translate(psi, static_cast<double>(m) * g.dx());
    CVector rolled(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) rolled[j] = psi[(j + static_cast<std::size_t>(m)) % g.n()];
    CHECK(max_diff(moved.amps(), rolled) < 1e-13);

    // sign: a > 0 moves <x> by -a
    const double a = 1.234;
    CHECK(test::mean_x(translate(psi, a)) == doctest::Approx(test::mean_x(psi) - a).epsilon(1e-10));

    // composition and unitarity
    const auto ab = translate(translate(psi, 0.77), -2.31);
    CHECK(max_diff(ab.amps(), translate(psi, 0.77 - 2.31).amps()) < 1e-12);
    CHECK(std::abs(translate(psi, 0.3141).norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("wave functions reject bad normalization") {
    const auto g = make_grid(16, 0.0, 16.0);
    CHECK_ERROR(WaveFunction(g, CVector(16, cplx{1.0, 0.0})), ErrorCode::NotNormalized);
    CHECK_ERROR(WaveFunction::normalized(g, CVector(16)), ErrorCode::ZeroState);
    CHECK_ERROR(WaveFunction(g, CVector(8)), ErrorCode::GridMismatch);
}
