#include <doctest.h>

#include <random>

#include "modlab/observables.hpp"
#include "modlab/operator_matrix.hpp"
#include "modlab/states.hpp"
#include "support.hpp"

using namespace modlab;
using Eigen::MatrixXcd;

namespace {

Eigen::VectorXcd as_vector(const WaveFunction& psi) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
    for (std::size_t j = 0; j < psi.size(); ++j) v[static_cast<Eigen::Index>(j)] = psi[j];
    return v;
}

cplx expect(const MatrixXcd& a, const WaveFunction& psi) {
    const auto v = as_vector(psi);
    return v.dot(a * v) * psi.grid().dx();
}

}  // namespace

TEST_CASE("position operator") {
    const auto g = make_grid(128, -8.0, 16.0);
    const auto x = build_x(g);
    CHECK(x.dim() == 128);
    for (std::size_t j = 0; j < g.n(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        CHECK(x.entries()(i, i) == cplx{g.x(j), 0.0});
    }
    CHECK(x.hermiticity_defect() == 0.0);
    const auto psi = make_packet(g, PacketSpec{PacketKind::gaussian, 0.7, 1.0, 0.0});
    CHECK(std::abs(x.expectation(psi) - test::mean_x(psi)) < 1e-12);
    CHECK_ERROR(build_x(make_grid(2048, 0.0, 1.0)), ErrorCode::DimCap);
}

TEST_CASE("momentum operator") {
    const auto g = make_grid(128, -16.0, 32.0);
    const auto p = build_p(g);
    CHECK(p.is_hermitian());

    const std::size_t target = 70;
    CVector wave(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) wave[j] = std::polar(1.0, g.p(target) * g.x(j));
    const auto applied = p.apply(wave);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) worst = std::max(worst, std::abs(applied[j] - g.p(target) * wave[j]));
    CHECK(worst < 1e-12);

    // -i hbar times a centered difference agrees to O(dx^2)
    auto fd_error = [](std::size_t n) {
        const auto grid = make_grid(n, -16.0, 32.0);
        const auto psi = make_packet(grid, PacketSpec{PacketKind::gaussian, 0.0, 1.5, 0.5});
        const auto spectral = build_p(grid).apply(psi.amps());
        double err = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const cplx fd = cplx{0.0, -1.0} * (psi[j + 1] - psi[j - 1]) / (2.0 * grid.dx());
            err = std::max(err, std::abs(fd - spectral[j]));
        }
        return err;
    };
    const double coarse = fd_error(256);
    const double fine = fd_error(512);
    CHECK(coarse / fine > 3.8);
    CHECK(coarse / fine < 4.2);
}

TEST_CASE("canonical commutator on interior states") {
    const auto g = make_grid(256, -16.0, 32.0);
    const MatrixXcd x = build_x(g).entries();
    const MatrixXcd p = build_p(g).entries();
    const MatrixXcd comm = x * p - p * x;
    for (double c : {-3.0, 0.0, 2.5}) {
        const auto psi = make_packet(g, PacketSpec{PacketKind::gaussian, c, 1.0, 0.4});
        CHECK(std::abs(expect(comm, psi) - cplx{0.0, 1.0}) < 1e-6);
    }
}

TEST_CASE("translation operator") {
    const auto g = make_grid(64, -8.0, 16.0);
    const auto id = build_translation(g, 0.0);
    CHECK(max_abs(id.entries() - MatrixXcd::Identity(64, 64)) == 0.0);

    const auto one = build_translation(g, g.dx());
    for (Eigen::Index a = 0; a < 64; ++a) {
        for (Eigen::Index b = 0; b < 64; ++b) {
            const double expected = b == (a + 1) % 64 ? 1.0 : 0.0;
            CHECK(std::abs(one.entries()(a, b) - expected) < 1e-14);
        }
    }

    for (double L : {3.0 * g.dx(), 0.37}) {
        const MatrixXcd fwd = build_translation(g, L).entries();
        const MatrixXcd back = build_translation(g, -L).entries();
        CHECK(max_abs(fwd * back - MatrixXcd::Identity(64, 64)) < 1e-13);
        CHECK(max_abs(fwd * fwd.adjoint() - MatrixXcd::Identity(64, 64)) < 1e-12);
    }

    // off-lattice matrix agrees with the spectral translate
    const auto psi = make_packet(g, PacketSpec{PacketKind::gaussian, 0.0, 1.5, 0.3});
    CHECK(test::max_diff(build_translation(g, 0.37).apply(psi.amps()), translate(psi, 0.37).amps()) < 1e-12);
}

TEST_CASE("kinetic energy commutes with on-lattice translations") {
    const auto g = make_grid(256, -32.0, 64.0);
    const MatrixXcd k = build_kinetic(g, 1.5).entries();
    const MatrixXcd t = build_translation(g, 8.0 * g.dx()).entries();
    CHECK(max_abs(k * t - t * k) < 1e-13);
    const MatrixXcd p = build_p(g).entries();
    CHECK(max_abs(k - p * p / 3.0) < 1e-10);
}

TEST_CASE("operator identity for d/dt exp(ipL/hbar)") {
    const auto g = make_grid(256, -32.0, 64.0);
    const double L = 8.0 * g.dx();

    const auto zero = verify_translation_identity(g, PotentialSpec::zero(), L);
    CHECK(zero.residual < 1e-14);
    CHECK(zero.correction_norm == 0.0);

    const auto barrier = verify_translation_identity(g, PotentialSpec::barrier(3.0, -2.0, 5.0), L);
    CHECK(barrier.residual < 1e-12 * barrier.potential_scale);
    CHECK(barrier.correction_norm == doctest::Approx(3.0));
    CHECK(barrier.kinetic_commutator < 1e-13);

    std::vector<double> periodic(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) periodic[j] = std::sin(2.0 * kPi * static_cast<double>(j % 8) / 8.0) + 0.5;
    const auto per = verify_translation_identity(g, PotentialSpec::sampled(periodic), L);
    CHECK(per.residual < 1e-12 * per.potential_scale);
    CHECK(per.correction_norm == 0.0);

    CHECK_ERROR(verify_translation_identity(g, PotentialSpec::zero(), 0.3), ErrorCode::OffLatticeL);
}

TEST_CASE("Weyl monomial matrices") {
    const auto g = make_grid(128, -16.0, 32.0);
    const MatrixXcd x = build_x(g).entries();
    const MatrixXcd p = build_p(g).entries();

    const auto xp = weyl_matrix(g, 1, 1);
    CHECK(max_abs(xp.entries() - (x * p + p * x) / 2.0) < 1e-12);
    CHECK(xp.is_hermitian());

    const MatrixXcd p3 = p * p * p;
    CHECK(max_abs(weyl_matrix(g, 0, 3).entries() - p3) <= 1e-12 * max_abs(p3));

    for (int nx = 0; nx <= 6; ++nx) {
        for (int mp = 0; nx + mp <= 6; ++mp) {
            const auto w = weyl_matrix(g, nx, mp);
            CHECK(w.hermiticity_defect() <= 1e-10 * std::max(1.0, max_abs(w.entries())));
        }
    }

    // on interior states, the symmetrized (2,2) monomial is the average of all orderings
    const MatrixXcd avg = (x * x * p * p + x * p * x * p + x * p * p * x + p * x * x * p + p * x * p * x +
                           p * p * x * x) / 6.0;
    const auto w22 = weyl_matrix(g, 2, 2);
    const auto psi = make_packet(g, PacketSpec{PacketKind::gaussian, 1.0, 1.5, 0.5});
    CHECK(std::abs(w22.expectation(psi) - expect(avg, psi)) < 1e-11);
    CHECK(std::abs(w22.expectation(psi).imag()) < 1e-10);
    CHECK(std::abs(w22.expectation(psi).real() - weyl_moment(psi, {2, 2})) < 1e-10);

    CHECK_ERROR(weyl_matrix(g, 4, 3), ErrorCode::DegreeCap);
}

TEST_CASE("classical comparator") {
    SUBCASE("free motion keeps p fixed") {
        auto traj = classical_trajectory({0.0, 1.3}, PotentialSpec::zero(), 0.1, 100);
        for (const auto& s : traj) CHECK(s.p == 1.3);
        CHECK(traj.back().x == doctest::Approx(13.0));
    }

    SUBCASE("harmonic energy has no secular drift") {
        const auto v = PotentialSpec::harmonic(1.0);
        const double dt = 2.0 * kPi / 1000.0;
        const ClassicalState start{1.0, 0.0};
        const double e0 = classical_energy(start, v);
        ClassicalState s = start;
        double swing = 0.0;
        for (int i = 0; i < 100000; ++i) {
            s = classical_step(s, v, dt);
            swing = std::max(swing, std::abs(classical_energy(s, v) - e0));
        }
        CHECK(std::abs(classical_energy(s, v) - e0) < 1e-6);
        // leapfrog conserves a shadow energy; the true energy oscillates by (omega dt)^2 / 4 relative
        CHECK(swing <= 1.01 * dt * dt / 4.0 * e0);
    }

    SUBCASE("cos(pL/hbar) follows the chain rule to second order") {
        const auto v = PotentialSpec::gaussian_well(2.0, 1.0);
        const double L = 1.7;
        auto chain_error = [&](double dt) {
            const int steps = static_cast<int>(std::lround(1.0 / dt));
            const auto traj = classical_trajectory({-1.0, 0.8}, v, dt, steps);
            double err = 0.0;
            for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
                const double lhs = (std::cos(traj[k + 1].p * L) - std::cos(traj[k - 1].p * L)) / (2.0 * dt);
                const double rhs = std::sin(traj[k].p * L) * L * potential_slope(nullptr, v, traj[k].x);
                err = std::max(err, std::abs(lhs - rhs));
            }
            return err;
        };
        const double e1 = chain_error(0.02);
        const double e2 = chain_error(0.01);
        CHECK(e1 / e2 > 3.5);
        CHECK(e1 / e2 < 4.5);
    }

    CHECK_ERROR(classical_step({0.0, 0.0}, PotentialSpec::barrier(1.0, -1.0, 1.0), 0.1), ErrorCode::NonDifferentiableV);
}

TEST_CASE("conserved modular pair lies on a conic") {
    CHECK(ellipse_check(0.0, 2.0, 1.0, 64) < 1e-14);
    // P L / hbar = pi / 2 makes the conic the unit circle
    CHECK(ellipse_check(kPi / 2.0 / 3.0, 3.0, 1.0, 64) < 1e-13);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, conic_residual(u(rng) - 5.0, u(rng), u(rng), u(rng) - 5.0));
    CHECK(worst < 1e-12);

    CHECK_ERROR(ellipse_check(1.0, 1.0, 1.0, 8), ErrorCode::InvalidArgument);
}
