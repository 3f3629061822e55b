#include <doctest.h>

#include <random>

#include "cavsim/errors.hpp"
#include "cavsim/model.hpp"
#include "oracles.hpp"

using namespace cavsim;

namespace {

CavityParams cavity(double omega, double kappa_i, double kappa_e = 0.0, double gamma = 0.0) {
    return CavityParams{omega, kappa_i, kappa_e, gamma};
}

}  // namespace

TEST_CASE("direct model: uncoupled resonant pair is pure damping") {
    const auto model =
        build_direct_model(cavity(5.0, 1.0), cavity(5.0, 1.0), CouplingSpec::direct(0.0), 5.0);
    CHECK(model.matrix(0, 0) == cplx(-0.5, 0.0));
    CHECK(model.matrix(1, 1) == cplx(-0.5, 0.0));
    CHECK(model.matrix(0, 1) == cplx(0.0, 0.0));
    CHECK(model.matrix(1, 0) == cplx(0.0, 0.0));
}

TEST_CASE("direct model: symmetric resonant pair has equal diagonal and -ig off-diagonal") {
    const double kappa = 0.7;
    const double g = 0.31;
    const auto model = build_direct_model(cavity(2.0, kappa), cavity(2.0, kappa),
                                          CouplingSpec::direct(g), 2.0);
    CHECK(model.matrix(0, 0) == model.matrix(1, 1));
    CHECK(model.matrix(0, 0) == cplx(-0.5 * kappa, 0.0));
    CHECK(model.matrix(0, 1) == cplx(0.0, -g));
    CHECK(model.matrix(0, 1) == model.matrix(1, 0));
}

TEST_CASE("direct model: detuned asymmetric entries") {
    // omega1-frame=1, omega2-frame=-1, kappa1=2, kappa2=4, g=0.5
    const auto model =
        build_direct_model(cavity(11.0, 2.0), cavity(9.0, 4.0), CouplingSpec::direct(0.5), 10.0);
    CHECK(model.matrix(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(model.matrix(0, 0).imag() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(model.matrix(1, 1).real() == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(model.matrix(1, 1).imag() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(model.matrix(0, 1) == cplx(0.0, -0.5));
    CHECK(model.input_couplings(0) == 0.0);
}

TEST_CASE("direct model: rejects cable coupling and nonzero cable rates") {
    CHECK_THROWS_AS(build_direct_model(cavity(1.0, 1.0), cavity(1.0, 1.0),
                                       CouplingSpec::cable(0.3, 0.0), 1.0),
                    Error);
    try {
        build_direct_model(cavity(1.0, 1.0), cavity(1.0, 1.0), CouplingSpec::cable(0.3, 0.0), 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::VariantMismatch);
    }
    try {
        build_direct_model(cavity(1.0, 1.0, 0.0, 0.2), cavity(1.0, 1.0),
                           CouplingSpec::direct(0.1), 1.0);
        FAIL("expected inconsistent-params");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentParams);
    }
}

TEST_CASE("direct model: swapping the cavities permutes the matrix") {
    const auto a = cavity(10.3, 2.0, 0.5);
    const auto b = cavity(9.8, 0.7, 0.1);
    const auto coupling = CouplingSpec::direct(0.4);
    const auto m_ab = build_direct_model(a, b, coupling, 10.0);
    const auto m_ba = build_direct_model(b, a, coupling, 10.0);
    CHECK(m_ab.matrix(0, 0) == m_ba.matrix(1, 1));
    CHECK(m_ab.matrix(1, 1) == m_ba.matrix(0, 0));
    CHECK(m_ab.matrix(0, 1) == m_ba.matrix(1, 0));
}

TEST_CASE("cable junction fields: hand-solved quarter-wave case") {
    // a1=1, a2=0, gamma1=gamma2=1, theta=pi/2, lossless: round trip -1
    const auto fields = eliminate_cable(cplx(1.0, 0.0), cplx(0.0, 0.0),
                                        CouplingSpec::cable(0.5 * pi, 0.0), 1.0, 1.0);
    CHECK(fields.b1.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(fields.b1.imag()) < 1e-15);
    CHECK(fields.b2.imag() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(fields.b2.real()) < 1e-15);
}

TEST_CASE("cable junction fields: zero input gives zero fields") {
    const auto fields = eliminate_cable(cplx(0.0, 0.0), cplx(0.0, 0.0),
                                        CouplingSpec::cable(1.0, 0.3), 0.5, 0.25);
    CHECK(fields.b1 == cplx(0.0, 0.0));
    CHECK(fields.b2 == cplx(0.0, 0.0));
}

TEST_CASE("cable junction fields: lossless theta = m*pi is singular") {
    try {
        eliminate_cable(cplx(1.0, 0.0), cplx(0.0, 0.0), CouplingSpec::cable(0.0, 0.0), 1.0, 1.0);
        FAIL("expected singularity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CableResonanceSingularity);
    }
    CHECK_THROWS_AS(eliminate_cable(cplx(1.0, 0.0), cplx(0.0, 0.0),
                                    CouplingSpec::cable(pi, 0.0), 1.0, 1.0),
                    Error);
}

TEST_CASE("cable junction fields: solutions satisfy both junction equations") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = pi * (0.05 + 0.9 * uni(rng));
        const double gamma0_l0 = uni(rng);
        const double gamma1 = 0.01 + uni(rng);
        const double gamma2 = 0.01 + uni(rng);
        const cplx a1(uni(rng) - 0.5, uni(rng) - 0.5);
        const cplx a2(uni(rng) - 0.5, uni(rng) - 0.5);
        const auto coupling = CouplingSpec::cable(theta, gamma0_l0);
        const auto fields = eliminate_cable(a1, a2, coupling, gamma1, gamma2);

        const cplx u = cable_one_way_factor(coupling);
        const cplx lhs1 = fields.b1 - (fields.b2 * u + std::sqrt(gamma1) * a1);
        const cplx lhs2 = fields.b2 - (fields.b1 * u + std::sqrt(gamma2) * a2);
        const double scale = std::max({std::abs(fields.b1), std::abs(fields.b2), 1e-30});
        CHECK(std::abs(lhs1) / scale < 1e-12);
        CHECK(std::abs(lhs2) / scale < 1e-12);
    }
}

TEST_CASE("effective coupling: tunneling phase for the reference cable point") {
    const auto eff = effective_coupling(cavity(1.0, 0.0, 0.0, 1.0), cavity(1.0, 0.0, 0.0, 1.0),
                                        CouplingSpec::cable(pi / 10.0, 0.02));
    CHECK(std::abs(eff.zeta / pi - (1.5 - 0.0098)) < 0.0005);
}

TEST_CASE("effective coupling: quarter-wave lossless closed form") {
    const double gamma = 0.8;
    const double kappa_i = 1.3;
    const auto c = cavity(1.0, kappa_i, 0.0, gamma);
    const auto eff = effective_coupling(c, c, CouplingSpec::cable(0.5 * pi, 0.0));
    CHECK(std::abs(eff.g_eff - cplx(0.5 * gamma, 0.0)) < 1e-14);
    CHECK(std::abs(eff.delta_omega_1 - cplx(0.0, 0.5 * gamma)) < 1e-14);
    CHECK(eff.kappa_eff_1 == doctest::Approx(c.kappa() - gamma).epsilon(1e-13));
    CHECK(eff.zeta == doctest::Approx(1.5 * pi).epsilon(1e-13));
}

TEST_CASE("effective coupling: quarter-wave values match the junction-field route") {
    const double gamma = 0.8;
    const auto c = cavity(1.0, 1.3, 0.0, gamma);
    const auto coupling = CouplingSpec::cable(0.5 * pi, 0.0);
    const auto eff = effective_coupling(c, c, coupling);

    const auto induced = oracles::induced_matrix_from_junction_fields(
        [&](cplx a1, cplx a2) {
            const auto f = eliminate_cable(a1, a2, coupling, gamma, gamma);
            return std::make_pair(f.b1, f.b2);
        },
        c.omega, c.omega, c.kappa(), c.kappa(), gamma, gamma, cable_one_way_factor(coupling));

    // off-diagonal entry of the reduced generator is -i g_eff
    CHECK(std::abs(induced(0, 1) - cplx(0.0, -1.0) * eff.g_eff) < 1e-12);
    // diagonal excess over -i omega - kappa/2 is -i delta_omega
    const cplx base = cplx(0.0, -c.omega) - 0.5 * c.kappa();
    CHECK(std::abs(induced(0, 0) - base - cplx(0.0, -1.0) * eff.delta_omega_1) < 1e-12);
}

TEST_CASE("effective coupling: strongly attenuating cable decouples the cavities") {
    const auto eff = effective_coupling(cavity(1.0, 0.1, 0.0, 0.6), cavity(1.0, 0.1, 0.0, 0.4),
                                        CouplingSpec::cable(0.3, 50.0));
    CHECK(std::abs(eff.g_eff) < 1e-10 * std::sqrt(0.6 * 0.4));
    CHECK(std::abs(eff.delta_omega_1) < 1e-18);
    CHECK(eff.zeta == doctest::Approx(pi + 0.3).epsilon(1e-9));
}

TEST_CASE("effective coupling: zero gamma is rejected") {
    try {
        effective_coupling(cavity(1.0, 1.0), cavity(1.0, 1.0, 0.0, 0.5),
                           CouplingSpec::cable(0.4, 0.0));
        FAIL("expected zero-coupling");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroCoupling);
    }
}

TEST_CASE("effective coupling: zeta always reproduces 3pi/2 + arg(g_eff)") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto eff = effective_coupling(
            cavity(1.0, uni(rng), uni(rng), 0.01 + uni(rng)),
            cavity(1.0, uni(rng), uni(rng), 0.01 + uni(rng)),
            CouplingSpec::cable(pi * (0.05 + 0.9 * uni(rng)), uni(rng)));
        CHECK(eff.zeta == wrap_two_pi(1.5 * pi + std::arg(eff.g_eff)));
    }
}

TEST_CASE("cable model: quarter-wave lossless diagonal damping is (kappa - gamma)/2") {
    const double gamma = 0.5;
    const double kappa_i = 1.0;
    const auto c = cavity(3.0, kappa_i, 0.0, gamma);
    const auto model = build_cable_model(c, c, CouplingSpec::cable(0.5 * pi, 0.0), 3.0);
    CHECK(model.matrix(0, 0).real() == doctest::Approx(-0.5 * (c.kappa() - gamma)).epsilon(1e-13));
    CHECK(model.matrix(1, 1).real() == doctest::Approx(-0.5 * (c.kappa() - gamma)).epsilon(1e-13));
}

TEST_CASE("cable model: vanishing gamma reduces to the uncoupled direct model") {
    const auto weak = build_cable_model(cavity(2.0, 1.1, 0.2, 1e-20), cavity(2.0, 0.9, 0.1, 1e-20),
                                        CouplingSpec::cable(0.4, 0.1), 2.0);
    const auto direct = build_direct_model(cavity(2.0, 1.1, 0.2), cavity(2.0, 0.9, 0.1),
                                           CouplingSpec::direct(0.0), 2.0);
    CHECK((weak.matrix - direct.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cable model: off-diagonals are always equal") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto model = build_cable_model(
            cavity(1.0 + uni(rng), uni(rng), uni(rng), 0.05 + uni(rng)),
            cavity(1.0 + uni(rng), uni(rng), uni(rng), 0.05 + uni(rng)),
            CouplingSpec::cable(pi * (0.05 + 0.9 * uni(rng)), uni(rng)), 1.0);
        CHECK(model.matrix(0, 1) == model.matrix(1, 0));
    }
}

TEST_CASE("cable elimination equivalence: junction-field route reproduces the reduced generator") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = pi * (0.05 + 0.9 * uni(rng));
        const double gamma0_l0 = uni(rng);
        const double gamma1 = 0.01 + 0.99 * uni(rng);
        const double gamma2 = 0.01 + 0.99 * uni(rng);
        const auto c1 = cavity(1.0 + uni(rng), uni(rng), uni(rng), gamma1);
        const auto c2 = cavity(1.0 + uni(rng), uni(rng), uni(rng), gamma2);
        const auto coupling = CouplingSpec::cable(theta, gamma0_l0);

        const auto model = build_cable_model(c1, c2, coupling, 0.0);
        const auto induced = oracles::induced_matrix_from_junction_fields(
            [&](cplx a1, cplx a2) {
                const auto f = eliminate_cable(a1, a2, coupling, gamma1, gamma2);
                return std::make_pair(f.b1, f.b2);
            },
            c1.omega, c2.omega, c1.kappa(), c2.kappa(), gamma1, gamma2,
            cable_one_way_factor(coupling));

        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const double scale = std::max(std::abs(model.matrix(r, c)), 1e-30);
                worst = std::max(worst, std::abs(model.matrix(r, c) - induced(r, c)) / scale);
            }
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("passivity: random valid models never have amplifying eigenvalues") {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        LinearModel model;
        if (trial % 2 == 0) {
            model = build_cable_model(
                cavity(1.0 + uni(rng), uni(rng), uni(rng), 0.05 + 0.95 * uni(rng)),
                cavity(1.0 + uni(rng), uni(rng), uni(rng), 0.05 + 0.95 * uni(rng)),
                CouplingSpec::cable(pi * (0.05 + 0.9 * uni(rng)), uni(rng)), 1.0);
        } else {
            model = build_direct_model(cavity(1.0 + uni(rng), uni(rng), uni(rng)),
                                       cavity(1.0 + uni(rng), uni(rng), uni(rng)),
                                       CouplingSpec::direct(uni(rng)), 1.0);
        }
        const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(model.matrix, false);
        const double scale = model.matrix.cwiseAbs().maxCoeff();
        for (int j = 0; j < 2; ++j) {
            CHECK(solver.eigenvalues()(j).real() <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("theta enters only modulo 2*pi") {
    const auto a = build_cable_model(cavity(1.0, 0.5, 0.0, 0.3), cavity(1.0, 0.5, 0.0, 0.3),
                                     CouplingSpec::cable(0.4, 0.1), 1.0);
    const auto b = build_cable_model(cavity(1.0, 0.5, 0.0, 0.3), cavity(1.0, 0.5, 0.0, 0.3),
                                     CouplingSpec::cable(0.4 + 4.0 * pi, 0.1), 1.0);
    CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("chain model: two cavities reproduce the direct-coupling builder") {
    const auto chain = build_chain_model(ChainSpec::uniform(2, 0.2, 1.0, 0.2, 0.3, 4.0), 4.0);
    const auto direct = build_direct_model(cavity(4.0, 1.0, 0.2), cavity(4.0, 1.0, 0.3),
                                           CouplingSpec::direct(0.2), 4.0);
    CHECK((chain.matrix - direct.matrix).cwiseAbs().maxCoeff() == 0.0);
    CHECK(chain.input_couplings == direct.input_couplings);
}

TEST_CASE("chain model: four-cavity tridiagonal structure") {
    const auto model = build_chain_model(ChainSpec::uniform(4, 0.2, 1.0, 0.2, 0.2, 1.0), 1.0);
    REQUIRE(model.dim() == 4);
    CHECK(model.matrix(0, 0).real() == doctest::Approx(-0.6).epsilon(1e-15));
    CHECK(model.matrix(1, 1).real() == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(model.matrix(2, 2).real() == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(model.matrix(3, 3).real() == doctest::Approx(-0.6).epsilon(1e-15));
    CHECK(model.matrix(0, 1) == cplx(0.0, -0.2));
    CHECK(model.matrix(2, 1) == cplx(0.0, -0.2));
    CHECK(model.matrix(0, 2) == cplx(0.0, 0.0));
    CHECK(model.matrix(0, 3) == cplx(0.0, 0.0));
    CHECK(model.input_couplings(1) == 0.0);
    CHECK(model.input_couplings(2) == 0.0);
}

TEST_CASE("chain model: zero coupling decouples every cavity") {
    const auto model = build_chain_model(ChainSpec::uniform(5, 0.0, 1.0, 0.2, 0.2, 1.0), 1.0);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            if (r != c) {
                CHECK(model.matrix(r, c) == cplx(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("chain model: fewer than two cavities is rejected") {
    try {
        ChainSpec::uniform(1, 0.2, 1.0, 0.2, 0.2, 1.0);
        FAIL("expected chain-size error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ChainSize);
    }
}
