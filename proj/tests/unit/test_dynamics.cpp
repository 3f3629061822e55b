#include <doctest.h>

#include <random>

#include "cavsim/dynamics.hpp"
#include "cavsim/errors.hpp"
#include "cavsim/model.hpp"
#include "oracles.hpp"

using namespace cavsim;

namespace {

InitialState state2(cplx a1, cplx a2) {
    InitialState init;
    init.amplitudes.resize(2);
    init.amplitudes << a1, a2;
    return init;
}

LinearModel symmetric_direct(double kappa, double g, double omega = 5.0, double kappa_e = 0.0) {
    return build_direct_model(CavityParams{omega, kappa - kappa_e, kappa_e, 0.0},
                              CavityParams{omega, kappa - kappa_e, kappa_e, 0.0},
                              CouplingSpec::direct(g), omega);
}

/// Random passive model M = -i H - diag(kappa)/2 with Hermitian H.
LinearModel random_passive_model(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Eigen::MatrixXcd h(dim, dim);
    for (int r = 0; r < dim; ++r) {
        h(r, r) = cplx(2.0 * uni(rng) - 1.0, 0.0);
        for (int c = r + 1; c < dim; ++c) {
            h(r, c) = cplx(uni(rng) - 0.5, uni(rng) - 0.5);
            h(c, r) = std::conj(h(r, c));
        }
    }
    LinearModel model;
    model.matrix = cplx(0.0, -1.0) * h;
    model.input_couplings = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < dim; ++j) {
        model.matrix(j, j) -= cplx(0.5 * (0.1 + uni(rng)), 0.0);
        model.labels.push_back("mode" + std::to_string(j));
    }
    model.frame_frequency = 0.0;
    return model;
}

}  // namespace

TEST_CASE("free decay: single mode loses energy at rate kappa") {
    const auto model = single_mode_model(CavityParams{4.0, 1.0, 0.0, 0.0}, 4.0);
    InitialState init;
    init.amplitudes.resize(1);
    init.amplitudes << cplx(1.0, 0.0);
    const auto traj = evolve_free(model, init, uniform_grid(2.0, 2001));
    // t = 1 is sample 1000
    CHECK(std::abs(traj.photon_numbers[0][1000] - std::exp(-1.0)) < 1e-9);
    CHECK(traj.photon_numbers[0][0] == 1.0);
}

TEST_CASE("free decay: symmetric pair follows the damped Rabi closed form") {
    const double kappa = 1.0;
    const double g = 0.7;
    const auto model = symmetric_direct(kappa, g);
    const auto times = uniform_grid(6.0, 1200);
    const auto traj = evolve_free(model, state2(cplx(1.0, 0.0), cplx(0.0, 0.0)), times);
    for (std::size_t k = 0; k < times.size(); k += 37) {
        const auto [a1, a2] = oracles::symmetric_pair_closed_form(kappa, g, cplx(1.0, 0.0),
                                                                  cplx(0.0, 0.0), times[k]);
        CHECK(std::abs(traj.amplitudes[0][k] - a1) < 1e-8);
        CHECK(std::abs(traj.amplitudes[1][k] - a2) < 1e-8);
        CHECK(std::abs(traj.photon_numbers[0][k] -
                       std::exp(-kappa * times[k]) * std::pow(std::cos(g * times[k]), 2)) < 1e-8);
    }
}

TEST_CASE("free decay: zero initial state stays zero") {
    const auto model = symmetric_direct(1.0, 0.3);
    const auto traj = evolve_free(model, state2(cplx(0.0, 0.0), cplx(0.0, 0.0)),
                                  uniform_grid(4.0, 64));
    for (const auto& series : traj.photon_numbers) {
        for (double n : series) {
            CHECK(n == 0.0);
        }
    }
}

TEST_CASE("free decay: invalid sample grids are rejected") {
    const auto model = symmetric_direct(1.0, 0.3);
    const auto init = state2(cplx(1.0, 0.0), cplx(0.0, 0.0));
    CHECK_THROWS_AS(evolve_free(model, init, {}), Error);
    CHECK_THROWS_AS(evolve_free(model, init, {0.5, 1.0}), Error);
    CHECK_THROWS_AS(evolve_free(model, init, {0.0, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(evolve_free(model, init, {0.0, 2.0, 1.0}), Error);
}

TEST_CASE("propagators: matrix exponential and adaptive integration agree") {
    std::mt19937_64 rng(46);
    std::uniform_int_distribution<int> dims(2, 8);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const int dim = dims(rng);
        const auto model = random_passive_model(rng, dim);
        double min_kappa = 1e300;
        for (int j = 0; j < dim; ++j) {
            min_kappa = std::min(min_kappa, -2.0 * model.matrix(j, j).real());
        }
        InitialState init;
        init.amplitudes.resize(dim);
        for (int j = 0; j < dim; ++j) {
            init.amplitudes(j) = cplx(uni(rng) - 0.5, uni(rng) - 0.5);
        }
        const auto times = uniform_grid(10.0 / min_kappa, 400);
        const auto exact = evolve_free(model, init, times);
        const auto integrated = evolve_free_rk(model, init, times, {1e-10, 1e-12});

        const double scale = init.amplitudes.cwiseAbs().maxCoeff();
        for (int j = 0; j < dim; ++j) {
            for (std::size_t k = 0; k < times.size(); ++k) {
                CHECK(std::abs(exact.amplitudes[static_cast<std::size_t>(j)][k] -
                               integrated.amplitudes[static_cast<std::size_t>(j)][k]) <=
                      1e-8 * scale);
            }
        }
    }
}

TEST_CASE("driven evolution: single resonant mode approaches the closed-form steady state") {
    // kappa = 1, kappa_e = 0.2, a_in = 1
    const auto model = single_mode_model(CavityParams{3.0, 0.8, 0.2, 0.0}, 3.0);
    DriveSpec drive{0, cplx(1.0, 0.0), 3.0};
    InitialState vacuum;
    vacuum.amplitudes = Eigen::VectorXcd::Zero(1);
    const auto times = uniform_grid(10.0, 1001);
    const auto traj = evolve_driven(model, vacuum, drive, times);

    const cplx a_ss = cplx(-std::sqrt(0.2) / 0.5, 0.0);
    for (std::size_t k = 0; k < times.size(); k += 97) {
        const cplx expected = a_ss * (1.0 - std::exp(-0.5 * times[k]));
        CHECK(std::abs(traj.amplitudes[0][k] - expected) < 1e-10);
    }
    // late-time samples sit on the steady state
    const auto steady = steady_state(model, drive);
    CHECK(std::abs(traj.amplitudes[0].back() - steady.amplitudes(0)) <
          1e-8 * std::abs(steady.amplitudes(0)));
}

TEST_CASE("driven evolution: zero drive amplitude reduces to free decay") {
    const auto model = symmetric_direct(1.0, 0.4, 5.0, 0.1);
    const auto init = state2(cplx(0.3, 0.1), cplx(-0.2, 0.5));
    const auto times = uniform_grid(5.0, 301);
    const auto driven = evolve_driven(model, init, DriveSpec{0, cplx(0.0, 0.0), 5.0}, times);
    const auto free_run = evolve_free(model, init, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(driven.amplitudes[0][k] == free_run.amplitudes[0][k]);
        CHECK(driven.amplitudes[1][k] == free_run.amplitudes[1][k]);
    }
}

TEST_CASE("driven evolution: affine and integrated paths agree") {
    const auto model = symmetric_direct(1.3, 0.5, 2.0, 0.2);
    const auto init = state2(cplx(0.2, 0.0), cplx(0.0, -0.1));
    DriveSpec drive{0, cplx(0.7, 0.4), 2.0};
    const auto times = uniform_grid(8.0, 200);
    const auto affine = evolve_driven(model, init, drive, times);
    const auto integrated = evolve_driven_rk(model, init, drive, times, {1e-11, 1e-13});
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(affine.amplitudes[0][k] - integrated.amplitudes[0][k]) < 1e-8);
        CHECK(std::abs(affine.amplitudes[1][k] - integrated.amplitudes[1][k]) < 1e-8);
    }
}

TEST_CASE("steady state: scalar resonant solution and zero residual") {
    const auto model = single_mode_model(CavityParams{3.0, 0.8, 0.2, 0.0}, 3.0);
    DriveSpec drive{0, cplx(1.0, 0.0), 3.0};
    const auto steady = steady_state(model, drive);
    CHECK(std::abs(steady.amplitudes(0) - cplx(-std::sqrt(0.2) / 0.5, 0.0)) < 1e-14);
}

TEST_CASE("steady state: residual of the linear solve is tiny") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto model = build_direct_model(
            CavityParams{2.0 + uni(rng), 0.2 + uni(rng), 0.1 + uni(rng), 0.0},
            CavityParams{2.0 + uni(rng), 0.2 + uni(rng), 0.1 + uni(rng), 0.0},
            CouplingSpec::direct(uni(rng)), 2.5);
        DriveSpec drive{0, cplx(uni(rng), uni(rng)), 2.5};
        const auto steady = steady_state(model, drive);
        Eigen::VectorXcd s = Eigen::VectorXcd::Zero(2);
        s(0) = model.input_couplings(0) * drive.amplitude;
        const double residual = (model.matrix * steady.amplitudes - s).norm();
        CHECK(residual <= 1e-12 * s.norm());
    }
}

TEST_CASE("steady state: undamped mode has no steady state") {
    // decoupled second cavity with zero total loss -> zero eigenvalue
    const auto model = build_direct_model(CavityParams{1.0, 0.8, 0.2, 0.0},
                                          CavityParams{1.0, 0.0, 0.0, 0.0},
                                          CouplingSpec::direct(0.0), 1.0);
    try {
        steady_state(model, DriveSpec{0, cplx(1.0, 0.0), 1.0});
        FAIL("expected no-steady-state");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSteadyState);
    }
}

TEST_CASE("steady state: driving a closed port is rejected") {
    const auto model = symmetric_direct(1.0, 0.2);  // kappa_e = 0 everywhere
    try {
        steady_state(model, DriveSpec{0, cplx(1.0, 0.0), 5.0});
        FAIL("expected undriveable-port");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UndriveablePort);
    }
}

TEST_CASE("steady state: cable pair driven at the shifted mode-2 resonance locks the phase to zeta") {
    std::mt19937_64 rng(48);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double omega = 50.0 + uni(rng);
        CavityParams c1{omega, 0.4 + uni(rng), 0.2 + 0.3 * uni(rng), 0.1 + uni(rng)};
        CavityParams c2{omega, 0.4 + uni(rng), 0.2 + 0.3 * uni(rng), 0.1 + uni(rng)};
        const auto coupling = CouplingSpec::cable(pi * (0.05 + 0.9 * uni(rng)), uni(rng));
        const auto eff = effective_coupling(c1, c2, coupling);

        // zero effective detuning of mode 2
        const double frame = c2.omega + eff.delta_omega_2.real();
        const auto model = build_cable_model(c1, c2, coupling, frame);
        const auto steady = steady_state(model, DriveSpec{0, cplx(1.0, 0.0), frame});
        const double phase = std::arg(steady.amplitudes(1) / steady.amplitudes(0));
        CHECK(circular_distance(phase, eff.zeta) < 1e-9);
    }
}

TEST_CASE("steady state: strongly attenuating cable gives the single-pass phase theta + pi") {
    for (const double theta : {0.1 * pi, 0.3 * pi, 0.7 * pi}) {
        const double gamma = 0.3;
        CavityParams c{40.0, 1.0, 0.2, gamma};
        const auto model = build_cable_model(c, c, CouplingSpec::cable(theta, 6.0), 40.0);
        const auto steady = steady_state(model, DriveSpec{0, cplx(1.0, 0.0), 40.0});
        const double phase = std::arg(steady.amplitudes(1) / steady.amplitudes(0));
        CHECK(circular_distance(phase, theta + pi) < 0.01);
    }
}

TEST_CASE("steady state: resonantly driven chain steps the phase by -pi/2 per cavity") {
    const auto spec = ChainSpec::uniform(6, 0.2, 1.0, 0.2, 0.2, 7.0);
    const auto model = build_chain_model(spec, 7.0);
    const auto steady = steady_state(model, DriveSpec{0, cplx(1.0, 0.0), 7.0});
    for (int j = 0; j + 1 < 6; ++j) {
        const double phase = std::arg(steady.amplitudes(j + 1) / steady.amplitudes(j));
        CHECK(circular_distance(phase, -0.5 * pi) < 0.1);
    }
}

TEST_CASE("decay protocol: single mode output power decays at kappa") {
    const auto model = single_mode_model(CavityParams{6.0, 0.7, 0.3, 0.0}, 6.0);
    const auto times = uniform_grid(8.0, 2001);
    const auto result = decay_protocol(model, DriveSpec{0, cplx(2.0, 0.0), 6.0}, 0, times);
    REQUIRE(result.output_power.size() == times.size());
    const double p0 = result.output_power.front();
    CHECK(p0 > 0.0);
    for (std::size_t k = 0; k < times.size(); k += 211) {
        CHECK(result.output_power[k] ==
              doctest::Approx(p0 * std::exp(-times[k])).epsilon(1e-9));
    }
    // output power is kappa_e times the photon number
    CHECK(result.output_power[100] ==
          doctest::Approx(0.3 * result.trajectory.photon_numbers[0][100]).epsilon(1e-14));
}

TEST_CASE("decay protocol: zero drive leaves a dark cavity") {
    const auto model = single_mode_model(CavityParams{6.0, 0.7, 0.3, 0.0}, 6.0);
    const auto result =
        decay_protocol(model, DriveSpec{0, cplx(0.0, 0.0), 6.0}, 0, uniform_grid(2.0, 51));
    for (double p : result.output_power) {
        CHECK(p == 0.0);
    }
}

TEST_CASE("free decay of the direct model never gains total energy") {
    std::mt19937_64 rng(49);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = build_direct_model(
            CavityParams{2.0, 0.05 + uni(rng), uni(rng), 0.0},
            CavityParams{2.0 + uni(rng), 0.05 + uni(rng), uni(rng), 0.0},
            CouplingSpec::direct(2.0 * uni(rng)), 2.0);
        const auto traj = evolve_free(
            model, state2(std::polar(1.0, two_pi * uni(rng)), std::polar(1.0, two_pi * uni(rng))),
            uniform_grid(6.0, 400));
        double previous = 1e300;
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const double total = traj.photon_numbers[0][k] + traj.photon_numbers[1][k];
            CHECK(total <= previous * (1.0 + 1e-12));
            previous = total;
        }
    }
}

TEST_CASE("frame covariance: shifting the frame only rotates the envelope") {
    const double delta = 0.8;
    const auto base = build_direct_model(CavityParams{4.0, 0.6, 0.2, 0.0},
                                         CavityParams{4.3, 0.9, 0.1, 0.0},
                                         CouplingSpec::direct(0.5), 4.0);
    const auto shifted = build_direct_model(CavityParams{4.0, 0.6, 0.2, 0.0},
                                            CavityParams{4.3, 0.9, 0.1, 0.0},
                                            CouplingSpec::direct(0.5), 4.0 + delta);
    const auto init = state2(cplx(0.8, 0.1), cplx(-0.3, 0.6));
    const auto times = uniform_grid(7.0, 301);
    const auto a = evolve_free(base, init, times);
    const auto b = evolve_free(shifted, init, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const cplx rotation = std::exp(cplx(0.0, -delta * times[k]));
        CHECK(std::abs(a.amplitudes[0][k] - rotation * b.amplitudes[0][k]) < 1e-10);
        CHECK(std::abs(a.amplitudes[1][k] - rotation * b.amplitudes[1][k]) < 1e-10);
        CHECK(std::abs(a.photon_numbers[1][k] - b.photon_numbers[1][k]) <=
              1e-12 * std::max(1.0, a.photon_numbers[1][k]));
    }
}

TEST_CASE("eigenmodes: symmetric resonant pair splits by exactly 2g") {
    const auto model = symmetric_direct(0.8, 0.45, 9.0);
    const auto spectrum = eigenmodes(model);
    CHECK(frequency_splitting(spectrum) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(spectrum.modes[0].frequency < spectrum.modes[1].frequency);
}

TEST_CASE("eigenmodes: asymmetric-loss splitting matches the closed form") {
    // kappa1 = 2, kappa2 = 0, g = 0.6 -> sqrt(4*0.36 - 1) = sqrt(0.44)
    const auto model = build_direct_model(CavityParams{5.0, 2.0, 0.0, 0.0},
                                          CavityParams{5.0, 0.0, 0.0, 0.0},
                                          CouplingSpec::direct(0.6), 5.0);
    const auto spectrum = eigenmodes(model);
    CHECK(frequency_splitting(spectrum) ==
          doctest::Approx(std::sqrt(0.44)).epsilon(1e-12));
    CHECK(direct_splitting_formula(0.6, 2.0, 0.0) == doctest::Approx(std::sqrt(0.44)));
}

TEST_CASE("eigenmodes: uncoupled cavities keep their bare lines") {
    const auto model = build_direct_model(CavityParams{5.0, 1.2, 0.0, 0.0},
                                          CavityParams{5.7, 0.4, 0.0, 0.0},
                                          CouplingSpec::direct(0.0), 5.0);
    const auto spectrum = eigenmodes(model);
    CHECK(spectrum.modes[0].frequency == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(spectrum.modes[1].frequency == doctest::Approx(5.7).epsilon(1e-14));
    CHECK(spectrum.modes[0].decay_rate == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(spectrum.modes[1].decay_rate == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(spectrum.modes[0].q == doctest::Approx(5.0 / 1.2).epsilon(1e-12));
}
