#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gio/linalg.hpp"
#include "gio/system_model.hpp"
#include "oracles.hpp"

using namespace gio;

namespace {

// Single lossy mode at frequency nu with a thermal bath.
SystemSpec one_mode(double nu, double kappa, double nbar, double drive = 0.0) {
    SystemSpec spec;
    spec.n = 1;
    spec.H = CMat::Zero(2, 2);
    spec.H(0, 1) = spec.H(1, 0) = nu;
    spec.V = CVec::Zero(2);
    spec.V(0) = Complex(0.0, drive);
    spec.V(1) = Complex(0.0, -drive);
    spec.kappa = RVec::Constant(1, kappa);
    spec.sigma_in = thermal_input(spec.kappa, RVec::Constant(1, nbar));
    return spec;
}

}  // namespace

TEST_CASE("commutation matrices and the quadrature transform") {
    const int n = 3;
    const CMat sig = ladder_commutation(n);
    const CMat omega = quad_symplectic(n);
    const CMat u = quad_transform(n);

    CHECK((sig * sig + CMat::Identity(2 * n, 2 * n)).norm() == 0.0);
    CHECK((u * u.adjoint() - CMat::Identity(2 * n, 2 * n)).norm() < 1e-15);
    // r = U v carries the ladder commutator into i times the symplectic form.
    CHECK((u * sig * u.transpose() - Complex(0.0, 1.0) * omega).norm() < 1e-15);
}

TEST_CASE("validate_system rejects malformed input") {
    SystemSpec good = one_mode(5.0, 1.0, 0.3);
    CHECK_NOTHROW(validate_system(good));

    SUBCASE("H dimension") {
        SystemSpec s = good;
        s.H = CMat::Zero(4, 4);
        CHECK_THROWS_AS(validate_system(s), PhysicsError);
    }
    SUBCASE("H symmetry") {
        SystemSpec s = good;
        s.H(0, 1) += 1.0;
        CHECK_THROWS_AS(validate_system(s), PhysicsError);
    }
    SUBCASE("V conjugate pairing") {
        SystemSpec s = good;
        s.V(0) = Complex(1.0, 0.0);
        s.V(1) = Complex(2.0, 0.0);
        CHECK_THROWS_AS(validate_system(s), PhysicsError);
    }
    SUBCASE("negative loss") {
        SystemSpec s = good;
        s.kappa(0) = -0.1;
        CHECK_THROWS_AS(validate_system(s), PhysicsError);
    }
    SUBCASE("non-Hermitian bath covariance") {
        SystemSpec s = good;
        s.sigma_in(0, 1) = Complex(0.4, 0.0);
        CHECK_THROWS_AS(validate_system(s), PhysicsError);
    }
    SUBCASE("label count") {
        SystemSpec s = good;
        s.labels = {"a", "b"};
        CHECK_THROWS_AS(validate_system(s), PhysicsError);
    }
}

TEST_CASE("build_drift implements the expected single-mode generator") {
    const double nu = 7.0, kappa = 0.8;
    const DriftModel m = build_drift(one_mode(nu, kappa, 0.0, 2.5));

    CMat want = CMat::Zero(2, 2);
    want(0, 0) = Complex(-0.5 * kappa, -nu);
    want(1, 1) = Complex(-0.5 * kappa, nu);
    CHECK((m.A - want).norm() < 1e-14);
    CHECK(m.stable);

    // vbar = -i Sigma V with V = (i drive, -i drive).
    CHECK(std::abs(m.vbar_in(0) - Complex(-2.5, 0.0)) < 1e-14);
    CHECK(std::abs(m.vbar_in(1) - Complex(-2.5, 0.0)) < 1e-14);

    SUBCASE("lossless system is marginal, not stable") {
        const SystemSpec s = one_mode(nu, 0.0, 0.0);
        CHECK_FALSE(build_drift(s).stable);
    }
}

TEST_CASE("thermal_input") {
    RVec kappa(2), nbar(2);
    kappa << 2.0, 0.5;
    nbar << 0.0, 3.0;
    const CMat s = thermal_input(kappa, nbar);
    CHECK(std::abs(s(0, 0) - 2.0) < 1e-15);
    CHECK(std::abs(s(2, 2) - 0.5 * 7.0) < 1e-15);
    CHECK(s.diagonal().sum().imag() == 0.0);
    CHECK_THROWS_AS(thermal_input(kappa, RVec::Constant(2, -0.1)), PhysicsError);
}

TEST_CASE("slowest_relaxation_rate") {
    SUBCASE("equals kappa for one lossy mode") {
        const DriftModel m = build_drift(one_mode(5.0, 0.37, 0.0));
        CHECK(slowest_relaxation_rate(m) == doctest::Approx(0.37).epsilon(1e-12));
    }
    SUBCASE("matches the drift spectrum on a coupled pair") {
        SystemSpec spec;
        spec.n = 2;
        spec.H = CMat::Zero(4, 4);
        spec.H(0, 1) = spec.H(1, 0) = 3.0;
        spec.H(2, 3) = spec.H(3, 2) = 3.0;
        spec.H(0, 3) = spec.H(3, 0) = 0.2;  // beam-splitter coupling
        spec.H(1, 2) = spec.H(2, 1) = 0.2;
        spec.V = CVec::Zero(4);
        spec.kappa = RVec(2);
        spec.kappa << 0.0, 1.0;
        spec.sigma_in = thermal_input(spec.kappa, RVec::Zero(2));
        const DriftModel m = build_drift(spec);
        double slow = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m.spectral.eigenvalues.size(); ++i)
            slow = std::min(slow, std::abs(m.spectral.eigenvalues(i).real()));
        CHECK(slowest_relaxation_rate(m) == doctest::Approx(2.0 * slow).epsilon(1e-12));
        CHECK(slowest_relaxation_rate(m) < spec.kappa(1));  // hybridised, not bare
    }
    SUBCASE("rejects unstable drift") {
        const DriftModel m = build_drift(one_mode(5.0, 0.0, 0.0));
        CHECK_THROWS_AS(slowest_relaxation_rate(m), PhysicsError);
    }
}

TEST_CASE("canonical states") {
    SUBCASE("vacuum is the identity in both bases") {
        const CovState v = CovState::vacuum(2);
        CHECK((v.sigma - CMat::Identity(4, 4)).norm() == 0.0);
        CHECK((to_quadrature(v).sigma - CMat::Identity(4, 4)).norm() < 1e-14);
    }
    SUBCASE("thermal diagonal") {
        const CovState th = CovState::thermal(RVec::Constant(1, 1.5));
        CHECK(std::abs(th.sigma(0, 0) - 4.0) < 1e-15);
        CHECK_THROWS_AS(CovState::thermal(RVec::Constant(1, -1.0)), PhysicsError);
    }
    SUBCASE("squeezed variances in dB") {
        const double db = 6.0;
        const CovState sq = CovState::squeezed_db(db, 'q');
        const CMat q = to_quadrature(sq).sigma;
        CHECK(q(0, 0).real() == doctest::Approx(std::pow(10.0, -db / 10.0)).epsilon(1e-12));
        CHECK(q(1, 1).real() == doctest::Approx(std::pow(10.0, db / 10.0)).epsilon(1e-12));
        CHECK(std::abs(q(0, 0) * q(1, 1) - Complex(1.0, 0.0)) < 1e-12);  // minimum uncertainty

        const CovState sp = CovState::squeezed_db(db, 'p');
        CHECK(to_quadrature(sp).sigma(1, 1).real() == doctest::Approx(std::pow(10.0, -db / 10.0)));
    }
    SUBCASE("tensor stacks blocks") {
        const CovState t = CovState::tensor(CovState::thermal(RVec::Constant(1, 1.0)),
                                            CovState::squeezed_db(3.0));
        CHECK(t.n_modes() == 2);
        CHECK(std::abs(t.sigma(0, 0) - 3.0) < 1e-15);
        CHECK(t.sigma.block(0, 2, 2, 2).norm() == 0.0);
    }
}

TEST_CASE("quadrature round trip preserves states") {
    std::mt19937_64 gen(72001);
    const SystemSpec spec = oracle::random_stable_spec(gen, 3);
    CovState st = CovState::vacuum(3);
    st.sigma = CMat::Identity(6, 6) + 0.25 * oracle::random_psd(gen, 6);
    st.mean = oracle::random_complex(gen, 6, 1);
    // means must pair as (z, conj z) per mode to be a physical displacement
    for (int j = 0; j < 3; ++j) st.mean(2 * j + 1) = std::conj(st.mean(2 * j));

    const CovState back = from_quadrature(to_quadrature(st));
    CHECK(oracle::rel_frob(back.sigma, st.sigma) < 1e-14);
    CHECK((back.mean - st.mean).norm() < 1e-14);
    CHECK(to_quadrature(st).basis == Basis::Quadrature);

    SUBCASE("double conversion is rejected") {
        CHECK_THROWS_AS(to_quadrature(to_quadrature(st)), std::exception);
    }
}

TEST_CASE("state physicality") {
    CHECK(state_physicality(CovState::vacuum(2)).ok);
    CHECK(state_physicality(CovState::squeezed_db(20.0)).ok);

    CovState bad = CovState::vacuum(1);
    bad.sigma *= 0.5;  // below vacuum in every direction
    const PhysicalityReport rep = state_physicality(bad);
    CHECK_FALSE(rep.ok);
    CHECK(rep.min_eigenvalue < -0.4);
}

TEST_CASE("propagate_state follows the closed-form single-mode solution") {
    const double nu = 6.0, kappa = 0.9, nbar = 2.0;
    const SystemSpec spec = one_mode(nu, kappa, nbar);
    const DriftModel m = build_drift(spec);

    for (double t : {0.05, 0.3, 1.2, 4.0}) {
        const CovState out = propagate_state(m, spec.sigma_in, CovState::vacuum(1), t);
        const double want = std::exp(-kappa * t) + (2.0 * nbar + 1.0) * (1.0 - std::exp(-kappa * t));
        CHECK(out.sigma(0, 0).real() == doctest::Approx(want).epsilon(1e-12));
        CHECK(std::abs(out.sigma(0, 1)) < 1e-14);
    }

    SUBCASE("thermal bath fixed point") {
        const CovState fixed = CovState::thermal(RVec::Constant(1, nbar));
        const CovState out = propagate_state(m, spec.sigma_in, fixed, 2.0);
        CHECK(oracle::rel_frob(out.sigma, fixed.sigma) < 1e-13);
    }

    SUBCASE("driven mean relaxes to the displaced fixed point") {
        const SystemSpec ds = one_mode(nu, kappa, 0.0, 1.3);
        const DriftModel dm = build_drift(ds);
        const CovState late = propagate_state(dm, ds.sigma_in, CovState::vacuum(1), 80.0 / kappa);
        const CVec fixed = -dm.A.partialPivLu().solve(dm.vbar_in);
        CHECK((late.mean - fixed).norm() < 1e-10 * fixed.norm());
    }

    SUBCASE("time zero is the identity map") {
        const CovState st = CovState::squeezed_db(8.0);
        const CovState out = propagate_state(m, spec.sigma_in, st, 0.0);
        CHECK(oracle::rel_frob(out.sigma, st.sigma) < 1e-15);
    }
}

TEST_CASE("system JSON round trip") {
    std::mt19937_64 gen(72002);
    SystemSpec spec = oracle::random_stable_spec(gen, 2);
    spec.V(0) = Complex(0.0, 0.7);
    spec.V(1) = Complex(0.0, -0.7);
    spec.labels = {"signal", "aux"};

    const SystemSpec back = system_from_json_text(system_to_json_text(spec));
    CHECK(back.n == spec.n);
    CHECK(oracle::rel_frob(back.H, spec.H) < 1e-15);
    CHECK((back.V - spec.V).norm() < 1e-15);
    CHECK((back.kappa - spec.kappa).norm() < 1e-15);
    CHECK(oracle::rel_frob(back.sigma_in, spec.sigma_in) < 1e-15);
    CHECK(back.labels == spec.labels);

    SUBCASE("nbar shorthand expands to the thermal bath covariance") {
        const SystemSpec s = system_from_json_text(R"({
            "n": 1,
            "H": [[0, 2.0], [2.0, 0]],
            "kappa": [0.5],
            "nbar": [1.5]
        })");
        CHECK(std::abs(s.sigma_in(0, 0) - 0.5 * 4.0) < 1e-15);
    }

    SUBCASE("garbage is a ConfigError") {
        CHECK_THROWS_AS(system_from_json_text("{"), ConfigError);
        CHECK_THROWS_AS(system_from_json_text(R"({"n": 1})"), ConfigError);
    }
}

TEST_CASE("mode_labels fall back to numbered names") {
    const SystemSpec spec = one_mode(1.0, 1.0, 0.0);
    const auto labels = mode_labels(spec);
    REQUIRE(labels.size() == 1);
    CHECK(labels[0] == "mode1");
}
