#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gio/measures.hpp"
#include "gio/system_model.hpp"

using namespace gio;

namespace {

// Two-mode squeezed vacuum with strength r, quadrature basis.
CovState tmsv(double r) {
    const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
    CovState st;
    st.basis = Basis::Quadrature;
    st.sigma = CMat::Zero(4, 4);
    st.sigma(0, 0) = st.sigma(1, 1) = st.sigma(2, 2) = st.sigma(3, 3) = c;
    st.sigma(0, 2) = st.sigma(2, 0) = s;
    st.sigma(1, 3) = st.sigma(3, 1) = -s;
    st.mean = CVec::Zero(4);
    return st;
}

Eigen::Matrix2d rot2(double phi) {
    Eigen::Matrix2d r;
    r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return r;
}

// Random two-mode symplectic on the quadratures: local rotations and
// squeezes around a beam splitter.
Eigen::Matrix4d random_symplectic(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> sq(-0.8, 0.8);

    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    const double th = ang(gen);
    s.block<2, 2>(0, 0) = std::cos(th) * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2, 2) = std::cos(th) * Eigen::Matrix2d::Identity();
    s.block<2, 2>(0, 2) = std::sin(th) * Eigen::Matrix2d::Identity();
    s.block<2, 2>(2, 0) = -std::sin(th) * Eigen::Matrix2d::Identity();

    Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
    for (int m = 0; m < 2; ++m) {
        const double r = sq(gen);
        Eigen::Matrix2d z;
        z << std::exp(r), 0.0, 0.0, std::exp(-r);
        local.block<2, 2>(2 * m, 2 * m) = rot2(ang(gen)) * z * rot2(ang(gen));
    }
    return local * s;
}

CovState apply_sympl(const CovState& st, const Eigen::Matrix4d& s) {
    CovState out = st;
    out.sigma = s.cast<Complex>() * st.sigma * s.cast<Complex>().transpose();
    return out;
}

// Block-determinant form of the smallest partial-transpose eigenvalue of a
// two-mode quadrature CM (an independent route to the log negativity).
double logneg_block_form(const CovState& quad) {
    const Eigen::Matrix4d v = quad.sigma.real();
    const double da = v.block<2, 2>(0, 0).determinant();
    const double db = v.block<2, 2>(2, 2).determinant();
    const double dc = v.block<2, 2>(0, 2).determinant();
    const double dv = v.determinant();
    const double delta = da + db - 2.0 * dc;
    const double disc = std::sqrt(std::max(0.0, delta * delta - 4.0 * dv));
    const double nu2 = 0.5 * (delta - disc);
    return std::max(0.0, -0.5 * std::log2(nu2));
}

}  // namespace

TEST_CASE("vacuum and thermal states carry no squeezing") {
    // Vacuum picks up ~1e-15 dB from the round trip through the quadrature
    // basis; thermal variances sit strictly above 1, so the clamp is exact.
    CHECK(squeezing_db(CovState::vacuum(1)) < 1e-12);
    CHECK(squeezing_db(CovState::vacuum(3)) < 1e-12);
    CHECK(squeezing_db(CovState::thermal(RVec::Constant(2, 1.7))) == 0.0);
}

TEST_CASE("squeezing reads the reduced quadrature variance in dB") {
    CovState st = CovState::vacuum(1);
    st.basis = Basis::Quadrature;
    st.sigma(0, 0) = 0.5;
    st.sigma(1, 1) = 2.0;
    CHECK(squeezing_db(st) == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-12));

    CHECK(squeezing_db(CovState::squeezed_db(6.0, 'q')) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(squeezing_db(CovState::squeezed_db(6.0, 'p')) == doctest::Approx(6.0).epsilon(1e-12));

    // Phase-space rotations leave it unchanged.
    std::mt19937_64 gen(41);
    const CovState two = CovState::tensor(CovState::squeezed_db(8.0, 'q'),
                                          CovState::thermal(RVec::Constant(1, 0.5)));
    const CovState tq = to_quadrature(two);
    const double base = squeezing_db(tq);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::Matrix4d rot = Eigen::Matrix4d::Zero();
        std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
        rot.block<2, 2>(0, 0) = rot2(ang(gen));
        rot.block<2, 2>(2, 2) = rot2(ang(gen));
        CHECK(squeezing_db(apply_sympl(tq, rot)) == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("purity") {
    CHECK(purity(CovState::vacuum(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(CovState::thermal(RVec::Constant(1, 0.5))) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(purity(CovState::squeezed_db(12.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(tmsv(0.7)) == doctest::Approx(1.0).epsilon(1e-10));

    // Multiplicative over tensor factors, invariant under symplectics.
    const CovState a = CovState::thermal(RVec::Constant(1, 0.3));
    const CovState b = CovState::thermal(RVec::Constant(1, 2.0));
    const CovState ab = CovState::tensor(a, b);
    CHECK(purity(ab) == doctest::Approx(purity(a) * purity(b)).epsilon(1e-12));

    std::mt19937_64 gen(42);
    const CovState abq = to_quadrature(ab);
    for (int trial = 0; trial < 5; ++trial) {
        const CovState moved = apply_sympl(abq, random_symplectic(gen));
        CHECK(purity(moved) == doctest::Approx(purity(ab)).epsilon(1e-9));
    }
}

TEST_CASE("log negativity of the two-mode squeezed state") {
    // cosh(ln 2) = 5/4, sinh(ln 2) = 3/4: the partial transpose bottoms out
    // at 1/2, exactly one ebit.
    CHECK(log_negativity(tmsv(0.5 * std::log(2.0))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(log_negativity(tmsv(0.0)) < 1e-12);

    const double r = 1.1;
    CHECK(log_negativity(tmsv(r)) == doctest::Approx(2.0 * r / std::log(2.0)).epsilon(1e-10));

    // Separable product states sit at zero (the pure factor puts the
    // partial-transpose spectrum right on the boundary, so allow rounding).
    const CovState sep = CovState::tensor(CovState::thermal(RVec::Constant(1, 0.4)),
                                          CovState::squeezed_db(4.0));
    CHECK(log_negativity(sep) < 1e-12);

    CHECK_THROWS_AS(log_negativity(CovState::vacuum(1)), std::invalid_argument);
    CHECK_THROWS_AS(log_negativity(CovState::vacuum(3)), std::invalid_argument);
}

TEST_CASE("log negativity agrees with the block-determinant form") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> nb(0.0, 1.5);
    for (int trial = 0; trial < 12; ++trial) {
        RVec nbar(2);
        nbar << nb(gen), nb(gen);
        const CovState moved =
            apply_sympl(to_quadrature(CovState::thermal(nbar)), random_symplectic(gen));
        CHECK(log_negativity(moved) == doctest::Approx(logneg_block_form(moved)).epsilon(1e-9));
    }
}

TEST_CASE("symplectic eigenvalues") {
    RVec nbar(2);
    nbar << 0.3, 2.0;
    const RVec nus = symplectic_eigenvalues(CovState::thermal(nbar));
    CHECK(nus(0) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(nus(1) == doctest::Approx(5.0).epsilon(1e-12));

    const RVec pure = symplectic_eigenvalues(tmsv(0.9));
    CHECK(pure(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pure(1) == doctest::Approx(1.0).epsilon(1e-10));

    // Invariant under symplectic transformations.
    std::mt19937_64 gen(44);
    const CovState moved =
        apply_sympl(to_quadrature(CovState::thermal(nbar)), random_symplectic(gen));
    const RVec nus2 = symplectic_eigenvalues(moved);
    CHECK(nus2(0) == doctest::Approx(1.6).epsilon(1e-9));
    CHECK(nus2(1) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("mean occupation") {
    CHECK(mean_occupation(CovState::thermal(RVec::Constant(1, 3.0)), 0) ==
          doctest::Approx(3.0).epsilon(1e-12));

    // 20 dB of quadrature squeezing: variances 0.01 and 100.
    CHECK(mean_occupation(CovState::squeezed_db(20.0), 0) ==
          doctest::Approx((100.0 + 0.01 - 2.0) / 4.0).epsilon(1e-10));

    CovState displaced = CovState::vacuum(1);
    displaced.mean(0) = Complex(0.6, -0.3);
    displaced.mean(1) = std::conj(displaced.mean(0));
    CHECK(mean_occupation(displaced, 0) == doctest::Approx(0.45).epsilon(1e-12));

    CHECK_THROWS_AS(mean_occupation(CovState::vacuum(2), 2), std::invalid_argument);
    CHECK_THROWS_AS(mean_occupation(CovState::vacuum(2), -1), std::invalid_argument);
}

TEST_CASE("unphysical states are rejected, not clamped") {
    CovState bad = CovState::vacuum(1);
    bad.sigma *= 0.5;
    CHECK_THROWS_AS(squeezing_db(bad), PhysicsError);
    CHECK_THROWS_AS(purity(bad), PhysicsError);
    CHECK_THROWS_AS(mean_occupation(bad, 0), PhysicsError);
    CHECK_THROWS_AS(symplectic_eigenvalues(bad), PhysicsError);
    CHECK_THROWS_AS(measure_state(bad), PhysicsError);

    CovState bad2 = CovState::vacuum(2);
    bad2.sigma *= 0.5;
    CHECK_THROWS_AS(log_negativity(bad2), PhysicsError);
}

TEST_CASE("measure report and csv row") {
    const MeasureReport two = measure_state(tmsv(0.5 * std::log(2.0)));
    REQUIRE(two.logneg_ebits.has_value());
    CHECK(*two.logneg_ebits == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(two.mean_occupation.size() == 2);

    const MeasureReport one = measure_state(CovState::thermal(RVec::Constant(1, 0.5)));
    CHECK_FALSE(one.logneg_ebits.has_value());
    CHECK(one.purity == doctest::Approx(0.5).epsilon(1e-12));

    // The log-negativity cell stays blank when the figure is undefined.
    CHECK(measure_csv_row(one, "th") == "th,0,0.5,,0.5");

    const std::string row = measure_csv_row(two, "pair");
    CHECK(row.substr(0, 5) == "pair,");
    CHECK(std::count(row.begin(), row.end(), ',') == 5);
}
