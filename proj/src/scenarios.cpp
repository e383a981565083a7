#include "gio/scenarios.hpp"

#include <cmath>

namespace gio {

namespace {

constexpr double two_pi = 2.0 * M_PI;
constexpr double c_light = 299792458.0;        // m/s
constexpr double hbar = 1.054571817e-34;       // J s
constexpr double k_boltzmann = 1.380649e-23;   // J/K
constexpr double atomic_mass = 1.66053906660e-27;  // kg

}  // namespace

void validate_ion_cavity(const IonCavityParams& p) {
    const double fields[] = {p.nu, p.delta, p.Delta, p.g0, p.Omega, p.eta,
                             p.kappa1, p.kappa2, p.kappa3, p.nbar_th};
    for (double f : fields)
        if (!std::isfinite(f)) throw PhysicsError("ion-cavity parameters must be finite");
    if (p.kappa1 < 0.0 || p.kappa2 < 0.0 || p.kappa3 < 0.0)
        throw PhysicsError("ion-cavity rates must be nonnegative");
    if (p.nbar_th < 0.0) throw PhysicsError("thermal occupancy must be nonnegative");
    if (!(p.eta > 0.0) || !(p.eta < 1.0))
        throw PhysicsError("Lamb-Dicke parameter must lie in (0, 1)");
}

// The elimination is perturbative in the couplings and the transition
// linewidth over Delta; the oscillation frequencies nu and delta may be
// comparable to Delta without harm.
bool large_detuning_ok(const IonCavityParams& p) {
    return p.Delta >= 5.0 * std::max({p.g0, p.Omega, p.kappa3});
}

EffectiveParams effective_params(const IonCavityParams& p) {
    validate_ion_cavity(p);
    if (!(p.Delta > 0.0)) throw PhysicsError("effective parameters need Delta > 0");
    if (!(p.kappa2 > 0.0)) throw PhysicsError("effective parameters need kappa2 > 0");
    EffectiveParams e;
    e.J = p.eta * p.g0 * p.Omega / p.Delta;
    e.delta_prime = p.delta - p.g0 * p.g0 / p.Delta;
    e.kappa_eff = 4.0 * e.J * e.J / p.kappa2;
    e.ratio_nu_kappa2 = p.nu / p.kappa2;
    if (e.J > 0.0) {
        e.ratio_kappa2_J = p.kappa2 / e.J;
        const double heating = p.nbar_th * p.kappa1;
        e.ratio_J_heating = heating > 0.0 ? e.J / heating : std::numeric_limits<double>::infinity();
    }
    return e;
}

SystemSpec ion_cavity_system(const IonCavityParams& p) {
    validate_ion_cavity(p);
    SystemSpec s;
    s.n = 3;
    s.H = CMat::Zero(6, 6);
    s.H(0, 1) = s.H(1, 0) = p.nu;
    s.H(2, 3) = s.H(3, 2) = p.delta;
    s.H(4, 5) = s.H(5, 4) = p.Delta;
    s.H(3, 4) = s.H(4, 3) = p.g0;  // a2' a3
    s.H(2, 5) = s.H(5, 2) = p.g0;  // a2 a3'
    for (int j : {0, 1})
        for (int k : {4, 5}) s.H(j, k) = s.H(k, j) = -p.eta * p.Omega;  // (a1+a1')(a3+a3')
    s.V = CVec::Zero(6);
    s.V(4) = Complex(0.0, p.Omega);   // i Omega a3
    s.V(5) = Complex(0.0, -p.Omega);  // -i Omega a3'
    s.kappa = RVec(3);
    s.kappa << p.kappa1, p.kappa2, p.kappa3;
    RVec nbar(3);
    nbar << p.nbar_th, 0.0, 0.0;
    s.sigma_in = thermal_input(s.kappa, nbar);
    s.labels = {"motion", "cavity", "internal"};
    validate_system(s);
    return s;
}

SystemSpec adiabatic_baseline(const EffectiveParams& eff, double nu) {
    if (!(eff.kappa_eff > 0.0)) throw PhysicsError("adiabatic baseline needs kappa_eff > 0");
    SystemSpec s;
    s.n = 1;
    s.H = CMat::Zero(2, 2);
    s.H(0, 1) = s.H(1, 0) = nu;
    s.V = CVec::Zero(2);
    s.kappa = RVec::Constant(1, eff.kappa_eff);
    s.sigma_in = thermal_input(s.kappa, RVec::Zero(1));
    s.labels = {"motion"};
    validate_system(s);
    return s;
}

Eigen::Matrix2d TwoSidedSplit::bs() const {
    if (kappaL < 0.0 || kappaR < 0.0 || !(kappaL + kappaR > 0.0))
        throw PhysicsError("two-sided split needs nonnegative rates with a positive sum");
    const double root = std::sqrt(kappaL + kappaR);
    const double cl = std::sqrt(kappaL) / root;
    const double cr = std::sqrt(kappaR) / root;
    Eigen::Matrix2d m;
    m << cl, cr, -cr, cl;
    return m;
}

CovState two_sided_transform(const TwoSidedSplit& split, const CovState& f_state) {
    return two_sided_transform(split, f_state, CovState::vacuum(1));
}

CovState two_sided_transform(const TwoSidedSplit& split, const CovState& f_state,
                             const CovState& xi_state) {
    if (f_state.n_modes() != 1 || xi_state.n_modes() != 1)
        throw std::invalid_argument("two_sided_transform: both states must be single-mode");
    if (f_state.basis != Basis::Ladder || xi_state.basis != Basis::Ladder)
        throw std::invalid_argument("two_sided_transform: states must be in the ladder basis");
    const Eigen::Matrix2d bs = split.bs();

    // (f_L, f_R) = BS' (f, xi), expanded on the doubled ladder vector.
    CMat s = CMat::Zero(4, 4);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            s(2 * r, 2 * c) = bs(c, r);  // transpose of bs
            s(2 * r + 1, 2 * c + 1) = bs(c, r);
        }

    const CovState joint = CovState::tensor(f_state, xi_state);
    CovState out;
    out.basis = Basis::Ladder;
    out.sigma = hermitize(s * joint.sigma * s.adjoint());
    out.mean = s * joint.mean;
    return out;
}

double excited_population_estimate(double n3) {
    if (n3 < 0.0) throw std::invalid_argument("excited_population_estimate: occupation must be nonnegative");
    const double f = n3 / (1.0 + n3);
    return f * f;
}

IonCavityParams derive_experimental(const RawExperimentalInputs& raw, DerivedDiagnostics* diag) {
    const double fields[] = {raw.lambda_light, raw.cavity_length, raw.waist, raw.kappa3,
                             raw.mass_amu, raw.nu, raw.T_env, raw.heating_time,
                             raw.kappa2, raw.Omega, raw.Delta};
    for (double f : fields)
        if (!(f > 0.0) || !std::isfinite(f))
            throw PhysicsError("experimental inputs must all be positive");

    DerivedDiagnostics d;
    d.mode_volume = raw.cavity_length * M_PI * 0.25 * raw.waist * raw.waist;
    d.g0 = 0.5 * std::sqrt(3.0 * raw.lambda_light * raw.lambda_light * c_light * raw.kappa3 /
                           (two_pi * d.mode_volume));
    d.x0 = std::sqrt(hbar / (2.0 * raw.mass_amu * atomic_mass * raw.nu));
    d.eta = two_pi * d.x0 / raw.lambda_light;
    d.finesse = M_PI * c_light / (raw.cavity_length * raw.kappa2);
    d.nbar_th = 1.0 / std::expm1(hbar * raw.nu / (k_boltzmann * raw.T_env));
    d.kappa1 = 1.0 / (raw.heating_time * d.nbar_th);
    if (diag) *diag = d;

    IonCavityParams p;
    p.nu = raw.nu;
    p.Delta = raw.Delta;
    p.g0 = d.g0;
    p.Omega = raw.Omega;
    p.eta = d.eta;
    p.kappa1 = d.kappa1;
    p.kappa2 = raw.kappa2;
    p.kappa3 = raw.kappa3;
    p.nbar_th = d.nbar_th;
    p.delta = raw.nu + d.g0 * d.g0 / raw.Delta;  // effective detuning on the sideband
    validate_ion_cavity(p);
    return p;
}

IonCavityParams indium_table1() {
    IonCavityParams p;
    p.nu = two_pi * 5e6;
    p.g0 = two_pi * 0.62e6;
    p.Omega = two_pi * 1e6;
    p.Delta = two_pi * 10e6;
    p.eta = 0.08;
    p.kappa2 = two_pi * 53e3;
    p.kappa3 = two_pi * 360e3;
    p.nbar_th = 1.2e6;
    p.kappa1 = two_pi * 24.0 / p.nbar_th;  // quoted heating rate over occupancy
    p.delta = p.nu + p.g0 * p.g0 / p.Delta;
    return p;
}

RawExperimentalInputs raw_indium() {
    RawExperimentalInputs r;
    r.lambda_light = 230e-9;
    r.cavity_length = 1e-2;
    r.waist = 6e-6;
    r.kappa3 = two_pi * 360e3;
    r.mass_amu = 114.0;
    r.nu = two_pi * 5e6;
    r.T_env = 300.0;
    r.heating_time = 6.6e-3;
    r.kappa2 = two_pi * 53e3;
    r.Omega = two_pi * 1e6;
    r.Delta = two_pi * 10e6;
    return r;
}

double indium_detector_bandwidth() { return two_pi * 50e6; }

}  // namespace gio
