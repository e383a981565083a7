#pragma once

#include "gio/system_model.hpp"

namespace gio {

// Trapped-ion-in-cavity model builders and the analytic baselines used to
// cross-check the full three-mode dynamics. Mode order is fixed:
// 1 = motion, 2 = cavity, 3 = internal transition (treated as bosonic).

struct IonCavityParams {
    double nu = 0.0;        // motional trap frequency, rad/s
    double delta = 0.0;     // cavity detuning, rad/s
    double Delta = 0.0;     // internal-transition detuning, rad/s
    double g0 = 0.0;        // cavity-transition coupling, rad/s
    double Omega = 0.0;     // drive Rabi frequency, rad/s
    double eta = 0.0;       // Lamb-Dicke parameter
    double kappa1 = 0.0;    // motional heating-bath rate, rad/s
    double kappa2 = 0.0;    // cavity linewidth, rad/s
    double kappa3 = 0.0;    // transition decay rate, rad/s
    double nbar_th = 0.0;   // thermal occupancy of the motional bath
};

// Throws PhysicsError when rates are negative, eta is outside (0, 1), or
// any field is non-finite.
void validate_ion_cavity(const IonCavityParams& p);

// Sanity condition for the dispersive elimination of the internal mode.
bool large_detuning_ok(const IonCavityParams& p);

struct EffectiveParams {
    double J = 0.0;            // motion-cavity swap rate, eta g0 Omega / Delta
    double delta_prime = 0.0;  // Stark-shifted cavity detuning, delta - g0^2/Delta
    double kappa_eff = 0.0;    // effective motional cooling rate, 4 J^2 / kappa2

    // Sideband-regime diagnostics, each should be >> 1:
    double ratio_nu_kappa2 = 0.0;
    double ratio_kappa2_J = 0.0;
    double ratio_J_heating = 0.0;  // J / (nbar_th kappa1)
};

EffectiveParams effective_params(const IonCavityParams& p);

// Full three-mode model: harmonic terms (nu, delta, Delta), beam-splitter
// coupling g0 between cavity and transition, position-position coupling
// -eta Omega between motion and transition, linear drive i Omega (a3 - a3')
// carried by V. Thermal input acts on the motion only.
SystemSpec ion_cavity_system(const IonCavityParams& p);

// Single-mode stand-in after adiabatic elimination: frequency nu, loss
// kappa_eff, vacuum input. Its matched-pulse channel is the identity, which
// is the analytic yardstick the full model is compared against.
SystemSpec adiabatic_baseline(const EffectiveParams& eff, double nu);

// A cavity leaking through both mirrors is a one-sided cavity followed by
// a beam-splitter on (output, auxiliary vacuum).
struct TwoSidedSplit {
    double kappaL = 0.0;
    double kappaR = 0.0;

    // (1/sqrt(kL+kR)) [[sqrt(kL), sqrt(kR)], [-sqrt(kR), sqrt(kL)]]
    Eigen::Matrix2d bs() const;
};

// Two-mode state of (f_L, f_R) from a single-mode f and an auxiliary input
// (vacuum unless given). Dropping f_R afterwards models mirror loss.
CovState two_sided_transform(const TwoSidedSplit& split, const CovState& f_state);
CovState two_sided_transform(const TwoSidedSplit& split, const CovState& f_state,
                             const CovState& xi_state);

// Thermal-tail estimate P(n3 > 1) ~ (n3/(1+n3))^2 validating the bosonic
// treatment of the two-level transition.
double excited_population_estimate(double n3);

// Raw experimental numbers from which the model parameters derive.
struct RawExperimentalInputs {
    double lambda_light = 0.0;   // transition wavelength, m
    double cavity_length = 0.0;  // m
    double waist = 0.0;          // mode waist at the cavity center, m
    double kappa3 = 0.0;         // transition decay rate, rad/s
    double mass_amu = 0.0;       // ion mass, atomic mass units
    double nu = 0.0;             // trap frequency, rad/s
    double T_env = 0.0;          // environment temperature, K
    double heating_time = 0.0;   // (nbar_th kappa1)^{-1}, s
    double kappa2 = 0.0;         // cavity linewidth, rad/s
    double Omega = 0.0;          // drive, rad/s
    double Delta = 0.0;          // transition detuning, rad/s
};

struct DerivedDiagnostics {
    double mode_volume = 0.0;  // m^3
    double x0 = 0.0;           // motional ground-state size, m
    double g0 = 0.0;           // rad/s
    double eta = 0.0;
    double finesse = 0.0;
    double nbar_th = 0.0;
    double kappa1 = 0.0;       // rad/s
};

// Computes g0, eta, finesse, nbar_th, kappa1 from the raw inputs; the
// returned params pick delta = nu + g0^2/Delta so the effective cavity
// detuning sits on the motional sideband.
IonCavityParams derive_experimental(const RawExperimentalInputs& raw,
                                    DerivedDiagnostics* diag = nullptr);

// ── shipped presets ──

IonCavityParams indium_table1();
RawExperimentalInputs raw_indium();

// Detector bandwidth used for the continuous-readout runs on the indium
// parameter set (Gamma = 2pi * 50 MHz).
double indium_detector_bandwidth();

}  // namespace gio
