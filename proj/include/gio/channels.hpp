// Exact Gaussian channels from the initial covariance of a quadratic open
// system to travelling output modes.
//
// Three flavours share one machinery:
//   pulse_channel       exponentially filtered output modes integrated over
//                       all times (full memory of the initial state)
//   detector_channel    the same filters truncated at a finite time t, the
//                       model of a finite-bandwidth photodetector record
//   stationary_spectrum the t -> infinity limit, where the initial state is
//                       forgotten and only the steady output spectrum remains
//
// Each mode filter is an exponential envelope with complex rate mu_j,
// Re(mu_j) < 0; rates are stored interleaved as (mu_j, conj mu_j) to match
// the ladder ordering.  Output modes are normalised to unit commutator, so
// channel outputs are ordinary covariance matrices with vacuum = identity.

#pragma once

#include <string>
#include <vector>

#include "gio/system_model.hpp"
#include "gio/types.hpp"

namespace gio {

// Filter rates for every mode plus the subset designated as physical
// output ports.  Construct through make_profile (fills unread modes with a
// default envelope) or from_modes (explicit rate per mode).
struct ModeProfile {
    CVec lambda;                  // 2n interleaved (mu_j, conj mu_j)
    std::vector<int> accessible;  // 0-based mode indices, strictly increasing

    int n_modes() const { return static_cast<int>(lambda.size() / 2); }

    static ModeProfile from_modes(const CVec& mu, std::vector<int> accessible);
};

// Every mode gets mu = -max(kappa) unless overridden; overrides are
// (mode index, mu) pairs.  This keeps unread modes broadband and far from
// any drift resonance.
ModeProfile make_profile(const RVec& kappa, std::vector<int> accessible,
                         const std::vector<std::pair<int, Complex>>& mu_overrides);

enum class ChannelKind { Pulse, Detector, Stationary };

// sigma_out = M sigma(0) M^dagger + N, mean_out = M mean(0) + mean_offset.
// Rows belonging to lossless modes carry no output field; they are zeroed
// and excluded from `defined_modes`.
struct GaussianChannel {
    ChannelKind kind = ChannelKind::Pulse;
    Basis basis = Basis::Ladder;
    double t = t_infinity;  // finite for detector channels
    CMat M;
    CMat N;
    CVec mean_offset;
    CVec lambda;                     // filter rates actually used
    std::vector<int> accessible;     // designated output ports
    std::vector<int> defined_modes;  // modes with kappa > 0 (rows are meaningful)
    std::vector<std::string> warnings;
    std::string provenance;  // free-form, set by callers (e.g. config hash)
};

const char* to_string(ChannelKind kind);

// Channel into the normalised exponential output modes, integrated over
// t in [0, infinity).  Requires a strictly stable drift and kappa > 0 on
// every accessible mode.
//
// Sign convention: the pulse modes are the negative of the bare time
// integral of the output field (a global phase-space rotation with no
// observable effect), so that M is simultaneously the covariance map and
// the mean map.  The matched single-mode channel then has M = -identity.
GaussianChannel pulse_channel(const DriftModel& model, const CMat& sigma_in,
                              const ModeProfile& profile,
                              const Tolerances& tols = default_tols);

// Filtered record up to a finite time t > 0.  A filter rate equal to a
// drift eigenvalue is fine: the maps are built from the exponential and
// noise integral of the drift extended by the filter registers, which is
// smooth through such collisions.
GaussianChannel detector_channel(const DriftModel& model, const CMat& sigma_in,
                                 const ModeProfile& profile, double t,
                                 const Tolerances& tols = default_tols);

// t -> infinity limit of the detector channel: M = 0, N = the integrated
// output spectrum seen through the filters.
GaussianChannel stationary_spectrum(const DriftModel& model, const CMat& sigma_in,
                                    const ModeProfile& profile,
                                    const Tolerances& tols = default_tols);

// Push a state through a channel (bases must match).
CovState apply_channel(const GaussianChannel& ch, const CovState& state);

// Keep only the listed output modes (0-based, strictly increasing).
CovState restrict_modes(const CovState& state, const std::vector<int>& modes);

GaussianChannel to_quadrature(const GaussianChannel& ch);

// Minimum eigenvalue of the complete-positivity test matrix
// N_q + i(Omega_out - M_q Omega_in M_q^T), evaluated in the quadrature
// basis on the defined modes.  >= 0 (within tolerance) for any channel
// built from a physical input covariance.
double cp_defect(const GaussianChannel& ch);

std::string channel_to_json_text(const GaussianChannel& ch, int indent = 2);

}  // namespace gio
