// Quadratic open bosonic networks: the model container, its Langevin drift
// matrix, covariance-matrix states and the two operator bases.
//
// Conventions, fixed across the whole library:
//   * interleaved ladder ordering v = (a1, a1+, a2, a2+, ..., an, an+)
//   * vacuum covariance = identity (symmetrised second moments)
//   * kappa_j is the energy decay rate of mode j; K = diag(sqrt(kappa_j))
//     with each rate repeated for the (a_j, a_j+) pair
//   * the input covariance sigma_in is defined for the scaled white-noise
//     drive K v_in, so a vacuum bath contributes kappa_j * identity blocks.

#pragma once

#include <string>
#include <vector>

#include "gio/linalg.hpp"
#include "gio/types.hpp"

namespace gio {

// Immutable description of an n-mode quadratic system.
//   H: 2n x 2n complex symmetric quadratic-form matrix (H = H^T)
//   V: length-2n linear-drive vector with V[2j] = conj(V[2j+1])
//   kappa: n nonnegative decay rates
//   sigma_in: 2n x 2n Hermitian input-noise covariance (scaled convention)
//   labels: optional per-mode names (empty or size n)
struct SystemSpec {
    int n = 0;
    CMat H;
    CVec V;
    RVec kappa;
    CMat sigma_in;
    std::vector<std::string> labels;
};

// Drift-side quantities derived from a SystemSpec.
struct DriftModel {
    int n = 0;
    CMat A;          // -i Sigma H - K^2/2
    RVec k_diag;     // diag of K, length 2n
    CVec vbar_in;    // -i Sigma V, constant displacement drive
    SpectralReport spectral;  // of A
    bool stable = false;
};

// Gaussian state: covariance + first moments, tagged with its basis.
struct CovState {
    CMat sigma;
    CVec mean;
    Basis basis = Basis::Ladder;

    int n_modes() const { return static_cast<int>(sigma.rows() / 2); }

    static CovState vacuum(int n);
    static CovState thermal(const RVec& nbar);
    // Single mode, minimum-uncertainty, squeezing strength given in dB of
    // quadrature-variance reduction; axis 'q' or 'p' selects the squeezed
    // quadrature.
    static CovState squeezed_db(double db, char axis = 'q');
    static CovState tensor(const CovState& a, const CovState& b);
};

struct PhysicalityReport {
    bool ok = false;
    double min_eigenvalue = 0.0;     // of sigma_q + i Omega on the lossy block
    std::vector<int> lossy_modes;    // 0-based indices with kappa > 0
};

// Block-diagonal ladder commutation matrix [v_j, v_k]: n copies of
// [[0,1],[-1,0]].  The quadrature symplectic form Omega has the same
// numerical entries; both names are provided for readability.
CMat ladder_commutation(int n);
CMat quad_symplectic(int n);

// Unitary ladder->quadrature change of basis, block diag of
// (1/sqrt2) [[1,1],[-i,i]].
CMat quad_transform(int n);

// Structural checks: dimensions, H symmetry, V conjugate pairing,
// kappa >= 0, sigma_in Hermitian.  Throws PhysicsError naming the first
// violated condition.
void validate_system(const SystemSpec& spec, const Tolerances& tols = default_tols);

// Per-mode labels, falling back to "mode1".."moden".
std::vector<std::string> mode_labels(const SystemSpec& spec);

// Langevin drift A = -i Sigma H - K^2/2 and the displacement drive,
// with the spectral report of A attached.  H is re-symmetrised internally.
DriftModel build_drift(const SystemSpec& spec, const Tolerances& tols = default_tols);

// Input noise for independent thermal baths: K diag(2 nbar_j + 1) K.
CMat thermal_input(const RVec& kappa, const RVec& nbar);

// Occupancy relaxation rate of the longest-lived normal mode,
// 2 min |Re eig A|.  Equals kappa for a single lossy mode; for coupled
// systems it is the exact cooling rate an effective-theory formula only
// approximates.
double slowest_relaxation_rate(const DriftModel& model);

// Bona fide input-state test, evaluated in the quadrature basis where the
// uncertainty condition sigma_q + i Omega >= 0 is unambiguous.  Restricted
// to modes with kappa > 0 (lossless modes carry no input channel).
PhysicalityReport validate_physicality(const SystemSpec& spec,
                                       const Tolerances& tols = default_tols);

// Same uncertainty test for an explicit state (any basis).
PhysicalityReport state_physicality(const CovState& state,
                                    const Tolerances& tols = default_tols);

CovState to_quadrature(const CovState& state);
CovState from_quadrature(const CovState& state);

// Closed-form intra-system evolution of a Gaussian state under the drift:
// sigma(t) = e^{At} sigma e^{A+t} + integral of the input noise,
// mean(t) = e^{At} mean + A^{-1}(e^{At} - 1) vbar_in.
CovState propagate_state(const DriftModel& model, const CMat& sigma_in,
                         const CovState& state0, double t,
                         const Tolerances& tols = default_tols);

// JSON (de)serialisation of SystemSpec; the schema is documented in the
// README.  Parsing errors throw ConfigError.
std::string system_to_json_text(const SystemSpec& spec, int indent = 2);
SystemSpec system_from_json_text(const std::string& text);

}  // namespace gio
