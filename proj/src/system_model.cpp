#include "gio/system_model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json_codec.hpp"

namespace gio {

CMat ladder_commutation(int n) {
    CMat s = CMat::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        s(2 * j, 2 * j + 1) = 1.0;
        s(2 * j + 1, 2 * j) = -1.0;
    }
    return s;
}

CMat quad_symplectic(int n) { return ladder_commutation(n); }

CMat quad_transform(int n) {
    const double r = 1.0 / std::sqrt(2.0);
    CMat u = CMat::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        u(2 * j, 2 * j) = r;
        u(2 * j, 2 * j + 1) = r;
        u(2 * j + 1, 2 * j) = Complex(0.0, -r);
        u(2 * j + 1, 2 * j + 1) = Complex(0.0, r);
    }
    return u;
}

void validate_system(const SystemSpec& spec, const Tolerances& tols) {
    if (spec.n < 1) throw PhysicsError("system needs at least one mode");
    const int d = 2 * spec.n;
    if (spec.H.rows() != d || spec.H.cols() != d)
        throw PhysicsError("H must be 2n x 2n");
    require_finite(spec.H, "H");
    const double hscale = std::max(1.0, spec.H.norm());
    if ((spec.H - spec.H.transpose()).norm() > tols.herm * hscale)
        throw PhysicsError("H must be (complex) symmetric: H = H^T");

    if (spec.V.size() != d) throw PhysicsError("V must have length 2n");
    require_finite(spec.V, "V");
    const double vscale = std::max(1.0, spec.V.norm());
    for (int j = 0; j < spec.n; ++j) {
        if (std::abs(spec.V(2 * j) - std::conj(spec.V(2 * j + 1))) > tols.herm * vscale) {
            std::ostringstream os;
            os << "V violates conjugate pairing on mode " << (j + 1)
               << ": V[2j] must equal conj(V[2j+1])";
            throw PhysicsError(os.str());
        }
    }

    if (spec.kappa.size() != spec.n) throw PhysicsError("kappa must have length n");
    for (int j = 0; j < spec.n; ++j) {
        const double k = spec.kappa(j);
        if (!std::isfinite(k) || k < 0.0) {
            std::ostringstream os;
            os << "kappa[" << (j + 1) << "] must be finite and >= 0";
            throw PhysicsError(os.str());
        }
    }

    if (spec.sigma_in.rows() != d || spec.sigma_in.cols() != d)
        throw PhysicsError("sigma_in must be 2n x 2n");
    require_finite(spec.sigma_in, "sigma_in");
    const double sscale = std::max(1.0, spec.sigma_in.norm());
    if ((spec.sigma_in - spec.sigma_in.adjoint()).norm() > tols.herm * sscale)
        throw PhysicsError("sigma_in must be Hermitian");

    if (!spec.labels.empty() && static_cast<int>(spec.labels.size()) != spec.n)
        throw PhysicsError("labels must be empty or have one entry per mode");
}

std::vector<std::string> mode_labels(const SystemSpec& spec) {
    if (!spec.labels.empty()) return spec.labels;
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(spec.n));
    for (int j = 0; j < spec.n; ++j) out.push_back("mode" + std::to_string(j + 1));
    return out;
}

DriftModel build_drift(const SystemSpec& spec, const Tolerances& tols) {
    validate_system(spec, tols);
    const int d = 2 * spec.n;

    DriftModel m;
    m.n = spec.n;
    m.k_diag = RVec(d);
    for (int j = 0; j < spec.n; ++j) {
        const double k = std::sqrt(spec.kappa(j));
        m.k_diag(2 * j) = k;
        m.k_diag(2 * j + 1) = k;
    }

    const CMat hsym = 0.5 * (spec.H + spec.H.transpose());
    const CMat s = ladder_commutation(spec.n);
    m.A = Complex(0.0, -1.0) * (s * hsym);
    m.A -= 0.5 * m.k_diag.array().square().matrix().cast<Complex>().asDiagonal().toDenseMatrix();
    m.vbar_in = Complex(0.0, -1.0) * (s * spec.V);
    m.spectral = spectral_report(m.A);
    m.stable = is_stable(m.spectral, tols);
    return m;
}

double slowest_relaxation_rate(const DriftModel& model) {
    if (!model.stable) throw PhysicsError("slowest_relaxation_rate: drift is not stable");
    double slow = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < model.spectral.eigenvalues.size(); ++i)
        slow = std::min(slow, std::abs(model.spectral.eigenvalues(i).real()));
    return 2.0 * slow;
}

CMat thermal_input(const RVec& kappa, const RVec& nbar) {
    if (kappa.size() != nbar.size()) throw PhysicsError("thermal_input: kappa and nbar must have equal length");
    const int n = static_cast<int>(kappa.size());
    CMat sigma = CMat::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(nbar(j)) || nbar(j) < 0.0)
            throw PhysicsError("thermal_input: negative or non-finite occupancy on mode " + std::to_string(j + 1));
        if (!std::isfinite(kappa(j)) || kappa(j) < 0.0)
            throw PhysicsError("thermal_input: negative or non-finite rate on mode " + std::to_string(j + 1));
        const double val = kappa(j) * (2.0 * nbar(j) + 1.0);
        sigma(2 * j, 2 * j) = val;
        sigma(2 * j + 1, 2 * j + 1) = val;
    }
    return sigma;
}

PhysicalityReport validate_physicality(const SystemSpec& spec, const Tolerances& tols) {
    validate_system(spec, tols);
    PhysicalityReport rep;
    for (int j = 0; j < spec.n; ++j)
        if (spec.kappa(j) > 0.0) rep.lossy_modes.push_back(j);

    const int nl = static_cast<int>(rep.lossy_modes.size());
    if (nl == 0) {  // no input channels at all; vacuously fine
        rep.ok = true;
        rep.min_eigenvalue = 0.0;
        return rep;
    }

    // Unscaled bath covariance on the lossy block: K^-1 sigma_in K^-1.
    CMat bath(2 * nl, 2 * nl);
    for (int r = 0; r < nl; ++r) {
        const double kr = std::sqrt(spec.kappa(rep.lossy_modes[r]));
        for (int c = 0; c < nl; ++c) {
            const double kc = std::sqrt(spec.kappa(rep.lossy_modes[c]));
            for (int rr = 0; rr < 2; ++rr)
                for (int cc = 0; cc < 2; ++cc)
                    bath(2 * r + rr, 2 * c + cc) =
                        spec.sigma_in(2 * rep.lossy_modes[r] + rr, 2 * rep.lossy_modes[c] + cc) / (kr * kc);
        }
    }

    const CMat u = quad_transform(nl);
    const CMat test = hermitize(u * bath * u.adjoint() + Complex(0.0, 1.0) * quad_symplectic(nl));
    Eigen::SelfAdjointEigenSolver<CMat> es(test, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.ok = rep.min_eigenvalue >= -tols.psd * std::max(1.0, bath.norm());
    return rep;
}

PhysicalityReport state_physicality(const CovState& state, const Tolerances& tols) {
    const CovState q = (state.basis == Basis::Quadrature) ? state : to_quadrature(state);
    const int n = q.n_modes();
    PhysicalityReport rep;
    for (int j = 0; j < n; ++j) rep.lossy_modes.push_back(j);
    const CMat test = hermitize(q.sigma + Complex(0.0, 1.0) * quad_symplectic(n));
    Eigen::SelfAdjointEigenSolver<CMat> es(test, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.ok = rep.min_eigenvalue >= -tols.psd * std::max(1.0, q.sigma.norm());
    return rep;
}

CovState CovState::vacuum(int n) {
    if (n < 1) throw std::invalid_argument("vacuum: need at least one mode");
    return CovState{CMat::Identity(2 * n, 2 * n), CVec::Zero(2 * n), Basis::Ladder};
}

CovState CovState::thermal(const RVec& nbar) {
    const int n = static_cast<int>(nbar.size());
    if (n < 1) throw std::invalid_argument("thermal: need at least one mode");
    CovState st = vacuum(n);
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(nbar(j)) || nbar(j) < 0.0)
            throw PhysicsError("thermal state: occupancy must be finite and >= 0");
        st.sigma(2 * j, 2 * j) = st.sigma(2 * j + 1, 2 * j + 1) = 2.0 * nbar(j) + 1.0;
    }
    return st;
}

CovState CovState::squeezed_db(double db, char axis) {
    if (!std::isfinite(db) || db < 0.0) throw PhysicsError("squeezed state: dB value must be finite and >= 0");
    if (axis != 'q' && axis != 'p') throw std::invalid_argument("squeezed state: axis must be 'q' or 'p'");
    const double r = db * std::log(10.0) / 20.0;  // variance ratio 10^(-db/10) = e^(-2r)
    const double c = std::cosh(2.0 * r);
    const double s = std::sinh(2.0 * r) * (axis == 'q' ? -1.0 : 1.0);
    CovState st = vacuum(1);
    st.sigma << c, s, s, c;
    return st;
}

CovState CovState::tensor(const CovState& a, const CovState& b) {
    if (a.basis != b.basis) throw std::invalid_argument("tensor: states must share a basis");
    const Eigen::Index da = a.sigma.rows(), db_ = b.sigma.rows();
    CovState out;
    out.basis = a.basis;
    out.sigma = CMat::Zero(da + db_, da + db_);
    out.sigma.topLeftCorner(da, da) = a.sigma;
    out.sigma.bottomRightCorner(db_, db_) = b.sigma;
    out.mean = CVec(da + db_);
    out.mean << a.mean, b.mean;
    return out;
}

CovState to_quadrature(const CovState& state) {
    if (state.basis != Basis::Ladder) throw std::invalid_argument("to_quadrature: state is already in the quadrature basis");
    const CMat u = quad_transform(state.n_modes());
    return CovState{hermitize(u * state.sigma * u.adjoint()), u * state.mean, Basis::Quadrature};
}

CovState from_quadrature(const CovState& state) {
    if (state.basis != Basis::Quadrature) throw std::invalid_argument("from_quadrature: state is not in the quadrature basis");
    const CMat u = quad_transform(state.n_modes());
    return CovState{hermitize(u.adjoint() * state.sigma * u), u.adjoint() * state.mean, Basis::Ladder};
}

CovState propagate_state(const DriftModel& model, const CMat& sigma_in,
                         const CovState& state0, double t, const Tolerances& tols) {
    if (state0.basis != Basis::Ladder)
        throw std::invalid_argument("propagate_state: expects a ladder-basis state");
    if (state0.sigma.rows() != model.A.rows())
        throw std::invalid_argument("propagate_state: state dimension does not match the model");
    if (!std::isfinite(t) || t < 0.0) throw NumericalError("propagate_state: t must be finite and >= 0");
    if (t == 0.0) return state0;

    const CMat e = expm(model.A, t);
    CovState out;
    out.basis = Basis::Ladder;
    out.sigma = hermitize(e * state0.sigma * e.adjoint() + noise_integral(model.A, sigma_in, t, tols));
    out.mean = e * state0.mean;
    if (model.vbar_in.norm() > 0.0) {
        // A is invertible for any stable drift.
        Eigen::PartialPivLU<CMat> lu(model.A);
        out.mean += lu.solve(CMat(e - CMat::Identity(e.rows(), e.cols())) * model.vbar_in);
    }
    return out;
}

std::string system_to_json_text(const SystemSpec& spec, int indent) {
    return codec::system_to_json(spec).dump(indent);
}

SystemSpec system_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("system JSON parse failure: ") + e.what());
    }
    return codec::system_from_json(j);
}

namespace codec {

json system_to_json(const SystemSpec& spec) {
    json j;
    j["schema"] = "gio-system/1";
    j["n"] = spec.n;
    j["H"] = cmat_to_json(spec.H);
    j["V"] = cvec_to_json(spec.V);
    j["kappa"] = rvec_to_json(spec.kappa);
    j["sigma_in"] = cmat_to_json(spec.sigma_in);
    if (!spec.labels.empty()) j["labels"] = spec.labels;
    return j;
}

SystemSpec system_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("system: expected a JSON object");
    SystemSpec spec;
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ConfigError("system: integer field 'n' is required");
    spec.n = j["n"].get<int>();
    if (spec.n < 1) throw ConfigError("system: n must be >= 1");

    if (!j.contains("H")) throw ConfigError("system: field 'H' is required");
    spec.H = cmat_from_json(j["H"], "system.H");

    spec.V = j.contains("V") ? cvec_from_json(j["V"], "system.V") : CVec::Zero(2 * spec.n);

    if (!j.contains("kappa")) throw ConfigError("system: field 'kappa' is required");
    spec.kappa = rvec_from_json(j["kappa"], "system.kappa");

    const bool has_nbar = j.contains("nbar");
    const bool has_sigma = j.contains("sigma_in");
    if (has_nbar && has_sigma)
        throw ConfigError("system: give either 'nbar' or 'sigma_in', not both");
    if (has_sigma) {
        spec.sigma_in = cmat_from_json(j["sigma_in"], "system.sigma_in");
    } else {
        const RVec nbar = has_nbar ? rvec_from_json(j["nbar"], "system.nbar")
                                   : RVec(RVec::Zero(spec.kappa.size()));
        if (nbar.size() != spec.kappa.size())
            throw ConfigError("system.nbar: needs one entry per mode");
        spec.sigma_in = thermal_input(spec.kappa, nbar);
    }

    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw ConfigError("system.labels: expected an array of strings");
        for (const auto& l : j["labels"]) spec.labels.push_back(l.get<std::string>());
    }

    validate_system(spec);  // PhysicsError here is a model problem, not a parse problem
    return spec;
}

}  // namespace codec

}  // namespace gio
