#include "gio/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "json_codec.hpp"

namespace gio {

namespace {

void check_accessible(const std::vector<int>& accessible, int n) {
    int prev = -1;
    for (int m : accessible) {
        if (m < 0 || m >= n) throw std::invalid_argument("profile: accessible mode index out of range");
        if (m <= prev) throw std::invalid_argument("profile: accessible modes must be strictly increasing");
        prev = m;
    }
}

// Common validation + scratch shared by the three channel builders.
struct ChannelWork {
    int d = 0;
    CMat sigma;                     // hermitised input covariance
    CVec lambda;                    // filter rates, one per ladder row
    std::vector<int> defined;       // modes with kappa > 0
    std::vector<bool> row_defined;  // per ladder row
    std::vector<std::string> warnings;
};

ChannelWork prepare(const DriftModel& model, const CMat& sigma_in,
                    const ModeProfile& profile, const Tolerances& tols) {
    if (!model.stable)
        throw PhysicsError("channel construction requires a strictly stable drift (max Re eig = " +
                           std::to_string(model.spectral.max_real_part) + ")");
    const int d = 2 * model.n;
    if (profile.lambda.size() != d)
        throw std::invalid_argument("profile size does not match the model");
    if (sigma_in.rows() != d || sigma_in.cols() != d)
        throw std::invalid_argument("sigma_in shape does not match the model");
    require_finite(sigma_in, "sigma_in");
    if ((sigma_in - sigma_in.adjoint()).norm() > tols.herm * std::max(1.0, sigma_in.norm()))
        throw PhysicsError("sigma_in must be Hermitian");

    ChannelWork w;
    w.d = d;
    w.sigma = hermitize(sigma_in);
    w.lambda = profile.lambda;
    w.row_defined.assign(static_cast<size_t>(d), false);
    for (int j = 0; j < model.n; ++j) {
        const bool lossy = model.k_diag(2 * j) > 0.0;
        if (lossy) {
            w.defined.push_back(j);
            w.row_defined[static_cast<size_t>(2 * j)] = true;
            w.row_defined[static_cast<size_t>(2 * j + 1)] = true;
        }
    }
    for (int m : profile.accessible) {
        if (model.k_diag(2 * m) == 0.0)
            throw PhysicsError("accessible mode " + std::to_string(m + 1) +
                               " is lossless (kappa = 0) and has no output field");
    }
    return w;
}

// The unnormalised filtered record w(t) = int_0^t e^{Lambda (t-s)} v_out(s) ds
// obeys dw/dt = Lambda w + K v - K^{-1} v_in, so stacking it under the system
// gives one larger linear drift.  Both finite-time and stationary records then
// come out of a single exponential / noise integral of the stack; no resolvent
// of (A - lambda) appears, so a filter rate sitting exactly on a drift
// eigenvalue costs nothing (the stack just turns defective, which the
// exponential and the Lyapunov solve handle).
struct FilterStack {
    CMat a;     // [[A, 0], [K, Lambda]]
    CMat q;     // forcing covariance of (v_in, -K^{-1} v_in)
    CVec vbar;  // extended drive
};

FilterStack stack_filters(const DriftModel& model, const ChannelWork& w) {
    const int d = w.d;
    FilterStack st;
    st.a = CMat::Zero(2 * d, 2 * d);
    st.a.topLeftCorner(d, d) = model.A;

    CMat feed = CMat::Zero(2 * d, d);  // maps v_in into the stacked forcing
    feed.topLeftCorner(d, d).setIdentity();
    for (int r = 0; r < d; ++r) {
        st.a(d + r, d + r) = w.lambda(r);
        if (!w.row_defined[static_cast<size_t>(r)]) continue;  // no output port
        st.a(d + r, r) = model.k_diag(r);
        feed(d + r, r) = -1.0 / model.k_diag(r);
    }
    st.q = feed * w.sigma * feed.adjoint();
    st.vbar = feed * model.vbar_in;
    return st;
}

// Row r of (A + shift)^{-1}, with a conditioning guard.
struct ResolventRows {
    explicit ResolventRows(const CMat& a) : a_(a) {}

    Eigen::RowVectorXcd row(int r, Complex shift) {
        CMat m = a_;
        m.diagonal().array() += shift;
        Eigen::PartialPivLU<CMat> lu(m);
        const double rc = lu.rcond();
        if (rc < 1e-12)
            throw NumericalError("resolvent of the drift is ill-conditioned (estimate beyond 1e12)");
        return lu.inverse().row(r);
    }

  private:
    const CMat& a_;
};

GaussianChannel finish(ChannelKind kind, double t, ChannelWork&& w,
                       const ModeProfile& profile, CMat&& m, CMat&& n, CVec&& offset) {
    GaussianChannel ch;
    ch.kind = kind;
    ch.basis = Basis::Ladder;
    ch.t = t;
    ch.M = std::move(m);
    ch.N = hermitize(n);
    ch.mean_offset = std::move(offset);
    ch.lambda = std::move(w.lambda);
    ch.accessible = profile.accessible;
    ch.defined_modes = std::move(w.defined);
    ch.warnings = std::move(w.warnings);
    return ch;
}

}  // namespace

ModeProfile ModeProfile::from_modes(const CVec& mu, std::vector<int> accessible) {
    const int n = static_cast<int>(mu.size());
    if (n < 1) throw std::invalid_argument("profile: need at least one mode");
    check_accessible(accessible, n);
    ModeProfile p;
    p.lambda = CVec(2 * n);
    for (int j = 0; j < n; ++j) {
        if (!(mu(j).real() < 0.0) || !std::isfinite(mu(j).real()) || !std::isfinite(mu(j).imag()))
            throw PhysicsError("profile: Re(mu) must be strictly negative on mode " + std::to_string(j + 1));
        p.lambda(2 * j) = mu(j);
        p.lambda(2 * j + 1) = std::conj(mu(j));
    }
    p.accessible = std::move(accessible);
    return p;
}

ModeProfile make_profile(const RVec& kappa, std::vector<int> accessible,
                         const std::vector<std::pair<int, Complex>>& mu_overrides) {
    const int n = static_cast<int>(kappa.size());
    if (n < 1) throw std::invalid_argument("profile: need at least one mode");
    const double kmax = kappa.maxCoeff();
    if (!(kmax > 0.0)) throw PhysicsError("profile: all modes are lossless, no output field exists");
    CVec mu = CVec::Constant(n, Complex(-kmax, 0.0));
    for (const auto& [j, val] : mu_overrides) {
        if (j < 0 || j >= n) throw std::invalid_argument("profile: override index out of range");
        mu(j) = val;
    }
    return ModeProfile::from_modes(mu, std::move(accessible));
}

const char* to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::Pulse: return "pulse";
        case ChannelKind::Detector: return "detector";
        case ChannelKind::Stationary: return "stationary";
    }
    return "?";
}

GaussianChannel pulse_channel(const DriftModel& model, const CMat& sigma_in,
                              const ModeProfile& profile, const Tolerances& tols) {
    ChannelWork w = prepare(model, sigma_in, profile, tols);
    const int d = w.d;

    CMat x = CMat::Zero(d, d);   // filtered memory of the initial state
    CMat xp = CMat::Zero(d, d);  // x + N K^{-1}, the noise transfer rows
    ResolventRows res(model.A);
    for (int r = 0; r < d; ++r) {
        if (!w.row_defined[static_cast<size_t>(r)]) continue;
        const Complex lam = w.lambda(r);
        const double nfac = std::sqrt(-2.0 * lam.real());
        x.row(r) = (nfac * model.k_diag(r)) * res.row(r, lam);
        xp.row(r) = x.row(r);
        xp(r, r) += nfac / model.k_diag(r);
    }

    const CMat ws = xp * w.sigma * xp.adjoint();
    CMat y = CMat::Zero(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            y(r, c) = -ws(r, c) / (w.lambda(r) + std::conj(w.lambda(c)));

    CVec offset = CVec::Zero(d);
    if (model.vbar_in.norm() > 0.0) {
        const CVec drive = xp * model.vbar_in;
        for (int r = 0; r < d; ++r)
            if (w.row_defined[static_cast<size_t>(r)]) offset(r) = -drive(r) / w.lambda(r);
    }

    return finish(ChannelKind::Pulse, t_infinity, std::move(w), profile,
                  std::move(x), std::move(y), std::move(offset));
}

GaussianChannel detector_channel(const DriftModel& model, const CMat& sigma_in,
                                 const ModeProfile& profile, double t,
                                 const Tolerances& tols) {
    if (!std::isfinite(t) || t <= 0.0)
        throw NumericalError("detector_channel: t must be finite and > 0 (use stationary_spectrum for t = infinity)");
    ChannelWork w = prepare(model, sigma_in, profile, tols);
    const int d = w.d;

    const FilterStack st = stack_filters(model, w);
    const CMat e = expm(st.a, t);
    const CMat acc = noise_integral(st.a, st.q, t, tols);

    CVec norm = CVec::Zero(d);
    for (int r = 0; r < d; ++r) {
        const double re = w.lambda(r).real();
        norm(r) = std::sqrt(2.0 * re / std::expm1(2.0 * re * t));
    }

    const CMat z = norm.asDiagonal() * e.bottomLeftCorner(d, d);
    const CMat n = norm.asDiagonal() * acc.bottomRightCorner(d, d) * norm.asDiagonal();

    CVec offset = CVec::Zero(d);
    if (model.vbar_in.norm() > 0.0) {
        Eigen::PartialPivLU<CMat> lu(st.a);
        const CVec drift = lu.solve(CVec((e - CMat::Identity(2 * d, 2 * d)) * st.vbar));
        offset = norm.asDiagonal() * drift.tail(d);
    }

    return finish(ChannelKind::Detector, t, std::move(w), profile,
                  CMat(z), CMat(n), std::move(offset));
}

GaussianChannel stationary_spectrum(const DriftModel& model, const CMat& sigma_in,
                                    const ModeProfile& profile, const Tolerances& tols) {
    ChannelWork w = prepare(model, sigma_in, profile, tols);
    const int d = w.d;

    const FilterStack st = stack_filters(model, w);
    const CMat acc = noise_integral(st.a, st.q, t_infinity, tols);

    CVec norm = CVec::Zero(d);
    for (int r = 0; r < d; ++r) norm(r) = std::sqrt(-2.0 * w.lambda(r).real());

    const CMat n = norm.asDiagonal() * acc.bottomRightCorner(d, d) * norm.asDiagonal();

    CVec offset = CVec::Zero(d);
    if (model.vbar_in.norm() > 0.0) {
        Eigen::PartialPivLU<CMat> lu(st.a);
        offset = -(norm.asDiagonal() * CVec(lu.solve(st.vbar)).tail(d));
    }

    return finish(ChannelKind::Stationary, t_infinity, std::move(w), profile,
                  CMat(CMat::Zero(d, d)), CMat(n), std::move(offset));
}

CovState apply_channel(const GaussianChannel& ch, const CovState& state) {
    if (state.basis != ch.basis) throw std::invalid_argument("apply_channel: state and channel bases differ");
    if (state.sigma.rows() != ch.M.cols())
        throw std::invalid_argument("apply_channel: state dimension does not match the channel");
    CovState out;
    out.basis = ch.basis;
    out.sigma = hermitize(ch.M * state.sigma * ch.M.adjoint() + ch.N);
    out.mean = ch.M * state.mean + ch.mean_offset;
    return out;
}

CovState restrict_modes(const CovState& state, const std::vector<int>& modes) {
    if (modes.empty()) throw std::invalid_argument("restrict_modes: mode list is empty");
    check_accessible(modes, state.n_modes());
    const int m = static_cast<int>(modes.size());
    CovState out;
    out.basis = state.basis;
    out.sigma = CMat(2 * m, 2 * m);
    out.mean = CVec(2 * m);
    for (int r = 0; r < m; ++r) {
        out.mean(2 * r) = state.mean(2 * modes[static_cast<size_t>(r)]);
        out.mean(2 * r + 1) = state.mean(2 * modes[static_cast<size_t>(r)] + 1);
        for (int c = 0; c < m; ++c)
            out.sigma.block<2, 2>(2 * r, 2 * c) =
                state.sigma.block<2, 2>(2 * modes[static_cast<size_t>(r)], 2 * modes[static_cast<size_t>(c)]);
    }
    return out;
}

GaussianChannel to_quadrature(const GaussianChannel& ch) {
    if (ch.basis != Basis::Ladder) throw std::invalid_argument("to_quadrature: channel is already in the quadrature basis");
    const int n = static_cast<int>(ch.M.rows() / 2);
    const CMat u = quad_transform(n);
    GaussianChannel out = ch;
    out.basis = Basis::Quadrature;
    out.M = u * ch.M * u.adjoint();
    out.N = hermitize(u * ch.N * u.adjoint());
    out.mean_offset = u * ch.mean_offset;
    return out;
}

double cp_defect(const GaussianChannel& ch) {
    const GaussianChannel q = (ch.basis == Basis::Quadrature) ? ch : to_quadrature(ch);
    const int n_in = static_cast<int>(q.M.cols() / 2);

    // Restrict rows to genuine output modes; the input side keeps all modes.
    const int m = static_cast<int>(q.defined_modes.size());
    if (m == 0) throw PhysicsError("cp_defect: channel has no defined output modes");
    CMat mq(2 * m, 2 * n_in);
    CMat nq(2 * m, 2 * m);
    for (int r = 0; r < m; ++r) {
        mq.row(2 * r) = q.M.row(2 * q.defined_modes[static_cast<size_t>(r)]);
        mq.row(2 * r + 1) = q.M.row(2 * q.defined_modes[static_cast<size_t>(r)] + 1);
        for (int c = 0; c < m; ++c)
            nq.block<2, 2>(2 * r, 2 * c) =
                q.N.block<2, 2>(2 * q.defined_modes[static_cast<size_t>(r)], 2 * q.defined_modes[static_cast<size_t>(c)]);
    }

    const CMat test = hermitize(nq + Complex(0.0, 1.0) * (quad_symplectic(m) - mq * quad_symplectic(n_in) * mq.transpose()));
    Eigen::SelfAdjointEigenSolver<CMat> es(test, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::string channel_to_json_text(const GaussianChannel& ch, int indent) {
    nlohmann::json j;
    j["schema"] = "gio-channel/1";
    j["kind"] = to_string(ch.kind);
    j["basis"] = (ch.basis == Basis::Ladder) ? "ladder" : "quadrature";
    j["t"] = std::isinf(ch.t) ? nlohmann::json("inf") : nlohmann::json(ch.t);
    j["M"] = codec::cmat_to_json(ch.M);
    j["N"] = codec::cmat_to_json(ch.N);
    j["mean_offset"] = codec::cvec_to_json(ch.mean_offset);
    j["lambda"] = codec::cvec_to_json(ch.lambda);
    nlohmann::json acc = nlohmann::json::array();
    for (int m : ch.accessible) acc.push_back(m + 1);  // 1-based in serialised form
    j["accessible"] = acc;
    if (!ch.warnings.empty()) j["warnings"] = ch.warnings;
    if (!ch.provenance.empty()) j["provenance"] = ch.provenance;
    return j.dump(indent);
}

}  // namespace gio
