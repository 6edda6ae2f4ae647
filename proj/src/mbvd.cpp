#include "ferroq/mbvd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ferroq/levmar.hpp"

namespace ferroq {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void MbvdParams::validate() const {
    if (!(c0 > 0.0)) throw DataError("mbvd: c0 must be > 0");
    if (!(cm > 0.0)) throw DataError("mbvd: cm must be > 0");
    if (!(lm > 0.0)) throw DataError("mbvd: lm must be > 0");
    if (r0 < 0.0 || rs < 0.0 || rm < 0.0)
        throw DataError("mbvd: resistances must be >= 0");
}

cplx y_mbvd_at(const MbvdParams& p, double freq) {
    const double w = kTwoPi * freq;
    const cplx jw{0.0, w};
    const cplx y_static = 1.0 / (p.r0 + 1.0 / (jw * p.c0));
    const cplx y_motional = 1.0 / (p.rm + jw * p.lm + 1.0 / (jw * p.cm));
    const cplx yb = y_static + y_motional;
    if (p.rs == 0.0) return yb;
    return 1.0 / (p.rs + 1.0 / yb);
}

AdmittanceSpectrum y_mbvd(const MbvdParams& p, const std::vector<double>& freqs) {
    p.validate();
    AdmittanceSpectrum spec;
    spec.freqs = freqs;
    spec.y.reserve(freqs.size());
    for (double f : freqs) spec.y.push_back(y_mbvd_at(p, f));
    return spec;
}

MbvdParams init_guess(const AdmittanceSpectrum& spec) {
    spec.validate();
    const size_t n = spec.freqs.size();

    size_t i_max = 0;
    double y_max = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double m = std::abs(spec.y[i]);
        if (m > y_max) { y_max = m; i_max = i; }
    }
    size_t i_min = i_max;
    double y_min = y_max;
    for (size_t i = i_max + 1; i < n; ++i) {
        const double m = std::abs(spec.y[i]);
        if (m < y_min) { y_min = m; i_min = i; }
    }
    // a resonance is bracketed when the |Y| minimum above the peak is an
    // interior point that actually dips below the peak
    if (i_max == 0 || i_max + 1 >= n || i_min == i_max || i_min + 1 >= n ||
        !(y_min < 0.5 * y_max))
        throw DataError("init_guess: resonance not bracketed (no |Y| minimum above the maximum)");

    const double fs = spec.freqs[i_max];
    const double fp = spec.freqs[i_min];

    // c0 from the median of Im(Y)/w over off-resonance points
    std::vector<double> c_est;
    for (size_t i = 0; i < n; ++i) {
        if (spec.freqs[i] > 0.97 * fs && spec.freqs[i] < 1.03 * fp) continue;
        const double c = spec.y[i].imag() / (kTwoPi * spec.freqs[i]);
        if (c > 0.0) c_est.push_back(c);
    }
    if (c_est.empty()) {
        for (size_t i = 0; i < n; ++i) {
            const double c = std::abs(spec.y[i].imag()) / (kTwoPi * spec.freqs[i]);
            if (c > 0.0) c_est.push_back(c);
        }
    }
    if (c_est.empty())
        throw DataError("init_guess: spectrum is not capacitive off resonance");
    std::nth_element(c_est.begin(), c_est.begin() + c_est.size() / 2, c_est.end());
    const double c0 = c_est[c_est.size() / 2];

    MbvdParams p;
    p.c0 = c0;
    p.cm = c0 * ((fp / fs) * (fp / fs) - 1.0);
    p.lm = 1.0 / (std::pow(kTwoPi * fs, 2) * p.cm);
    const double rs_seed = 0.5;
    p.rm = std::max(1.0 / y_max - rs_seed, 0.05 / y_max);
    p.r0 = 1.0;
    p.rs = rs_seed;
    return p;
}

MbvdFit fit_mbvd(const AdmittanceSpectrum& spec,
                 const std::optional<MbvdParams>& init) {
    spec.validate();
    if (spec.freqs.size() < 50)
        throw DataError("fit_mbvd: need at least 50 frequency points");
    const MbvdParams p0 = init ? *init : init_guess(spec);
    p0.validate();

    const size_t n = spec.freqs.size();
    std::vector<double> inv_mag(n);
    for (size_t i = 0; i < n; ++i) {
        const double m = std::abs(spec.y[i]);
        if (!(m > 0.0)) throw DataError("fit_mbvd: zero measured admittance sample");
        inv_mag[i] = 1.0 / m;
    }

    // log transform keeps every parameter positive; zero seeds are floored
    auto safe_log = [](double v) { return std::log(std::max(v, 1e-30)); };
    Eigen::VectorXd x0(6);
    x0 << safe_log(p0.r0), safe_log(p0.c0), safe_log(p0.rs), safe_log(p0.rm),
          safe_log(p0.lm), safe_log(p0.cm);

    auto unpack = [](const Eigen::VectorXd& x) {
        MbvdParams p;
        p.r0 = std::exp(x[0]); p.c0 = std::exp(x[1]); p.rs = std::exp(x[2]);
        p.rm = std::exp(x[3]); p.lm = std::exp(x[4]); p.cm = std::exp(x[5]);
        return p;
    };

    auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
        const MbvdParams p = unpack(x);
        for (size_t i = 0; i < n; ++i) {
            const cplx d = (y_mbvd_at(p, spec.freqs[i]) - spec.y[i]) * inv_mag[i];
            r[2 * i] = d.real();
            r[2 * i + 1] = d.imag();
        }
    };

    levmar::Options opts;
    opts.max_iter = 500;
    opts.step_tol = 1e-10;
    opts.cost_tol = 1e-12;
    const auto sol = levmar::minimize(residual, x0, static_cast<int>(2 * n), opts);

    MbvdFit fit;
    fit.params = unpack(sol.x);
    fit.n_iter = sol.n_iter;
    fit.converged = sol.converged;
    fit.residual_rms = std::sqrt(2.0 * sol.cost / static_cast<double>(n));
    // map log-space covariance to natural units: cov_p = p_i p_j cov_log
    const MbvdParams& p = fit.params;
    const double pv[6] = {p.r0, p.c0, p.rs, p.rm, p.lm, p.cm};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            fit.covariance(i, j) = sol.covariance(i, j) * pv[i] * pv[j];
    return fit;
}

std::vector<cplx> mbvd_s11(const MbvdParams& p, const std::vector<double>& freqs,
                           double z0) {
    std::vector<cplx> s11;
    s11.reserve(freqs.size());
    const double y0 = 1.0 / z0;
    for (double f : freqs) {
        const cplx y = y_mbvd_at(p, f);
        s11.push_back((y0 - y) / (y0 + y));
    }
    return s11;
}

std::vector<std::optional<double>> bode_q(const std::vector<double>& freqs,
                                          const std::vector<cplx>& s11) {
    if (freqs.size() < 3)
        throw DataError("bode_q: need at least 3 frequency points");
    if (freqs.size() != s11.size())
        throw DataError("bode_q: frequency and data lengths differ");
    const auto tau = group_delay(freqs, s11);
    std::vector<std::optional<double>> q(freqs.size());
    for (size_t i = 0; i < freqs.size(); ++i) {
        const double mag = std::abs(s11[i]);
        if (mag >= 1.0) continue; // lossless point: guard the division
        const double w = kTwoPi * freqs[i];
        q[i] = w * tau[i] * mag / (1.0 - mag * mag);
    }
    return q;
}

FomReport compute_fom(const MbvdParams& p, double z0_ref) {
    p.validate();
    FomReport r;
    r.c0 = p.c0;
    r.fs = 1.0 / (kTwoPi * std::sqrt(p.lm * p.cm));
    r.fp = r.fs * std::sqrt(1.0 + p.cm / p.c0);
    const double fs2 = r.fs * r.fs, fp2 = r.fp * r.fp;
    r.k2["cm_ratio"] = p.cm / (p.c0 + p.cm);
    r.k2["freq_sep"] = (fp2 - fs2) / fp2;
    r.k2["pi2_8"] = (std::numbers::pi * std::numbers::pi / 8.0) * (fp2 - fs2) / fs2;
    if (p.rm > 0.0) r.q_motional = kTwoPi * r.fs * p.lm / p.rm;

    // peak Bode Q from the synthesized reflection around the resonance
    const double f_lo = 0.90 * r.fs, f_hi = 1.10 * r.fp;
    const int n_grid = 3001;
    std::vector<double> freqs(n_grid);
    for (int i = 0; i < n_grid; ++i)
        freqs[i] = f_lo + (f_hi - f_lo) * i / (n_grid - 1);
    const auto q = bode_q(freqs, mbvd_s11(p, freqs, z0_ref));
    for (const auto& qi : q)
        if (qi && (!r.q_bode_max || *qi > *r.q_bode_max)) r.q_bode_max = *qi;
    return r;
}

} // namespace ferroq
