#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ferroq/network.hpp"

namespace ferroq {

/// Modified Butterworth-Van Dyke equivalent circuit of one acoustic
/// resonance: static branch (c0 in series with r0), motional branch
/// (rm, lm, cm in series), both behind a lead resistance rs.
struct MbvdParams {
    double r0 = 0.0;  // dielectric loss, ohm
    double c0 = 0.0;  // static capacitance, F
    double rs = 0.0;  // electrode/lead resistance, ohm
    double rm = 0.0;  // motional resistance, ohm
    double lm = 0.0;  // motional inductance, H
    double cm = 0.0;  // motional capacitance, F

    void validate() const; // c0, cm, lm > 0; r0, rs, rm >= 0
};

struct MbvdFit {
    MbvdParams params;
    double residual_rms = 0.0;          // rms of |Y_model - Y_meas| / |Y_meas|
    Eigen::Matrix<double, 6, 6> covariance = Eigen::Matrix<double, 6, 6>::Zero();
    int n_iter = 0;
    bool converged = false;
};

/// Figures of merit of one fitted resonance. k2 carries every supported
/// coupling definition keyed by name; no single formula is privileged
/// because the literature does not agree on one.
struct FomReport {
    double fs = 0.0;                       // series resonance, Hz
    double fp = 0.0;                       // parallel resonance, Hz
    std::map<std::string, double> k2;      // definition name -> fraction
    std::optional<double> q_bode_max;      // peak Bode Q near resonance
    std::optional<double> q_motional;      // 2 pi fs lm / rm; absent when rm == 0
    double c0 = 0.0;
};

/// Circuit admittance Y(w) = 1/(rs + 1/Yb) with
/// Yb = 1/(r0 + 1/(jw c0)) + 1/(rm + jw lm + 1/(jw cm)).
AdmittanceSpectrum y_mbvd(const MbvdParams& p, const std::vector<double>& freqs);
cplx y_mbvd_at(const MbvdParams& p, double freq);

/// Starting point for fit_mbvd from a spectrum spanning one dominant
/// resonance. Throws DataError when the resonance is not bracketed (no |Y|
/// minimum above the maximum).
MbvdParams init_guess(const AdmittanceSpectrum& spec);

/// Fit the six circuit parameters by damped least squares on the relative
/// complex residual, with log-transformed parameters so positivity holds by
/// construction. Needs >= 50 points spanning fs and fp.
MbvdFit fit_mbvd(const AdmittanceSpectrum& spec,
                 const std::optional<MbvdParams>& init = std::nullopt);

/// Figures of merit from circuit parameters. q_bode_max is evaluated by
/// synthesizing the one-port reflection at z0_ref and taking the peak of
/// bode_q over a grid spanning the resonance.
FomReport compute_fom(const MbvdParams& p, double z0_ref = 50.0);

/// Bode quality factor from one-port reflection data:
/// Q(w) = w tau_g(w) |S11| / (1 - |S11|^2). Points with |S11| >= 1 are
/// reported absent rather than infinite.
std::vector<std::optional<double>> bode_q(const std::vector<double>& freqs,
                                          const std::vector<cplx>& s11);

/// One-port reflection of the circuit at reference impedance z0.
std::vector<cplx> mbvd_s11(const MbvdParams& p, const std::vector<double>& freqs,
                           double z0);

} // namespace ferroq
