#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ferroq/error.hpp"

namespace ferroq {

using cplx = std::complex<double>;

enum class SweepDirection { forward, backward };

const char* to_string(SweepDirection d);
SweepDirection sweep_direction_from_string(const std::string& s);

/// Measurement conditions attached to a network. All fields optional; the
/// JSON manifest is the canonical way these enter the system.
struct Metadata {
    std::optional<double> bias_voltage;          // V
    std::optional<SweepDirection> sweep_direction;
    std::optional<double> temperature;           // K, >= 0
    std::optional<double> delay_length;          // m, >= 0
    std::string label;

    void validate() const;
};

/// One 2x2 complex scattering (or admittance) matrix.
struct Mat2 {
    cplx m11, m12, m21, m22;
};

/// Frequency-indexed two-port network data referenced to a real impedance z0.
/// One-port data is stored in the same container with ports == 1 and the
/// missing entries left at zero.
struct Network {
    std::vector<double> freqs;   // Hz, strictly increasing, all > 0
    std::vector<Mat2> s;         // one matrix per frequency
    double z0 = 50.0;            // ohm, > 0
    int ports = 2;               // 1 or 2
    Metadata meta;

    void validate() const;       // throws DataError on invariant violation
};

/// Complex admittance vs frequency, the working quantity for fitting.
struct AdmittanceSpectrum {
    std::vector<double> freqs;   // Hz, strictly increasing
    std::vector<cplx> y;         // S

    void validate() const;
};

// S <-> Y conversions. Y = (1/z0) (I+S)^-1 (I-S) per frequency; the inverse
// map satisfies y_to_s(s_to_y(net)) == net up to roundoff.
std::vector<Mat2> s_to_y(const Network& net);
Network y_to_s(const std::vector<double>& freqs, const std::vector<Mat2>& y,
               double z0, Metadata meta = {});

/// Admittance of a series-through DUT measured in a two-port configuration:
/// Y_dut(f) = -(Y12 + Y21)/2. Averaging symmetrizes measurement noise; for a
/// reciprocal network it is a no-op.
AdmittanceSpectrum device_admittance(const Network& net);

/// Phase of h unwrapped so consecutive samples never jump by more than pi.
std::vector<double> unwrap_phase(const std::vector<cplx>& h);

/// Group delay tau(f) = -(1/2pi) dphi/df of a complex spectrum. Central
/// differences in the interior, one-sided at the edges. Needs >= 3 points.
std::vector<double> group_delay(const std::vector<double>& freqs,
                                const std::vector<cplx>& h);

/// Restrict a spectrum to [f_lo, f_hi] (inclusive). Throws DataError if the
/// window is empty.
AdmittanceSpectrum window_band(const AdmittanceSpectrum& spec, double f_lo,
                               double f_hi);

} // namespace ferroq
