#include "ferroq/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ferroq {

const char* to_string(SweepDirection d) {
    return d == SweepDirection::forward ? "forward" : "backward";
}

SweepDirection sweep_direction_from_string(const std::string& s) {
    if (s == "forward")  return SweepDirection::forward;
    if (s == "backward") return SweepDirection::backward;
    throw DataError("unknown sweep direction '" + s + "'");
}

void Metadata::validate() const {
    if (temperature && *temperature < 0.0)
        throw DataError("metadata: temperature must be >= 0 K");
    if (delay_length && *delay_length < 0.0)
        throw DataError("metadata: delay_length must be >= 0 m");
}

static void check_freq_axis(const std::vector<double>& freqs, size_t n_other,
                            const char* what) {
    if (freqs.size() < 2)
        throw DataError(std::string(what) + ": need at least 2 frequency points");
    if (freqs.size() != n_other)
        throw DataError(std::string(what) + ": frequency and data lengths differ");
    if (freqs.front() <= 0.0)
        throw DataError(std::string(what) + ": frequencies must be > 0");
    for (size_t i = 1; i < freqs.size(); ++i)
        if (freqs[i] <= freqs[i - 1])
            throw DataError(std::string(what) + ": frequencies must be strictly increasing");
}

void Network::validate() const {
    check_freq_axis(freqs, s.size(), "network");
    if (z0 <= 0.0) throw DataError("network: z0 must be > 0");
    if (ports != 1 && ports != 2) throw DataError("network: ports must be 1 or 2");
    meta.validate();
}

void AdmittanceSpectrum::validate() const {
    check_freq_axis(freqs, y.size(), "spectrum");
}

static Mat2 invert2(const Mat2& a, double freq) {
    const cplx det = a.m11 * a.m22 - a.m12 * a.m21;
    const double scale = std::abs(a.m11) + std::abs(a.m12) + std::abs(a.m21) + std::abs(a.m22);
    if (!(std::abs(det) > 1e-14 * scale * scale) || scale == 0.0) {
        std::ostringstream os;
        os << "singular (I+S) matrix at " << freq << " Hz";
        throw NumericalError(os.str());
    }
    return {a.m22 / det, -a.m12 / det, -a.m21 / det, a.m11 / det};
}

static Mat2 mul2(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

std::vector<Mat2> s_to_y(const Network& net) {
    net.validate();
    std::vector<Mat2> out;
    out.reserve(net.s.size());
    const double y0 = 1.0 / net.z0;
    for (size_t i = 0; i < net.s.size(); ++i) {
        const Mat2& s = net.s[i];
        const Mat2 ips{1.0 + s.m11, s.m12, s.m21, 1.0 + s.m22};
        const Mat2 ims{1.0 - s.m11, -s.m12, -s.m21, 1.0 - s.m22};
        Mat2 y = mul2(invert2(ips, net.freqs[i]), ims);
        y.m11 *= y0; y.m12 *= y0; y.m21 *= y0; y.m22 *= y0;
        out.push_back(y);
    }
    return out;
}

Network y_to_s(const std::vector<double>& freqs, const std::vector<Mat2>& y,
               double z0, Metadata meta) {
    if (freqs.size() != y.size())
        throw DataError("y_to_s: frequency and data lengths differ");
    Network net;
    net.freqs = freqs;
    net.z0 = z0;
    net.meta = std::move(meta);
    net.s.reserve(y.size());
    // S = (I - z0 Y)(I + z0 Y)^-1
    for (size_t i = 0; i < y.size(); ++i) {
        Mat2 zy{z0 * y[i].m11, z0 * y[i].m12, z0 * y[i].m21, z0 * y[i].m22};
        const Mat2 ipy{1.0 + zy.m11, zy.m12, zy.m21, 1.0 + zy.m22};
        const Mat2 imy{1.0 - zy.m11, -zy.m12, -zy.m21, 1.0 - zy.m22};
        net.s.push_back(mul2(imy, invert2(ipy, freqs[i])));
    }
    net.validate();
    return net;
}

AdmittanceSpectrum device_admittance(const Network& net) {
    if (net.ports != 2)
        throw DataError("device_admittance: requires a 2-port network");
    const auto y = s_to_y(net);
    AdmittanceSpectrum spec;
    spec.freqs = net.freqs;
    spec.y.reserve(y.size());
    for (const Mat2& m : y)
        spec.y.push_back(-0.5 * (m.m12 + m.m21));
    return spec;
}

std::vector<double> unwrap_phase(const std::vector<cplx>& h) {
    std::vector<double> phi(h.size());
    double offset = 0.0;
    double prev = 0.0;
    for (size_t i = 0; i < h.size(); ++i) {
        double raw = std::arg(h[i]);
        if (i > 0) {
            double d = raw - prev;
            while (d > std::numbers::pi)  { offset -= 2.0 * std::numbers::pi; d -= 2.0 * std::numbers::pi; }
            while (d < -std::numbers::pi) { offset += 2.0 * std::numbers::pi; d += 2.0 * std::numbers::pi; }
        }
        prev = raw;
        phi[i] = raw + offset;
    }
    return phi;
}

std::vector<double> group_delay(const std::vector<double>& freqs,
                                const std::vector<cplx>& h) {
    if (freqs.size() < 3)
        throw DataError("group_delay: need at least 3 frequency points");
    if (freqs.size() != h.size())
        throw DataError("group_delay: frequency and data lengths differ");
    const auto phi = unwrap_phase(h);
    const size_t n = freqs.size();
    std::vector<double> tau(n);
    const double k = -1.0 / (2.0 * std::numbers::pi);
    tau[0] = k * (phi[1] - phi[0]) / (freqs[1] - freqs[0]);
    for (size_t i = 1; i + 1 < n; ++i)
        tau[i] = k * (phi[i + 1] - phi[i - 1]) / (freqs[i + 1] - freqs[i - 1]);
    tau[n - 1] = k * (phi[n - 1] - phi[n - 2]) / (freqs[n - 1] - freqs[n - 2]);
    return tau;
}

AdmittanceSpectrum window_band(const AdmittanceSpectrum& spec, double f_lo,
                               double f_hi) {
    AdmittanceSpectrum out;
    for (size_t i = 0; i < spec.freqs.size(); ++i) {
        if (spec.freqs[i] >= f_lo && spec.freqs[i] <= f_hi) {
            out.freqs.push_back(spec.freqs[i]);
            out.y.push_back(spec.y[i]);
        }
    }
    if (out.freqs.empty())
        throw DataError("window_band: no points in requested band");
    return out;
}

} // namespace ferroq
