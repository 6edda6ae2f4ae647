#include "ferroq/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "ferroq/version.hpp"

namespace ferroq {

namespace {

enum class ValueFormat { ri, ma, db };

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

double parse_number(const std::string& tok, int line_no) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(line_no, "not a number: '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(line_no, "not a number: '" + tok + "'");
    return v;
}

cplx value_pair(ValueFormat fmt, double a, double b) {
    switch (fmt) {
        case ValueFormat::ri: return {a, b};
        case ValueFormat::ma: return std::polar(a, b * std::numbers::pi / 180.0);
        case ValueFormat::db: return std::polar(std::pow(10.0, a / 20.0),
                                                b * std::numbers::pi / 180.0);
    }
    return {};
}

// "! @key value" comments round-trip metadata; anything else becomes label
// text. "@generator" is dropped.
void apply_comment(Metadata& meta, const std::string& body) {
    auto toks = tokens_of(body);
    if (!toks.empty() && toks[0].size() > 1 && toks[0][0] == '@') {
        const std::string key = toks[0].substr(1);
        const std::string rest = toks.size() > 1 ? toks[1] : "";
        if (key == "generator") return;
        if (key == "bias_voltage" && !rest.empty())   { meta.bias_voltage = std::stod(rest); return; }
        if (key == "temperature" && !rest.empty())    { meta.temperature = std::stod(rest); return; }
        if (key == "delay_length" && !rest.empty())   { meta.delay_length = std::stod(rest); return; }
        if (key == "sweep_direction" && !rest.empty()) {
            meta.sweep_direction = sweep_direction_from_string(rest);
            return;
        }
        if (key == "label") {
            size_t at = body.find(toks[0]);
            std::string text = body.substr(at + toks[0].size());
            if (!text.empty() && text.front() == ' ') text.erase(text.begin());
            if (!meta.label.empty()) meta.label += '\n';
            meta.label += text;
            return;
        }
        // unknown structured key: fall through to label
    }
    std::string trimmed = body;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
        trimmed.erase(trimmed.begin());
    if (trimmed.empty()) return;
    if (!meta.label.empty()) meta.label += '\n';
    meta.label += trimmed;
}

} // namespace

Network parse_touchstone(std::string_view text) {
    Network net;
    bool have_option = false;
    double freq_scale = 1e9; // touchstone default unit is GHz
    ValueFormat fmt = ValueFormat::ma;
    int line_no = 0;
    int values_per_point = -1; // 2 for 1-port, 8 for 2-port

    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // strip trailing comment
        std::string data = line;
        if (size_t bang = data.find('!'); bang != std::string::npos) {
            if (bang == data.find_first_not_of(" \t")) {
                apply_comment(net.meta, data.substr(bang + 1));
                continue;
            }
            data = data.substr(0, bang);
        }
        auto toks = tokens_of(data);
        if (toks.empty()) continue;

        if (toks[0][0] == '[')
            throw ParseError(line_no, "Touchstone v2 keyword '" + toks[0] +
                                          "' not supported (v1 only)");

        if (toks[0] == "#") {
            if (have_option)
                throw ParseError(line_no, "duplicate option line");
            // "# <unit> <param> <format> R <z0>", tokens in any order, all optional
            bool expect_r_value = false;
            for (size_t i = 1; i < toks.size(); ++i) {
                const std::string t = upper(toks[i]);
                if (expect_r_value) {
                    net.z0 = parse_number(toks[i], line_no);
                    if (net.z0 <= 0.0)
                        throw ParseError(line_no, "reference impedance must be > 0");
                    expect_r_value = false;
                } else if (t == "HZ")  freq_scale = 1.0;
                else if (t == "KHZ")   freq_scale = 1e3;
                else if (t == "MHZ")   freq_scale = 1e6;
                else if (t == "GHZ")   freq_scale = 1e9;
                else if (t == "RI")    fmt = ValueFormat::ri;
                else if (t == "MA")    fmt = ValueFormat::ma;
                else if (t == "DB")    fmt = ValueFormat::db;
                else if (t == "S")     { /* scattering parameters, the only supported type */ }
                else if (t == "Y" || t == "Z" || t == "G" || t == "H")
                    throw ParseError(line_no, "only S-parameter files are supported, got '" +
                                                  toks[i] + "'");
                else if (t == "R")     expect_r_value = true;
                else
                    throw ParseError(line_no, "malformed option line: unknown token '" +
                                                  toks[i] + "'");
            }
            if (expect_r_value)
                throw ParseError(line_no, "malformed option line: 'R' without impedance");
            have_option = true;
            continue;
        }

        if (!have_option)
            throw ParseError(line_no, "data before option line ('#' line missing)");

        if (values_per_point < 0) {
            if (toks.size() == 3) values_per_point = 2;        // 1-port
            else if (toks.size() == 9) values_per_point = 8;   // 2-port
            else
                throw ParseError(line_no,
                                 "expected 3 columns (1-port) or 9 columns (2-port), got " +
                                     std::to_string(toks.size()));
        }
        if (toks.size() != static_cast<size_t>(values_per_point) + 1)
            throw ParseError(line_no, "expected " + std::to_string(values_per_point + 1) +
                                          " columns, got " + std::to_string(toks.size()));

        const double f = parse_number(toks[0], line_no) * freq_scale;
        if (f <= 0.0)
            throw ParseError(line_no, "frequency must be > 0");
        if (!net.freqs.empty() && f <= net.freqs.back())
            throw ParseError(line_no, "non-monotonic frequency");
        std::vector<double> v;
        for (int i = 0; i < values_per_point; ++i)
            v.push_back(parse_number(toks[1 + i], line_no));

        Mat2 m{};
        if (values_per_point == 2) {
            m.m11 = value_pair(fmt, v[0], v[1]);
        } else {
            // touchstone v1 2-port column order: S11 S21 S12 S22
            m.m11 = value_pair(fmt, v[0], v[1]);
            m.m21 = value_pair(fmt, v[2], v[3]);
            m.m12 = value_pair(fmt, v[4], v[5]);
            m.m22 = value_pair(fmt, v[6], v[7]);
        }
        net.freqs.push_back(f);
        net.s.push_back(m);
    }

    if (!have_option)
        throw ParseError(line_no, "option line ('#') missing");
    net.ports = (values_per_point == 2) ? 1 : 2;
    if (net.freqs.size() < 2)
        throw ParseError(line_no, "need at least 2 data rows");
    net.validate();
    return net;
}

std::string write_touchstone(const Network& net) {
    net.validate();
    std::ostringstream os;
    char buf[512];

    os << "! @generator ferroq " << kVersion << "\n";
    const Metadata& m = net.meta;
    if (m.bias_voltage)  { std::snprintf(buf, sizeof buf, "! @bias_voltage %.17g\n", *m.bias_voltage); os << buf; }
    if (m.sweep_direction) os << "! @sweep_direction " << to_string(*m.sweep_direction) << "\n";
    if (m.temperature)   { std::snprintf(buf, sizeof buf, "! @temperature %.17g\n", *m.temperature); os << buf; }
    if (m.delay_length)  { std::snprintf(buf, sizeof buf, "! @delay_length %.17g\n", *m.delay_length); os << buf; }
    if (!m.label.empty()) {
        std::istringstream ls(m.label);
        std::string lab;
        while (std::getline(ls, lab)) os << "! @label " << lab << "\n";
    }

    std::snprintf(buf, sizeof buf, "# Hz S RI R %.17g\n", net.z0);
    os << buf;
    for (size_t i = 0; i < net.freqs.size(); ++i) {
        const Mat2& s = net.s[i];
        if (net.ports == 1) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", net.freqs[i],
                          s.m11.real(), s.m11.imag());
        } else {
            std::snprintf(buf, sizeof buf,
                          "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                          net.freqs[i],
                          s.m11.real(), s.m11.imag(), s.m21.real(), s.m21.imag(),
                          s.m12.real(), s.m12.imag(), s.m22.real(), s.m22.imag());
        }
        os << buf;
    }
    return os.str();
}

} // namespace ferroq
