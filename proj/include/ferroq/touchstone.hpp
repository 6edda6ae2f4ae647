#pragma once

#include <string>
#include <string_view>

#include "ferroq/network.hpp"

namespace ferroq {

/// Parse a Touchstone v1 document (.s1p or .s2p content). The option line
/// ('#') must be present; frequency unit (Hz/kHz/MHz/GHz) and value format
/// (RI/MA/DB) are applied, comment lines ('!') are kept as label metadata,
/// and structured comments of the form "! @key value" restore metadata
/// written by write_touchstone. Touchstone v2 ([Version] blocks) is rejected.
/// Errors carry the offending 1-based line number.
Network parse_touchstone(std::string_view text);

/// Serialize to Touchstone v1, RI format, Hz, with z0 on the option line and
/// full double precision. Metadata fields are emitted as "! @key value"
/// comments so that a parse/write round trip preserves them.
std::string write_touchstone(const Network& net);

} // namespace ferroq
