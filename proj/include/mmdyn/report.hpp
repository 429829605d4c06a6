#pragma once

#include <string>

#include "mmdyn/dynamics.hpp"

namespace mmdyn {

/// Stable JSON rendering of an analysis report: insertion-ordered keys,
/// rationals as strings, two-space indentation, trailing newline.
/// Byte-identical across runs for identical inputs.
std::string report_to_json(const AnalysisReport& report);

/// Human-readable rendering of the same content.
std::string report_to_text(const AnalysisReport& report);

}  // namespace mmdyn
