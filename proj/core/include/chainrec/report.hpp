#pragma once

#include <string>

#include "chainrec/chaindyn.hpp"
#include "chainrec/fixedpoint.hpp"

namespace chainrec {

inline constexpr const char* kEngineVersion = "0.1.0";

/// 17-significant-digit rendering; identical inputs give identical bytes.
std::string render_real(double v);

/// JSON document with a fixed field order: map, window, h, eps, kind, W,
/// cells, witness, elapsed_ms, engine_version, note. Absent optional parts
/// are rendered as null.
std::string render_recurrence_report(const RecurrenceReport& rep,
                                     const std::string& note);

/// Same envelope for fixed-point/periodic queries (kind "fix").
std::string render_fix_report(const std::string& map_label,
                              const FixReport& rep, double elapsed_ms,
                              const std::string& note);

}  // namespace chainrec
