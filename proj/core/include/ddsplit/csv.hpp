#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ddsplit/study.hpp"

namespace ddsplit {

inline constexpr std::string_view kCsvHeader =
    "n,h,error_final,error_sup,observed_order,wall_ms,newton_total";

/// Header plus one line per row. Reals use 17 significant digits and '.'
/// as decimal separator; a missing order is an empty cell.
[[nodiscard]] std::string format_csv(const ConvergenceReport& report);

/// Writes format_csv(report). Throws Error{io_error}.
void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path);

/// Parses text produced by format_csv back into rows (fallbacks stay 0).
/// Throws Error{io_error} on a malformed header or line.
[[nodiscard]] std::vector<ConvergenceRow> parse_csv(std::string_view text);

/// Plain-text table for terminals.
[[nodiscard]] std::string format_summary(const ConvergenceReport& report);

}  // namespace ddsplit
