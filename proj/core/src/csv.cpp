#include "ddsplit/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>

namespace ddsplit {

namespace {

std::string real(double v) { return fmt::format("{:.17g}", v); }

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::io_error, fmt::format("csv line {}: {}", line, what));
}

template <class T>
T parse_number(std::string_view cell, std::size_t line) {
  T value{};
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end) malformed(line, fmt::format("bad number '{}'", cell));
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_csv(const ConvergenceReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.n, real(r.h), real(r.error_final),
                       real(r.error_sup), r.observed_order ? real(*r.observed_order) : "",
                       real(r.wall_ms), r.newton_total);
  }
  return out;
}

void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, fmt::format("cannot open '{}' for writing", path.string()));
  const std::string text = format_csv(report);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::io_error, fmt::format("write to '{}' failed", path.string()));
}

std::vector<ConvergenceRow> parse_csv(std::string_view text) {
  std::vector<ConvergenceRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader) malformed(line_no, "unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 7) malformed(line_no, fmt::format("expected 7 cells, got {}", cells.size()));
    ConvergenceRow r;
    r.n = parse_number<int>(cells[0], line_no);
    r.h = parse_number<double>(cells[1], line_no);
    r.error_final = parse_number<double>(cells[2], line_no);
    r.error_sup = parse_number<double>(cells[3], line_no);
    if (!cells[4].empty()) r.observed_order = parse_number<double>(cells[4], line_no);
    r.wall_ms = parse_number<double>(cells[5], line_no);
    r.newton_total = parse_number<long>(cells[6], line_no);
    rows.push_back(r);
  }
  if (line_no == 0) malformed(1, "missing header");
  return rows;
}

std::string format_summary(const ConvergenceReport& report) {
  std::string out = fmt::format("{}: pivot {}, reference {}, t in [{}, {}]\n", report.name,
                                report.pivot == Pivot::l2 ? "L2" : "H^-1", report.reference,
                                report.t_start, report.t_end);
  out += fmt::format("{:>6} {:>12} {:>12} {:>12} {:>7} {:>10} {:>8}\n", "n", "h", "err(T)",
                     "err(sup)", "order", "ms", "newton");
  for (const auto& r : report.rows) {
    out += fmt::format("{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>7} {:>10.1f} {:>8}\n", r.n, r.h,
                       r.error_final, r.error_sup,
                       r.observed_order ? fmt::format("{:.3f}", *r.observed_order) : "-",
                       r.wall_ms, r.newton_total);
  }
  return out;
}

}  // namespace ddsplit
