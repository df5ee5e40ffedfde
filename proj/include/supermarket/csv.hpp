#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace supermarket {

/// One CSV cell.  Integers print as integers, reals with %.17g (so a value
/// round-trips exactly and reruns are byte-identical), strings verbatim.
using CsvCell = std::variant<std::int64_t, double, std::string>;

/// Full-precision text form of a double, shared with the writers.
std::string format_real(double x);

/// Minimal tidy-CSV emitter: optional leading "# ..." comments, one header
/// row, then data rows of the same width.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& text);
  void columns(const std::vector<std::string>& names);
  void row(const std::vector<CsvCell>& cells);

  /// Flushes and verifies the stream; throws std::runtime_error on failure.
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t width_ = 0;
  bool header_written_ = false;
};

}  // namespace supermarket
