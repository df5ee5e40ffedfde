#include "supermarket/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace supermarket {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
}

void CsvWriter::comment(const std::string& text) {
  if (header_written_)
    throw std::logic_error("comments must precede the header row");
  out_ << "# " << text << '\n';
}

void CsvWriter::columns(const std::vector<std::string>& names) {
  if (header_written_) throw std::logic_error("header row already written");
  if (names.empty()) throw std::logic_error("header row must be nonempty");
  width_ = names.size();
  header_written_ = true;
  for (std::size_t i = 0; i < names.size(); ++i)
    out_ << (i ? "," : "") << names[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (!header_written_) throw std::logic_error("header row missing");
  if (cells.size() != width_) throw std::logic_error("row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    if (const auto* n = std::get_if<std::int64_t>(&cells[i]))
      out_ << *n;
    else if (const auto* x = std::get_if<double>(&cells[i]))
      out_ << format_real(*x);
    else
      out_ << std::get<std::string>(cells[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw std::runtime_error("write to '" + path_ + "' failed");
  out_.close();
}

}  // namespace supermarket
