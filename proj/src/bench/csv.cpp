#include "qoeslice/bench/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace qoeslice::bench {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), header_size_(header.size()) {
  for (const auto& h : header) field(h);
  end_row();
}

void CsvWriter::separator() {
  if (in_row_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::field(std::string_view s) {
  separator();
  out_ << csv_escape(s);
  return *this;
}

CsvWriter& CsvWriter::field(double x) {
  separator();
  out_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::field(std::int64_t x) {
  separator();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t x) {
  separator();
  out_ << x;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != header_size_) {
    throw std::logic_error("CSV row has " + std::to_string(in_row_) + " fields, header has " +
                           std::to_string(header_size_));
  }
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace qoeslice::bench
