#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qoeslice::bench {

// Minimal RFC 4180 writer: fields containing comma, quote or newline are quoted.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& field(std::string_view s);
  CsvWriter& field(double x);
  CsvWriter& field(std::int64_t x);
  CsvWriter& field(std::uint64_t x);
  CsvWriter& field(int x) { return field(static_cast<std::int64_t>(x)); }
  // Throws std::logic_error when the row width differs from the header.
  void end_row();

  std::size_t columns() const { return header_size_; }

 private:
  void separator();

  std::ostream& out_;
  std::size_t header_size_;
  std::size_t in_row_ = 0;
};

// Shortest decimal that round-trips, '.' as separator regardless of locale.
std::string format_double(double x);
std::string csv_escape(std::string_view s);

}  // namespace qoeslice::bench
