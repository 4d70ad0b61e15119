#pragma once

#include <string>
#include <utility>
#include <vector>

namespace periwave {

// CSV writer with '#'-prefixed header lines and 17-significant-digit numbers.
// Header lines echo the run configuration; the first non-comment row names the
// columns. All writes go through one code path so outputs stay byte-stable.
class CsvWriter {
 public:
  explicit CsvWriter(std::string path);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void comment(const std::string& line);
  void columns(const std::vector<std::string>& names);
  // One data row; numbers formatted with %.17g.
  void row(const std::vector<double>& values);
  // Mixed row: leading integers then doubles.
  void row(const std::vector<long>& ints, const std::vector<double>& values);
  // Row of preformatted cells (for string-valued columns).
  void text_row(const std::vector<std::string>& cells);

 private:
  void* stream_;
};

std::string format_full(double v);

// Reads a CSV written in the library's format: skips '#' lines and the column
// row, returns the numeric rows.
std::vector<std::vector<double>> read_csv_rows(const std::string& path);

}  // namespace periwave
