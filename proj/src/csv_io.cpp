#include "periwave/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "periwave/errors.hpp"

namespace periwave {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

CsvWriter::CsvWriter(std::string path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open output file: " + path);
  stream_ = f;
}

CsvWriter::~CsvWriter() {
  if (stream_) std::fclose(static_cast<FILE*>(stream_));
}

void CsvWriter::comment(const std::string& line) {
  std::fprintf(static_cast<FILE*>(stream_), "# %s\n", line.c_str());
}

void CsvWriter::columns(const std::vector<std::string>& names) {
  FILE* f = static_cast<FILE*>(stream_);
  for (std::size_t i = 0; i < names.size(); ++i)
    std::fprintf(f, "%s%s", i ? "," : "", names[i].c_str());
  std::fprintf(f, "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  FILE* f = static_cast<FILE*>(stream_);
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f, "%s%.17g", i ? "," : "", values[i]);
  std::fprintf(f, "\n");
}

void CsvWriter::row(const std::vector<long>& ints, const std::vector<double>& values) {
  FILE* f = static_cast<FILE*>(stream_);
  for (std::size_t i = 0; i < ints.size(); ++i)
    std::fprintf(f, "%s%ld", i ? "," : "", ints[i]);
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f, "%s%.17g", (ints.empty() && i == 0) ? "" : ",", values[i]);
  std::fprintf(f, "\n");
}

void CsvWriter::text_row(const std::vector<std::string>& cells) {
  FILE* f = static_cast<FILE*>(stream_);
  for (std::size_t i = 0; i < cells.size(); ++i)
    std::fprintf(f, "%s%s", i ? "," : "", cells[i].c_str());
  std::fprintf(f, "\n");
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (numeric && !row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace periwave
