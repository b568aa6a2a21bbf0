#include "levylab/io/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace levylab::io {

CsvWriter::CsvWriter(const std::filesystem::path& file) : out_(file) {
  if (!out_) throw std::runtime_error("cannot open " + file.string());
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out_ << ',';
    out_ << cols[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_double(vals[i]);
  }
  out_ << '\n';
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << '\n'; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_path_csv(const CadlagPath& path, const std::filesystem::path& file) {
  CsvWriter w(file);
  std::vector<std::string> cols{"time"};
  for (int c = 0; c < path.dim(); ++c) cols.push_back("v" + std::to_string(c + 1));
  cols.push_back("is_jump");
  w.header(cols);
  std::vector<double> row(path.dim() + 2);
  for (std::size_t i = 0; i < path.nodes(); ++i) {
    row[0] = path.time(i);
    std::span<const double> v = path.value(i);
    for (int c = 0; c < path.dim(); ++c) row[1 + c] = v[c];
    row[path.dim() + 1] = path.jump_at_node(i) != nullptr ? 1.0 : 0.0;
    w.row(row);
  }
}

}  // namespace levylab::io
