#pragma once
// Deterministic CSV emission: fixed %.17g formatting so identical runs are
// byte-identical.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "levylab/levy/path.hpp"

namespace levylab::io {

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& file);

  void header(const std::vector<std::string>& cols);
  void row(const std::vector<double>& vals);
  void raw_row(const std::string& line);

 private:
  std::ofstream out_;
};

std::string format_double(double v);

// columns: time, v1..vk, is_jump
void write_path_csv(const CadlagPath& path, const std::filesystem::path& file);

}  // namespace levylab::io
