#include "graphctl/csvio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "graphctl/errors.hpp"

namespace graphctl {

std::string format_sig17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {}

CsvWriter::~CsvWriter() {
  if (open_) {
    try {
      close();
    } catch (...) {
      // destructor must not throw; an explicit close() reports the failure
    }
  }
}

void CsvWriter::append_line(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& names) { append_line(names); }

void CsvWriter::row(const std::vector<std::string>& cells) { append_line(cells); }

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_sig17(v));
  append_line(cells);
}

void CsvWriter::close() {
  if (!open_) return;
  open_ = false;
  write_text_file(path_, buffer_);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::BadInput, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::BadInput, "failed writing '" + path + "'");
}

}  // namespace graphctl
