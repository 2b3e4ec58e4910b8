#pragma once

#include <string>
#include <vector>

namespace graphctl {

// Locale-independent textual form with 17 significant digits — enough to
// round-trip any double, so identical runs produce identical bytes.
std::string format_sig17(double v);

// Minimal CSV emitter honouring the artifact contract: header row, comma
// separator, '.' decimal point, LF line endings. Content is buffered and
// written on close so a failed run does not leave half a table behind.
class CsvWriter {
 public:
  explicit CsvWriter(std::string path);
  ~CsvWriter();

  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);

  void close();  // flush to disk; called by the destructor if needed

 private:
  std::string path_;
  std::string buffer_;
  bool open_ = true;

  void append_line(const std::vector<std::string>& cells);
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace graphctl
