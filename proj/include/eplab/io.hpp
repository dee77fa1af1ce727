#pragma once

// Locale-independent number formatting and small CSV helpers. Doubles are
// written in shortest round-trip form so output bytes depend only on values.

#include <string>
#include <string_view>
#include <vector>

namespace eplab {

std::string format_number(double v);
std::string format_number(long long v);
inline std::string format_number(int v) { return format_number(static_cast<long long>(v)); }
inline std::string format_number(std::size_t v) { return format_number(static_cast<long long>(v)); }

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  template <class... T>
  void row(const T&... cells) {
    std::vector<std::string> r;
    r.reserve(sizeof...(T));
    (r.push_back(cell(cells)), ...);
    add(std::move(r));
  }
  void add(std::vector<std::string> cells);
  /// Prepends '# ' comment lines before the header.
  void comment(const std::string& line);
  std::string str() const;

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(std::string_view s) { return std::string(s); }
  template <class N>
  static std::string cell(const N& v) {
    return format_number(v);
  }

  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Write text to a file, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace eplab
