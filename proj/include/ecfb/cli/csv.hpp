#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ecfb::cli {

/// Shortest round-trip text is not used: every double gets exactly 17
/// significant digits so identical inputs give identical bytes.
std::string format_double(double x);

/// In-memory CSV table with '#' comment lines above the header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_comment(const std::string& line);

  class Row {
   public:
    Row& operator<<(double x);
    Row& operator<<(int x);
    Row& operator<<(unsigned x);
    Row& operator<<(std::uint64_t x);
    Row& operator<<(bool x);
    Row& operator<<(const std::string& x);
    Row& operator<<(const char* x);
    Row& blank();

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
    std::vector<std::string>& cells_;
  };

  /// Appends an empty row and returns a cell appender for it.
  Row add_row();

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::vector<std::string>& comments() const { return comments_; }

  /// Throws std::logic_error if a row width differs from the header.
  void write(std::ostream& out) const;
  std::string str() const;

  /// Writes to path; throws std::runtime_error on I/O failure.
  void save(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ecfb::cli
