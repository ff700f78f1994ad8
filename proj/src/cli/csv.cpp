#include "ecfb/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ecfb::cli {

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << ',';
    out << quote(cells[i]);
  }
  out << '\n';
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_comment(const std::string& line) { comments_.push_back(line); }

CsvTable::Row CsvTable::add_row() {
  rows_.emplace_back();
  rows_.back().reserve(header_.size());
  return Row(rows_.back());
}

CsvTable::Row& CsvTable::Row::operator<<(double x) {
  cells_.push_back(format_double(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(int x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(unsigned x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(std::uint64_t x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(bool x) {
  cells_.emplace_back(x ? "true" : "false");
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(const std::string& x) {
  cells_.push_back(x);
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(const char* x) {
  cells_.emplace_back(x);
  return *this;
}
CsvTable::Row& CsvTable::Row::blank() {
  cells_.emplace_back();
  return *this;
}

void CsvTable::write(std::ostream& out) const {
  for (const auto& c : comments_) out << "# " << c << '\n';
  write_line(out, header_);
  for (const auto& row : rows_) {
    if (row.size() != header_.size()) {
      throw std::logic_error("csv: row has " + std::to_string(row.size()) + " cells, header has " +
                             std::to_string(header_.size()));
    }
    write_line(out, row);
  }
}

std::string CsvTable::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

void CsvTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace ecfb::cli
