#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace isaacs {

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

/// Table of string cells written with CRLF line ends.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  // Throws InvalidArgument when the width differs from the header.
  void add_row(std::vector<std::string> row);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Inverse of CsvTable::str (header is the first record).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace isaacs
