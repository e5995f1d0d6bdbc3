#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gphl/common.hpp"

namespace gphl {

// Column-schema'd rows destined for one CSV file. Cells are preformatted
// strings (numbers through fmt_double) so serialization is byte-stable.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Appends one row; the cell count must match the column schema.
void add_row(ResultTable& t, std::vector<std::string> cells);

// Serialized CSV: a leading comment line carrying the config hash, the header
// row, then the data rows, "\n" endings throughout. Cells containing a comma,
// quote or newline are quoted with doubled inner quotes.
std::string table_csv(const ResultTable& t, std::uint64_t config_hash);

// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

// Whole-file write; throws DomainError on any filesystem failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gphl
