#include "gphl/table.hpp"

#include <cstdio>
#include <fstream>

namespace gphl {

void add_row(ResultTable& t, std::vector<std::string> cells) {
  if (cells.size() != t.columns.size())
    throw DomainError("row has " + std::to_string(cells.size()) + " cells, schema has " +
                      std::to_string(t.columns.size()) + " columns");
  t.rows.push_back(std::move(cells));
}

namespace {

void append_cell(std::string& out, const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) {
    out += cell;
    return;
  }
  out += '"';
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    append_cell(out, cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string table_csv(const ResultTable& t, std::uint64_t config_hash) {
  if (t.columns.empty()) throw DomainError("table has no columns");
  std::string out = "# config_hash=" + hash_hex(config_hash) + "\n";
  append_line(out, t.columns);
  for (const auto& row : t.rows) append_line(out, row);
  return out;
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw DomainError("write to " + path + " failed");
}

}  // namespace gphl
