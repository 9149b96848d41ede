#include "exeos/databind/tables.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace exeos::databind {

std::string_view to_string(IngestErrorKind kind) {
  switch (kind) {
    case IngestErrorKind::MissingFile: return "missing-file";
    case IngestErrorKind::RaggedRow: return "ragged-row";
    case IngestErrorKind::EmptyTable: return "empty-table";
    case IngestErrorKind::BadDocument: return "bad-document";
  }
  return "?";
}

std::string IngestError::describe() const {
  std::string out = "ingest error [";
  out += to_string(kind);
  out += "] ";
  out += path;
  if (line > 0) {
    out += ":";
    out += std::to_string(line);
  }
  out += ": ";
  out += message;
  return out;
}

const Column* Table::find_column(const std::string& column_name) const {
  for (const auto& c : columns)
    if (c.name == column_name) return &c;
  return nullptr;
}

const Table* TableSet::find(const std::string& table_name) const {
  for (const auto& t : tables)
    if (t.name == table_name) return &t;
  return nullptr;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

// One CSV record. Quoted cells keep embedded commas and turn "" into ";
// unquoted cells are trimmed.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"' && trim(cell).empty()) {
      quoted = true;
      was_quoted = true;
      cell.clear();
    } else if (ch == ',') {
      cells.push_back(was_quoted ? cell : trim(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell += ch;
    }
  }
  cells.push_back(was_quoted ? cell : trim(cell));
  return cells;
}

}  // namespace

Result<Table, IngestError> load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return IngestError{IngestErrorKind::MissingFile, path, 0,
                       "cannot open file"};

  Table table;
  table.path = path;
  table.name = std::filesystem::path(path).stem().string();

  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      for (auto& name : split_record(line)) {
        Column col;
        col.name = name;
        col.numeric = true;  // refined below; vacuously numeric when empty
        table.columns.push_back(std::move(col));
      }
      width = table.columns.size();
      continue;
    }
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    auto cells = split_record(line);
    if (cells.size() != width)
      return IngestError{IngestErrorKind::RaggedRow, path, line_no,
                         "row has " + std::to_string(cells.size()) +
                             " cell(s), header has " + std::to_string(width)};
    for (std::size_t c = 0; c < width; ++c) {
      if (!parse_double(cells[c])) table.columns[c].numeric = false;
      table.columns[c].cells.push_back(std::move(cells[c]));
    }
  }

  if (table.columns.empty() || table.rows() == 0)
    return IngestError{IngestErrorKind::EmptyTable, path, 0,
                       table.columns.empty() ? "file has no header row"
                                             : "no data rows below the header"};
  return table;
}

Result<TableSet, IngestError> load_tables(const std::vector<std::string>& paths) {
  TableSet set;
  for (const auto& path : paths) {
    auto table = load_csv(path);
    if (!table) return table.error();
    set.tables.push_back(std::move(*table));
  }
  return set;
}

}  // namespace exeos::databind
