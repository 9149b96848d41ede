#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "exeos/common.hpp"

namespace exeos::databind {

enum class IngestErrorKind { MissingFile, RaggedRow, EmptyTable, BadDocument };

std::string_view to_string(IngestErrorKind kind);

struct IngestError {
  IngestErrorKind kind = IngestErrorKind::MissingFile;
  std::string path;
  std::size_t line = 0;  // 1-based file line when applicable, else 0
  std::string message;

  std::string describe() const;
};

// One CSV column. Cells are kept verbatim; `numeric` is true when every cell
// in the column parses as a plain decimal number.
struct Column {
  std::string name;
  bool numeric = false;
  std::vector<std::string> cells;
};

struct Table {
  std::string name;  // file stem, e.g. "products" for tables/products.csv
  std::string path;
  std::vector<Column> columns;

  std::size_t rows() const {
    return columns.empty() ? 0 : columns.front().cells.size();
  }
  const Column* find_column(const std::string& column_name) const;
};

struct TableSet {
  std::vector<Table> tables;

  const Table* find(const std::string& table_name) const;
};

// CSV, UTF-8, comma-delimited, first row header. Double quotes delimit cells
// containing commas; "" inside a quoted cell is a literal quote. Unquoted
// cells are trimmed. A header-only (or empty) file is an EmptyTable error; a
// row whose cell count differs from the header is a RaggedRow error carrying
// the 1-based line number.
Result<Table, IngestError> load_csv(const std::string& path);
Result<TableSet, IngestError> load_tables(const std::vector<std::string>& paths);

}  // namespace exeos::databind
