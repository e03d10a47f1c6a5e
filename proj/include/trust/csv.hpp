#pragma once

#include <string>
#include <vector>

#include "trust/matrix.hpp"

namespace trust {

struct CsvTable {
  std::vector<std::string> columns;
  Matrix values;
};

// Strict numeric CSV with a header row. Parse failures carry the row number
// and column name.
CsvTable load_csv(const std::string& path);

// Finite doubles printed at 17 significant digits, so write/read round-trips
// bit-exactly.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Matrix& values);

}  // namespace trust
