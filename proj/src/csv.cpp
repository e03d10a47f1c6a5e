#include "trust/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trust/errors.hpp"

namespace trust {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t start = 0;
    while (start < cell.size() && cell[start] == ' ') ++start;
    out.push_back(cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

CsvTable load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw validation_error("'" + path + "' is empty");
  CsvTable table;
  table.columns = split_line(line);
  const int d = static_cast<int>(table.columns.size());
  if (d == 0) throw validation_error("'" + path + "' has an empty header");

  std::vector<double> data;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (static_cast<int>(cells.size()) != d)
      throw validation_error(path + ": row " + std::to_string(row) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(d));
    for (int j = 0; j < d; ++j) {
      const std::string& c = cells[j];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size())
        throw validation_error(path + ": row " + std::to_string(row) + ", column \"" +
                               table.columns[j] + "\": non-numeric cell '" + c + "'");
      data.push_back(v);
    }
  }
  const int n = static_cast<int>(data.size()) / d;
  if (n == 0) throw validation_error("'" + path + "' has no data rows");
  table.values.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) table.values(i, j) = data[i * d + j];
  return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Matrix& values) {
  if (static_cast<int>(columns.size()) != values.cols())
    throw domain_error("write_csv: header width mismatch");
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write '" + path + "'");
  for (std::size_t j = 0; j < columns.size(); ++j)
    out << (j ? "," : "") << columns[j];
  out << "\n";
  char buf[40];
  for (int i = 0; i < values.rows(); ++i) {
    for (int j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", values(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw validation_error("short write to '" + path + "'");
}

}  // namespace trust
