#include "dunklpot/csv.hpp"

#include <charconv>
#include <fstream>

#include "dunklpot/errors.hpp"

namespace dunklpot {

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw InvalidArgument("CsvTable: row width differs from header");
  rows.push_back(std::move(row));
}

std::string formatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string formatNumber(long v) { return std::to_string(v); }

namespace {

void appendCell(std::string& out, const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) {
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

void appendRow(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    appendCell(out, row[i]);
  }
  out += '\n';
}

}  // namespace

std::string renderCsv(const CsvTable& table) {
  std::string out;
  appendRow(out, table.header);
  for (const auto& row : table.rows) appendRow(out, row);
  return out;
}

void emitCsv(const CsvTable& table, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open " + path + " for writing");
  const std::string text = renderCsv(table);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw ConfigError("failed writing " + path);
}

CsvTable exitCloudTable(const std::vector<ExitRecord>& exits, int dim) {
  CsvTable t;
  t.header.push_back("pathId");
  for (int i = 1; i <= dim; ++i) t.header.push_back("x" + std::to_string(i));
  t.header.push_back("exitTime");
  t.header.push_back("jumps");
  for (const auto& e : exits) {
    std::vector<std::string> row{formatNumber(e.pathId)};
    for (int i = 0; i < dim; ++i) row.push_back(formatNumber(e.exitPoint(i)));
    row.push_back(formatNumber(e.exitTime));
    row.push_back(formatNumber(e.jumps));
    t.add(std::move(row));
  }
  return t;
}

CsvTable gridSolutionTable(const GridSolution& sol) {
  CsvTable t;
  for (int i = 1; i <= sol.dim; ++i) t.header.push_back("x" + std::to_string(i));
  t.header.push_back("u");
  for (std::size_t n = 0; n < sol.nodes.size(); ++n) {
    std::vector<std::string> row;
    for (int i = 0; i < sol.dim; ++i) row.push_back(formatNumber(sol.nodes[n](i)));
    row.push_back(formatNumber(sol.values[n]));
    t.add(std::move(row));
  }
  return t;
}

}  // namespace dunklpot
