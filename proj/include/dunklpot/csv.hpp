#pragma once

#include <string>
#include <vector>

#include "dunklpot/grid_solver.hpp"
#include "dunklpot/monte_carlo.hpp"

namespace dunklpot {

/// Header row plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

/// Shortest round-trip decimal form ('.' separator, locale independent).
std::string formatNumber(double v);
std::string formatNumber(long v);

/// Comma-separated text, header first, LF line endings; cells with commas,
/// quotes or line breaks are quoted.
std::string renderCsv(const CsvTable& table);

/// Writes renderCsv(table) to path; ConfigError when the file cannot be written.
void emitCsv(const CsvTable& table, const std::string& path);

/// pathId, x1..xd, exitTime, jumps
CsvTable exitCloudTable(const std::vector<ExitRecord>& exits, int dim);

/// x1..xd, u
CsvTable gridSolutionTable(const GridSolution& sol);

}  // namespace dunklpot
