#pragma once

#include "gheat/capacity.hpp"
#include "gheat/critical_points.hpp"
#include "gheat/pde_solver.hpp"
#include "gheat/solutions.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace gheat {

nlohmann::json to_json(const CriticalPoints& cp);
nlohmann::json to_json(const PiecewiseSolution& sol);
nlohmann::json to_json(const CapacityReport& r);
nlohmann::json to_json(const OrderFit& f);

/// Rectangular numeric table. Written as CSV with `.` decimals and %.17g, or
/// as a JSON array of row objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
};

/// Comment lines (prefixed "# ") first, then the header, then rows.
void write_csv(std::ostream& os, const Table& table, const std::vector<std::string>& comments = {});
nlohmann::json to_json(const Table& table);

/// Long format: one (t, x, u) row per node per saved level.
Table grid_table(const GridSolution& sol);

Table capacity_table(const std::vector<CapacityReport>& reports);

/// Locale-independent %.17g.
std::string format_double(double v);

}  // namespace gheat
