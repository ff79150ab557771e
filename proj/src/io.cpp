#include "gheat/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace gheat {

namespace {

nlohmann::json opt(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

double or_nan(const std::optional<double>& v) { return v.value_or(std::numeric_limits<double>::quiet_NaN()); }

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // snprintf follows LC_NUMERIC; force '.'
    for (char* p = buf; *p; ++p) {
        if (*p == ',') *p = '.';
    }
    return buf;
}

nlohmann::json to_json(const CriticalPoints& cp) {
    return {{"lambda", cp.lambda.value()},
            {"x1", cp.x1},
            {"x2", cp.x2},
            {"z", cp.z},
            {"sigma_lambda", cp.sigma_lambda},
            {"root_tol", cp.root_tol},
            {"x1_bracket", {cp.x1_bracket.lo, cp.x1_bracket.hi}},
            {"x2_bracket", {cp.x2_bracket.lo, cp.x2_bracket.hi}},
            {"z_bracket", {cp.z_bracket.lo, cp.z_bracket.hi}},
            {"in_supported_range", cp.in_supported_range}};
}

nlohmann::json to_json(const PiecewiseSolution& sol) {
    return {{"lambda", sol.lambda.value()},
            {"sigma", sol.sigma.value()},
            {"z", sol.z},
            {"x1", sol.x1},
            {"mu1", sol.mu1},
            {"mu2", sol.mu2},
            {"breakpoint", sol.breakpoint},
            {"gluing_residual", sol.gluing_residual}};
}

nlohmann::json to_json(const CapacityReport& r) {
    return {{"sigma", r.sigma},
            {"epsilon", r.epsilon},
            {"t", r.t},
            {"ramp_delta", r.ramp_delta},
            {"sandwich_lower", r.sandwich_lower},
            {"sandwich_upper", r.sandwich_upper},
            {"lower_extrapolated", r.lower_extrapolated},
            {"upper_extrapolated", r.upper_extrapolated},
            {"point_estimate", r.point_estimate},
            {"lambda_sigma", opt(r.lambda_sigma)},
            {"upper_bound_closed", opt(r.upper_bound_closed)},
            {"widened_half_width", opt(r.widened_half_width)},
            {"lower_bound_widened", opt(r.lower_bound_widened)},
            {"widened_capacity_lower", opt(r.widened_capacity_lower)}};
}

nlohmann::json to_json(const OrderFit& f) {
    return {{"sigma", f.sigma},
            {"epsilons", f.epsilons},
            {"estimates", f.estimates},
            {"estimated_exponent", f.estimated_exponent},
            {"target_exponent", f.target_exponent},
            {"intercept", f.intercept},
            {"r2", f.r2}};
}

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw Error(ErrorCode::InvalidParameter, "table row has the wrong number of columns");
    }
    rows.push_back(std::move(row));
}

void write_csv(std::ostream& os, const Table& table, const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << '\n';
    for (std::size_t j = 0; j < table.columns.size(); ++j) os << (j ? "," : "") << table.columns[j];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_double(row[j]);
        os << '\n';
    }
}

nlohmann::json to_json(const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t j = 0; j < row.size(); ++j) obj[table.columns[j]] = row[j];
        rows.push_back(std::move(obj));
    }
    return rows;
}

Table grid_table(const GridSolution& sol) {
    Table t{{"t", "x", "u"}, {}};
    for (const auto& level : sol.levels) {
        for (std::size_t i = 0; i < level.x.size(); ++i) t.rows.push_back({level.t, level.x[i], level.u[i]});
    }
    return t;
}

Table capacity_table(const std::vector<CapacityReport>& reports) {
    Table t{{"sigma", "epsilon", "t", "ramp_delta", "sandwich_lower", "sandwich_upper", "lower_extrapolated",
             "upper_extrapolated", "point_estimate", "lambda_sigma", "upper_bound_closed", "widened_half_width",
             "lower_bound_widened", "widened_capacity_lower"},
            {}};
    for (const auto& r : reports) {
        t.add({r.sigma, r.epsilon, r.t, r.ramp_delta, r.sandwich_lower, r.sandwich_upper, r.lower_extrapolated,
               r.upper_extrapolated, r.point_estimate, or_nan(r.lambda_sigma), or_nan(r.upper_bound_closed),
               or_nan(r.widened_half_width), or_nan(r.lower_bound_widened), or_nan(r.widened_capacity_lower)});
    }
    return t;
}

}  // namespace gheat
