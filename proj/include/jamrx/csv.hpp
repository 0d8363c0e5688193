#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace jamrx {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One result row of a scenario run. Optional fields print as empty cells.
struct ResultRow {
    std::string scenario;
    std::optional<int> m;
    std::string receiver;
    std::optional<double> mu;
    std::optional<double> p_u;
    std::optional<double> q_u;
    std::optional<double> p_j;
    std::optional<double> q_j;
    std::string delta_source;
    std::optional<double> rate_closed;
    std::optional<double> rate_mc;
    std::optional<double> ci95;
    std::optional<double> sinr_closed;
    std::optional<double> sinr_mc;
};

inline constexpr const char* kCsvHeader =
    "scenario,M,receiver,mu,p_u,q_u,p_j,q_j,delta_source,rate_closed,rate_mc,ci95,sinr_closed,"
    "sinr_mc";

namespace detail {

inline std::string csv_cell(const std::optional<double>& v) {
    if (!v) {
        return "";
    }
    if (!std::isfinite(*v)) {
        std::cerr << "warning: non-finite value written as empty CSV cell\n";
        return "";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", *v);
    return buf;
}

inline std::string csv_cell(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string{};
}

}  // namespace detail

/// Write header plus rows, LF line endings, 9 significant digits.
inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("emit_csv: cannot open " + path + " for writing");
    }
    out << kCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        out << r.scenario << ',' << detail::csv_cell(r.m) << ',' << r.receiver << ','
            << detail::csv_cell(r.mu) << ',' << detail::csv_cell(r.p_u) << ','
            << detail::csv_cell(r.q_u) << ',' << detail::csv_cell(r.p_j) << ','
            << detail::csv_cell(r.q_j) << ',' << r.delta_source << ','
            << detail::csv_cell(r.rate_closed) << ',' << detail::csv_cell(r.rate_mc) << ','
            << detail::csv_cell(r.ci95) << ',' << detail::csv_cell(r.sinr_closed) << ','
            << detail::csv_cell(r.sinr_mc) << "\n";
    }
    if (!out) {
        throw IoError("emit_csv: write failure on " + path);
    }
}

}  // namespace jamrx
