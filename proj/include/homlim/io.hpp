#pragma once

// CSV and JSON serialization of sweep records and scaling series.
// Numbers are written in scientific notation with 9 significant digits.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "homlim/keyvalue.hpp"
#include "homlim/model.hpp"
#include "homlim/scaling.hpp"
#include "homlim/sweep.hpp"
#include "homlim/units.hpp"

namespace homlim {

inline constexpr std::string_view kSweepCsvHeader =
    "pi,beta,s,c,V,n,v_star,t_work,t_io,t_lat,total,performance,regime";
inline constexpr std::string_view kScaleCsvHeader = "v,n,total,efficiency";
inline constexpr std::string_view kErrorRegime = "ERROR";

/// "%.8e": 9 significant digits. Non-finite values print as nan / inf / -inf.
inline std::string format_sci(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", x);
    return buf;
}

inline double parse_csv_number(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return parse_number(s);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline void write_comment(std::ostream& os, std::string_view text) {
    for (const auto& line : split(text, '\n')) os << "# " << line << '\n';
}

inline void write_sweep_header(std::ostream& os) { os << kSweepCsvHeader << '\n'; }

inline void write_sweep_row(std::ostream& os, const SweepRecord& r) {
    if (!r.ok()) {
        std::string msg = r.error;
        for (char& ch : msg) {
            if (ch == '\n') ch = ' ';
        }
        os << "# error: " << msg << '\n';
    }
    os << format_sci(r.pi) << ',' << format_sci(r.beta) << ',' << format_sci(r.s) << ',' << format_sci(r.c)
       << ',' << format_sci(r.V) << ',' << format_sci(r.n) << ',' << format_sci(r.v_star) << ','
       << format_sci(r.t_work) << ',' << format_sci(r.t_io) << ',' << format_sci(r.t_lat) << ','
       << format_sci(r.total) << ',' << format_sci(r.performance) << ','
       << (r.ok() ? to_string(r.regime) : kErrorRegime) << '\n';
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    write_sweep_header(os);
    for (const auto& r : records) write_sweep_row(os, r);
}

/// Inverse of write_sweep_csv. Comment lines and the header are skipped;
/// ERROR rows come back with error = "error".
inline std::vector<SweepRecord> parse_sweep_csv(std::string_view text) {
    std::vector<SweepRecord> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#' || line == kSweepCsvHeader) continue;
        const auto f = split(line, ',');
        if (f.size() != 13) throw SpecError("sweep csv line " + std::to_string(lineno) + ": expected 13 fields");
        SweepRecord r;
        double* nums[] = {&r.pi, &r.beta, &r.s, &r.c, &r.V, &r.n, &r.v_star,
                          &r.t_work, &r.t_io, &r.t_lat, &r.total, &r.performance};
        for (std::size_t i = 0; i < 12; ++i) *nums[i] = parse_csv_number(f[i]);
        if (f[12] == kErrorRegime) {
            r.error = "error";
        } else {
            r.regime = parse_regime(f[12]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline nlohmann::ordered_json to_json(const SweepRecord& r) {
    nlohmann::ordered_json j;
    j["pi"] = r.pi;
    j["beta"] = r.beta;
    j["s"] = r.s;
    j["c"] = r.c;
    j["V"] = r.V;
    j["n"] = r.n;
    j["v_star"] = r.v_star;
    j["t_work"] = r.t_work;
    j["t_io"] = r.t_io;
    j["t_lat"] = r.t_lat;
    j["total"] = r.total;
    j["performance"] = r.performance;
    j["regime"] = r.ok() ? std::string(to_string(r.regime)) : std::string(kErrorRegime);
    if (!r.ok()) j["error"] = r.error;
    return j;
}

inline void write_scale_csv(std::ostream& os, const std::vector<ScalingPoint>& pts) {
    os << kScaleCsvHeader << '\n';
    for (const auto& p : pts) {
        os << format_sci(p.v) << ',' << format_sci(p.n) << ',' << format_sci(p.time) << ','
           << format_sci(p.efficiency) << '\n';
    }
}

/// Plot-ready matrix of one metric for a 1- or 2-axis sweep: the first row
/// holds the second axis values, each following row starts with the first
/// axis value. A parallel block lists the regime color of every cell.
inline void write_metric_table(std::ostream& os, const SweepGrid& grid, const std::vector<SweepRecord>& records) {
    if (grid.axes.empty() || grid.axes.size() > 2) throw SpecError("metric table needs 1 or 2 swept axes");
    const auto rows = grid.axes[0].values();
    const std::vector<double> cols = grid.axes.size() == 2 ? grid.axes[1].values() : std::vector<double>{0.0};
    os << "# metric=" << to_string(grid.metric) << " rows=" << to_string(grid.axes[0].param);
    if (grid.axes.size() == 2) os << " cols=" << to_string(grid.axes[1].param);
    os << '\n';
    auto emit = [&](auto&& cell) {
        os << to_string(grid.axes[0].param);
        if (grid.axes.size() == 2) {
            for (double c : cols) os << ',' << format_sci(c);
        } else {
            os << ',' << to_string(grid.metric);
        }
        os << '\n';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << format_sci(rows[i]);
            for (std::size_t j = 0; j < cols.size(); ++j) os << ',' << cell(records[i * cols.size() + j]);
            os << '\n';
        }
    };
    emit([&](const SweepRecord& r) { return format_sci(metric_value(r, grid.metric)); });
    os << "# regime colors\n";
    emit([](const SweepRecord& r) { return r.ok() ? std::string(regime_color(r.regime)) : std::string("none"); });
}

}  // namespace homlim
