#pragma once

// Cartesian parameter sweeps. Each grid point is an independent evaluation:
// the optimal active volume (or a fixed v when v is swept or pinned) and its
// time breakdown. Records come back in row-major order over the axes in
// declaration order, independent of how many worker threads ran.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "homlim/cost.hpp"
#include "homlim/model.hpp"
#include "homlim/spec.hpp"

namespace homlim {

enum class SweepParam { Pi, Beta, S, C, V, N, ActiveV };

inline std::string_view to_string(SweepParam p) {
    switch (p) {
        case SweepParam::Pi: return "pi";
        case SweepParam::Beta: return "beta";
        case SweepParam::S: return "s";
        case SweepParam::C: return "c";
        case SweepParam::V: return "V";
        case SweepParam::N: return "n";
        case SweepParam::ActiveV: return "v";
    }
    return "?";
}

inline SweepParam parse_sweep_param(std::string_view s) {
    if (s == "pi") return SweepParam::Pi;
    if (s == "beta") return SweepParam::Beta;
    if (s == "s") return SweepParam::S;
    if (s == "c") return SweepParam::C;
    if (s == "V") return SweepParam::V;
    if (s == "n") return SweepParam::N;
    if (s == "v") return SweepParam::ActiveV;
    throw SpecError("unknown sweep parameter '" + std::string(s) + "' (expected pi, beta, s, c, V, n, v)");
}

enum class Spacing { Log, Linear };

struct SweepAxis {
    SweepParam param = SweepParam::Pi;
    double lo = 1e-30;
    double hi = 1e30;
    int points = 20;
    Spacing spacing = Spacing::Log;

    std::vector<double> values() const {
        std::vector<double> out(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
            if (spacing == Spacing::Log) {
                out[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
            } else {
                out[i] = lo + t * (hi - lo);
            }
        }
        // End points exactly as given.
        out.front() = lo;
        if (points > 1) out.back() = hi;
        return out;
    }
};

/// Default axis over the usual exploration range for a parameter.
inline SweepAxis default_axis(SweepParam p) {
    switch (p) {
        case SweepParam::Pi:
        case SweepParam::Beta:
        case SweepParam::S:
        case SweepParam::C: return {p, 1e-30, 1e30, 20, Spacing::Log};
        case SweepParam::V: return {p, 1e-14, 1e14, 20, Spacing::Log};
        case SweepParam::N: return {p, 1e3, 1e30, 20, Spacing::Log};
        case SweepParam::ActiveV: return {p, 1e-14, 1e14, 20, Spacing::Log};
    }
    return {};
}

enum class Metric { TotalTime, Performance, Efficiency };

inline std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::TotalTime: return "total_time";
        case Metric::Performance: return "performance";
        case Metric::Efficiency: return "efficiency";
    }
    return "?";
}

inline Metric parse_metric(std::string_view s) {
    if (s == "total_time" || s == "time") return Metric::TotalTime;
    if (s == "performance") return Metric::Performance;
    if (s == "efficiency") return Metric::Efficiency;
    throw SpecError("unknown metric '" + std::string(s) + "'");
}

inline constexpr std::size_t kDefaultSweepCap = 1'000'000;

struct SweepGrid {
    std::vector<SweepAxis> axes;
    double n = 1e6;
    std::optional<double> v;  // pinned active volume; otherwise optimized
    Metric metric = Metric::TotalTime;
    std::size_t max_points = kDefaultSweepCap;

    void validate() const {
        if (axes.size() > 3) throw SpecError("invariant violated: at most 3 swept axes");
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const auto& a = axes[i];
            const std::string name(to_string(a.param));
            if (!(a.lo < a.hi)) throw SpecError("invariant violated: axis " + name + " lo < hi");
            if (a.points < 2) throw SpecError("invariant violated: axis " + name + " points >= 2");
            if (a.spacing == Spacing::Log && !(a.lo > 0.0)) {
                throw SpecError("invariant violated: log axis " + name + " lo > 0");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (axes[j].param == a.param) throw SpecError("axis " + name + " given twice");
            }
        }
    }

    /// Number of grid points, saturating at SIZE_MAX.
    std::size_t size() const {
        std::size_t total = 1;
        for (const auto& a : axes) {
            const auto p = static_cast<std::size_t>(a.points);
            if (total > std::numeric_limits<std::size_t>::max() / p) return std::numeric_limits<std::size_t>::max();
            total *= p;
        }
        return total;
    }
};

struct SweepRecord {
    double pi = 0.0;
    double beta = 0.0;
    double s = 0.0;
    double c = 0.0;
    double V = 0.0;
    double n = 0.0;
    double v_star = 0.0;
    double t_work = 0.0;
    double t_io = 0.0;
    double t_lat = 0.0;
    double total = 0.0;
    double performance = 0.0;
    Regime regime = Regime::ComputeBound;
    std::string error;  // non-empty when this point failed

    bool ok() const { return error.empty(); }
};

/// One grid point: optimize v unless `v` is given.
inline SweepRecord evaluate_point(const ComputerSpec& spec, const AlgorithmCost& cost, double n,
                                  std::optional<double> v = std::nullopt) {
    SweepRecord r;
    r.pi = spec.pi();
    r.beta = spec.beta();
    r.s = spec.s();
    r.c = spec.c();
    r.V = spec.volume();
    r.n = n;
    const TimeBreakdown b = v ? time_breakdown(spec, cost, n, *v) : optimal_volume(spec, cost, n).breakdown;
    r.v_star = b.v_used;
    r.t_work = b.t_work;
    r.t_io = b.t_io;
    r.t_lat = b.t_lat;
    r.total = b.total;
    r.performance = b.performance;
    r.regime = classify_regime(b);
    return r;
}

namespace detail {

struct PointInputs {
    double pi, beta, s, c, V, n;
    std::optional<double> v;
};

inline PointInputs point_inputs(const SweepGrid& grid, const ComputerSpec& base,
                                const std::vector<std::vector<double>>& axis_values, std::size_t index) {
    PointInputs in{base.pi(), base.beta(), base.s(), base.c(), base.volume(), grid.n, grid.v};
    // Row-major: the last axis varies fastest.
    for (std::size_t k = grid.axes.size(); k-- > 0;) {
        const auto& vals = axis_values[k];
        const double x = vals[index % vals.size()];
        index /= vals.size();
        switch (grid.axes[k].param) {
            case SweepParam::Pi: in.pi = x; break;
            case SweepParam::Beta: in.beta = x; break;
            case SweepParam::S: in.s = x; break;
            case SweepParam::C: in.c = x; break;
            case SweepParam::V: in.V = x; break;
            case SweepParam::N: in.n = x; break;
            case SweepParam::ActiveV: in.v = x; break;
        }
    }
    return in;
}

inline SweepRecord evaluate_inputs(const PointInputs& in, const DistanceFn& d, const AlgorithmCost& cost) {
    try {
        return evaluate_point(ComputerSpec(in.pi, in.beta, in.s, in.c, in.V, d), cost, in.n, in.v);
    } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        SweepRecord r;
        r.pi = in.pi;
        r.beta = in.beta;
        r.s = in.s;
        r.c = in.c;
        r.V = in.V;
        r.n = in.n;
        r.v_star = in.v.value_or(nan);
        r.t_work = r.t_io = r.t_lat = r.total = r.performance = nan;
        r.error = e.what();
        if (r.error.empty()) r.error = "evaluation failed";
        return r;
    }
}

}  // namespace detail

/// Evaluates every grid point. `threads` = 0 picks hardware concurrency.
/// Per-point failures become records with a non-empty `error`.
inline std::vector<SweepRecord> run_sweep(const SweepGrid& grid, const ComputerSpec& spec_template,
                                          const AlgorithmCost& cost, unsigned threads = 0) {
    grid.validate();
    const std::size_t total = grid.size();
    if (total > grid.max_points) {
        throw SpecError("sweep has " + std::to_string(total) + " points, above the cap of " +
                        std::to_string(grid.max_points));
    }
    std::vector<std::vector<double>> axis_values;
    for (const auto& a : grid.axes) axis_values.push_back(a.values());

    std::vector<SweepRecord> out(total);
    auto work = [&](std::size_t i) {
        out[i] = detail::evaluate_inputs(detail::point_inputs(grid, spec_template, axis_values, i),
                                         spec_template.distance(), cost);
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    if (threads <= 1) {
        for (std::size_t i = 0; i < total; ++i) work(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < total; i = next++) work(i);
            });
        }
    }
    return out;
}

struct PeakPerformance {
    double n_peak = 0.0;
    double perf_peak = 0.0;
};

/// Best W(n)/T(v*) over a log-spaced n axis. The default axis is 20 points
/// over [1e3, 1e30].
inline PeakPerformance peak_performance_over_n(const ComputerSpec& spec, const AlgorithmCost& cost,
                                               double n_lo = 1e3, double n_hi = 1e30, int points = 20) {
    SweepGrid grid;
    grid.axes.push_back({SweepParam::N, n_lo, n_hi, points, Spacing::Log});
    PeakPerformance best;
    for (const auto& r : run_sweep(grid, spec, cost)) {
        if (r.ok() && r.performance > best.perf_peak) {
            best.perf_peak = r.performance;
            best.n_peak = r.n;
        }
    }
    return best;
}

/// First index i where stepping to i + 1 improves total time by less than
/// `threshold` (relative). nullopt means it never saturates in range.
inline std::optional<std::size_t> saturation_point(std::span<const SweepRecord> records, double threshold = 0.01) {
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const double gain = (records[i].total - records[i + 1].total) / records[i].total;
        if (gain < threshold) return i;
    }
    return std::nullopt;
}

inline double metric_value(const SweepRecord& r, Metric m) {
    switch (m) {
        case Metric::TotalTime: return r.total;
        case Metric::Performance: return r.performance;
        case Metric::Efficiency: return r.performance / (r.pi * r.V);
    }
    return r.total;
}

/// Re-evaluates `count` randomly chosen records with a standalone call and
/// returns the indices that do not match bit for bit.
inline std::vector<std::size_t> spot_check(std::span<const SweepRecord> records, const SweepGrid& grid,
                                           const ComputerSpec& spec_template, const AlgorithmCost& cost,
                                           std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> bad;
    if (records.empty()) return bad;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, records.size() - 1);
    std::vector<std::vector<double>> axis_values;
    for (const auto& a : grid.axes) axis_values.push_back(a.values());
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = pick(rng);
        const auto in = detail::point_inputs(grid, spec_template, axis_values, i);
        const SweepRecord again = detail::evaluate_inputs(in, spec_template.distance(), cost);
        const SweepRecord& r = records[i];
        const bool same = r.ok() == again.ok() &&
                          (!r.ok() || (r.v_star == again.v_star && r.total == again.total &&
                                       r.t_work == again.t_work && r.t_io == again.t_io &&
                                       r.t_lat == again.t_lat && r.regime == again.regime));
        if (!same) bad.push_back(i);
    }
    return bad;
}

}  // namespace homlim
