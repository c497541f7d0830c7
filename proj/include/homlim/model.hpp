#pragma once

// Run-time decomposition on a homogeneous computer:
//
//   T(v) = W / (pi v) + Q(n, s v) / (beta v) + D(L(v, n)) / c
//
// and its minimization over the active volume 0 < v <= V.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "homlim/cost.hpp"
#include "homlim/log_math.hpp"
#include "homlim/optimizer.hpp"
#include "homlim/spec.hpp"

namespace homlim {

/// Compute/memory/latency components of the run time, in seconds.
struct TimeBreakdown {
    double t_work = 0.0;
    double t_io = 0.0;
    double t_lat = 0.0;
    double total = 0.0;
    double v_used = 0.0;
    double performance = 0.0;  // flop/s, W / total
};

enum class Regime { ComputeBound, MemoryBound, LatencyBound };

inline std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::ComputeBound: return "COMPUTE_BOUND";
        case Regime::MemoryBound: return "MEMORY_BOUND";
        case Regime::LatencyBound: return "LATENCY_BOUND";
    }
    return "?";
}

inline Regime parse_regime(std::string_view s) {
    if (s == "COMPUTE_BOUND") return Regime::ComputeBound;
    if (s == "MEMORY_BOUND") return Regime::MemoryBound;
    if (s == "LATENCY_BOUND") return Regime::LatencyBound;
    throw std::invalid_argument("unknown regime '" + std::string(s) + "'");
}

/// Plot color used for each regime in emitted tables.
inline std::string_view regime_color(Regime r) {
    switch (r) {
        case Regime::ComputeBound: return "yellow-brown";
        case Regime::MemoryBound: return "blue";
        case Regime::LatencyBound: return "green";
    }
    return "?";
}

/// Largest component wins; ties go COMPUTE > MEMORY > LATENCY.
inline Regime classify_regime(const TimeBreakdown& b) {
    if (b.t_work >= b.t_io && b.t_work >= b.t_lat) return Regime::ComputeBound;
    if (b.t_io >= b.t_lat) return Regime::MemoryBound;
    return Regime::LatencyBound;
}

/// Smallest admissible active volume, as a fraction of V.
inline constexpr double kVolumeFloorRatio = 1e-30;

/// Component times as natural logs; zero components are -inf.
struct LogBreakdown {
    double work;
    double io;
    double lat;
    double log_work_count;

    double total() const { return logm::add3(work, io, lat); }
};

inline LogBreakdown log_breakdown(const ComputerSpec& spec, const AlgorithmCost& cost, double log_n,
                                  double log_v) {
    const double log_S = std::log(spec.s()) + log_v;
    const double lw = cost.log_work(log_n);
    const double lq = cost.log_io(log_n, log_S);
    const double ll = cost.log_wavefront(log_v, log_n);
    LogBreakdown out{};
    out.log_work_count = lw;
    out.work = lw - std::log(spec.pi()) - log_v;
    out.io = lq - std::log(spec.beta()) - log_v;
    out.lat = ll == logm::neg_inf ? logm::neg_inf : spec.distance().log_at(ll) - std::log(spec.c());
    return out;
}

namespace detail {

inline void check_n(double n) {
    if (!(std::isfinite(n) && n >= 1.0)) throw DomainError("problem size n must be finite and >= 1");
}

/// Accepts v up to one part in 1e12 above V (round-off of exp(log V)) and clamps.
inline double checked_volume(const ComputerSpec& spec, double v) {
    if (!(v > 0.0) || !std::isfinite(v) || v > spec.volume() * (1.0 + 1e-12)) {
        throw DomainError("active volume must satisfy 0 < v <= V (v = " + std::to_string(v) +
                          ", V = " + std::to_string(spec.volume()) + ")");
    }
    return std::min(v, spec.volume());
}

inline double exp_checked(double x, const char* what) {
    const double y = std::exp(x);
    if (std::isinf(y)) throw std::overflow_error(std::string(what) + " is not representable as a double");
    return y;
}

}  // namespace detail

inline TimeBreakdown time_breakdown(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v) {
    detail::check_n(n);
    v = detail::checked_volume(spec, v);
    const LogBreakdown lb = log_breakdown(spec, cost, std::log(n), std::log(v));
    const double lt = lb.total();
    TimeBreakdown b;
    b.t_work = detail::exp_checked(lb.work, "t_work");
    b.t_io = detail::exp_checked(lb.io, "t_io");
    b.t_lat = detail::exp_checked(lb.lat, "t_lat");
    b.total = b.t_work + b.t_io + b.t_lat;
    b.v_used = v;
    b.performance = lt == logm::neg_inf ? 0.0 : std::exp(lb.log_work_count - std::log(b.total));
    return b;
}

/// log T(v) with v given as log v. Never overflows.
inline double log_total_time(const ComputerSpec& spec, const AlgorithmCost& cost, double log_n, double log_v) {
    return log_breakdown(spec, cost, log_n, log_v).total();
}

inline double total_time(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v) {
    return time_breakdown(spec, cost, n, v).total;
}

struct VolumeOptimum {
    double v_star = 0.0;
    TimeBreakdown breakdown;
    OptResult diagnostics;  // x_star = log v*, f_star = log T(v*)
};

/// Tolerance on log v. The minimum often sits on the kink where Q clamps to
/// zero, so the error in T is first order in it.
inline constexpr double kVolumeRelTol = 1e-13;

struct VolumeSearch {
    ScanOptions scan{.rel_tol = kVolumeRelTol};
    /// Custom costs always get the grid fallback; set to force it for every cost.
    bool force_grid = false;
};

/// Active volume v* in [V * 1e-30, V] minimizing T(v). Search runs over log v.
inline VolumeOptimum optimal_volume(const ComputerSpec& spec, const AlgorithmCost& cost, double n,
                                    const VolumeSearch& search = {}) {
    detail::check_n(n);
    const double log_n = std::log(n);
    const double hi = std::log(spec.volume());
    const double lo = hi + std::log(kVolumeFloorRatio);
    auto objective = [&](double log_v) { return log_total_time(spec, cost, log_n, log_v); };

    ScanOptions opt = search.scan;
    opt.force_grid = opt.force_grid || search.force_grid || cost.kind() == Algorithm::Custom;
    OptResult r = minimize_scanned(objective, lo, hi, opt);
    if (!r.converged) throw OptimizationError("optimal_volume did not converge", r.x_star, r.f_star);

    VolumeOptimum out;
    out.v_star = std::min(std::exp(r.x_star), spec.volume());
    out.breakdown = time_breakdown(spec, cost, n, out.v_star);
    out.diagnostics = r;
    return out;
}

}  // namespace homlim
