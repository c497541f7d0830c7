#pragma once

// Strong/weak parallel efficiency and the volume-continuous forms of
// Amdahl's and Gustafson's laws. The sequential part of a run is its
// propagation time T_L; everything else shrinks with the active volume.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homlim/cost.hpp"
#include "homlim/model.hpp"
#include "homlim/spec.hpp"

namespace homlim {

/// Problem metric held constant per unit volume in weak scaling.
enum class KPolicy { OutputSize, InputN, Work };

inline std::string_view to_string(KPolicy k) {
    switch (k) {
        case KPolicy::OutputSize: return "output";
        case KPolicy::InputN: return "input";
        case KPolicy::Work: return "work";
    }
    return "?";
}

inline KPolicy parse_k_policy(std::string_view s) {
    if (s == "output" || s == "output_size" || s == "OUTPUT_SIZE") return KPolicy::OutputSize;
    if (s == "input" || s == "n" || s == "INPUT_N") return KPolicy::InputN;
    if (s == "work" || s == "WORK") return KPolicy::Work;
    throw SpecError("unknown K policy '" + std::string(s) + "' (expected output, input, work)");
}

/// Whether f is evaluated at the volume as given or at the best volume not
/// exceeding it.
enum class VolumeMode { AsGiven, Optimized };

struct ScalingPoint {
    double v = 0.0;
    double n = 0.0;
    double time = 0.0;
    double efficiency = 0.0;
    double speedup = 0.0;
};

inline double k_metric_log(KPolicy k, const AlgorithmCost& cost, double log_n) {
    switch (k) {
        case KPolicy::OutputSize: return cost.log_output_size(log_n);
        case KPolicy::InputN: return log_n;
        case KPolicy::Work: return cost.log_work(log_n);
    }
    return log_n;
}

inline double k_metric(KPolicy k, const AlgorithmCost& cost, double n) {
    return std::exp(k_metric_log(k, cost, std::log(n)));
}

/// Problem size n >= 1 with K(n) = target, by bisection in log n.
inline double invert_K(KPolicy k, const AlgorithmCost& cost, double target) {
    if (!(target > 0.0) || !std::isfinite(target)) throw DomainError("invert_K: target must be finite and > 0");
    const double log_target = std::log(target);
    auto g = [&](double log_n) { return k_metric_log(k, cost, log_n); };

    double lo = 0.0;
    const double at_one = g(lo);
    if (log_target < at_one) {
        throw DomainError("invert_K: target " + std::to_string(target) + " is below K(1)");
    }
    if (log_target == at_one) return 1.0;

    // log(DBL_MAX) ~ 709.78; n itself must stay representable.
    const double log_n_max = std::log(std::numeric_limits<double>::max());
    double hi = 1.0;
    while (g(hi) < log_target) {
        lo = hi;
        hi *= 2.0;
        if (hi > log_n_max) {
            if (g(log_n_max) < log_target) throw DomainError("invert_K: target out of representable range");
            hi = log_n_max;
            break;
        }
    }
    const double g_lo0 = g(lo);
    if (!(g(hi) > g_lo0)) throw DomainError("invert_K: K(n) is not strictly increasing for this cost");
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < log_target) lo = mid; else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

namespace detail {

inline void check_scaling_volumes(const ComputerSpec& spec, double v0, double v) {
    if (!(v0 > 0.0)) throw DomainError("baseline volume v0 must be > 0");
    if (v < v0) throw DomainError("scaling requires v >= v0");
    if (v > spec.volume() * (1.0 + 1e-12)) throw DomainError("scaling requires v <= V");
}

/// min over u in (0, v] of T(u), reusing the volume optimizer on a shrunken machine.
inline double best_time_within(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v) {
    return optimal_volume(spec.with_volume(std::min(v, spec.volume())), cost, n).breakdown.total;
}

inline double time_at(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v, VolumeMode mode) {
    return mode == VolumeMode::AsGiven ? total_time(spec, cost, n, v) : best_time_within(spec, cost, n, v);
}

}  // namespace detail

/// Default baseline when none is given: V * 1e-6.
inline double default_baseline_volume(const ComputerSpec& spec) { return spec.volume() * 1e-6; }

/// P_eff = f(v0) v0 / (f(v) v).
inline double strong_efficiency(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v0,
                                double v, VolumeMode mode = VolumeMode::AsGiven) {
    detail::check_scaling_volumes(spec, v0, v);
    if (v == v0) return 1.0;
    const double f0 = detail::time_at(spec, cost, n, v0, mode);
    const double f1 = detail::time_at(spec, cost, n, v, mode);
    return (f0 / f1) * (v0 / v);
}

/// Problem size at volume v when K(n)/v is held at K(n0)/v0.
inline double weak_problem_size(KPolicy k, const AlgorithmCost& cost, double n0, double v0, double v) {
    if (v == v0) return n0;
    const double log_target = k_metric_log(k, cost, std::log(n0)) + std::log(v) - std::log(v0);
    return invert_K(k, cost, std::exp(log_target));
}

/// P_weak = f(v, n) / f(v0, n0) with n from the K policy.
inline double weak_efficiency(const ComputerSpec& spec, const AlgorithmCost& cost, KPolicy k, double n0,
                              double v0, double v, VolumeMode mode = VolumeMode::AsGiven) {
    detail::check_scaling_volumes(spec, v0, v);
    if (v == v0) return 1.0;
    const double n = weak_problem_size(k, cost, n0, v0, v);
    return detail::time_at(spec, cost, n, v, mode) / detail::time_at(spec, cost, n0, v0, mode);
}

/// Sequential fraction t = T_L(v0) / T(v0).
inline double sequential_fraction(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v0) {
    const TimeBreakdown b = time_breakdown(spec, cost, n, v0);
    return b.t_lat / b.total;
}

/// (t_work + t_io) / total at v.
inline double parallel_fraction(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v) {
    const TimeBreakdown b = time_breakdown(spec, cost, n, v);
    return (b.t_work + b.t_io) / b.total;
}

/// Amdahl form with N replaced by v / v0: 1 / (v0/v + (1 - v0/v) t).
inline double amdahl_speedup(double t, double v0, double v) {
    if (v == v0) return 1.0;
    const double r = v0 / v;
    return 1.0 / (r + (1.0 - r) * t);
}

/// Gustafson form with N replaced by v / v0: v/v0 + (1 - v/v0) t.
inline double gustafson_speedup(double t, double v0, double v) {
    if (v == v0) return 1.0;
    const double ratio = v / v0;
    return ratio + (1.0 - ratio) * t;
}

inline double generalized_speedup(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v0,
                                  double v) {
    detail::check_scaling_volumes(spec, v0, v);
    return amdahl_speedup(sequential_fraction(spec, cost, n, v0), v0, v);
}

struct SpeedupLimit {
    double value = std::numeric_limits<double>::infinity();
    bool unbounded = true;
};

/// T(v0) / T_L(v0); unbounded when the run has no propagation term.
inline SpeedupLimit speedup_limit(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v0) {
    const TimeBreakdown b = time_breakdown(spec, cost, n, v0);
    if (b.t_lat <= 0.0) return {};
    return {b.total / b.t_lat, false};
}

/// Tighter variant T(v0) / T_L(v): T_L grows with v, so this limit shrinks.
inline SpeedupLimit speedup_limit_at(const ComputerSpec& spec, const AlgorithmCost& cost, double n, double v0,
                                     double v) {
    detail::check_scaling_volumes(spec, v0, v);
    const double t0 = total_time(spec, cost, n, v0);
    const double lat = time_breakdown(spec, cost, n, v).t_lat;
    if (lat <= 0.0) return {};
    return {t0 / lat, false};
}

inline double scaled_speedup(const ComputerSpec& spec, const AlgorithmCost& cost, double n0, double v0,
                             double v) {
    detail::check_scaling_volumes(spec, v0, v);
    return gustafson_speedup(sequential_fraction(spec, cost, n0, v0), v0, v);
}

/// Strong scaling at fixed n: efficiency = P_eff, speedup = generalized Amdahl.
inline std::vector<ScalingPoint> strong_scaling_series(const ComputerSpec& spec, const AlgorithmCost& cost,
                                                       double n, double v0, std::span<const double> volumes,
                                                       VolumeMode mode = VolumeMode::AsGiven) {
    std::vector<ScalingPoint> out;
    out.reserve(volumes.size());
    const double t = sequential_fraction(spec, cost, n, v0);
    for (double v : volumes) {
        detail::check_scaling_volumes(spec, v0, v);
        ScalingPoint p;
        p.v = v;
        p.n = n;
        p.time = detail::time_at(spec, cost, n, v, mode);
        p.efficiency = strong_efficiency(spec, cost, n, v0, v, mode);
        p.speedup = amdahl_speedup(t, v0, v);
        out.push_back(p);
    }
    return out;
}

/// Weak scaling under K policy k: efficiency = P_weak, speedup = scaled speedup.
inline std::vector<ScalingPoint> weak_scaling_series(const ComputerSpec& spec, const AlgorithmCost& cost,
                                                     KPolicy k, double n0, double v0,
                                                     std::span<const double> volumes,
                                                     VolumeMode mode = VolumeMode::AsGiven) {
    std::vector<ScalingPoint> out;
    out.reserve(volumes.size());
    const double t = sequential_fraction(spec, cost, n0, v0);
    for (double v : volumes) {
        detail::check_scaling_volumes(spec, v0, v);
        ScalingPoint p;
        p.v = v;
        p.n = weak_problem_size(k, cost, n0, v0, v);
        p.time = detail::time_at(spec, cost, p.n, v, mode);
        p.efficiency = weak_efficiency(spec, cost, k, n0, v0, v, mode);
        p.speedup = gustafson_speedup(t, v0, v);
        out.push_back(p);
    }
    return out;
}

}  // namespace homlim
