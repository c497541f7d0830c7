#pragma once

// Bounded scalar minimization.
//
// minimize_bounded is Brent's method restricted to [lo, hi]: golden-section
// steps combined with successive parabolic interpolation, with the same
// bracket bookkeeping as the classic fminbound routine. grid_refine is a
// derivative-free fallback that does not assume unimodality.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace homlim {

enum class OptMethod { Brent, GridRefined };

inline const char* to_string(OptMethod m) { return m == OptMethod::Brent ? "BRENT" : "GRID_REFINED"; }

struct OptResult {
    double x_star = 0.0;
    double f_star = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    OptMethod method = OptMethod::Brent;
};

/// Thrown when the objective returns a non-finite value or no usable
/// minimum is found. Carries the offending (or best) point.
class OptimizationError : public std::runtime_error {
public:
    OptimizationError(const std::string& what, double x, double fx)
        : std::runtime_error(what), x_(x), fx_(fx) {}
    double x() const { return x_; }
    double fx() const { return fx_; }

private:
    double x_;
    double fx_;
};

template <typename F>
concept ScalarObjective = std::invocable<const F&, double> &&
    std::convertible_to<std::invoke_result_t<const F&, double>, double>;

namespace detail {

template <ScalarObjective F>
double checked_eval(const F& f, double x) {
    const double fx = f(x);
    if (!std::isfinite(fx)) {
        std::ostringstream os;
        os.precision(17);
        os << "objective is not finite at x = " << x << " (f = " << fx << ")";
        throw OptimizationError(os.str(), x, fx);
    }
    return fx;
}

}  // namespace detail

inline constexpr double kDefaultRelTol = 1e-9;
inline constexpr int kDefaultMaxIter = 200;
inline constexpr double kDefaultAbsFloor = 1e-12;

/// Brent minimization on [lo, hi]. Terminates when the bracket half-width
/// falls below 2 * (rel_tol * |x| + abs_floor / 3). The end points are
/// evaluated last so the result is never worse than f(lo) or f(hi).
template <ScalarObjective F>
OptResult minimize_bounded(const F& f, double lo, double hi, double rel_tol = kDefaultRelTol,
                           int max_iter = kDefaultMaxIter, double abs_floor = kDefaultAbsFloor) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_bounded: require lo < hi");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("minimize_bounded: require rel_tol > 0");
    if (max_iter < 1) throw std::invalid_argument("minimize_bounded: require max_iter >= 1");

    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    double a = lo;
    double b = hi;

    // x: best point so far, w: second best, u: previous value of w.
    double x = a + golden * (b - a);
    double w = x;
    double u = x;
    double fx = detail::checked_eval(f, x);
    double fw = fx;
    double fu = fx;
    double step = 0.0;
    double prev_step = 0.0;

    auto tolerance = [&](double at) { return rel_tol * std::abs(at) + abs_floor / 3.0; };
    double mid = 0.5 * (a + b);
    double tol1 = tolerance(x);
    double tol2 = 2.0 * tol1;

    int iterations = 0;
    bool converged = true;
    while (std::abs(x - mid) > tol2 - 0.5 * (b - a)) {
        if (iterations >= max_iter) {
            converged = false;
            break;
        }
        ++iterations;

        bool take_golden = true;
        if (std::abs(prev_step) > tol1) {
            take_golden = false;
            double r = (x - w) * (fx - fu);
            double q = (x - u) * (fx - fw);
            double p = (x - u) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double older = prev_step;
            prev_step = step;
            if (std::abs(p) < std::abs(0.5 * q * older) && p > q * (a - x) && p < q * (b - x)) {
                step = p / q;
                const double trial = x + step;
                if (trial - a < tol2 || b - trial < tol2) {
                    step = (mid >= x) ? tol1 : -tol1;
                }
            } else {
                take_golden = true;
            }
        }
        if (take_golden) {
            prev_step = (x >= mid) ? a - x : b - x;
            step = golden * prev_step;
        }

        const double dir = step >= 0.0 ? 1.0 : -1.0;
        const double t = x + dir * std::max(std::abs(step), tol1);
        const double ft = detail::checked_eval(f, t);

        if (ft <= fx) {
            if (t >= x) a = x; else b = x;
            u = w; fu = fw;
            w = x; fw = fx;
            x = t; fx = ft;
        } else {
            if (t < x) a = t; else b = t;
            if (ft <= fw || w == x) {
                u = w; fu = fw;
                w = t; fw = ft;
            } else if (ft <= fu || u == x || u == w) {
                u = t; fu = ft;
            }
        }
        mid = 0.5 * (a + b);
        tol1 = tolerance(x);
        tol2 = 2.0 * tol1;
    }

    OptResult res{x, fx, iterations, converged, OptMethod::Brent};
    for (double edge : {lo, hi}) {
        const double fe = detail::checked_eval(f, edge);
        if (fe < res.f_star) {
            res.x_star = edge;
            res.f_star = fe;
        }
    }
    return res;
}

/// Uniform grid over [lo, hi], then repeated zoom onto the cells adjacent
/// to the best sample. Never worse than the best sample of the first grid.
template <ScalarObjective F>
OptResult grid_refine(const F& f, double lo, double hi, int points = 256, int rounds = 3) {
    if (!(lo < hi)) throw std::invalid_argument("grid_refine: require lo < hi");
    if (points < 8) throw std::invalid_argument("grid_refine: require points >= 8");
    if (rounds < 1) throw std::invalid_argument("grid_refine: require rounds >= 1");

    OptResult best{lo, std::numeric_limits<double>::infinity(), 0, true, OptMethod::GridRefined};
    double a = lo;
    double b = hi;
    for (int round = 0; round < rounds; ++round) {
        const double h = (b - a) / (points - 1);
        int best_i = 0;
        double best_f = std::numeric_limits<double>::infinity();
        for (int i = 0; i < points; ++i) {
            const double x = (i == points - 1) ? b : a + i * h;
            const double fx = detail::checked_eval(f, x);
            if (fx < best_f) {
                best_f = fx;
                best_i = i;
            }
        }
        const double x_best = (best_i == points - 1) ? b : a + best_i * h;
        if (best_f < best.f_star) {
            best.f_star = best_f;
            best.x_star = x_best;
        }
        best.iterations = round + 1;
        const double na = best_i == 0 ? a : a + (best_i - 1) * h;
        const double nb = best_i == points - 1 ? b : a + (best_i + 1) * h;
        a = na;
        b = nb;
    }
    return best;
}

/// Options for minimize_scanned.
struct ScanOptions {
    double rel_tol = kDefaultRelTol;
    int max_iter = kDefaultMaxIter;
    int scan_points = 128;
    int grid_points = 256;
    int grid_rounds = 3;
    bool force_grid = false;
};

/// Coarse uniform scan to bracket the best sample, Brent inside that
/// bracket, and grid_refine over the full range when Brent fails to
/// converge or force_grid is set. Returns the better of the candidates.
template <ScalarObjective F>
OptResult minimize_scanned(const F& f, double lo, double hi, const ScanOptions& opt = {}) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_scanned: require lo < hi");
    const int n = std::max(opt.scan_points, 3);
    const double h = (hi - lo) / (n - 1);
    int best_i = 0;
    double best_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = (i == n - 1) ? hi : lo + i * h;
        const double fx = detail::checked_eval(f, x);
        if (fx < best_f) {
            best_f = fx;
            best_i = i;
        }
    }
    const double x_best = (best_i == n - 1) ? hi : lo + best_i * h;
    const double a = best_i == 0 ? lo : lo + (best_i - 1) * h;
    const double b = best_i == n - 1 ? hi : lo + (best_i + 1) * h;

    OptResult res = minimize_bounded(f, a, b, opt.rel_tol, opt.max_iter);
    if (best_f < res.f_star) {
        res.x_star = x_best;
        res.f_star = best_f;
    }
    if (!res.converged || opt.force_grid) {
        OptResult grid = grid_refine(f, lo, hi, opt.grid_points, opt.grid_rounds);
        if (grid.f_star < res.f_star) {
            grid.iterations = std::min(grid.iterations, opt.max_iter);
            return grid;
        }
        res.converged = res.converged || grid.converged;
    }
    return res;
}

}  // namespace homlim
