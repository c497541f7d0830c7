#pragma once

// Homogeneous computer description: uniform compute, bandwidth and memory
// densities over a volume V, with signals travelling at speed c.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace homlim {

/// Raised when a ComputerSpec or other model input violates an invariant.
/// The message names the violated invariant (e.g. "pi > 0").
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for arguments outside an operation's domain (v > V, v < v0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

inline void require(bool ok, const std::string& invariant) {
    if (!ok) throw SpecError("invariant violated: " + invariant);
}

}  // namespace detail

/// Farthest signal distance inside an active volume: D(v) = prefactor * v^exponent.
struct DistanceFn {
    double prefactor = 1.0;
    double exponent = 1.0 / 3.0;

    static constexpr DistanceFn cube_root() { return {1.0, 1.0 / 3.0}; }
    static constexpr DistanceFn square_root() { return {1.0, 0.5}; }

    void validate() const {
        detail::require(detail::positive_finite(prefactor), "distance prefactor > 0");
        detail::require(detail::positive_finite(exponent), "distance exponent > 0");
    }

    double operator()(double v) const { return prefactor * std::pow(v, exponent); }

    /// log D evaluated from log v; D(0) = 0 maps to -inf.
    double log_at(double log_v) const { return std::log(prefactor) + exponent * log_v; }

    friend bool operator==(const DistanceFn&, const DistanceFn&) = default;
};

/// Immutable homogeneous computer. Totals (Pi, B, S) are derived as density * V.
class ComputerSpec {
public:
    ComputerSpec(double pi, double beta, double s, double c, double volume,
                 DistanceFn distance = DistanceFn::cube_root())
        : pi_(pi), beta_(beta), s_(s), c_(c), volume_(volume), distance_(distance) {
        detail::require(detail::positive_finite(pi_), "pi > 0");
        detail::require(detail::positive_finite(beta_), "beta > 0");
        detail::require(detail::positive_finite(s_), "s > 0");
        detail::require(detail::positive_finite(c_), "c > 0");
        detail::require(detail::positive_finite(volume_), "V > 0");
        distance_.validate();
    }

    double pi() const { return pi_; }
    double beta() const { return beta_; }
    double s() const { return s_; }
    double c() const { return c_; }
    double volume() const { return volume_; }
    const DistanceFn& distance() const { return distance_; }

    double total_compute() const { return pi_ * volume_; }
    double total_bandwidth() const { return beta_ * volume_; }
    double total_memory() const { return s_ * volume_; }

    ComputerSpec with_pi(double x) const { return {x, beta_, s_, c_, volume_, distance_}; }
    ComputerSpec with_beta(double x) const { return {pi_, x, s_, c_, volume_, distance_}; }
    ComputerSpec with_s(double x) const { return {pi_, beta_, x, c_, volume_, distance_}; }
    ComputerSpec with_c(double x) const { return {pi_, beta_, s_, x, volume_, distance_}; }
    ComputerSpec with_volume(double x) const { return {pi_, beta_, s_, c_, x, distance_}; }
    ComputerSpec with_distance(DistanceFn d) const { return {pi_, beta_, s_, c_, volume_, d}; }

    friend bool operator==(const ComputerSpec&, const ComputerSpec&) = default;

private:
    double pi_;
    double beta_;
    double s_;
    double c_;
    double volume_;
    DistanceFn distance_;
};

}  // namespace homlim
