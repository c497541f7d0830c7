#pragma once

// Algorithm cost triples: I/O volume Q(n, S), work W(n) and wavefront L(v, n).
//
// MxM and CG, as well as user-defined kernels, share one closed form
//
//   Q = max(a * n^p / S^q + r * S, 0)
//   W = b * n^w * log2(n)^l
//   L = g * v^h / n^k
//
// FFT has a 1/log(S) dependence and is evaluated separately. All evaluation
// goes through natural logarithms so that n, S and v can span 1e-44..1e30
// without intermediate overflow.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "homlim/log_math.hpp"
#include "homlim/spec.hpp"

namespace homlim {

enum class Algorithm { MxM, CG, FFT, Custom };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::MxM: return "mxm";
        case Algorithm::CG: return "cg";
        case Algorithm::FFT: return "fft";
        case Algorithm::Custom: return "custom";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view text) {
    std::string s(text);
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "mxm") return Algorithm::MxM;
    if (s == "cg") return Algorithm::CG;
    if (s == "fft") return Algorithm::FFT;
    if (s == "custom") return Algorithm::Custom;
    throw SpecError("unknown algorithm '" + std::string(text) + "' (expected mxm, cg, fft, custom)");
}

/// Coefficients of the closed form above, plus output_size = oc * n^oe.
struct CustomCoefficients {
    double io_coeff = 0.0;     // a
    double io_n_exp = 0.0;     // p
    double io_s_exp = 0.0;     // q
    double io_s_linear = 0.0;  // r
    double work_coeff = 1.0;   // b
    double work_n_exp = 1.0;   // w
    double work_log_exp = 0.0; // l
    double wave_coeff = 0.0;   // g
    double wave_v_exp = 1.0;   // h
    double wave_n_exp = 0.0;   // k
    double output_coeff = 1.0;
    double output_n_exp = 1.0;

    friend bool operator==(const CustomCoefficients&, const CustomCoefficients&) = default;
};

class AlgorithmCost {
public:
    Algorithm kind() const { return kind_; }
    std::string_view name() const { return to_string(kind_); }
    const CustomCoefficients& coefficients() const { return coef_; }

    /// log Q(n, S) from log n and log S; -inf when Q clamps to zero.
    double log_io(double log_n, double log_S) const {
        if (kind_ == Algorithm::FFT) {
            const double log2_n = log_n / std::numbers::ln2;
            if (!(log2_n > 0.0)) return logm::neg_inf;
            const double log2_S_eff = std::max(log_S, std::log(4.0)) / std::numbers::ln2;
            const double head = std::log(2.0) + log_n + std::log(log2_n) - std::log(log2_S_eff);
            return logm::sub_clamped(head, std::log(2.0) + log_S);
        }
        const auto& k = coef_;
        double head = logm::neg_inf;
        if (k.io_coeff > 0.0) head = std::log(k.io_coeff) + k.io_n_exp * log_n - k.io_s_exp * log_S;
        if (k.io_s_linear < 0.0) return logm::sub_clamped(head, std::log(-k.io_s_linear) + log_S);
        if (k.io_s_linear > 0.0) return logm::add(head, std::log(k.io_s_linear) + log_S);
        return head;
    }

    double log_work(double log_n) const {
        if (kind_ == Algorithm::FFT) {
            const double log2_n = log_n / std::numbers::ln2;
            if (!(log2_n > 0.0)) return logm::neg_inf;
            return std::log(8.0 / 3.0) + log_n + std::log(log2_n);
        }
        const auto& k = coef_;
        double out = std::log(k.work_coeff) + k.work_n_exp * log_n;
        if (k.work_log_exp != 0.0) {
            const double log2_n = log_n / std::numbers::ln2;
            if (!(log2_n > 0.0)) return logm::neg_inf;
            out += k.work_log_exp * std::log(log2_n);
        }
        return out;
    }

    double log_wavefront(double log_v, double log_n) const {
        if (kind_ == Algorithm::FFT) return log_v;
        const auto& k = coef_;
        if (k.wave_coeff <= 0.0) return logm::neg_inf;
        return std::log(k.wave_coeff) + k.wave_v_exp * log_v - k.wave_n_exp * log_n;
    }

    double log_output_size(double log_n) const {
        switch (kind_) {
            case Algorithm::MxM: return 2.0 * log_n;
            case Algorithm::CG:
            case Algorithm::FFT: return log_n;
            case Algorithm::Custom: break;
        }
        return std::log(coef_.output_coeff) + coef_.output_n_exp * log_n;
    }

    double io(double n, double S) const { return std::exp(log_io(std::log(n), std::log(S))); }
    double work(double n) const { return std::exp(log_work(std::log(n))); }
    double wavefront(double v, double n) const {
        return std::exp(log_wavefront(logm::log_or_neg_inf(v), std::log(n)));
    }
    double output_size(double n) const { return std::exp(log_output_size(std::log(n))); }

    friend AlgorithmCost mxm_cost();
    friend AlgorithmCost cg_cost();
    friend AlgorithmCost fft_cost();
    friend AlgorithmCost custom_cost(const CustomCoefficients&);

private:
    AlgorithmCost(Algorithm kind, CustomCoefficients coef) : kind_(kind), coef_(coef) {}

    Algorithm kind_;
    CustomCoefficients coef_;
};

/// Q = 2n^3/sqrt(S) - 3S, W = 2n^3, L = v/n.
inline AlgorithmCost mxm_cost() {
    CustomCoefficients k;
    k.io_coeff = 2.0;
    k.io_n_exp = 3.0;
    k.io_s_exp = 0.5;
    k.io_s_linear = -3.0;
    k.work_coeff = 2.0;
    k.work_n_exp = 3.0;
    k.wave_coeff = 1.0;
    k.wave_v_exp = 1.0;
    k.wave_n_exp = 1.0;
    k.output_n_exp = 2.0;
    return {Algorithm::MxM, k};
}

/// One CG iteration: Q = 7n - 4S, W = 17n, L = 2v.
inline AlgorithmCost cg_cost() {
    CustomCoefficients k;
    k.io_coeff = 7.0;
    k.io_n_exp = 1.0;
    k.io_s_linear = -4.0;
    k.work_coeff = 17.0;
    k.work_n_exp = 1.0;
    k.wave_coeff = 2.0;
    k.wave_v_exp = 1.0;
    return {Algorithm::CG, k};
}

/// Q = 2n log2(n)/log2(max(S, 4)) - 2S, W = (8/3) n log2(n), L = v.
inline AlgorithmCost fft_cost() { return {Algorithm::FFT, CustomCoefficients{}}; }

inline AlgorithmCost custom_cost(const CustomCoefficients& k) {
    using detail::require;
    for (double x : {k.io_coeff, k.io_n_exp, k.io_s_exp, k.io_s_linear, k.work_coeff, k.work_n_exp,
                     k.work_log_exp, k.wave_coeff, k.wave_v_exp, k.wave_n_exp, k.output_coeff,
                     k.output_n_exp}) {
        require(std::isfinite(x), "custom cost coefficients finite");
    }
    require(k.io_coeff >= 0.0, "io coefficient a >= 0");
    require(!(k.io_coeff > 0.0 && k.io_s_exp < 0.0), "io non-increasing in S (q >= 0)");
    require(k.io_s_linear <= 0.0, "io non-increasing in S (r <= 0)");
    require(k.work_coeff > 0.0, "work coefficient b > 0");
    require(k.work_n_exp >= 0.0 && k.work_log_exp >= 0.0, "work exponents w, l >= 0");
    require(k.wave_coeff >= 0.0, "wavefront coefficient g >= 0");
    require(k.wave_v_exp >= 0.0, "wavefront non-decreasing in v (h >= 0)");
    require(k.output_coeff > 0.0 && k.output_n_exp > 0.0, "output size strictly increasing in n");
    return {Algorithm::Custom, k};
}

inline AlgorithmCost cost_for(Algorithm a) {
    switch (a) {
        case Algorithm::MxM: return mxm_cost();
        case Algorithm::CG: return cg_cost();
        case Algorithm::FFT: return fft_cost();
        case Algorithm::Custom: break;
    }
    throw SpecError("custom cost requires coefficients");
}

}  // namespace homlim
