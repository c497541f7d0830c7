#pragma once

// Quantities with optional unit suffixes ("1102 Pflop/s", "826mm2", "1e6").
// Everything resolves to SI base units: flop/s, B/s, B, m^2 or m^3, m/s.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "homlim/keyvalue.hpp"
#include "homlim/spec.hpp"

namespace homlim {

enum class Dimension { Dimensionless, FlopRate, ByteRate, Bytes, Volume, Speed };

inline std::string_view to_string(Dimension d) {
    switch (d) {
        case Dimension::Dimensionless: return "dimensionless";
        case Dimension::FlopRate: return "flop/s";
        case Dimension::ByteRate: return "B/s";
        case Dimension::Bytes: return "B";
        case Dimension::Volume: return "volume (m2/m3)";
        case Dimension::Speed: return "m/s";
    }
    return "?";
}

namespace detail {

struct UnitSuffix {
    std::string_view suffix;
    double scale;
    Dimension dim;
};

inline double prefix_scale(char p) {
    switch (p) {
        case 'k': case 'K': return 1e3;
        case 'M': return 1e6;
        case 'G': return 1e9;
        case 'T': return 1e12;
        case 'P': return 1e15;
        case 'E': return 1e18;
        case 'Z': return 1e21;
        default: return 0.0;
    }
}

inline bool resolve_unit(std::string_view u, double& scale, Dimension& dim) {
    static constexpr std::array<UnitSuffix, 14> exact{{
        {"flop/s", 1.0, Dimension::FlopRate},
        {"B/s", 1.0, Dimension::ByteRate},
        {"B", 1.0, Dimension::Bytes},
        {"m2", 1.0, Dimension::Volume},
        {"m^2", 1.0, Dimension::Volume},
        {"mm2", 1e-6, Dimension::Volume},
        {"mm^2", 1e-6, Dimension::Volume},
        {"cm2", 1e-4, Dimension::Volume},
        {"m3", 1.0, Dimension::Volume},
        {"m^3", 1.0, Dimension::Volume},
        {"mm3", 1e-9, Dimension::Volume},
        {"cm3", 1e-6, Dimension::Volume},
        {"m/s", 1.0, Dimension::Speed},
        {"flops", 1.0, Dimension::FlopRate},
    }};
    for (const auto& e : exact) {
        if (u == e.suffix) {
            scale = e.scale;
            dim = e.dim;
            return true;
        }
    }
    // SI-prefixed rates and sizes: Pflop/s, PB/s, TB, GB ...
    if (u.size() >= 2) {
        const double p = prefix_scale(u.front());
        if (p > 0.0) {
            const std::string_view rest = u.substr(1);
            for (const auto& e : exact) {
                if (rest == e.suffix && (e.dim == Dimension::FlopRate || e.dim == Dimension::ByteRate ||
                                         e.dim == Dimension::Bytes)) {
                    scale = p;
                    dim = e.dim;
                    return true;
                }
            }
        }
    }
    return false;
}

}  // namespace detail

/// Parses a plain number ("1e30", "0.5").
inline double parse_number(std::string_view text) {
    const std::string t = trim(text);
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || t.empty()) throw SpecError("not a number: '" + t + "'");
    return value;
}

/// Parses "<number>[ ]<unit>" and checks the unit against `expected`.
/// A bare number is taken to be in SI base units already.
inline double parse_quantity(std::string_view text, Dimension expected) {
    const std::string t = trim(text);
    std::size_t split = t.size();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const char ch = t[i];
        const bool numeric = std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '+' || ch == '-' ||
                             ((ch == 'e' || ch == 'E') && i > 0 && i + 1 < t.size() &&
                              (std::isdigit(static_cast<unsigned char>(t[i + 1])) || t[i + 1] == '-' ||
                               t[i + 1] == '+'));
        if (!numeric) {
            split = i;
            break;
        }
    }
    const double value = parse_number(std::string_view(t).substr(0, split));
    const std::string unit = trim(std::string_view(t).substr(split));
    if (unit.empty()) return value;
    double scale = 1.0;
    Dimension dim = Dimension::Dimensionless;
    if (!detail::resolve_unit(unit, scale, dim)) throw SpecError("unknown unit '" + unit + "' in '" + t + "'");
    if (dim != expected) {
        throw SpecError("unit '" + unit + "' is " + std::string(to_string(dim)) + ", expected " +
                        std::string(to_string(expected)));
    }
    return value * scale;
}

}  // namespace homlim
