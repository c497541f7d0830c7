#pragma once

// Machine parameterizations. A preset stores whole-machine totals (Pi, B, S)
// plus the floor area / volume; densities are totals divided by V, with
// bandwidth and memory converted from bytes to 8-byte words.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "homlim/keyvalue.hpp"
#include "homlim/spec.hpp"
#include "homlim/units.hpp"

namespace homlim {

struct MachinePreset {
    std::string name;
    double pi_total = 0.0;  // flop/s
    double b_total = 0.0;   // byte/s
    double s_total = 0.0;   // byte
    double volume = 0.0;    // m^2 or m^3
    double c = 0.0;         // m/s
    DistanceFn distance = DistanceFn::square_root();
    double word_bytes = 8.0;
    std::string notes;
    std::string source;  // text the preset was parsed from

    double pi() const { return pi_total / volume; }
    double beta() const { return (b_total / word_bytes) / volume; }
    double s() const { return (s_total / word_bytes) / volume; }

    ComputerSpec to_spec() const { return {pi(), beta(), s(), c, volume, distance}; }
};

struct ChipSpec {
    double peak_flops = 0.0;     // flop/s
    double mem_bandwidth = 0.0;  // byte/s
    double fast_memory = 0.0;    // byte
    double die_area = 0.0;       // m^2
    double word_bytes = 8.0;
};

/// Nvidia A100: FP64 peak, HBM bandwidth, L1+L2 capacity, die area.
inline constexpr ChipSpec kA100{30e12, 1550e9, 60e6, 826e-6, 8.0};

struct Densities {
    double pi = 0.0;
    double beta = 0.0;
    double s = 0.0;
};

inline Densities densities_from_chip(const ChipSpec& chip) {
    using detail::positive_finite;
    using detail::require;
    require(positive_finite(chip.peak_flops), "chip peak_flops > 0");
    require(positive_finite(chip.mem_bandwidth), "chip mem_bandwidth > 0");
    require(positive_finite(chip.fast_memory), "chip fast_memory > 0");
    require(positive_finite(chip.die_area), "chip die_area > 0");
    require(positive_finite(chip.word_bytes), "chip word_bytes > 0");
    return {chip.peak_flops / chip.die_area, (chip.mem_bandwidth / chip.word_bytes) / chip.die_area,
            (chip.fast_memory / chip.word_bytes) / chip.die_area};
}

/// Multiplies pi, beta and s by `factor`; V, c and D are unchanged.
inline ComputerSpec scale_spec(const ComputerSpec& spec, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw SpecError("invariant violated: scale factor > 0");
    return {spec.pi() * factor, spec.beta() * factor, spec.s() * factor, spec.c(), spec.volume(), spec.distance()};
}

inline MachinePreset parse_preset(std::string_view text, std::string_view origin = "<preset>") {
    const KeyValues kv = parse_key_values(text, origin);
    auto get = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw SpecError(std::string(origin) + ": missing key '" + key + "'");
        return it->second;
    };
    MachinePreset p;
    p.name = get("name");
    p.pi_total = parse_quantity(get("pi_total_flops"), Dimension::FlopRate);
    p.b_total = parse_quantity(get("b_total_bytes"), Dimension::ByteRate);
    p.s_total = parse_quantity(get("s_total_bytes"), Dimension::Bytes);
    p.volume = parse_quantity(get("volume"), Dimension::Volume);
    p.c = parse_quantity(get("c"), Dimension::Speed);
    p.distance.exponent = parse_number(get("distance_exponent"));
    p.distance.prefactor = kv.contains("distance_prefactor") ? parse_number(kv.at("distance_prefactor")) : 1.0;
    p.word_bytes = kv.contains("word_bytes") ? parse_number(kv.at("word_bytes")) : 8.0;
    if (kv.contains("notes")) p.notes = kv.at("notes");
    p.source = std::string(text);

    using detail::positive_finite;
    using detail::require;
    require(!p.name.empty(), "preset name non-empty");
    require(positive_finite(p.pi_total), "pi_total_flops > 0");
    require(positive_finite(p.b_total), "b_total_bytes > 0");
    require(positive_finite(p.s_total), "s_total_bytes > 0");
    require(positive_finite(p.volume), "volume > 0");
    require(positive_finite(p.c), "c > 0");
    require(positive_finite(p.word_bytes), "word_bytes > 0");
    p.distance.validate();
    return p;
}

namespace presets_text {

inline constexpr std::string_view frontier = R"(# Frontier (HPE Cray EX, OLCF), floor-plan model.
name = frontier
pi_total_flops = 1102 Pflop/s
b_total_bytes = 122.3 PB/s
s_total_bytes = 3.1 TB
volume = 370 m2
c = 1e6 m/s
distance_exponent = 0.5
distance_prefactor = 1
word_bytes = 8
notes = pi_total is an experimental (HPL) value; b_total carries an unexplained asterisk in the source table
)";

inline constexpr std::string_view fugaku = R"(# Fugaku (Fujitsu A64FX, RIKEN), floor-plan model.
name = fugaku
pi_total_flops = 488 Pflop/s
b_total_bytes = 163 PB/s
s_total_bytes = 5.6 TB
volume = 1920 m2
c = 1e6 m/s
distance_exponent = 0.5
distance_prefactor = 1
word_bytes = 8
notes = pi_total is an experimental (HPL) value
)";

inline constexpr std::string_view dgx_gh200 = R"(# Nvidia DGX GH200, 256 Grace Hopper superchips, floor-plan model.
name = dgx-gh200
pi_total_flops = 25.9 Pflop/s
b_total_bytes = 1.15 PB/s
s_total_bytes = 0.043 TB
volume = 6.9 m2
c = 1e6 m/s
distance_exponent = 0.5
distance_prefactor = 1
word_bytes = 8
notes = b_total carries an unexplained asterisk in the source table
)";

// 1e9 A100 dies (826 mm2 each) tiled edge to edge; signals at the speed of light.
inline constexpr std::string_view a100_homogeneous = R"(# Square medium with Nvidia A100 die densities, 1e9 dies of 826 mm2.
name = a100-homogeneous
pi_total_flops = 3e22 flop/s
b_total_bytes = 1.55e21 B/s
s_total_bytes = 6e16 B
volume = 826000 m2
c = 3e8 m/s
distance_exponent = 0.5
distance_prefactor = 1
word_bytes = 8
notes = per-die 30 Tflop/s FP64, 1550 GB/s, 60 MB L1+L2, 826 mm2; volume unit conversion: 1 die = 8.26e-4 m2
)";

inline constexpr std::string_view a100_homogeneous_1e9 = R"(# a100-homogeneous with pi, beta and s scaled by 1e9.
name = a100-homogeneous-1e9
pi_total_flops = 3e31 flop/s
b_total_bytes = 1.55e30 B/s
s_total_bytes = 6e25 B
volume = 826000 m2
c = 3e8 m/s
distance_exponent = 0.5
distance_prefactor = 1
word_bytes = 8
notes = hypothetical medium 1e9 times denser than the A100 in compute, bandwidth and memory
)";

}  // namespace presets_text

struct BuiltinPreset {
    std::string_view file_name;
    std::string_view text;
};

inline constexpr std::array<BuiltinPreset, 5> kBuiltinPresets{{
    {"frontier.preset", presets_text::frontier},
    {"fugaku.preset", presets_text::fugaku},
    {"dgx-gh200.preset", presets_text::dgx_gh200},
    {"a100-homogeneous.preset", presets_text::a100_homogeneous},
    {"a100-homogeneous-1e9.preset", presets_text::a100_homogeneous_1e9},
}};

/// Name-indexed preset table. Entries are only ever appended; a duplicate
/// name is an error.
class PresetRegistry {
public:
    static PresetRegistry builtin() {
        PresetRegistry r;
        for (const auto& b : kBuiltinPresets) r.add(parse_preset(b.text, b.file_name));
        return r;
    }

    /// Built-ins followed by every *.preset file in HOMLIM_PRESET_PATH
    /// (colon-separated directories).
    static PresetRegistry with_search_path() {
        PresetRegistry r = builtin();
        if (const char* env = std::getenv("HOMLIM_PRESET_PATH")) {
            std::string_view paths(env);
            while (!paths.empty()) {
                const auto colon = paths.find(':');
                const std::string dir(paths.substr(0, colon));
                if (!dir.empty()) r.load_directory(dir);
                if (colon == std::string_view::npos) break;
                paths.remove_prefix(colon + 1);
            }
        }
        return r;
    }

    void add(MachinePreset p) {
        if (find(p.name) != nullptr) throw SpecError("duplicate preset name '" + p.name + "'");
        presets_.push_back(std::move(p));
    }

    void load_file(const std::string& path) { add(parse_preset(read_text_file(path), path)); }

    void load_directory(const std::string& dir) {
        namespace fs = std::filesystem;
        if (!fs::is_directory(dir)) return;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_regular_file() && e.path().extension() == ".preset") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) load_file(f.string());
    }

    const MachinePreset* find(std::string_view name) const {
        for (const auto& p : presets_) {
            if (p.name == name) return &p;
        }
        return nullptr;
    }

    const MachinePreset& get(std::string_view name) const {
        if (const auto* p = find(name)) return *p;
        std::string msg = "unknown machine preset '" + std::string(name) + "'; available:";
        for (const auto& p : presets_) msg += " " + p.name;
        throw SpecError(msg);
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& p : presets_) out.push_back(p.name);
        return out;
    }

    const std::vector<MachinePreset>& all() const { return presets_; }

private:
    std::vector<MachinePreset> presets_;
};

inline ComputerSpec preset(std::string_view name) { return PresetRegistry::builtin().get(name).to_spec(); }

}  // namespace homlim
