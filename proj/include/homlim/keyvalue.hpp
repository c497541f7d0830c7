#pragma once

// `key = value` line format shared by preset files and run configs.
// `#` starts a comment line; blank lines are ignored; later keys win.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "homlim/spec.hpp"

namespace homlim {

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline KeyValues parse_key_values(std::string_view text, std::string_view origin = "<string>") {
    KeyValues out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        for (std::size_t i = 1; i < t.size(); ++i) {
            if (t[i] == '#' && (t[i - 1] == ' ' || t[i - 1] == '\t')) {
                t = trim(std::string_view(t).substr(0, i));
                break;
            }
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw SpecError(std::string(origin) + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw SpecError(std::string(origin) + ":" + std::to_string(lineno) + ": empty key");
        out[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SpecError("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

inline KeyValues load_key_values(const std::string& path) { return parse_key_values(read_text_file(path), path); }

}  // namespace homlim
