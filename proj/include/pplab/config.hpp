#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pplab/report_io.hpp"

namespace pplab {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

// Line-oriented "key = value" config with # comments.  Unknown keys are hard
// errors naming the line; constraint violations name the key.
class Config {
public:
    static Config parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file " + path);
        std::ostringstream buf;
        buf << is.rdbuf();
        return parse_text(buf.str());
    }

    static Config parse_text(const std::string& text) {
        Config c;
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                if (a == std::string::npos) return std::string();
                const auto b = s.find_last_not_of(" \t\r");
                return s.substr(a, b - a + 1);
            };
            const std::string t = trim(line);
            if (t.empty()) continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + t + "'");
            const std::string key = trim(t.substr(0, eq));
            const std::string val = trim(t.substr(eq + 1));
            if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (c.entries_.count(key))
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            c.entries_[key] = {val, lineno};
        }
        return c;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key, std::optional<std::string> dflt = {}) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            if (dflt) return *dflt;
            throw ConfigError("missing required key '" + key + "'");
        }
        consumed_.insert(key);
        return it->second.value;
    }

    double get_double(const std::string& key, std::optional<double> dflt = {}) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            if (dflt) return *dflt;
            throw ConfigError("missing required key '" + key + "'");
        }
        consumed_.insert(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' (line " + std::to_string(it->second.line) +
                              "): expected a number, got '" + it->second.value + "'");
        }
    }

    long get_long(const std::string& key, std::optional<long> dflt = {}) {
        const double v = dflt ? get_double(key, double(*dflt)) : get_double(key);
        if (v != std::floor(v))
            throw ConfigError("key '" + key + "': expected an integer, got " + fmt_num(v));
        return long(v);
    }

    // Every key must be consumed by the experiment; typos are hard errors.
    void finish() const {
        for (const auto& [key, ent] : entries_)
            if (!consumed_.count(key))
                throw ConfigError("unknown key '" + key + "' at line " + std::to_string(ent.line));
    }

private:
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries_;
    std::set<std::string> consumed_;
};

inline void config_require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("key '" + key + "': constraint violation, " + what);
}

}  // namespace pplab
