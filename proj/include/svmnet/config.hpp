#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svmnet/csv.hpp"
#include "svmnet/errors.hpp"

namespace svmnet {

// Flat INI-style config: [section] headers, key = value lines, '#' or ';'
// comments. Key order within a section is preserved (it defines RNG draw
// order for synthesis specs).
class Config {
public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
    };

    static Config parse(std::string_view text) {
        Config cfg;
        std::string section;
        int lineno = 0;
        for (const auto& raw : csv::split_lines(text)) {
            ++lineno;
            std::string line = trim(raw);
            if (line.empty() || line[0] == '#' || line[0] == ';') continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            Entry e;
            e.section = section;
            e.key = trim(line.substr(0, eq));
            e.value = trim(line.substr(eq + 1));
            if (e.key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            cfg.entries_.push_back(std::move(e));
        }
        return cfg;
    }

    static Config load(const std::string& path) { return parse(csv::read_file(path)); }

    std::optional<std::string> find(const std::string& section, const std::string& key) const {
        for (const auto& e : entries_)
            if (e.section == section && e.key == key) return e.value;
        return std::nullopt;
    }

    std::string get(const std::string& section, const std::string& key) const {
        auto v = find(section, key);
        if (!v) throw ConfigError("missing key [" + section + "] " + key);
        return *v;
    }

    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        auto v = find(section, key);
        return v ? *v : fallback;
    }

    double get_double(const std::string& section, const std::string& key) const {
        return to_double(get(section, key), section, key);
    }

    double get_double_or(const std::string& section, const std::string& key, double fallback) const {
        auto v = find(section, key);
        return v ? to_double(*v, section, key) : fallback;
    }

    long get_int(const std::string& section, const std::string& key) const {
        return to_int(get(section, key), section, key);
    }

    long get_int_or(const std::string& section, const std::string& key, long fallback) const {
        auto v = find(section, key);
        return v ? to_int(*v, section, key) : fallback;
    }

    // All entries of a section, in file order.
    std::vector<Entry> section_entries(const std::string& section) const {
        std::vector<Entry> out;
        for (const auto& e : entries_)
            if (e.section == section) out.push_back(e);
        return out;
    }

    bool has_section(const std::string& section) const {
        for (const auto& e : entries_)
            if (e.section == section) return true;
        return false;
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        for (auto& e : entries_) {
            if (e.section == section && e.key == key) {
                e.value = value;
                return;
            }
        }
        entries_.push_back({section, key, value});
    }

    // Serialized form with sections grouped in first-appearance order.
    std::string to_string() const {
        std::vector<std::string> order;
        for (const auto& e : entries_) {
            bool seen = false;
            for (const auto& s : order) seen = seen || s == e.section;
            if (!seen) order.push_back(e.section);
        }
        std::string out;
        for (const auto& s : order) {
            if (!s.empty()) out += "[" + s + "]\n";
            for (const auto& e : entries_)
                if (e.section == s) out += e.key + " = " + e.value + "\n";
            out += "\n";
        }
        return out;
    }

    static std::string trim(std::string_view s) {
        size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return std::string(s.substr(b, e - b));
    }

    // Comma-separated list helper for grid values.
    static std::vector<std::string> split_list(std::string_view s) {
        std::vector<std::string> out;
        for (const auto& tok : csv::split_line(s)) {
            std::string t = trim(tok);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

private:
    static double to_double(const std::string& v, const std::string& sec, const std::string& key) {
        double x;
        if (!csv::parse_double(v, x))
            throw ConfigError("[" + sec + "] " + key + ": not a number: " + v);
        return x;
    }

    static long to_int(const std::string& v, const std::string& sec, const std::string& key) {
        try {
            size_t pos = 0;
            long x = std::stol(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ConfigError("[" + sec + "] " + key + ": not an integer: " + v);
        }
    }

    std::vector<Entry> entries_;
};

}  // namespace svmnet
