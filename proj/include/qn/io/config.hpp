#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qn/core/errors.hpp"

namespace qn {

// Sectioned key-value configuration (grammar in docs/config.md). Every key
// must be consumed by the reader; unknown keys are hard errors, so typos
// never pass silently. Environment variables QNSIM_<SECTION>_<KEY> override
// file values.
class Config {
public:
    static Config parse(const std::string& text) {
        Config cfg;
        std::istringstream is(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::string t = trim(strip_comment(line));
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw config_error("config line " + std::to_string(lineno) +
                                       ": malformed section header");
                section = trim(t.substr(1, t.size() - 2));
                if (section.empty())
                    throw config_error("config line " + std::to_string(lineno) +
                                       ": empty section name");
                cfg.sections_[section]; // declare
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw config_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
            if (section.empty())
                throw config_error("config line " + std::to_string(lineno) +
                                   ": entry outside any [section]");
            const std::string key = trim(t.substr(0, eq));
            const std::string value = trim(t.substr(eq + 1));
            if (key.empty()) throw config_error("config line " + std::to_string(lineno) +
                                                ": empty key");
            if (cfg.sections_[section].count(key))
                throw config_error("config: duplicate key '" + section + "." + key + "'");
            cfg.sections_[section][key] = value;
        }
        cfg.apply_env_overrides();
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw config_error("cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        Config cfg = parse(ss.str());
        cfg.source_text_ = ss.str();
        return cfg;
    }

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
    bool has(const std::string& s, const std::string& k) const {
        const auto it = sections_.find(s);
        return it != sections_.end() && it->second.count(k) > 0;
    }

    std::string get_string(const std::string& s, const std::string& k) {
        const auto it = sections_.find(s);
        if (it == sections_.end() || !it->second.count(k))
            throw config_error("config: missing required key '" + s + "." + k + "'");
        consumed_.insert(s + "." + k);
        return it->second.at(k);
    }

    std::string get_string(const std::string& s, const std::string& k,
                           const std::string& fallback) {
        if (!has(s, k)) return fallback;
        return get_string(s, k);
    }

    double get_number(const std::string& s, const std::string& k) {
        return to_number(s, k, get_string(s, k));
    }
    double get_number(const std::string& s, const std::string& k, double fallback) {
        if (!has(s, k)) return fallback;
        return get_number(s, k);
    }

    long long get_integer(const std::string& s, const std::string& k, long long fallback) {
        if (!has(s, k)) return fallback;
        const double v = get_number(s, k);
        const long long i = (long long)(v);
        if (double(i) != v)
            throw config_error("config: key '" + s + "." + k + "' must be an integer");
        return i;
    }

    std::vector<double> get_list(const std::string& s, const std::string& k) {
        const std::string raw = get_string(s, k);
        std::vector<double> out;
        std::istringstream is(raw);
        std::string cell;
        while (std::getline(is, cell, ',')) out.push_back(to_number(s, k, trim(cell)));
        if (out.empty()) throw config_error("config: empty list for '" + s + "." + k + "'");
        return out;
    }

    // after all readers ran: any unconsumed key is an unknown-key error
    void finish() const {
        for (const auto& [sec, kv] : sections_)
            for (const auto& [key, val] : kv)
                if (!consumed_.count(sec + "." + key))
                    throw config_error("config: unknown key '" + sec + "." + key + "'");
    }

    // subcommand variant: strict only on the sections the command reads,
    // but every section name must still be a known one
    void finish(const std::set<std::string>& sections_read) const {
        static const std::set<std::string> known = {"potential", "simulation",
                                                    "reference", "diagnostics"};
        for (const auto& [sec, kv] : sections_) {
            if (!known.count(sec))
                throw config_error("config: unknown section '[" + sec + "]'");
            if (!sections_read.count(sec)) continue;
            for (const auto& [key, val] : kv)
                if (!consumed_.count(sec + "." + key))
                    throw config_error("config: unknown key '" + sec + "." + key + "'");
        }
    }

    const std::string& source_text() const { return source_text_; }

    std::string resolved_text() const {
        std::ostringstream os;
        for (const auto& [sec, kv] : sections_) {
            os << "[" << sec << "]\n";
            for (const auto& [key, val] : kv) os << key << " = " << val << "\n";
        }
        return os.str();
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::set<std::string> consumed_;
    std::string source_text_;

    static std::string strip_comment(const std::string& s) {
        const auto h = s.find('#');
        return h == std::string::npos ? s : s.substr(0, h);
    }
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }
    double to_number(const std::string& s, const std::string& k, const std::string& v) {
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw config_error("config: key '" + s + "." + k + "' is not a number: '" +
                               v + "'");
        }
    }

    void apply_env_overrides() {
        for (auto& [sec, kv] : sections_) {
            for (auto& [key, val] : kv) {
                std::string env = "QNSIM_" + upper(sec) + "_" + upper(key);
                if (const char* o = std::getenv(env.c_str())) val = o;
            }
        }
    }
    static std::string upper(std::string s) {
        for (char& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }
};

} // namespace qn
