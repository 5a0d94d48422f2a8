#pragma once

#include <chrono>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qn/core/errors.hpp"

namespace qn {

inline constexpr const char* kVersion = "0.1.0";

// Run manifest: resolved configuration echo, seed, output paths and
// wall-clock timings. Written before the long computation starts and
// finalized (with timings) at the end.
class RunManifest {
public:
    RunManifest(std::string out_dir, std::string command, std::uint64_t seed,
                std::string config_echo)
        : path_(out_dir + "/manifest.json"), start_(clock_t::now()) {
        j_["version"] = kVersion;
        j_["command"] = std::move(command);
        j_["seed"] = seed;
        j_["config"] = std::move(config_echo);
        j_["outputs"] = nlohmann::json::array();
        j_["status"] = "running";
        write();
    }

    void add_output(const std::string& p) {
        j_["outputs"].push_back(p);
        write();
    }

    void add_child(const std::string& manifest_path) {
        if (!j_.contains("children")) j_["children"] = nlohmann::json::array();
        j_["children"].push_back(manifest_path);
        write();
    }

    void set(const std::string& key, const nlohmann::json& value) {
        j_[key] = value;
        write();
    }

    void finalize(bool ok) {
        j_["status"] = ok ? "done" : "failed";
        j_["wall_seconds"] =
            std::chrono::duration<double>(clock_t::now() - start_).count();
        write();
    }

    const std::string& path() const { return path_; }

private:
    using clock_t = std::chrono::steady_clock;
    std::string path_;
    clock_t::time_point start_;
    nlohmann::json j_;

    void write() const {
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw config_error("cannot write manifest '" + path_ + "'");
        f << j_.dump(2) << "\n";
    }
};

} // namespace qn
