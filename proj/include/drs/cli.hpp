#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace drs::cli {

// Flat run configuration. Keys are dotted ("space.m_v", "grids.s_max");
// every key has a default and unknown keys are rejected.
class RunConfig {
public:
    RunConfig();

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<int> get_ints(const std::string& key) const;

    // Throws ValidationError for unknown keys.
    void set(const std::string& key, const std::string& value);
    // "key=value"
    void set_assignment(const std::string& assignment);
    // key = value lines, optional [section] headers prefixing the keys,
    // '#' comments.
    void load_text(const std::string& text);
    void load_file(const std::string& path);

    const std::map<std::string, std::string>& values() const { return values_; }

    // Sorted key=value lines, without output_dir.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
};

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& text);

// Hash of the command name and the canonical config, as 16 hex digits.
std::string config_hash(const std::string& command, const RunConfig& cfg);

// Radial test profiles by name: gauss, gauss-narrow, gauss-s2 (the
// calibration set) and gauss-wide, gauss-s4, gauss-mixed.
std::function<double(double)> named_profile(const std::string& name);
std::vector<std::string> profile_names();

// Entry point; returns the process exit status (0 pass, 1 fail or
// numerical error, 2 usage or config error).
int run(int argc, char** argv);

} // namespace drs::cli
