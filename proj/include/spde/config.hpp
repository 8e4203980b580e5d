#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spde/spectral_model.hpp"

namespace spde {

// Flat key=value text with '#' comments.  Getters record which keys were
// consumed so ensure_all_consumed can reject misspelled or inapplicable
// ones; every violation is a ConfigError naming the offending key.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_text(const std::string& text);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;  // {} when absent
    std::vector<int> get_int_list(const std::string& key) const;        // {} when absent

    void ensure_all_consumed() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    mutable std::set<std::string> consumed_;

    const std::string* find(const std::string& key) const;
};

// Everything a CLI subcommand needs; subcommands ignore the fields they
// do not use (simulate ignores runs and n_list, mc ignores field_times).
struct RunConfig {
    std::string preset;
    SpectralModel model;
    int n_steps = 2048;
    std::uint64_t seed = 0;
    int runs = 100;
    std::vector<int> n_list;
    bool est_pathwise = true;
    bool est_theoretical = true;
    std::string out_dir = "out";
    int threads = 0;
    int oversample = 0;           // 0 = per-mode automatic refinement
    int burn_in = 8;
    std::vector<int> field_times;
    int field_points = 101;
};

RunConfig load_run_config(const std::string& path);

}  // namespace spde
