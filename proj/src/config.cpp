#include "spde/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "spde/errors.hpp"

namespace spde {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& key, const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(key, "empty item in comma-separated list");
        items.push_back(item);
    }
    if (items.empty()) throw ConfigError(key, "empty list");
    return items;
}

double parse_double(const std::string& key, const std::string& token) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || token.empty())
        throw ConfigError(key, "expected a number, got '" + token + "'");
    if (errno == ERANGE || !std::isfinite(v))
        throw ConfigError(key, "number out of range: '" + token + "'");
    return v;
}

long long parse_integer(const std::string& key, const std::string& token) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || token.empty())
        throw ConfigError(key, "expected an integer, got '" + token + "'");
    if (errno == ERANGE) throw ConfigError(key, "integer out of range: '" + token + "'");
    return v;
}

int to_int(const std::string& key, long long v) {
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(key, "integer out of range");
    return int(v);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
    KeyValueConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config",
                              "line " + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config", "line " + std::to_string(line_no) + ": empty key");
        if (cfg.find(key)) throw ConfigError(key, "duplicate key");
        cfg.entries_.emplace_back(key, value);
    }
    return cfg;
}

const std::string* KeyValueConfig::find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

bool KeyValueConfig::has(const std::string& key) const { return find(key) != nullptr; }

std::string KeyValueConfig::get_string(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw ConfigError(key, "missing required key");
    consumed_.insert(key);
    return *v;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    return find(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return find(key) ? get_double(key) : fallback;
}

int KeyValueConfig::get_int(const std::string& key) const {
    return to_int(key, parse_integer(key, get_string(key)));
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    return find(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValueConfig::get_uint64(const std::string& key, std::uint64_t fallback) const {
    if (!find(key)) return fallback;
    std::string token = get_string(key);
    if (!token.empty() && token[0] == '-')
        throw ConfigError(key, "expected a non-negative integer, got '" + token + "'");
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || token.empty())
        throw ConfigError(key, "expected an integer, got '" + token + "'");
    if (errno == ERANGE) throw ConfigError(key, "integer out of range: '" + token + "'");
    return v;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
    if (!find(key)) return {};
    std::vector<double> out;
    for (const std::string& item : split_list(key, get_string(key)))
        out.push_back(parse_double(key, item));
    return out;
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key) const {
    if (!find(key)) return {};
    std::vector<int> out;
    for (const std::string& item : split_list(key, get_string(key)))
        out.push_back(to_int(key, parse_integer(key, item)));
    return out;
}

void KeyValueConfig::ensure_all_consumed() const {
    for (const auto& [k, v] : entries_)
        if (!consumed_.count(k)) throw ConfigError(k, "unknown or inapplicable key");
}

RunConfig load_run_config(const std::string& path) {
    KeyValueConfig kv = KeyValueConfig::parse_file(path);
    RunConfig cfg;

    cfg.preset = kv.get_string("preset");
    double hurst = kv.get_double("hurst");
    double horizon = kv.get_double("horizon", 1.0);

    if (cfg.preset == "heat1d") {
        int n_modes = kv.get_int("n_modes");
        double lambda1 = kv.get_double("lambda1");
        double lambda2 = kv.get_double("lambda2", 0.0);
        std::vector<double> initial = kv.get_double_list("initial");
        try {
            cfg.model = heat1d(n_modes, lambda1, lambda2, hurst, horizon, initial);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
    } else if (cfg.preset == "heat2d") {
        int per_axis = kv.get_int("modes_per_axis");
        double lambda1 = kv.get_double("lambda1");
        double lambda2 = kv.get_double("lambda2", 0.0);
        try {
            cfg.model = heat2d(per_axis, lambda1, lambda2, hurst, horizon);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
    } else if (cfg.preset == "raw") {
        std::vector<double> alpha = kv.get_double_list("alpha");
        std::vector<double> beta = kv.get_double_list("beta");
        if (alpha.empty()) throw ConfigError("alpha", "missing required key");
        if (beta.empty()) throw ConfigError("beta", "missing required key");
        std::optional<double> lambda_true;
        if (kv.has("lambda1")) lambda_true = kv.get_double("lambda1");
        std::vector<double> initial = kv.get_double_list("initial");
        try {
            cfg.model = raw_model(std::move(alpha), std::move(beta), hurst, horizon,
                                  lambda_true, std::move(initial));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
        bool any_growth = kv.has("growth_m1") || kv.has("growth_m2") || kv.has("growth_d");
        if (any_growth) {
            GrowthSpec g;
            g.m1 = kv.get_int("growth_m1");
            g.m2 = kv.get_int("growth_m2");
            g.d = kv.get_int("growth_d");
            if (g.m1 < 0 || g.m2 < 0) throw ConfigError("growth_m1", "m1, m2 must be >= 0");
            if (g.d < 1) throw ConfigError("growth_d", "d must be >= 1");
            cfg.model.growth = g;
        }
    } else {
        throw ConfigError("preset", "unknown preset '" + cfg.preset + "'");
    }

    cfg.n_steps = kv.get_int("n_steps", cfg.n_steps);
    if (cfg.n_steps < 1) throw ConfigError("n_steps", "must be >= 1");
    cfg.seed = kv.get_uint64("seed", cfg.seed);
    cfg.runs = kv.get_int("runs", cfg.runs);
    cfg.n_list = kv.get_int_list("n_list");
    cfg.out_dir = kv.get_string("out_dir", cfg.out_dir);
    cfg.threads = kv.get_int("threads", cfg.threads);
    cfg.oversample = kv.get_int("oversample", cfg.oversample);
    if (cfg.oversample < 0) throw ConfigError("oversample", "must be >= 0");
    cfg.burn_in = kv.get_int("burn_in", cfg.burn_in);
    cfg.field_times = kv.get_int_list("field_times");
    cfg.field_points = kv.get_int("field_points", cfg.field_points);

    if (kv.has("estimators")) {
        cfg.est_pathwise = cfg.est_theoretical = false;
        for (const std::string& name : split_list("estimators", kv.get_string("estimators"))) {
            if (name == "pathwise" && !cfg.est_pathwise)
                cfg.est_pathwise = true;
            else if (name == "theoretical" && !cfg.est_theoretical)
                cfg.est_theoretical = true;
            else
                throw ConfigError("estimators", "unknown or repeated estimator '" + name + "'");
        }
    }

    kv.ensure_all_consumed();
    return cfg;
}

}  // namespace spde
