#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "tenrec/errors.hpp"

namespace tenrec::cli {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "dataset.format", "dataset.path", "dataset.scale", "dataset.features",
        "model.family", "model.rank", "model.rank3", "model.alpha", "model.beta",
        "model.gamma", "model.aggregator", "model.tol", "model.max_iters", "model.seed",
        "model.similarity_measure", "model.sim_sparsify_threshold", "model.binarize",
        "model.file",
        "eval.folds", "eval.holdout_size", "eval.mark_fraction", "eval.min_remainder",
        "eval.cutoffs", "eval.seed", "eval.positive_rating", "eval.models", "eval.roc_curves",
        "tune.ranks", "tune.rank3s", "tune.weights",
        "recommend.top_n", "recommend.history",
        "output.dir", "threads",
    };
    return keys;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::istringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        std::istringstream ps(part);
        T v;
        if (!(ps >> v)) throw tenrec::ConfigError("bad list element '" + part + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

void RunConfig::set_checked(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw tenrec::ConfigError("unknown config key '" + key + "'");
    values_[key] = value;
}

void RunConfig::apply_env() {
    for (const auto& key : known_keys()) {
        std::string env_name = "TENREC_";
        for (char c : key) env_name += c == '.' ? '_' : static_cast<char>(std::toupper(c));
        if (const char* v = std::getenv(env_name.c_str())) values_[key] = v;
    }
}

RunConfig RunConfig::load(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw tenrec::IoError("cannot open config " + path);
    RunConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw tenrec::ConfigError("config line " + std::to_string(lineno) +
                                      ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        cfg.set_checked(key, trim(line.substr(eq + 1)));
    }
    for (const auto& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos) throw tenrec::ConfigError("--set expects key=value: " + ov);
        cfg.set_checked(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    cfg.apply_env();
    return cfg;
}

RunConfig RunConfig::from_overrides(const std::vector<std::string>& overrides) {
    RunConfig cfg;
    for (const auto& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos) throw tenrec::ConfigError("--set expects key=value: " + ov);
        cfg.set_checked(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    cfg.apply_env();
    return cfg;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw tenrec::ConfigError("missing required config key '" + key + "'");
    return it->second;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (const std::exception&) {
        throw tenrec::ConfigError("key '" + key + "' is not an integer: " + it->second);
    }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw tenrec::ConfigError("key '" + key + "' is not a number: " + it->second);
    }
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw tenrec::ConfigError("key '" + key + "' is not an unsigned integer: " + it->second);
    }
}

std::vector<int> RunConfig::get_int_list(const std::string& key,
                                         const std::vector<int>& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_list<int>(it->second);
}

std::vector<double> RunConfig::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_list<double>(it->second);
}

}  // namespace tenrec::cli
