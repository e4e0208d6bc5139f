#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tenrec::cli {

// Flat `section.key = value` configuration. Files use INI-style sections;
// overrides come from `--set section.key=value` flags and `TENREC_SECTION_KEY`
// environment variables (highest precedence). Unknown keys are rejected.
class RunConfig {
public:
    static RunConfig load(const std::string& path, const std::vector<std::string>& overrides);
    static RunConfig from_overrides(const std::vector<std::string>& overrides);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

private:
    void set_checked(const std::string& key, const std::string& value);
    void apply_env();

    std::map<std::string, std::string> values_;
};

}  // namespace tenrec::cli
