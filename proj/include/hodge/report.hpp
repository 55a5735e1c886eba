#pragma once

#include <string>
#include <vector>

namespace hodge {

// One named verification with its outcome and a short human-readable detail.
struct check_result {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Ordered list of checks; passes when every check passes.
struct report {
    std::vector<check_result> checks;

    void add(std::string name, bool pass, std::string detail = {}) {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }
    void append(const report &other, const std::string &prefix = {}) {
        for (const auto &c : other.checks) checks.push_back({prefix + c.name, c.pass, c.detail});
    }
    bool pass() const {
        for (const auto &c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
    const check_result *first_failure() const {
        for (const auto &c : checks) {
            if (!c.pass) return &c;
        }
        return nullptr;
    }
};

} // namespace hodge
