#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dtlab {

struct CheckEntry {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Named residuals with tolerances; overall = conjunction of entry passes.
struct VerificationReport {
    std::vector<CheckEntry> entries;

    void add(std::string name, double residual, double tolerance) {
        const bool pass = std::isfinite(residual) && residual <= tolerance;
        entries.push_back({std::move(name), residual, tolerance, pass});
    }

    // Boolean checks expressed as residuals: 0 holds, 1 fails.
    void add_flag(std::string name, bool ok) {
        entries.push_back({std::move(name), ok ? 0.0 : 1.0, 0.5, ok});
    }

    void merge(const VerificationReport& other) {
        entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    }

    bool overall() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }

    double worst_margin() const {
        double w = 0.0;
        for (const auto& e : entries)
            if (e.tolerance > 0.0) w = std::max(w, e.residual / e.tolerance);
        return w;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["entries"] = nlohmann::ordered_json::array();
        for (const auto& e : entries) {
            nlohmann::ordered_json je;
            je["name"] = e.name;
            je["residual"] = e.residual;
            je["tolerance"] = e.tolerance;
            je["pass"] = e.pass;
            j["entries"].push_back(std::move(je));
        }
        j["overall"] = overall();
        return j;
    }
};

} // namespace dtlab
