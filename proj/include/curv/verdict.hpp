#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curv {

/// Outcome of a single pointwise check. `tol` is the effective threshold the
/// defect was compared against (including any scale normalization), so
/// pass == (defect <= tol) unless a composite rule is recorded in details.
struct CheckVerdict {
    std::string check;
    double defect = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::optional<std::string> skipped; // reason, when not applicable
    std::vector<std::pair<std::string, double>> details;

    double detail(const std::string& key, double fallback = 0.0) const {
        for (const auto& [k, v] : details) {
            if (k == key) return v;
        }
        return fallback;
    }
};

/// Tolerance pair used across the engines: `exact` guards quantities computed
/// entirely from jets, `fd` guards anything that goes through a finite
/// difference (normal derivatives of alpha and H).
struct Tolerances {
    double exact = 1e-8;
    double fd = 1e-4;
};

} // namespace curv
