#pragma once

#include "curv/immersion.hpp"
#include "curv/kahler.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace curv {

/// Verdict a fixture is documented to produce on its default parameters.
/// provenance: "construction" (true by how the fixture is built), "theorem"
/// (consequence of a proved statement), or "measured" (established
/// numerically when the fixture was authored).
struct ExpectedVerdict {
    std::string check;
    bool pass = false;
    std::string provenance;
};

struct CatalogEntry {
    std::string name;
    std::string kind; // "ambient" or "immersion"
    std::string summary;
    std::string doc; // the statement the fixture exercises
    nlohmann::json defaults;
    std::vector<ExpectedVerdict> expected;
};

/// A ready chart, optionally with an immersion into it.
struct Instantiated {
    std::shared_ptr<const Ambient> ambient;
    std::optional<ImmersionChart> immersion;

    /// Box to draw sample points from: the immersion's parameter box when an
    /// immersion is present, otherwise the ambient chart's box.
    std::optional<DomainBox> points_box() const;
    int points_dim() const;
};

/// Built-in fixtures in deterministic order.
const std::vector<CatalogEntry>& list_catalog();

/// Entry lookup; throws std::invalid_argument listing valid names on a miss.
const CatalogEntry& catalog_entry(const std::string& name);

/// Builds a fixture. `params` overrides the entry defaults; unknown keys and
/// out-of-range values are errors.
Instantiated instantiate(const std::string& name, const nlohmann::json& params = {});

/// Convenience: a box [lo, hi]^dim.
DomainBox uniform_box(int dim, double lo, double hi);

} // namespace curv
