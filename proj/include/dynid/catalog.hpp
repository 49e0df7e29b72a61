#ifndef DYNID_CATALOG_HPP
#define DYNID_CATALOG_HPP

#include "dynid/conservation_law.hpp"
#include "dynid/vector_field.hpp"

#include <optional>

namespace dynid {
namespace catalog {

/// Built-in system with authoritative closed forms and ground-truth tags
/// consumed by the test suites.
struct Entry {
    std::string id;
    int dim = 0;
    std::string description;
    std::map<std::string, double> default_params;
    std::vector<std::string> tags;
    Vec default_x0;
    /// Reference box for probe sampling and coverage analyses.
    Vec domain_lower, domain_upper;
    /// Literature value of the attractor dimension, when one is tagged.
    std::optional<double> expected_dimension;
};

/// Instantiate a catalog field; unknown ids throw ValidationError listing
/// the catalog. Params not mentioned fall back to entry defaults.
VectorField get(const std::string& id, const std::map<std::string, double>& params = {});

/// Polynomial form of a catalog field, for entries that have one.
VectorField get_polynomial(const std::string& id, const std::map<std::string, double>& params = {});
bool has_polynomial(const std::string& id);

/// Known polynomial first integral of a catalog field (e.g. the energy of
/// the harmonic oscillator), when one exists.
std::optional<Poly> known_first_integral(const std::string& id,
                                         const std::map<std::string, double>& params = {});

/// Built-in conservation laws: "sho-full", "sho-radial", "nilpotent".
ConservationLaw get_law(const std::string& id);

const std::vector<Entry>& entries();
const Entry& entry(const std::string& id);
std::vector<std::string> law_ids();

}  // namespace catalog
}  // namespace dynid

#endif  // DYNID_CATALOG_HPP
