#ifndef DYNID_IO_HPP
#define DYNID_IO_HPP

#include "dynid/core.hpp"
#include "dynid/ideal.hpp"
#include "dynid/vector_field.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <variant>

namespace dynid {

using json = nlohmann::ordered_json;

// Trajectory files: CSV with header "t,x1,...,xd".
void save_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory_csv(const std::string& path);

// Polynomial field files: {dim, max_degree, coeffs: [[...], ...]} with
// graded-lex column order.
json field_to_json(const VectorField& F);
VectorField field_from_json(const json& j);
void save_field_json(const VectorField& F, const std::string& path);
VectorField load_field_json(const std::string& path);

json rescale_to_json(const AffineRescale& r);
AffineRescale rescale_from_json(const json& j);

json vanishing_certificate_to_json(const VanishingCertificate& c);
json first_integral_certificate_to_json(const FirstIntegralCertificate& c);

void write_text_file(const std::string& path, const std::string& content);
json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

// ---------------------------------------------------------------------------
// Minimal TOML subset: [section] headers, key = value with strings, numbers,
// booleans and flat arrays. Enough to mirror the config types; nested tables
// beyond one level are not supported.
// ---------------------------------------------------------------------------

struct TomlValue {
    std::variant<std::string, double, bool, std::vector<double>, std::vector<std::string>> v;

    bool is_number() const { return std::holds_alternative<double>(v); }
    double number() const;
    const std::string& str() const;
    bool boolean() const;
    const std::vector<double>& numbers() const;
};

/// Parsed as "section.key" -> value; keys before any section have no prefix.
std::map<std::string, TomlValue> parse_toml(const std::string& text);
std::map<std::string, TomlValue> load_toml_file(const std::string& path);

}  // namespace dynid

#endif  // DYNID_IO_HPP
