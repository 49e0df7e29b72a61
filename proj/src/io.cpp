#include "dynid/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dynid {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "t";
    for (int i = 1; i <= traj.dim(); ++i) out << ",x" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << format_double(traj.times[k]);
        for (int i = 0; i < traj.dim(); ++i) out << "," << format_double(traj.states[k][i]);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

Trajectory load_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty trajectory file: " + path);
    // Header "t,x1,...,xd" determines the dimension.
    int d = -1;
    {
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
        if (cols.empty() || cols[0] != "t") {
            throw IoError("trajectory CSV must start with header t,x1,...: " + path);
        }
        d = static_cast<int>(cols.size()) - 1;
        if (d < 1) throw IoError("trajectory CSV has no state columns: " + path);
    }
    Trajectory traj;
    traj.field_id = path;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (static_cast<int>(vals.size()) != d + 1) {
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(d + 1) + " columns");
        }
        traj.times.push_back(vals[0]);
        Vec s(d);
        for (int i = 0; i < d; ++i) s[i] = vals[i + 1];
        traj.states.push_back(std::move(s));
    }
    if (traj.states.size() < 2) throw IoError("trajectory CSV has fewer than 2 samples: " + path);
    traj.x0 = traj.states.front();
    traj.validate();
    return traj;
}

json field_to_json(const VectorField& F) {
    const auto& pf = F.poly();
    json j;
    j["dim"] = pf.dim();
    j["max_degree"] = pf.basis->max_degree();
    json rows = json::array();
    for (int i = 0; i < pf.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < pf.basis->size(); ++k) row.push_back(pf.coeffs(i, k));
        rows.push_back(std::move(row));
    }
    j["coeffs"] = std::move(rows);
    return j;
}

VectorField field_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const int deg = j.at("max_degree").get<int>();
    auto basis = MonomialBasis::get(dim, deg);
    const auto& rows = j.at("coeffs");
    if (static_cast<int>(rows.size()) != dim) {
        throw IoError("field json: coeffs must have d rows");
    }
    Mat coeffs(dim, basis->size());
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(rows[i].size()) != basis->size()) {
            throw IoError("field json: row " + std::to_string(i) + " must have " +
                          std::to_string(basis->size()) + " graded-lex coefficients");
        }
        for (int k = 0; k < basis->size(); ++k) coeffs(i, k) = rows[i][k].get<double>();
    }
    return VectorField::polynomial(basis, coeffs, "file");
}

void save_field_json(const VectorField& F, const std::string& path) {
    save_json_file(field_to_json(F), path);
}

VectorField load_field_json(const std::string& path) { return field_from_json(load_json_file(path)); }

json rescale_to_json(const AffineRescale& r) {
    json j;
    j["scale"] = std::vector<double>(r.scale.data(), r.scale.data() + r.scale.size());
    j["offset"] = std::vector<double>(r.offset.data(), r.offset.data() + r.offset.size());
    return j;
}

AffineRescale rescale_from_json(const json& j) {
    AffineRescale r;
    const auto s = j.at("scale").get<std::vector<double>>();
    const auto o = j.at("offset").get<std::vector<double>>();
    r.scale = Eigen::Map<const Vec>(s.data(), s.size());
    r.offset = Eigen::Map<const Vec>(o.data(), o.size());
    return r;
}

namespace {

json exponents_json(const MonomialBasis& basis) {
    json e = json::array();
    for (int k = 0; k < basis.size(); ++k) e.push_back(basis.exponent(k));
    return e;
}

}  // namespace

json vanishing_certificate_to_json(const VanishingCertificate& c) {
    json j;
    j["type"] = "vanishing";
    j["dim"] = c.basis->dim();
    j["degree"] = c.degree;
    j["exponents"] = exponents_json(*c.basis);
    j["coeffs"] = std::vector<double>(c.coeffs.data(), c.coeffs.data() + c.coeffs.size());
    j["residual"] = c.residual;
    j["singular_value"] = c.singular_value;
    j["singular_ratio"] = c.singular_ratio;
    j["rescale"] = rescale_to_json(c.rescale);
    return j;
}

json first_integral_certificate_to_json(const FirstIntegralCertificate& c) {
    json j;
    j["type"] = "first-integral";
    j["dim"] = c.basis->dim();
    j["degree"] = c.degree;
    j["exponents"] = exponents_json(*c.basis);
    j["coeffs"] = std::vector<double>(c.coeffs.data(), c.coeffs.data() + c.coeffs.size());
    j["residual"] = c.residual;
    j["cv_drift"] = c.cv_drift;
    j["cv_drift_relative"] = c.cv_drift_relative;
    j["g_range"] = c.g_range;
    j["rescale"] = rescale_to_json(c.rescale);
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("bad json in " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const json& j, const std::string& path) {
    write_text_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// TOML subset parser.
// ---------------------------------------------------------------------------

double TomlValue::number() const {
    if (!std::holds_alternative<double>(v)) throw ValidationError("toml: expected a number");
    return std::get<double>(v);
}
const std::string& TomlValue::str() const {
    if (!std::holds_alternative<std::string>(v)) throw ValidationError("toml: expected a string");
    return std::get<std::string>(v);
}
bool TomlValue::boolean() const {
    if (!std::holds_alternative<bool>(v)) throw ValidationError("toml: expected a boolean");
    return std::get<bool>(v);
}
const std::vector<double>& TomlValue::numbers() const {
    if (!std::holds_alternative<std::vector<double>>(v)) {
        throw ValidationError("toml: expected an array of numbers");
    }
    return std::get<std::vector<double>>(v);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

TomlValue parse_scalar(const std::string& raw, int lineno) {
    const std::string t = trim(raw);
    if (t.empty()) throw IoError("toml line " + std::to_string(lineno) + ": empty value");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') {
            throw IoError("toml line " + std::to_string(lineno) + ": unterminated string");
        }
        return TomlValue{t.substr(1, t.size() - 2)};
    }
    if (t == "true") return TomlValue{true};
    if (t == "false") return TomlValue{false};
    try {
        std::size_t used = 0;
        const double d = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return TomlValue{d};
    } catch (const std::exception&) {
        throw IoError("toml line " + std::to_string(lineno) + ": cannot parse value '" + t + "'");
    }
}

}  // namespace

std::map<std::string, TomlValue> parse_toml(const std::string& text) {
    std::map<std::string, TomlValue> out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw IoError("toml line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw IoError("toml line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']') throw IoError("toml line " + std::to_string(lineno) + ": bad array");
            const std::string body = val.substr(1, val.size() - 2);
            std::vector<double> nums;
            std::vector<std::string> strs;
            bool any_str = false;
            std::string item;
            std::stringstream ss(body);
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                TomlValue sv = parse_scalar(item, lineno);
                if (std::holds_alternative<std::string>(sv.v)) {
                    any_str = true;
                    strs.push_back(std::get<std::string>(sv.v));
                } else if (std::holds_alternative<double>(sv.v)) {
                    nums.push_back(std::get<double>(sv.v));
                } else {
                    throw IoError("toml line " + std::to_string(lineno) + ": bad array element");
                }
            }
            if (any_str && !nums.empty()) {
                throw IoError("toml line " + std::to_string(lineno) + ": mixed array types");
            }
            if (any_str) {
                out[full] = TomlValue{strs};
            } else {
                out[full] = TomlValue{nums};
            }
        } else {
            out[full] = parse_scalar(val, lineno);
        }
    }
    return out;
}

std::map<std::string, TomlValue> load_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_toml(ss.str());
}

}  // namespace dynid
