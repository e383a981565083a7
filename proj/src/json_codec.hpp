// Internal JSON helpers shared by the model serialiser and the CLI config
// reader.  Complex scalars are encoded as [re, im]; each part may be a
// number or a frequency string understood by parse_frequency.

#pragma once

#include <string>

#include <json.hpp>

#include "gio/system_model.hpp"
#include "gio/types.hpp"
#include "gio/units.hpp"

namespace gio::codec {

using nlohmann::json;

inline double real_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_frequency(j.get<std::string>());
    throw ConfigError(where + ": expected a number or frequency string");
}

inline Complex complex_from_json(const json& j, const std::string& where) {
    if (j.is_number() || j.is_string()) return Complex(real_from_json(j, where), 0.0);
    if (j.is_array() && j.size() == 2)
        return Complex(real_from_json(j[0], where), real_from_json(j[1], where));
    throw ConfigError(where + ": expected [re, im], a number, or a frequency string");
}

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline CMat cmat_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty matrix (array of rows)");
    const auto rows = j.size();
    const auto cols = j[0].is_array() && !j[0].empty() && (j[0][0].is_array() || j[0][0].is_number() || j[0][0].is_string())
                          ? j[0].size()
                          : 0;
    if (cols == 0) throw ConfigError(where + ": rows must be arrays of entries");
    CMat m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ConfigError(where + ": ragged matrix rows");
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[r][c], where);
    }
    return m;
}

inline json cmat_to_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CVec cvec_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array");
    CVec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
    return v;
}

inline json cvec_to_json(const CVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
    return a;
}

inline RVec rvec_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array");
    RVec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = real_from_json(j[i], where);
    return v;
}

inline json rvec_to_json(const RVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json system_to_json(const SystemSpec& spec);
SystemSpec system_from_json(const json& j);

}  // namespace gio::codec
