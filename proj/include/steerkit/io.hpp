#pragma once

// JSON state documents and report serialisation.
//
// A state document is an object with exactly one of
//   "matrix": 4x4 array of [re, im] pairs, row-major
//   "fano":   {"a": [3], "b": [3], "T": [[3] x 3]}
//   "named":  {"werner": w} | {"bell": "phi+"|"phi-"|"psi+"|"psi-"}
//             | {"canonical": {"a": [3], "b": [3], "c": [3]}}

#include <string>

#include "json.hpp"

#include "steerkit/inequalities.hpp"
#include "steerkit/measures.hpp"
#include "steerkit/optimizer.hpp"
#include "steerkit/sampling.hpp"
#include "steerkit/state.hpp"

namespace steerkit {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad_document(const std::string& why) {
  throw Error(ErrorKind::InvalidInput, "state document: " + why);
}

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) bad_document(where + " must be a number");
  return j.get<double>();
}

inline Vector3 vector3_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) bad_document(where + " must be an array of 3 numbers");
  return {number_at(j[0], where), number_at(j[1], where), number_at(j[2], where)};
}

inline Matrix3 matrix3_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) bad_document(where + " must be a 3x3 array");
  Matrix3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = vector3_from(j[static_cast<std::size_t>(r)], where).transpose();
  return m;
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad_document(where + " needs key \"" + key + "\"");
  return obj.at(key);
}

inline json vector_json(const Vector3& v) { return json::array({v(0), v(1), v(2)}); }

inline json matrix_json(const Matrix3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

}  // namespace detail

inline FanoForm fano_from_json(const json& j) {
  FanoForm f;
  f.a = detail::vector3_from(detail::field(j, "a", "fano"), "fano.a");
  f.b = detail::vector3_from(detail::field(j, "b", "fano"), "fano.b");
  f.T = detail::matrix3_from(detail::field(j, "T", "fano"), "fano.T");
  return f;
}

inline json to_json(const FanoForm& f) {
  return {{"a", detail::vector_json(f.a)}, {"b", detail::vector_json(f.b)}, {"T", detail::matrix_json(f.T)}};
}

inline Matrix4c matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) detail::bad_document("matrix must have 4 rows");
  Matrix4c m;
  for (int r = 0; r < 4; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 4) detail::bad_document("matrix rows must have 4 entries");
    for (int c = 0; c < 4; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2) detail::bad_document("matrix entries must be [re, im] pairs");
      m(r, c) = Complex(detail::number_at(entry[0], "matrix entry"), detail::number_at(entry[1], "matrix entry"));
    }
  }
  return m;
}

/// Parses and validates a state document.
inline DensityMatrix state_from_json(const json& doc) {
  if (!doc.is_object()) detail::bad_document("expected a JSON object");
  int keys = 0;
  for (const char* k : {"matrix", "fano", "named"}) keys += doc.contains(k) ? 1 : 0;
  if (keys != 1 || doc.size() != 1)
    detail::bad_document("expected exactly one of \"matrix\", \"fano\", \"named\"");
  if (doc.contains("matrix")) return validate_density(matrix_from_json(doc.at("matrix")));
  if (doc.contains("fano")) return fano_compose(fano_from_json(doc.at("fano")));

  const json& named = doc.at("named");
  if (!named.is_object() || named.size() != 1)
    detail::bad_document("\"named\" must hold exactly one of werner, bell, canonical");
  if (named.contains("werner")) return werner_state(detail::number_at(named.at("werner"), "named.werner"));
  if (named.contains("bell")) {
    if (!named.at("bell").is_string()) detail::bad_document("named.bell must be a string");
    return bell_state(parse_bell_state(named.at("bell").get<std::string>()));
  }
  if (named.contains("canonical")) {
    const json& c = named.at("canonical");
    return canonical_state(detail::vector3_from(detail::field(c, "a", "canonical"), "canonical.a"),
                           detail::vector3_from(detail::field(c, "b", "canonical"), "canonical.b"),
                           detail::vector3_from(detail::field(c, "c", "canonical"), "canonical.c"));
  }
  detail::bad_document("unknown named state");
}

inline json state_to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(json::array({rho(r, c).real(), rho(r, c).imag()}));
    rows.push_back(row);
  }
  return {{"matrix", rows}};
}

inline json to_json(const SteeringSetting& s) {
  json u = json::array(), v = json::array();
  for (const Vector3& d : s.alice()) u.push_back(detail::vector_json(d));
  for (const Vector3& d : s.bob()) v.push_back(detail::vector_json(d));
  return {{"u", u}, {"v", v}};
}

inline json to_json(const BellSetting& s) {
  json u = json::array(), v = json::array();
  for (const Vector3& d : s.alice()) u.push_back(detail::vector_json(d));
  for (const Vector3& d : s.bob()) v.push_back(detail::vector_json(d));
  return {{"u", u}, {"v", v}};
}

inline json to_json(const Setting& s) {
  return std::visit([](const auto& x) { return to_json(x); }, s);
}

namespace detail {

/// Reads {"u": [...], "v": [...]} into two direction arrays; returns the count.
inline int direction_lists_from(const json& j, std::array<Vector3, 3>& u_out, std::array<Vector3, 3>& v_out) {
  const json& u = field(j, "u", "setting");
  const json& v = field(j, "v", "setting");
  if (!u.is_array() || !v.is_array() || u.size() != v.size() || u.size() < 2 || u.size() > 3)
    bad_document("setting needs equally sized \"u\" and \"v\" with 2 or 3 vectors");
  for (std::size_t i = 0; i < u.size(); ++i) {
    u_out[i] = vector3_from(u[i], "setting.u");
    v_out[i] = vector3_from(v[i], "setting.v");
  }
  return static_cast<int>(u.size());
}

}  // namespace detail

inline SteeringSetting steering_setting_from_json(const json& j) {
  SteeringSetting s;
  s.n = detail::direction_lists_from(j, s.u, s.v);
  validate_setting(s);
  return s;
}

inline BellSetting bell_setting_from_json(const json& j) {
  BellSetting s;
  s.count = detail::direction_lists_from(j, s.x, s.y);
  validate_setting(s);
  return s;
}

inline json to_json(const MeasureReport& r) {
  return {{"f2", r.f2},           {"f3", r.f3},         {"s2", r.s2},
          {"s3", r.s3},           {"n2", r.n2},         {"m_horodecki", r.m_horodecki},
          {"b_max", r.b_max},     {"concurrence", r.concurrence}, {"purity", r.purity}};
}

inline json to_json(const WernerReport& r) {
  return {{"w", r.w},   {"e", r.e},   {"s3", r.s3},         {"s2", r.s2},
          {"n2", r.n2}, {"n3", r.n3}, {"purity", r.purity}, {"lambda1", r.lambda1}};
}

inline json to_json(const SamplerSpec& s) {
  return {{"kind", std::string(to_string(s.kind))}, {"rank", s.rank}, {"seed", s.seed}, {"count", s.count}};
}

inline json to_json(const OptimizerConfig& c) {
  return {{"restarts", c.restarts}, {"max_iters", c.max_iters}, {"init_step", c.init_step},
          {"shrink", c.shrink},     {"tol", c.tol},             {"seed", c.seed}};
}

inline json to_json(const OptimizationResult& r) {
  json j = {{"functional", std::string(to_string(r.functional))},
            {"best_value", r.best_value},
            {"best_setting", to_json(r.best_setting)},
            {"evaluations", r.evaluations},
            {"converged", r.converged},
            {"final_step", r.final_step},
            {"best_restart", r.best_restart}};
  j["closed_form"] = r.closed_form ? json(*r.closed_form) : json(nullptr);
  j["gap_to_oracle"] = r.gap_to_oracle ? json(*r.gap_to_oracle) : json(nullptr);
  return j;
}

inline json to_json(const TightnessRecord& r) {
  return {{"functional", std::string(to_string(r.functional))},
          {"closed", r.closed},
          {"found", r.found},
          {"gap", r.gap},
          {"within_reach", r.within_reach}};
}

}  // namespace steerkit
