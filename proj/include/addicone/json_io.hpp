#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "addicone/channel.hpp"
#include "addicone/cone.hpp"
#include "addicone/decoupling.hpp"
#include "addicone/distribution.hpp"
#include "addicone/quantum.hpp"
#include "addicone/rational.hpp"

namespace addicone {

using json = nlohmann::ordered_json;

/// 12-significant-digit decimal rendering; keeps report files byte-stable.
inline double round_sig(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline json ratvec_to_json(const RatVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline RatVec ratvec_from_json(const json& a) {
  RatVec v;
  for (const auto& x : a) v.push_back(Rational::parse(x.get<std::string>()));
  return v;
}

inline json ratmat_to_json(const RatMat& m) {
  json a = json::array();
  for (const auto& r : m) a.push_back(ratvec_to_json(r));
  return a;
}

inline RatMat ratmat_from_json(const json& a) {
  RatMat m;
  for (const auto& r : a) m.push_back(ratvec_from_json(r));
  return m;
}

// ---------------------------------------------------------------------------
// ClassicalDistribution: {"variables":[{"name","alphabet"}], "pmf":[...]}
// with probabilities as exact dyadic rational strings.

inline json to_json(const ClassicalDistribution& d) {
  json j;
  j["variables"] = json::array();
  for (std::size_t i = 0; i < d.names.size(); ++i)
    j["variables"].push_back({{"name", d.names[i]}, {"alphabet", d.alphabet[i]}});
  j["pmf"] = json::array();
  for (std::size_t idx = 0; idx < d.p.size(); ++idx) {
    if (d.p[idx] == 0.0) continue;
    json row;
    row["outcome"] = d.outcome_of_index(idx);
    row["p"] = rational_from_double(d.p[idx]).str();
    j["pmf"].push_back(std::move(row));
  }
  return j;
}

inline ClassicalDistribution distribution_from_json(const json& j) {
  std::vector<std::string> names;
  std::vector<int> alphabet;
  for (const auto& v : j.at("variables")) {
    names.push_back(v.at("name").get<std::string>());
    alphabet.push_back(v.at("alphabet").get<int>());
  }
  ClassicalDistribution d(names, alphabet);
  for (const auto& row : j.at("pmf")) {
    const std::vector<int> outcome = row.at("outcome").get<std::vector<int>>();
    d.p[d.index_of_outcome(outcome)] = Rational::parse(row.at("p").get<std::string>()).to_double();
  }
  return d;
}

// ---------------------------------------------------------------------------
// DensityMatrix: {"dims":[...], "re":[[...]], "im":[[...]]}

inline json to_json(const DensityMatrix& rho) {
  json j;
  j["dims"] = rho.dims;
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < rho.m.rows; ++i) {
    json rrow = json::array(), irow = json::array();
    for (std::size_t k = 0; k < rho.m.cols; ++k) {
      rrow.push_back(round_sig(rho.m.at(i, k).real()));
      irow.push_back(round_sig(rho.m.at(i, k).imag()));
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline DensityMatrix density_from_json(const json& j, std::vector<std::string> names = {}) {
  const std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  if (names.empty())
    for (std::size_t i = 0; i < dims.size(); ++i) names.push_back("X" + std::to_string(i + 1));
  DensityMatrix rho(std::move(names), dims);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  for (std::size_t i = 0; i < rho.m.rows; ++i)
    for (std::size_t k = 0; k < rho.m.cols; ++k)
      rho.m.at(i, k) = cplx(re.at(i).at(k).get<double>(), im.at(i).at(k).get<double>());
  return rho;
}

// ---------------------------------------------------------------------------
// Cone: {"dim","coords","inequalities","equalities","rays","lineality"}

inline json cone_to_json(const ConeH& h, const ConeV& v) {
  json j;
  j["dim"] = h.dim;
  j["coords"] = h.coords;
  j["inequalities"] = ratmat_to_json(h.ineqs);
  j["equalities"] = ratmat_to_json(h.eqs);
  j["rays"] = ratmat_to_json(v.rays);
  j["lineality"] = ratmat_to_json(v.lineality);
  return j;
}

inline ConeH coneh_from_json(const json& j) {
  ConeH h;
  h.dim = j.at("dim").get<std::size_t>();
  h.coords = j.at("coords").get<std::vector<std::string>>();
  h.ineqs = ratmat_from_json(j.at("inequalities"));
  h.eqs = ratmat_from_json(j.at("equalities"));
  return h;
}

inline ConeV conev_from_json(const json& j) {
  ConeV v;
  v.dim = j.at("dim").get<std::size_t>();
  v.coords = j.at("coords").get<std::vector<std::string>>();
  v.rays = ratmat_from_json(j.at("rays"));
  v.lineality = ratmat_from_json(j.at("lineality"));
  return v;
}

// ---------------------------------------------------------------------------
// Decoupling: {"aux","code","class_rep","equivalents"}

inline json code_to_json(const DecouplingCode& c) {
  json slots = json::array();
  for (const auto& [a, b] : c.slots) slots.push_back({a, b});
  return slots;
}

inline DecouplingCode code_from_json(const json& j) {
  DecouplingCode c;
  for (const auto& s : j) c.slots.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
  if (!c.consistent()) throw std::invalid_argument("code_from_json: inconsistent code");
  return c;
}

inline json class_to_json(const CodeClass& cls) {
  json j;
  j["aux"] = cls.representative.n_aux();
  j["code"] = code_to_json(cls.representative);
  if (cls.representative.n_aux() == 1) {
    j["class_rep"] = {cls.representative.slots[0].first, cls.representative.slots[0].second};
    json eq = json::array();
    for (const auto& c : cls.equivalents) eq.push_back({c.slots[0].first, c.slots[0].second});
    j["equivalents"] = std::move(eq);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Channel: {"d_in","d_B","d_E","isometry_re","isometry_im"} or {"kraus":[...]}

inline json to_json(const IsometryChannel& ch) {
  json j;
  j["d_in"] = ch.d_in;
  j["d_B"] = ch.d_b;
  j["d_E"] = ch.d_e;
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < ch.u.rows; ++i) {
    json rrow = json::array(), irow = json::array();
    for (std::size_t k = 0; k < ch.u.cols; ++k) {
      rrow.push_back(round_sig(ch.u.at(i, k).real()));
      irow.push_back(round_sig(ch.u.at(i, k).imag()));
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  j["isometry_re"] = std::move(re);
  j["isometry_im"] = std::move(im);
  return j;
}

inline CMat cmat_from_json(const json& re, const json& im) {
  const std::size_t rows = re.size();
  const std::size_t cols = rows ? re.at(0).size() : 0;
  CMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k)
      m.at(i, k) = cplx(re.at(i).at(k).get<double>(), im.at(i).at(k).get<double>());
  return m;
}

inline IsometryChannel channel_from_json(const json& j) {
  if (j.contains("kraus")) {
    std::vector<CMat> ks;
    for (const auto& k : j.at("kraus")) ks.push_back(cmat_from_json(k.at("re"), k.at("im")));
    IsometryChannel ch = channel_from_kraus(ks);
    if (!ch.valid()) throw std::invalid_argument("channel_from_json: Kraus list not trace preserving");
    return ch;
  }
  IsometryChannel ch(j.at("d_in").get<int>(), j.at("d_B").get<int>(), j.at("d_E").get<int>(),
                     cmat_from_json(j.at("isometry_re"), j.at("isometry_im")));
  if (!ch.valid()) throw std::invalid_argument("channel_from_json: not an isometry");
  return ch;
}

}  // namespace addicone
