#pragma once

#include <json.hpp>

#include "lattherm/interaction.hpp"

namespace lattherm {

// On-disk form of an interaction:
// {
//   "site_dim": 2,
//   "dimension": 1,
//   "terms": [ {"shape": [[0],[1]], "matrix": [[re,im], ...]} , ... ]
// }
// Shapes are in normal form (sorted, lexicographic minimum at the origin) and
// matrices are row-major lists of [re, im] pairs in the shape's tensor order.
// Serialization round-trips bit-exactly.

inline nlohmann::json interaction_to_json(const Interaction& phi) {
  nlohmann::json j;
  j["site_dim"] = phi.site().dim;
  j["dimension"] = phi.dimension();
  j["terms"] = nlohmann::json::array();
  for (const auto& [shape, m] : phi.terms()) {
    nlohmann::json term;
    term["shape"] = nlohmann::json::array();
    for (const auto& p : shape.points) term["shape"].push_back(p);
    term["matrix"] = nlohmann::json::array();
    for (long r = 0; r < m.rows(); ++r)
      for (long c = 0; c < m.cols(); ++c)
        term["matrix"].push_back({m(r, c).real(), m(r, c).imag()});
    j["terms"].push_back(std::move(term));
  }
  return j;
}

inline Interaction interaction_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("interaction: document is not an object");
  for (const char* key : {"site_dim", "dimension", "terms"})
    if (!j.contains(key)) throw Error(std::string("interaction: missing field '") + key + "'");
  if (!j["site_dim"].is_number_integer() || j["site_dim"].get<long>() < 2)
    throw Error("interaction: site_dim must be an integer >= 2");
  if (!j["dimension"].is_number_integer() || j["dimension"].get<long>() < 1)
    throw Error("interaction: dimension must be an integer >= 1");
  if (!j["terms"].is_array()) throw Error("interaction: terms must be an array");
  const int site_dim = j["site_dim"].get<int>();
  const int dimension = j["dimension"].get<int>();
  Interaction phi{SiteSpace(site_dim), dimension};
  long idx = 0;
  for (const auto& term : j["terms"]) {
    const std::string where = "interaction: terms[" + std::to_string(idx++) + "]";
    if (!term.is_object() || !term.contains("shape") || !term.contains("matrix"))
      throw Error(where + " needs 'shape' and 'matrix'");
    if (!term["shape"].is_array() || term["shape"].empty())
      throw Error(where + ".shape must be a nonempty array of points");
    std::vector<Point> shape;
    for (const auto& jp : term["shape"]) {
      if (!jp.is_array() || static_cast<int>(jp.size()) != dimension)
        throw Error(where + ".shape points must have " + std::to_string(dimension) +
                    " integer coordinates");
      Point p;
      for (const auto& c : jp) {
        if (!c.is_number_integer()) throw Error(where + ".shape coordinates must be integers");
        p.push_back(c.get<int>());
      }
      shape.push_back(std::move(p));
    }
    long dim = 1;
    for (size_t k = 0; k < shape.size(); ++k) dim *= site_dim;
    if (!term["matrix"].is_array() || static_cast<long>(term["matrix"].size()) != dim * dim)
      throw Error(where + ".matrix must list " + std::to_string(dim * dim) + " [re,im] entries");
    CMatrix m(dim, dim);
    long flat = 0;
    for (const auto& e : term["matrix"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw Error(where + ".matrix entries must be [re, im] pairs");
      m(flat / dim, flat % dim) = Complex(e[0].get<double>(), e[1].get<double>());
      ++flat;
    }
    try {
      phi.add(shape, m);
    } catch (const Error& err) {
      throw Error(where + ": " + err.what());
    }
  }
  return phi;
}

inline std::string interaction_to_string(const Interaction& phi) {
  return interaction_to_json(phi).dump(2);
}

inline Interaction interaction_from_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("interaction: malformed JSON");
  return interaction_from_json(j);
}

}  // namespace lattherm
