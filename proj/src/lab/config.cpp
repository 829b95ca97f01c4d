#include "lattherm/lab/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lattherm/interaction_io.hpp"

namespace lattherm::lab {

using nlohmann::json;

namespace {

ConfigInvalid bad(const std::string& path, const std::string& what) {
  return ConfigInvalid("config field '" + path + "': " + what);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw bad(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

double as_finite(const json& j, const std::string& path) {
  if (!j.is_number()) throw bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw bad(path, "must be finite");
  return v;
}

long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw bad(path, "expected an integer");
  return j.get<long>();
}

double opt_number(const json& obj, const std::string& path, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  return as_finite(obj.at(key), path + "." + key);
}

double req_number(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw bad(path + "." + key, "required");
  return as_finite(obj.at(key), path + "." + key);
}

std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw bad(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_finite(j.at(i), path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<long> ascending_sides(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw bad(path, "expected a non-empty array of integers");
  std::vector<long> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const long v = as_integer(j.at(i), at);
    if (v < 1) throw bad(at, "side must be >= 1");
    if (!out.empty() && v <= out.back()) throw bad(at, "sides must be strictly ascending");
    out.push_back(v);
  }
  return out;
}

std::vector<double> ascending_grid(const json& j, const std::string& path, bool positive) {
  std::vector<double> out = number_array(j, path);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (positive && out[i] <= 0.0) throw bad(at, "must be positive");
    if (i > 0 && out[i] <= out[i - 1]) throw bad(at, "grid must be strictly ascending");
  }
  return out;
}

FermionInteraction parse_fermion_fields(const json& obj, const std::string& path) {
  FermionInteraction f;
  if (obj.contains("t")) f.hopping = number_array(obj.at("t"), path + ".t");
  f.mu = opt_number(obj, path, "mu", 0.0);
  if (obj.contains("V")) f.density = number_array(obj.at("V"), path + ".V");
  return f;
}

struct ParsedInteraction {
  Interaction spin{SiteSpace(2), 1};
  std::optional<FermionInteraction> fermion;
};

ParsedInteraction parse_interaction(const json& j, const std::string& path) {
  if (!j.is_object()) throw bad(path, "expected an object");
  ParsedInteraction out;

  if (j.contains("family")) {
    if (!j.at("family").is_string()) throw bad(path + ".family", "expected a string");
    const std::string family = j.at("family").get<std::string>();
    const double shift = opt_number(j, path, "identity_shift", 0.0);

    if (family == "ising_transverse") {
      check_keys(j, path, {"family", "J", "h", "dimension", "identity_shift"});
      int dim = 1;
      if (j.contains("dimension")) {
        dim = static_cast<int>(as_integer(j.at("dimension"), path + ".dimension"));
        if (dim < 1) throw bad(path + ".dimension", "must be >= 1");
      }
      out.spin = ising_transverse(req_number(j, path, "J"), req_number(j, path, "h"), dim);
    } else if (family == "xy") {
      check_keys(j, path, {"family", "J", "gamma", "h", "identity_shift"});
      out.spin = xy_chain(req_number(j, path, "J"), req_number(j, path, "gamma"),
                          req_number(j, path, "h"));
    } else if (family == "xxz") {
      check_keys(j, path, {"family", "J", "delta", "h", "identity_shift"});
      out.spin = xxz_chain(req_number(j, path, "J"), req_number(j, path, "delta"),
                           req_number(j, path, "h"));
    } else if (family == "heisenberg") {
      check_keys(j, path, {"family", "J", "h", "identity_shift"});
      out.spin = heisenberg_chain(req_number(j, path, "J"), req_number(j, path, "h"));
    } else if (family == "onsite_field") {
      check_keys(j, path, {"family", "hx", "hy", "hz", "dimension", "identity_shift"});
      int dim = 1;
      if (j.contains("dimension")) {
        dim = static_cast<int>(as_integer(j.at("dimension"), path + ".dimension"));
        if (dim < 1) throw bad(path + ".dimension", "must be >= 1");
      }
      out.spin = onsite_field(opt_number(j, path, "hx", 0.0), opt_number(j, path, "hy", 0.0),
                              opt_number(j, path, "hz", 0.0), dim);
    } else if (family == "fermion_hopping") {
      check_keys(j, path, {"family", "t", "mu", "V", "identity_shift"});
      out.fermion = parse_fermion_fields(j, path);
      out.spin = jordan_wigner_interaction(*out.fermion);
    } else {
      throw bad(path + ".family", "unknown family '" + family + "'");
    }
    if (shift != 0.0) out.spin = with_identity_shift(out.spin, shift);
    return out;
  }

  if (j.contains("type")) {
    if (!j.at("type").is_string() || j.at("type").get<std::string>() != "fermion")
      throw bad(path + ".type", "only \"fermion\" is recognized");
    check_keys(j, path, {"type", "t", "mu", "V"});
    out.fermion = parse_fermion_fields(j, path);
    out.spin = jordan_wigner_interaction(*out.fermion);
    return out;
  }

  if (j.contains("terms") || j.contains("site_dim")) {
    check_keys(j, path, {"site_dim", "dimension", "terms"});
    try {
      out.spin = interaction_from_json(j);
    } catch (const Error& e) {
      throw bad(path, e.what());
    }
    return out;
  }

  throw bad(path, "must contain 'family', 'type': \"fermion\", or an explicit term list");
}

ExperimentKind parse_kind(const json& j) {
  if (!j.contains("kind")) throw bad("kind", "required");
  if (!j.at("kind").is_string()) throw bad("kind", "expected a string");
  const std::string name = j.at("kind").get<std::string>();
  if (name == "pressure") return ExperimentKind::kPressure;
  if (name == "gibbs") return ExperimentKind::kGibbs;
  if (name == "weakgibbs") return ExperimentKind::kWeakGibbs;
  if (name == "equiv") return ExperimentKind::kEquiv;
  if (name == "quench") return ExperimentKind::kQuench;
  if (name == "fermion-quench") return ExperimentKind::kFermionQuench;
  if (name == "bounds") return ExperimentKind::kBounds;
  throw bad("kind", "unknown kind '" + name + "'");
}

long positive_side(const json& obj, const std::string& key) {
  if (!obj.contains(key)) throw bad(key, "required");
  const long v = as_integer(obj.at(key), key);
  if (v < 1) throw bad(key, "must be >= 1");
  return v;
}

}  // namespace

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kPressure: return "pressure";
    case ExperimentKind::kGibbs: return "gibbs";
    case ExperimentKind::kWeakGibbs: return "weakgibbs";
    case ExperimentKind::kEquiv: return "equiv";
    case ExperimentKind::kQuench: return "quench";
    case ExperimentKind::kFermionQuench: return "fermion-quench";
    case ExperimentKind::kBounds: return "bounds";
  }
  return "?";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < stop; ++i)
      if (text[i] == '\n') ++line;
    throw ConfigInvalid("config parse error at line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("config root: expected an object");

  ExperimentConfig cfg;
  cfg.kind = parse_kind(j);

  std::set<std::string> allowed{"kind", "beta", "seed", "out", "interaction"};
  switch (cfg.kind) {
    case ExperimentKind::kPressure:
    case ExperimentKind::kGibbs:
      allowed.insert("sides");
      break;
    case ExperimentKind::kWeakGibbs:
      allowed.insert({"sides", "ambient_side"});
      break;
    case ExperimentKind::kEquiv:
      allowed.insert({"other", "sides"});
      break;
    case ExperimentKind::kQuench:
    case ExperimentKind::kFermionQuench:
      allowed.insert({"initial", "ambient_side", "window_side", "times", "horizons"});
      break;
    case ExperimentKind::kBounds:
      allowed.insert({"side", "count", "amplitude"});
      break;
  }
  check_keys(j, "", allowed);

  cfg.beta = opt_number(j, "", "beta", 1.0);
  if (j.contains("seed")) {
    const long s = as_integer(j.at("seed"), "seed");
    if (s < 0) throw bad("seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("out")) {
    if (!j.at("out").is_string()) throw bad("out", "expected a string");
    cfg.out_dir = j.at("out").get<std::string>();
  }

  if (!j.contains("interaction")) throw bad("interaction", "required");
  ParsedInteraction main = parse_interaction(j.at("interaction"), "interaction");
  cfg.interaction = main.spin;
  cfg.fermion_phi = main.fermion;

  switch (cfg.kind) {
    case ExperimentKind::kPressure:
    case ExperimentKind::kGibbs:
      if (!j.contains("sides")) throw bad("sides", "required");
      cfg.sides = ascending_sides(j.at("sides"), "sides");
      break;

    case ExperimentKind::kWeakGibbs:
      if (!j.contains("sides")) throw bad("sides", "required");
      cfg.sides = ascending_sides(j.at("sides"), "sides");
      cfg.ambient_side = positive_side(j, "ambient_side");
      if (cfg.ambient_side <= cfg.sides.back())
        throw bad("ambient_side", "must exceed the largest window side");
      break;

    case ExperimentKind::kEquiv: {
      if (!j.contains("other")) throw bad("other", "required");
      cfg.other = parse_interaction(j.at("other"), "other").spin;
      if (j.contains("sides"))
        cfg.sides = ascending_sides(j.at("sides"), "sides");
      else
        cfg.sides = {2, 4, 6, 8};
      break;
    }

    case ExperimentKind::kQuench:
    case ExperimentKind::kFermionQuench: {
      if (!j.contains("initial")) throw bad("initial", "required");
      ParsedInteraction init = parse_interaction(j.at("initial"), "initial");
      cfg.initial = init.spin;
      cfg.fermion_psi = init.fermion;
      if (cfg.kind == ExperimentKind::kFermionQuench) {
        if (!cfg.fermion_phi) throw bad("interaction", "fermion-quench needs a fermion block");
        if (!cfg.fermion_psi) throw bad("initial", "fermion-quench needs a fermion block");
      }
      cfg.ambient_side = positive_side(j, "ambient_side");
      cfg.window_side = positive_side(j, "window_side");
      if (cfg.window_side >= cfg.ambient_side)
        throw bad("window_side", "must be smaller than ambient_side");
      if (!j.contains("horizons")) throw bad("horizons", "required");
      cfg.horizons = ascending_grid(j.at("horizons"), "horizons", true);
      if (cfg.horizons.empty()) throw bad("horizons", "must not be empty");
      if (j.contains("times")) cfg.times = ascending_grid(j.at("times"), "times", false);
      break;
    }

    case ExperimentKind::kBounds:
      cfg.side = positive_side(j, "side");
      if (j.contains("count")) {
        cfg.count = as_integer(j.at("count"), "count");
        if (cfg.count < 1) throw bad("count", "must be >= 1");
      }
      cfg.amplitude = opt_number(j, "", "amplitude", 0.5);
      break;
  }

  char hex[20];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(j.dump())));
  cfg.hash = hex;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigInvalid("config file '" + path.string() + "' is not readable");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace lattherm::lab
