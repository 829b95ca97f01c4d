#include "lattherm/lab/manifest.hpp"

#include <json.hpp>

#include <ctime>
#include <fstream>
#include <sstream>

namespace lattherm::lab {

using nlohmann::json;

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& file) {
  json j;
  j["artifact_version"] = m.artifact_version;
  j["kind"] = m.kind;
  j["config_hash"] = m.config_hash;
  j["created_utc"] = m.created_utc;
  j["total_wall_s"] = m.total_wall_s;
  json ops = json::array();
  for (const auto& [name, seconds] : m.op_wall_s)
    ops.push_back({{"name", name}, {"wall_s", seconds}});
  j["operations"] = ops;
  j["outputs"] = m.outputs;

  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write manifest '" + file.string() + "'");
  out << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ManifestMissing("manifest '" + file.string() + "' is not readable");
  std::ostringstream buf;
  buf << in.rdbuf();

  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ManifestMissing("manifest '" + file.string() + "' is not valid JSON: " + e.what());
  }

  RunManifest m;
  try {
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.kind = j.at("kind").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.created_utc = j.at("created_utc").get<std::string>();
    m.total_wall_s = j.at("total_wall_s").get<double>();
    for (const auto& op : j.at("operations"))
      m.op_wall_s.emplace_back(op.at("name").get<std::string>(), op.at("wall_s").get<double>());
    for (const auto& name : j.at("outputs")) m.outputs.push_back(name.get<std::string>());
  } catch (const json::exception& e) {
    throw ManifestMissing("manifest '" + file.string() + "' has a bad layout: " + e.what());
  }

  const std::filesystem::path dir = file.parent_path();
  for (const auto& name : m.outputs)
    if (!std::filesystem::exists(dir / name))
      throw ManifestMissing("manifest output '" + name + "' is missing next to '" +
                            file.string() + "'");
  return m;
}

}  // namespace lattherm::lab
