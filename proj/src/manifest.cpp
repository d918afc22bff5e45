#include "rdfront/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rdfront/numerics.hpp"

namespace rdfront {

std::string file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("digest: cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return hex64(fnv1a(ss.str()));
}

void RunManifest::add_output(const std::string& path) {
  outputs.push_back({path, file_digest(path)});
}

void RunManifest::write(const std::string& path) const {
  nlohmann::json j;
  j["config_digest"] = config_digest;
  j["version"] = version;
  auto stages_j = nlohmann::json::array();
  for (const auto& s : stages)
    stages_j.push_back({{"name", s.name}, {"seconds", s.seconds}, {"verdict", s.verdict}});
  j["stages"] = stages_j;
  auto out_j = nlohmann::json::array();
  for (const auto& o : outputs) out_j.push_back({{"path", o.path}, {"digest", o.digest}});
  j["outputs"] = out_j;
  std::ofstream os(path, std::ios::trunc);
  os << j.dump(2) << "\n";
  if (!os) throw config_error("cannot write manifest: " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw config_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    std::fprintf(f, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      std::fprintf(f, "%.17g%s", row[i], i + 1 < row.size() ? "," : "\n");
  }
  std::fclose(f);
}

}  // namespace rdfront
