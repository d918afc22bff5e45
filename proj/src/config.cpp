#include "rdfront/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rdfront/numerics.hpp"

namespace rdfront {

using nlohmann::json;

namespace {

json parse_strict(const std::string& text) {
  std::vector<std::set<std::string>> seen;
  auto cb = [&seen](int /*depth*/, json::parse_event_t event, json& parsed) -> bool {
    switch (event) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case json::parse_event_t::object_end:
        seen.pop_back();
        break;
      case json::parse_event_t::key: {
        const std::string key = parsed.get<std::string>();
        if (!seen.back().insert(key).second)
          throw config_error("duplicate field: " + key);
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config syntax error: ") + e.what());
  }
}

double want_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw config_error("type mismatch: field '" + field + "' must be a number");
  return j.get<double>();
}

std::string want_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw config_error("type mismatch: field '" + field + "' must be a string");
  return j.get<std::string>();
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      throw config_error("unknown field '" + it.key() + "' in " + where);
}

}  // namespace

ModelSpec ModelConfig::build() const {
  auto p = [this](const char* key, double dflt = std::nan("")) {
    auto it = parameters.find(key);
    if (it != parameters.end()) return it->second;
    if (std::isnan(dflt)) throw config_error(std::string("model parameter missing: ") + key);
    return dflt;
  };
  if (kind == "buffered") return make_buffered(p("d1"), p("d2"), p("k1"), p("k2"), p("b"));
  if (kind == "epidemic") {
    const GKind gk = g_kind == "g2" ? GKind::g2 : GKind::g1;
    if (g_kind != "g1" && g_kind != "g2")
      throw config_error("epidemic g_kind must be g1 or g2");
    return make_epidemic(p("d1"), p("d2"), p("gamma"), p("beta"), gk, p("omega"), p("nu"));
  }
  if (kind == "population")
    return make_population(p("d1"), p("d2"), p("r1"), p("r2"), p("alpha"), p("delta"));
  if (kind == "custom") return make_registry_model(registry_entry, p("d", 1.0));
  throw config_error("unknown model kind: " + kind);
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return serialize_config(*this) == serialize_config(o);
}

ExperimentConfig parse_config(const std::string& text) {
  const json root = parse_strict(text);
  if (!root.is_object()) throw config_error("config root must be an object");
  reject_unknown(root, {"model", "sis", "front", "entire", "out", "seed"}, "config root");

  ExperimentConfig cfg;
  if (!root.contains("model")) throw config_error("config: missing 'model' block");
  {
    const json& m = root.at("model");
    reject_unknown(m, {"name", "kind", "parameters", "g_kind", "registry"}, "model");
    cfg.model.kind = want_string(m.at("kind"), "kind");
    cfg.model.name = m.contains("name") ? want_string(m.at("name"), "name") : cfg.model.kind;
    if (m.contains("g_kind")) cfg.model.g_kind = want_string(m.at("g_kind"), "g_kind");
    if (m.contains("registry")) cfg.model.registry_entry = want_string(m.at("registry"), "registry");
    if (m.contains("parameters")) {
      const json& pp = m.at("parameters");
      if (!pp.is_object()) throw config_error("model.parameters must be an object");
      for (auto it = pp.begin(); it != pp.end(); ++it)
        cfg.model.parameters[it.key()] = want_number(it.value(), it.key());
    }
  }
  if (root.contains("seed")) cfg.seed = static_cast<std::uint64_t>(want_number(root.at("seed"), "seed"));
  if (root.contains("out")) cfg.out_dir = want_string(root.at("out"), "out");

  if (root.contains("sis")) {
    const json& s = root.at("sis");
    reject_unknown(s, {"t0", "t1", "dt", "tol", "eps", "q0"}, "sis");
    if (s.contains("t0")) cfg.sis.t0 = want_number(s.at("t0"), "t0");
    if (s.contains("t1")) cfg.sis.t1 = want_number(s.at("t1"), "t1");
    if (s.contains("dt")) cfg.sis.dt = want_number(s.at("dt"), "dt");
    if (s.contains("tol")) cfg.sis.tol = want_number(s.at("tol"), "tol");
    if (s.contains("eps")) cfg.sis.eps = want_number(s.at("eps"), "eps");
    if (s.contains("q0")) cfg.sis.q0 = want_number(s.at("q0"), "q0");
  }
  if (root.contains("front")) {
    const json& f = root.at("front");
    reject_unknown(f, {"xi0", "xi1", "dxi", "tol"}, "front");
    if (f.contains("xi0")) cfg.front.xi0 = want_number(f.at("xi0"), "xi0");
    if (f.contains("xi1")) cfg.front.xi1 = want_number(f.at("xi1"), "xi1");
    if (f.contains("dxi")) cfg.front.dxi = want_number(f.at("dxi"), "dxi");
    if (f.contains("tol")) cfg.front.tol = want_number(f.at("tol"), "tol");
  }
  if (root.contains("entire")) {
    const json& e = root.at("entire");
    reject_unknown(e,
                   {"waves", "chi", "h_last", "mode", "schedule", "t_end", "dx", "dt",
                    "snap_dt", "domain", "window", "floor", "tol_order", "tol_sandwich"},
                   "entire");
    if (e.contains("waves")) {
      if (!e.at("waves").is_array()) throw config_error("entire.waves must be an array");
      for (const json& w : e.at("waves")) {
        reject_unknown(w, {"c", "h", "nu"}, "wave");
        Wave wv;
        wv.c = want_number(w.at("c"), "c");
        if (w.contains("h")) wv.h = want_number(w.at("h"), "h");
        if (w.contains("nu")) wv.nu = static_cast<int>(want_number(w.at("nu"), "nu"));
        cfg.entire.waves.push_back(wv);
      }
    }
    if (e.contains("chi")) {
      if (!e.at("chi").is_array()) throw config_error("entire.chi must be an array");
      cfg.entire.chi.clear();
      for (const json& c : e.at("chi"))
        cfg.entire.chi.push_back(static_cast<int>(want_number(c, "chi")));
    } else {
      cfg.entire.chi.assign(cfg.entire.waves.size() + 1, 1);
    }
    if (e.contains("h_last")) cfg.entire.h_last = want_number(e.at("h_last"), "h_last");
    if (e.contains("mode")) {
      const std::string mode = want_string(e.at("mode"), "mode");
      if (mode == "cooperative")
        cfg.entire.mode = EntireMode::cooperative;
      else if (mode == "noncooperative")
        cfg.entire.mode = EntireMode::noncooperative;
      else
        throw config_error("entire.mode must be cooperative or noncooperative");
    }
    if (e.contains("schedule")) {
      cfg.entire.n_schedule.clear();
      for (const json& n : e.at("schedule"))
        cfg.entire.n_schedule.push_back(want_number(n, "schedule"));
    }
    if (e.contains("t_end")) cfg.entire.t_end = want_number(e.at("t_end"), "t_end");
    if (e.contains("dx")) cfg.entire.dx = want_number(e.at("dx"), "dx");
    if (e.contains("dt")) cfg.entire.dt = want_number(e.at("dt"), "dt");
    if (e.contains("snap_dt")) cfg.entire.snap_dt = want_number(e.at("snap_dt"), "snap_dt");
    if (e.contains("domain")) cfg.entire.domain_halfwidth = want_number(e.at("domain"), "domain");
    if (e.contains("window")) cfg.entire.window_halfwidth = want_number(e.at("window"), "window");
    if (e.contains("floor")) {
      if (!e.at("floor").is_boolean()) throw config_error("type mismatch: entire.floor must be a boolean");
      cfg.entire.subsolution_floor = e.at("floor").get<bool>();
    }
    if (e.contains("tol_order")) cfg.entire.tol_order = want_number(e.at("tol_order"), "tol_order");
    if (e.contains("tol_sandwich"))
      cfg.entire.tol_sandwich = want_number(e.at("tol_sandwich"), "tol_sandwich");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json root;
  json m;
  m["kind"] = cfg.model.kind;
  m["name"] = cfg.model.name;
  if (cfg.model.kind == "epidemic") m["g_kind"] = cfg.model.g_kind;
  if (!cfg.model.registry_entry.empty()) m["registry"] = cfg.model.registry_entry;
  json params = json::object();
  for (const auto& [k, v] : cfg.model.parameters) params[k] = v;
  m["parameters"] = params;
  root["model"] = m;
  root["seed"] = cfg.seed;
  root["out"] = cfg.out_dir;
  root["sis"] = {{"t0", cfg.sis.t0},   {"t1", cfg.sis.t1}, {"dt", cfg.sis.dt},
                 {"tol", cfg.sis.tol}, {"eps", cfg.sis.eps}, {"q0", cfg.sis.q0}};
  root["front"] = {{"xi0", cfg.front.xi0},
                   {"xi1", cfg.front.xi1},
                   {"dxi", cfg.front.dxi},
                   {"tol", cfg.front.tol}};
  json waves = json::array();
  for (const auto& w : cfg.entire.waves)
    waves.push_back({{"c", w.c}, {"h", w.h}, {"nu", w.nu}});
  root["entire"] = {{"waves", waves},
                    {"chi", cfg.entire.chi},
                    {"h_last", cfg.entire.h_last},
                    {"mode", cfg.entire.mode == EntireMode::cooperative ? "cooperative"
                                                                        : "noncooperative"},
                    {"schedule", cfg.entire.n_schedule},
                    {"t_end", cfg.entire.t_end},
                    {"dx", cfg.entire.dx},
                    {"dt", cfg.entire.dt},
                    {"snap_dt", cfg.entire.snap_dt},
                    {"domain", cfg.entire.domain_halfwidth},
                    {"window", cfg.entire.window_halfwidth},
                    {"floor", cfg.entire.subsolution_floor},
                    {"tol_order", cfg.entire.tol_order},
                    {"tol_sandwich", cfg.entire.tol_sandwich}};
  return root.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a(serialize_config(config));
}

}  // namespace rdfront
