#include "topo/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace topo {

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad config JSON in " + path + ": " + e.what());
  }
  Config cfg;
  cfg.enum_cap = j.value("enum_cap", cfg.enum_cap);
  cfg.eval_cap_fol = j.value("eval_cap_fol", cfg.eval_cap_fol);
  cfg.eval_cap_mso = j.value("eval_cap_mso", cfg.eval_cap_mso);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.cache_path = j.value("cache", cfg.cache_path);
  std::string format = j.value("format", std::string("json"));
  if (format == "json") cfg.format = OutputFormat::json;
  else if (format == "csv") cfg.format = OutputFormat::csv;
  else if (format == "plain") cfg.format = OutputFormat::plain;
  else throw std::runtime_error("unknown format in config: " + format);
  if (cfg.enum_cap < 0 || cfg.eval_cap_fol < 0 || cfg.eval_cap_mso < 0 ||
      cfg.workers < 1)
    throw std::runtime_error("config caps must be >= 0 and workers >= 1");
  return cfg;
}

}  // namespace topo
