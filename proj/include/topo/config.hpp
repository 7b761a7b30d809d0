#pragma once

#include <string>

#include "topo/evaluate.hpp"

namespace topo {

enum class OutputFormat { json, csv, plain };

struct Config {
  int enum_cap = 7;        // largest ground set enumerated
  int eval_cap_fol = 10;   // evaluation cap without point-set quantifiers
  int eval_cap_mso = 6;    // evaluation cap with point-set quantifiers
  int workers = 1;
  std::string cache_path;  // empty disables the result cache
  OutputFormat format = OutputFormat::json;

  EvalLimits eval_limits() const { return EvalLimits{eval_cap_fol, eval_cap_mso}; }
};

// Reads a JSON object mirroring the fields above; missing fields keep their
// defaults. Throws std::runtime_error on malformed files.
Config load_config_file(const std::string& path);

}  // namespace topo
