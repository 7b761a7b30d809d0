#include "topo/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topo/builtins.hpp"
#include "topo/config.hpp"
#include "topo/counting.hpp"
#include "topo/evaluate.hpp"
#include "topo/seq.hpp"
#include "topo/structure_io.hpp"
#include "topo/structures.hpp"
#include "topo/translate.hpp"
#include "topo/verify.hpp"

namespace topo::cli {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config load_config(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv("TOPOCOUNT_CONFIG")) path = env;
  }
  if (path.empty()) return Config{};
  return load_config_file(path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Resolves --formula / --formula-file / --builtin into a formula plus the
// constants and free-variable sorts it needs.
struct FormulaInputs {
  std::string text;        // --formula
  std::string file;        // --formula-file
  std::string builtin;     // --builtin
  Dialect dialect = Dialect::TCMSOL;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--formula", text, "formula text");
    cmd->add_option("--formula-file", file,
                    "file with one formula ('#' comments)");
    cmd->add_option("--builtin", builtin,
                    "builtin name, e.g. t0 or different_components(2)");
  }

  Builtin resolve(const std::map<std::string, Sort>& extra_frees = {}) const {
    int sources = (!text.empty()) + (!file.empty()) + (!builtin.empty());
    if (sources != 1)
      throw UsageError(
          "exactly one of --formula, --formula-file, --builtin is required");
    if (!builtin.empty()) {
      try {
        return make_builtin(builtin);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    std::string source = !text.empty() ? text : read_file(file);
    auto parsed = parse_formula(source, dialect, extra_frees);
    if (!parsed.ok()) {
      const Diagnostic& d = parsed.diagnostics.front();
      throw UsageError("formula error at " + std::to_string(d.line) + ":" +
                       std::to_string(d.col) + ": " + d.message);
    }
    Builtin b;
    b.formula = parsed.formula;
    b.r = max_constant_index(parsed.formula);
    b.free_vars = extra_frees;
    return b;
  }
};

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  if (csv.empty()) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (...) {
      throw UsageError(std::string("bad ") + what + " list: " + csv);
    }
  }
  return out;
}

struct Range {
  int from = 0, to = 0;
};

Range parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      int v = std::stoi(text);
      return Range{v, v};
    }
    return Range{std::stoi(text.substr(0, dots)),
                 std::stoi(text.substr(dots + 2))};
  } catch (...) {
    throw UsageError("bad range: " + text + " (expected N or A..B)");
  }
}

// --bind VAR=VALUE: points are 1-based integers, sets are {1,3} (point-set)
// or open:{1,3} (open-set).
std::pair<std::string, Value> parse_binding(const std::string& text, int n) {
  auto eq = text.find('=');
  if (eq == std::string::npos)
    throw UsageError("bad binding (expected VAR=VALUE): " + text);
  std::string name = text.substr(0, eq);
  std::string value = text.substr(eq + 1);
  bool open_sort = false;
  if (value.rfind("open:", 0) == 0) {
    open_sort = true;
    value = value.substr(5);
  }
  if (!value.empty() && value.front() == '{') {
    if (value.back() != '}') throw UsageError("bad set value: " + value);
    Mask m = 0;
    std::stringstream ss(value.substr(1, value.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      int p = 0;
      try {
        p = std::stoi(item);
      } catch (...) {
        throw UsageError("bad set value: " + value);
      }
      if (p < 1 || p > n)
        throw UsageError("point " + std::to_string(p) + " outside [" +
                         std::to_string(n) + "] in binding " + text);
      m |= Mask{1} << (p - 1);
    }
    return {name, open_sort ? Value::of_open(m) : Value::of_set(m)};
  }
  try {
    int p = std::stoi(value);
    if (p < 1 || p > n)
      throw UsageError("point " + std::to_string(p) + " outside [" +
                       std::to_string(n) + "] in binding " + text);
    return {name, Value::of_point(p - 1)};
  } catch (const UsageError&) {
    throw;
  } catch (...) {
    throw UsageError("bad binding value: " + value);
  }
}

ordered_json count_row_json(const std::string& formula_text, int r,
                            ConstantTable::Mode mode, int n,
                            const CountResult& res) {
  ordered_json row;
  row["formula"] = formula_text;
  row["r"] = r;
  row["mode"] = mode == ConstantTable::Mode::hard_wired ? "hard-wired" : "free";
  row["n"] = n;
  row["count"] = res.count.get_str();
  ordered_json mods = ordered_json::object();
  for (const auto& [m, v] : res.residues) mods[std::to_string(m)] = v;
  row["mod"] = mods;
  return row;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_enumerate(const std::string& kind_name, int n, bool emit,
                  const Config& cfg, std::ostream& out) {
  auto kind = structure_kind_from_string(kind_name);
  if (!kind) throw UsageError("unknown structure kind: " + kind_name);
  std::uint64_t count = 0;
  StructureVisitor visitor;
  visitor.on_preorder = [&](const Preorder& q) {
    ++count;
    if (emit) out << to_json_string(q) << "\n";
  };
  visitor.on_topology = [&](const Topology& t) {
    ++count;
    if (emit) out << to_json_string(t) << "\n";
  };
  enumerate_structures(*kind, n, visitor, cfg.enum_cap);
  if (!emit) {
    ordered_json j;
    j["kind"] = kind_name;
    j["n"] = n;
    j["count"] = std::to_string(count);
    out << j.dump() << "\n";
  }
  return 0;
}

int cmd_count_partitions(const std::string& condition_name,
                         const std::string& range_text, int blocks,
                         bool breakdown, const Config& cfg, std::ostream& out) {
  auto condition = block_condition_from_string(condition_name);
  if (!condition)
    throw UsageError("unknown block condition: " + condition_name +
                     " (expected connected, open or closed)");
  Range range = parse_range(range_text);
  std::optional<int> k;
  if (blocks >= 0) k = blocks;
  ordered_json rows = ordered_json::array();
  for (int n = range.from; n <= range.to; ++n) {
    ordered_json row;
    row["condition"] = condition_name;
    row["n"] = n;
    if (k) row["blocks"] = *k;
    row["count"] = count_topological_partitions(n, *condition, k).get_str();
    if (breakdown) {
      ordered_json parts = ordered_json::array();
      for (const auto& line : topological_partition_breakdown(n, *condition, k)) {
        ordered_json pj;
        auto blocks_json = ordered_json::array();
        for (Mask b : line.blocks) blocks_json.push_back(PointSet(b).points());
        pj["partition"] = blocks_json;
        pj["topologies"] = line.topologies.get_str();
        parts.push_back(pj);
      }
      row["breakdown"] = parts;
    }
    rows.push_back(row);
  }
  out << rows.dump() << "\n";
  (void)cfg;
  return 0;
}

int cmd_count(const FormulaInputs& inputs, int r_flag, const std::string& mode_name,
              const std::string& range_text, const std::string& moduli_csv,
              Config cfg, std::ostream& out) {
  Builtin builtin = inputs.resolve();
  if (!builtin.free_vars.empty())
    throw UsageError("count needs a closed formula");
  int r = std::max(r_flag, builtin.r);
  ConstantTable::Mode mode = ConstantTable::Mode::hard_wired;
  if (mode_name == "free")
    mode = ConstantTable::Mode::free;
  else if (mode_name != "hard-wired")
    throw UsageError("mode must be hard-wired or free");
  Range range = parse_range(range_text);
  std::vector<int> moduli = parse_int_list(moduli_csv, "moduli");

  const std::string formula_text = render_formula(builtin.formula);
  std::optional<ResultCache> cache;
  if (!cfg.cache_path.empty()) cache.emplace(cfg.cache_path);
  const std::string hash = ResultCache::formula_hash(builtin.formula);

  std::vector<std::pair<int, CountResult>> rows;
  for (int n = range.from; n <= range.to; ++n) {
    CountResult res;
    std::optional<BigInt> cached;
    if (cache) cached = cache->lookup(hash, r, mode, n);
    if (cached) {
      res.count = *cached;
      for (int m : moduli) {
        BigInt rem = res.count % m;
        res.residues[m] = (int)rem.get_si();
      }
    } else {
      CountQuery query{builtin.formula, r, n, moduli, mode};
      res = count_topologies(query, cfg);
      if (cache) cache->store(hash, r, mode, n, res.count);
    }
    rows.emplace_back(n, std::move(res));
  }

  switch (cfg.format) {
    case OutputFormat::json: {
      ordered_json arr = ordered_json::array();
      for (const auto& [n, res] : rows)
        arr.push_back(count_row_json(formula_text, r, mode, n, res));
      out << arr.dump() << "\n";
      break;
    }
    case OutputFormat::csv: {
      out << "n,count";
      for (int m : moduli) out << ",mod" << m;
      out << "\n";
      for (const auto& [n, res] : rows) {
        out << n << "," << res.count.get_str();
        for (int m : moduli) out << "," << res.residues.at(m);
        out << "\n";
      }
      break;
    }
    case OutputFormat::plain: {
      for (const auto& [n, res] : rows) {
        out << "n=" << n << " count=" << res.count.get_str();
        for (int m : moduli)
          out << " mod" << m << "=" << res.residues.at(m);
        out << "\n";
      }
      break;
    }
  }
  return 0;
}

int cmd_eval(FormulaInputs& inputs, const std::string& structure_path, int r,
             const std::vector<std::string>& bind_flags, const Config& cfg,
             std::ostream& out) {
  if (structure_path.empty()) throw UsageError("--structure is required");
  Structure structure = load_structure_file(structure_path);
  int n = std::holds_alternative<Topology>(structure)
              ? std::get<Topology>(structure).n
              : std::get<Preorder>(structure).n;
  inputs.dialect = std::holds_alternative<Topology>(structure)
                       ? Dialect::TCMSOL
                       : Dialect::CMSOL;

  Environment env = Environment::hard_wired(0);
  std::map<std::string, Sort> frees;
  for (const std::string& flag : bind_flags) {
    auto [name, value] = parse_binding(flag, n);
    env.bindings[name] = value;
    frees[name] = value.sort;
  }
  Builtin builtin = inputs.resolve(frees);
  int want_r = std::max(r, builtin.r);
  env.constants = ConstantTable{want_r, ConstantTable::Mode::hard_wired};
  env.constant_points.clear();
  for (int i = 0; i < want_r; ++i) env.constant_points.push_back(i);

  bool value = false;
  if (auto* t = std::get_if<Topology>(&structure))
    value = evaluate(*t, builtin.formula, env, cfg.eval_limits());
  else
    value = evaluate(std::get<Preorder>(structure), builtin.formula, env,
                     cfg.eval_limits());
  out << (value ? "true" : "false") << "\n";
  return 0;
}

int cmd_translate(FormulaInputs& inputs, const std::string& direction,
                  std::ostream& out) {
  if (direction != "phi" && direction != "psi")
    throw UsageError("--direction must be phi or psi");
  inputs.dialect = direction == "phi" ? Dialect::CMSOL : Dialect::TCMSOL;
  Builtin builtin = inputs.resolve();
  FormulaPtr translated = direction == "phi" ? phi_sharp(builtin.formula)
                                             : psi_sharp(builtin.formula);
  out << render_formula(translated) << "\n";
  return 0;
}

SequenceRecord load_sequence_file(const std::string& path) {
  std::string text = read_file(path);
  SequenceRecord rec;
  rec.label = path;
  // JSON form {"offset": int, "values": ["...", ...]} or one value per line.
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("values")) {
    rec.offset = j.value("offset", 0);
    if (j.contains("label") && j["label"].is_string())
      rec.label = j["label"].get<std::string>();
    for (const auto& v : j["values"]) {
      if (v.is_string())
        rec.values.emplace_back(v.get<std::string>());
      else if (v.is_number_integer())
        rec.values.emplace_back((long)v.get<long long>());
      else
        throw std::runtime_error("sequence values must be integers or strings");
    }
    return rec;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string trimmed;
    for (char c : line)
      if (!std::isspace((unsigned char)c)) trimmed += c;
    if (trimmed.empty()) continue;
    rec.values.emplace_back(trimmed);
  }
  if (rec.values.empty())
    throw std::runtime_error("no sequence values in " + path);
  return rec;
}

ordered_json period_json(const PeriodReport& p) {
  ordered_json j;
  j["preperiod"] = p.preperiod;
  j["period"] = p.period;
  j["confidence"] = p.confidence;
  return j;
}

ordered_json modrec_json(const ModularRecurrence& r) {
  ordered_json j;
  j["modulus"] = r.modulus;
  j["order"] = r.order;
  j["offset"] = r.offset;
  j["coeffs"] = r.coeffs;
  return j;
}

// Extends residue tracks (and the integer sequence when a recurrence was
// found) past the known prefix. Extrapolations are evidence from detected
// recurrences, so they are labeled conjectural.
ordered_json extrapolate_json(const McReport& report,
                              const SequenceRecord& rec, int extend) {
  ordered_json out = ordered_json::array();
  for (const auto& mr : report.per_modulus) {
    if (!mr.recurrence) continue;
    const ModularRecurrence& r = *mr.recurrence;
    std::vector<long> values = reduce_mod(rec.values, mr.modulus);
    for (int i = 0; i < extend; ++i) {
      long acc = 0;
      int n = (int)values.size() - r.order;
      for (int j = 0; j < r.order; ++j)
        acc = (acc + r.coeffs[j] * values[n + j]) % mr.modulus;
      values.push_back(((acc % mr.modulus) + mr.modulus) % mr.modulus);
    }
    ordered_json ej;
    ej["modulus"] = mr.modulus;
    ej["conjectural"] = true;
    ej["values"] = std::vector<long>(values.end() - extend, values.end());
    out.push_back(ej);
  }
  if (report.integer.recurrence) {
    const Recurrence& r = *report.integer.recurrence;
    std::vector<mpq_class> values;
    for (const BigInt& v : rec.values) values.emplace_back(v);
    for (int i = 0; i < extend; ++i) {
      mpq_class acc = 0;
      int n = (int)values.size() - r.order;
      for (int j = 0; j < r.order; ++j) acc += r.coeffs[j] * values[n + j];
      values.push_back(acc);
    }
    ordered_json ej;
    ej["modulus"] = nullptr;
    ej["conjectural"] = true;
    std::vector<std::string> tail;
    for (size_t i = values.size() - extend; i < values.size(); ++i)
      tail.push_back(values[i].get_str());
    ej["values"] = tail;
    out.push_back(ej);
  }
  return out;
}

int cmd_analyze(const std::string& seq_path, const std::string& moduli_csv,
                int max_order, const std::string& chunks_spec, int extend,
                std::ostream& out) {
  SequenceRecord rec = load_sequence_file(seq_path);
  std::vector<int> moduli_int = parse_int_list(moduli_csv, "moduli");
  std::vector<long> moduli(moduli_int.begin(), moduli_int.end());

  McReport report = mc_report(rec, moduli, max_order);

  ordered_json j;
  j["label"] = report.label;
  j["offset"] = rec.offset;
  j["length"] = rec.values.size();
  ordered_json per_mod = ordered_json::array();
  for (const auto& mr : report.per_modulus) {
    ordered_json mj;
    mj["modulus"] = mr.modulus;
    mj["period"] = mr.period ? period_json(*mr.period) : ordered_json(nullptr);
    mj["recurrence"] =
        mr.recurrence ? modrec_json(*mr.recurrence) : ordered_json(nullptr);
    mj["verdict"] = to_string(mr.verdict);
    per_mod.push_back(mj);
  }
  j["moduli"] = per_mod;
  if (report.integer.recurrence) {
    const Recurrence& r = *report.integer.recurrence;
    ordered_json rj;
    rj["order"] = r.order;
    rj["offset"] = r.offset;
    std::vector<std::string> coeffs;
    for (const auto& c : r.coeffs) coeffs.push_back(c.get_str());
    rj["coeffs"] = coeffs;
    j["integer_recurrence"] = rj;
  } else {
    j["integer_recurrence"] = nullptr;
    j["rank_profile"] = report.integer.rank_profile;
  }

  if (extend > 0) j["extrapolation"] = extrapolate_json(report, rec, extend);

  if (!chunks_spec.empty()) {
    auto params = parse_int_list(chunks_spec, "chunks");
    if (params.size() != 2) throw UsageError("--chunks needs b,l");
    auto residues = reduce_mod(rec.values, params[0]);
    ChunkFrequencyReport chunks = chunk_frequencies(residues, params[0], params[1]);
    ordered_json cj;
    cj["base"] = chunks.base;
    cj["length"] = chunks.length;
    cj["chunks"] = chunks.chunks;
    cj["frequencies"] = chunks.frequencies;
    cj["max_deviation"] = chunks.max_deviation;
    j["chunks"] = cj;
  }

  out << j.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, int n, const Config& cfg,
               std::ostream& out) {
  VerifyResult result;
  try {
    result = verify_suite(suite, n, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const std::string& line : result.lines) out << line << "\n";
  out << "suite " << suite << ": " << (result.pass ? "PASS" : "FAIL") << "\n";
  return result.pass ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"finite-topology counting workbench"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 0;
  std::string cache_path;
  std::string format_name;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--jobs", jobs, "worker count for counting");
  app.add_option("--cache", cache_path, "result cache file");
  app.add_option("--format", format_name, "output format: json, csv, plain");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "enumerate structures");
  enumerate->fallthrough();
  std::string kind_name = "preorder";
  int enum_n = 0;
  bool emit = false;
  enumerate->add_option("--kind", kind_name,
                        "preorder, poset, topology, t0-topology");
  enumerate->add_option("--n", enum_n, "ground-set size")->required();
  enumerate->add_flag("--emit", emit, "print every structure as JSON");

  // count
  auto* count = app.add_subcommand("count", "count topologies satisfying a formula");
  count->fallthrough();
  FormulaInputs count_inputs;
  count_inputs.add_flags(count);
  int count_r = 0;
  std::string count_mode = "hard-wired";
  std::string count_range;
  std::string count_moduli;
  count->add_option("--r", count_r, "hard-wired constant count");
  count->add_option("--mode", count_mode, "hard-wired or free");
  count->add_option("--n", count_range, "n or range A..B")->required();
  count->add_option("--moduli", count_moduli, "comma-separated moduli");
  std::string count_partitions;
  int count_blocks = -1;
  bool count_breakdown = false;
  count->add_option("--partitions", count_partitions,
                    "count topological set partitions whose blocks are all "
                    "connected, open or closed");
  count->add_option("--blocks", count_blocks, "fix the number of blocks");
  count->add_flag("--breakdown", count_breakdown,
                  "include the per-partition breakdown");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a formula on a structure");
  eval->fallthrough();
  FormulaInputs eval_inputs;
  eval_inputs.add_flags(eval);
  std::string structure_path;
  int eval_r = 0;
  std::vector<std::string> binds;
  eval->add_option("--structure", structure_path, "structure JSON file")
      ->required();
  eval->add_option("--r", eval_r, "hard-wired constant count");
  eval->add_option("--bind", binds,
                   "free-variable binding VAR=VALUE (sets as {1,3}, open "
                   "sets as open:{1,3})");

  // translate
  auto* translate = app.add_subcommand("translate", "apply phi# or psi#");
  translate->fallthrough();
  FormulaInputs translate_inputs;
  translate_inputs.add_flags(translate);
  std::string direction;
  translate->add_option("--direction", direction, "phi or psi")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "sequence analysis");
  analyze->fallthrough();
  std::string seq_path, analyze_moduli = "2,3,5", chunks_spec;
  int max_order = 8, extend = 0;
  analyze->add_option("--seq", seq_path, "sequence file (JSON or lines)")
      ->required();
  analyze->add_option("--moduli", analyze_moduli, "comma-separated moduli");
  analyze->add_option("--max-order", max_order, "recurrence order bound");
  analyze->add_option("--chunks", chunks_spec, "chunk statistics b,l");
  analyze->add_option("--extend", extend,
                      "extrapolate this many further terms from detected "
                      "recurrences (labeled conjectural)");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->fallthrough();
  std::string suite;
  int verify_n = 4;
  verify->add_option("--suite", suite, "suite name")->required();
  verify->add_option("--n", verify_n, "ground-set bound");

  std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 order
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);  // prints help or the usage message
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg = load_config(config_path);
    if (jobs > 0) cfg.workers = jobs;
    if (!cache_path.empty()) cfg.cache_path = cache_path;
    if (!format_name.empty()) {
      if (format_name == "json") cfg.format = OutputFormat::json;
      else if (format_name == "csv") cfg.format = OutputFormat::csv;
      else if (format_name == "plain") cfg.format = OutputFormat::plain;
      else throw UsageError("unknown format: " + format_name);
    }

    if (enumerate->parsed())
      return cmd_enumerate(kind_name, enum_n, emit, cfg, out);
    if (count->parsed()) {
      if (!count_partitions.empty())
        return cmd_count_partitions(count_partitions, count_range,
                                    count_blocks, count_breakdown, cfg, out);
      return cmd_count(count_inputs, count_r, count_mode, count_range,
                       count_moduli, cfg, out);
    }
    if (eval->parsed())
      return cmd_eval(eval_inputs, structure_path, eval_r, binds, cfg, out);
    if (translate->parsed())
      return cmd_translate(translate_inputs, direction, out);
    if (analyze->parsed())
      return cmd_analyze(seq_path, analyze_moduli, max_order, chunks_spec,
                         extend, out);
    if (verify->parsed()) return cmd_verify(suite, verify_n, cfg, out);
    err << "usage error: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace topo::cli
