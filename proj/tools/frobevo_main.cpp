// SPDX-License-Identifier: Apache-2.0
//
// frobevo — conjecture toolkit for Frobenius numbers of parametric tuple
// families: exact oracle queries, dataset generation, grammar-guided
// evolutionary search, genotype tracing, and conjecture verification.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frobevo/frobevo.hpp"
#include "json_io.hpp"

namespace fs = std::filesystem;
using namespace frobevo;
using frobevo::io::ordered_json;

namespace {

/// Argument-shape problems that CLI11 cannot catch; reported as usage (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t env_seed_default() {
  const char* env = std::getenv("FROBEVO_SEED");
  if (!env || !*env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw UsageError("FROBEVO_SEED must be an unsigned integer, got '" + std::string(env) + "'");
  }
}

std::string_view trim_ws(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Turns a key=value config file into command-line arguments for `sub`.
/// Keys are the subcommand's long option names without the leading dashes;
/// '#' starts a comment line. Boolean keys accept true/false/1/0/yes/no.
std::vector<std::string> config_file_args(CLI::App* sub, const std::string& path) {
  std::vector<std::string> args;
  std::string text = io::read_file(path);
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos, (eol == std::string::npos ? text.size() : eol) - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    std::string_view t = trim_ws(line);
    if (t.empty() || t.front() == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string_view::npos)
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key(trim_ws(t.substr(0, eq)));
    std::string value(trim_ws(t.substr(eq + 1)));
    if (key == "config") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt)
      throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' for subcommand '" +
                       sub->get_name() + "'");
    if (opt->get_expected_min() == 0) {  // flag
      if (value == "true" || value == "1" || value == "yes" || value == "on")
        args.push_back("--" + key);
      else if (!(value == "false" || value == "0" || value == "no" || value == "off"))
        throw UsageError(path + ":" + std::to_string(line_no) + ": boolean key '" + key + "' got '" + value + "'");
    } else {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

/// Command line with config-file arguments spliced in right after the
/// subcommand name, so explicit flags win (all scalar options take the last
/// occurrence). Returns the argument list without the program name.
std::vector<std::string> expand_config(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args.front());
  if (!sub) return args;
  std::string config_path;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  std::vector<std::string> extra = config_file_args(sub, config_path);
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

Grammar load_grammar(const fs::path& path, std::string* source_out = nullptr) {
  std::string source = io::read_file(path);
  if (source_out) *source_out = source;
  return parse_bnf(source);
}

struct GAOptions {
  GAConfig cfg;
  std::string mode = "rational";

  void attach(CLI::App* cmd) {
    cmd->add_option("--pop", cfg.population_size, "population size")->capture_default_str();
    cmd->add_option("--gens", cfg.generations, "number of generations")->capture_default_str();
    cmd->add_option("--pc", cfg.crossover_prob, "one-point crossover probability")->capture_default_str();
    cmd->add_option("--pm", cfg.mutation_prob, "one-bit mutation probability per offspring")->capture_default_str();
    cmd->add_option("--len", cfg.chromosome_len, "chromosome length in codons")->capture_default_str();
    cmd->add_option("--tournament", cfg.tournament_size, "tournament size")->capture_default_str();
    cmd->add_option("--elitism", cfg.elitism, "elite individuals copied unchanged")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "RNG seed (FROBEVO_SEED is the fallback)")->capture_default_str();
    cmd->add_option("--mode", mode, "fitness evaluation mode: rational | floor")
        ->check(CLI::IsMember({"rational", "floor"}))
        ->capture_default_str();
    cmd->add_option("--max-wraps", cfg.limits.max_wraps, "chromosome wraps before Invalid")->capture_default_str();
    cmd->add_option("--max-expansions", cfg.limits.max_expansions, "expansion cap per mapping")->capture_default_str();
    cmd->add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)")->capture_default_str();
  }

  GAConfig finalize() {
    cfg.fitness_mode = mode == "floor" ? EvalMode::FloorDiv : EvalMode::Rational;
    return cfg;
  }
};

std::string evolve_summary(const RunResult& r) {
  std::ostringstream out;
  out << "seed " << r.seed << ", " << r.config.population_size << " individuals x " << r.config.generations
      << " generations\n";
  out << "best fitness: " << r.best.fitness.to_string() << "\n";
  if (r.best.expr) out << "best expression: " << r.best.expr->to_string() << "\n";
  if (r.best.phenotype.valid()) out << "phenotype: " << r.best.phenotype.text() << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------

int cmd_frobenius(const std::vector<int64_t>& elements, bool check) {
  if (elements.size() < 2) throw UsageError("frobenius needs at least 2 generator elements");
  GenTuple t{std::vector<int64_t>(elements)};
  int64_t g = frobenius(t);
  if (check) {
    int64_t bound = checked_add(checked_mul(t.min() - 1, t.max()), t.min());
    int64_t dp = frobenius_bruteforce(t, bound < 1 ? 1 : bound);
    if (dp != g) throw Error("oracle disagreement: apery " + std::to_string(g) + " vs dp " + std::to_string(dp));
  }
  std::cout << g << "\n";
  return 0;
}

int cmd_trace(const fs::path& grammar_path, const std::string& chromosome, const MappingLimits& limits) {
  Grammar g = load_grammar(grammar_path);
  Chromosome c = Chromosome::from_string(chromosome);
  MappingTrace t = trace_mapping(c, g, limits);

  size_t nt_width = 11;  // "nonterminal"
  for (const auto& s : t.steps) nt_width = std::max(nt_width, s.nonterminal.size());
  std::cout << "step  codon  " << std::left << std::setw(static_cast<int>(nt_width + 2)) << "nonterminal"
            << "choice  sentential form\n";
  for (size_t i = 0; i < t.steps.size(); ++i) {
    const TraceStep& s = t.steps[i];
    std::string choice = std::to_string(s.alternative) + "/" +
                         std::to_string(g.alternative_count(s.nonterminal));
    std::cout << std::right << std::setw(4) << i + 1 << "  " << std::setw(5) << int(s.codon) << "  "
              << std::left << std::setw(static_cast<int>(nt_width + 2)) << s.nonterminal << std::setw(8)
              << choice << s.form_text() << "\n";
  }
  if (t.result.valid()) {
    std::cout << "phenotype: " << t.result.text() << "  (" << t.result.codons_consumed << " codons, "
              << t.result.wraps_used << " wraps)\n";
  } else {
    std::cout << "invalid: " << to_string(*t.result.invalid) << " after " << t.result.codons_consumed
              << " codons, " << t.result.wraps_used << " wraps\n";
  }
  return 0;
}

int cmd_dataset(const std::string& family_text, int64_t start, int64_t count, bool no_filter,
                const fs::path& out, int jobs) {
  TupleFamily family = TupleFamily::parse(family_text);
  family.param_start = start;
  family.count = count;
  family.coprimality_filter = !no_filter;
  Dataset d = materialize(family, jobs);
  save_csv(d, out);

  ordered_json cfg{{"family", family.to_string()}, {"param", family.param_name},   {"start", start},
                   {"count", count},               {"coprimality_filter", !no_filter}};
  ordered_json manifest = io::manifest_json("dataset", cfg, {}, {out.filename().string()});
  io::write_json(out.string() + ".manifest.json", manifest);

  std::cout << "wrote " << d.rows.size() << " rows to " << out.string() << "\n";
  return 0;
}

int cmd_evolve(const fs::path& grammar_path, const fs::path& data_path, GAOptions& options,
               const std::optional<fs::path>& out, const std::string& config_path) {
  std::string grammar_source;
  Grammar g = load_grammar(grammar_path, &grammar_source);
  std::string csv = io::read_file(data_path);
  Dataset d = from_csv_text(csv);
  GAConfig cfg = options.finalize();

  RunResult r = run(cfg, g, d);
  ordered_json result = io::run_result_json(r);

  if (out) {
    io::write_json(*out, result);
    std::vector<std::pair<std::string, std::string>> inputs{
        {grammar_path.string(), io::content_id(grammar_source)}, {data_path.string(), io::content_id(csv)}};
    if (!config_path.empty()) inputs.emplace_back(config_path, io::content_id(io::read_file(config_path)));
    ordered_json manifest =
        io::manifest_json("evolve", io::config_json(cfg), inputs, {out->filename().string()}, cfg.seed);
    io::write_json(out->string() + ".manifest.json", manifest);
    std::cout << evolve_summary(r) << "result: " << out->string() << "\n";
  } else {
    std::cout << result.dump(2) << "\n";
    std::cerr << evolve_summary(r);
  }
  return 0;
}

Conjecture conjecture_from_flags(const std::string& name, const std::string& family_text,
                                 const std::string& formula_text) {
  if (!name.empty()) {
    auto c = find_builtin(name);
    if (!c) {
      std::string names;
      for (const auto& b : builtin_conjectures()) names += " " + b.name;
      throw UsageError("unknown conjecture '" + name + "'; built in:" + names);
    }
    return *c;
  }
  if (family_text.empty() || formula_text.empty())
    throw UsageError("need either --conjecture NAME or both --family and --formula");
  Conjecture c;
  c.name = "custom";
  c.family = TupleFamily::parse(family_text);
  std::string var = c.family.param_name;
  c.formula = Expr::parse(formula_text, &var).floorized();
  c.description = "user-supplied family/formula";
  c.k_min = 1;
  return c;
}

int cmd_verify(const std::string& name, const std::string& family_text, const std::string& formula_text,
               std::optional<int64_t> from, std::optional<int64_t> to, const std::string& oracle_name,
               const std::string& format, const std::optional<fs::path>& out, int jobs, bool list) {
  if (list) {
    for (const auto& c : builtin_conjectures())
      std::cout << c.name << ": g(" << c.family.to_string() << ") = " << c.formula_text() << "   ["
                << c.family.param_name << " >= " << c.k_min << "]\n";
    return 0;
  }
  Conjecture c = conjecture_from_flags(name, family_text, formula_text);
  int64_t k_lo = from.value_or(c.k_min);
  int64_t k_hi = to.value_or(std::max<int64_t>(200, k_lo));
  OracleKind kind = oracle_name == "bruteforce" ? OracleKind::BruteForce : OracleKind::Apery;

  VerifyReport rep = verify(c, k_lo, k_hi, jobs, kind);
  ordered_json report = io::report_json(c, rep);

  if (out) {
    io::write_json(*out, report);
    ordered_json cfg{{"conjecture", c.name},   {"family", c.family.to_string()}, {"formula", c.formula_text()},
                     {"from", k_lo},           {"to", k_hi},                     {"oracle", oracle_name}};
    io::write_json(out->string() + ".manifest.json", io::manifest_json("verify", cfg, {}, {out->filename().string()}));
    std::cout << io::report_text(c, rep);
  } else if (format == "text") {
    std::cout << io::report_text(c, rep);
  } else {
    std::cout << report.dump(2) << "\n";
  }
  return 0;
}

int cmd_pipeline(const std::string& family_text, int64_t start, int64_t count, const fs::path& grammar_path,
                 const fs::path& outdir, GAOptions& options, std::optional<int64_t> verify_to, bool repair,
                 const std::string& config_path) {
  std::string grammar_source;
  Grammar g = load_grammar(grammar_path, &grammar_source);
  GAConfig cfg = options.finalize();

  TupleFamily family = TupleFamily::parse(family_text);
  family.param_start = start;
  family.count = count;

  fs::create_directories(outdir);

  // 1. dataset
  Dataset d = materialize(family, cfg.jobs);
  save_csv(d, outdir / "dataset.csv");

  // 2. evolution
  RunResult r = run(cfg, g, d);
  io::write_json(outdir / "run.json", io::run_result_json(r));

  // 3. promotion
  ConjectureRecord promoted = promote(r, d);
  bool repaired = false;
  if (repair) {
    ConjectureRecord fixed = repair_constant(promoted, d);
    repaired = !(fixed.formula == promoted.formula);
    promoted = fixed;
  }
  io::write_json(outdir / "conjecture.json", io::conjecture_record_json(promoted, family.param_name, repaired));

  // 4. verification against the oracle beyond the training range
  Conjecture c;
  c.name = "promoted";
  c.description = "promoted from evolve run, seed " + std::to_string(r.seed);
  c.family = family;
  c.formula = promoted.formula;
  c.k_min = start;
  int64_t k_hi = verify_to.value_or(std::max<int64_t>(200, start + count - 1));
  VerifyReport rep = verify(c, start, k_hi, cfg.jobs);
  io::write_json(outdir / "report.json", io::report_json(c, rep));

  // 5. manifest
  std::vector<std::pair<std::string, std::string>> inputs{{grammar_path.string(), io::content_id(grammar_source)}};
  if (!config_path.empty()) inputs.emplace_back(config_path, io::content_id(io::read_file(config_path)));
  ordered_json manifest_cfg = io::config_json(cfg);
  manifest_cfg["family"] = family.to_string();
  manifest_cfg["param"] = family.param_name;
  manifest_cfg["start"] = start;
  manifest_cfg["count"] = count;
  manifest_cfg["verify_to"] = k_hi;
  manifest_cfg["repair"] = repair;
  io::write_json(outdir / "manifest.json",
                 io::manifest_json("pipeline", manifest_cfg, inputs,
                                   {"dataset.csv", "run.json", "conjecture.json", "report.json"}, cfg.seed));

  std::cout << evolve_summary(r);
  std::cout << "promoted: " << promoted.formula.to_string(family.param_name)
            << (repaired ? "  (constant-repaired)" : "") << "\n";
  std::cout << io::report_text(c, rep);
  std::cout << "outputs in " << outdir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frobevo — Frobenius-number conjecturing via grammatical evolution"};
  app.require_subcommand(1);

  try {
    uint64_t seed_fallback = env_seed_default();

    // frobenius
    auto* cf = app.add_subcommand("frobenius", "exact Frobenius number of a coprime tuple");
    std::vector<int64_t> elements;
    bool check = false;
    cf->add_option("elements", elements, "generator elements, e.g. 16 19 33 39");
    cf->add_flag("--check", check, "also run the brute-force oracle and require agreement");

    // trace
    auto* ct = app.add_subcommand("trace", "show the codon-by-codon derivation of a chromosome");
    fs::path trace_grammar;
    std::string trace_chromosome;
    MappingLimits trace_limits;
    ct->add_option("--grammar", trace_grammar, "BNF grammar file")->required();
    ct->add_option("--chromosome", trace_chromosome, "comma-separated codons, e.g. 120,44,42,96,189,64")->required();
    ct->add_option("--max-wraps", trace_limits.max_wraps, "wrap limit")->capture_default_str();
    ct->add_option("--max-expansions", trace_limits.max_expansions, "expansion cap")->capture_default_str();

    // dataset
    auto* cd = app.add_subcommand("dataset", "materialize a tuple family into a CSV dataset");
    std::string ds_family;
    int64_t ds_start = 1, ds_count = 40;
    bool ds_no_filter = false;
    fs::path ds_out;
    int ds_jobs = 0;
    cd->add_option("--family", ds_family, "generators, e.g. \"x,x+3,2*x+1,2*x+7\"")->required();
    cd->add_option("--start", ds_start, "first parameter value")->required();
    cd->add_option("--count", ds_count, "number of rows")->capture_default_str();
    cd->add_flag("--no-filter", ds_no_filter, "do not skip non-coprime parameters (oracle will reject them)");
    cd->add_option("--out", ds_out, "output CSV path")->required();
    cd->add_option("--jobs", ds_jobs, "worker threads (0 = all cores)")->capture_default_str();
    std::string ds_config;
    cd->add_option("--config", ds_config, "key=value config file");

    // evolve
    auto* ce = app.add_subcommand("evolve", "run grammatical evolution against a dataset");
    fs::path ev_grammar, ev_data;
    GAOptions ev_options;
    ev_options.cfg.seed = seed_fallback;
    std::optional<fs::path> ev_out;
    ce->add_option("--grammar", ev_grammar, "BNF grammar file")->required();
    ce->add_option("--data", ev_data, "training dataset CSV")->required();
    ev_options.attach(ce);
    ce->add_option("--out", ev_out, "write RunResult JSON here (default: stdout)");
    std::string ev_config;
    ce->add_option("--config", ev_config, "key=value config file");

    // verify
    auto* cv = app.add_subcommand("verify", "sweep a conjectured formula against the exact oracle");
    std::string vf_name, vf_family, vf_formula, vf_oracle = "apery", vf_format = "json";
    std::optional<int64_t> vf_from, vf_to;
    std::optional<fs::path> vf_out;
    int vf_jobs = 0;
    bool vf_list = false;
    cv->add_option("--conjecture", vf_name, "built-in conjecture name (see --list)");
    cv->add_option("--family", vf_family, "generators, e.g. \"3*k+1,3*k+4,6*k+3,6*k+9\"");
    cv->add_option("--formula", vf_formula, "closed form; '/' means floor division");
    cv->add_option("--from", vf_from, "first parameter (default: the conjecture's k_min)");
    cv->add_option("--to", vf_to, "last parameter (default: 200)");
    cv->add_option("--oracle", vf_oracle, "apery | bruteforce")->check(CLI::IsMember({"apery", "bruteforce"}));
    cv->add_option("--format", vf_format, "json | text")->check(CLI::IsMember({"json", "text"}));
    cv->add_option("--out", vf_out, "write the JSON report here");
    cv->add_option("--jobs", vf_jobs, "worker threads (0 = all cores)")->capture_default_str();
    cv->add_flag("--list", vf_list, "list built-in conjectures and exit");
    std::string vf_config;
    cv->add_option("--config", vf_config, "key=value config file");

    // pipeline
    auto* cp = app.add_subcommand("pipeline", "dataset -> evolve -> promote -> verify, in one output directory");
    std::string pl_family;
    int64_t pl_start = 1, pl_count = 40;
    fs::path pl_grammar = "grammars/frobenius.bnf", pl_outdir = "frobevo_out";
    GAOptions pl_options;
    pl_options.cfg.seed = seed_fallback;
    std::optional<int64_t> pl_verify_to;
    bool pl_repair = false;
    cp->add_option("--family", pl_family, "generators, e.g. \"x,x+3,2*x+1,2*x+7\"")->required();
    cp->add_option("--start", pl_start, "first parameter value")->required();
    cp->add_option("--count", pl_count, "dataset rows")->capture_default_str();
    cp->add_option("--grammar", pl_grammar, "BNF grammar file")->capture_default_str();
    cp->add_option("--outdir", pl_outdir, "output directory")->capture_default_str();
    pl_options.attach(cp);
    cp->add_option("--verify-to", pl_verify_to, "verification ceiling (default: max(200, last training parameter))");
    cp->add_flag("--repair", pl_repair, "try additive constants in [-3,3] on the promoted formula");
    std::string pl_config;
    cp->add_option("--config", pl_config, "key=value config file");

    // scalar options take the last occurrence, so config-file values (spliced
    // in before explicit arguments) are overridden by the command line
    for (CLI::App* sub : {cf, ct, cd, ce, cv, cp})
      for (CLI::Option* opt : sub->get_options())
        if (opt->get_expected_min() >= 1 && opt->get_expected_max() == 1)
          opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    try {
      std::vector<std::string> args = expand_config(app, argc, argv);
      std::reverse(args.begin(), args.end());
      app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }

    if (cf->parsed()) return cmd_frobenius(elements, check);
    if (ct->parsed()) return cmd_trace(trace_grammar, trace_chromosome, trace_limits);
    if (cd->parsed())
      return cmd_dataset(ds_family, ds_start, ds_count, ds_no_filter, ds_out, ds_jobs);
    if (ce->parsed()) return cmd_evolve(ev_grammar, ev_data, ev_options, ev_out, ev_config);
    if (cv->parsed())
      return cmd_verify(vf_name, vf_family, vf_formula, vf_from, vf_to, vf_oracle, vf_format, vf_out,
                        vf_jobs, vf_list);
    if (cp->parsed())
      return cmd_pipeline(pl_family, pl_start, pl_count, pl_grammar, pl_outdir, pl_options, pl_verify_to,
                          pl_repair, pl_config);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
