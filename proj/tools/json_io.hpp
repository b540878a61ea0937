// SPDX-License-Identifier: Apache-2.0
//
// JSON shapes for run results, conjecture records, verification reports and
// run manifests. Key order is fixed (ordered_json) so identical runs yield
// byte-identical files.

#pragma once

#include <ctime>
#include <optional>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "frobevo/frobevo.hpp"
#include "json.hpp"

namespace frobevo::io {

using ordered_json = nlohmann::ordered_json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << data;
  if (!out) throw IoError("failed writing " + path.string());
}

inline std::string content_id(std::string_view data) { return "fnv1a64:" + fnv1a64_hex(data); }

inline std::string hex_id(uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return "fnv1a64:" + out;
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline ordered_json config_json(const GAConfig& cfg) {
  // jobs is omitted on purpose: worker fan-out never changes results, so it
  // has no place in anything hashed or compared byte-for-byte.
  return ordered_json{
      {"population_size", cfg.population_size},
      {"generations", cfg.generations},
      {"crossover_prob", cfg.crossover_prob},
      {"mutation_prob", cfg.mutation_prob},
      {"chromosome_len", cfg.chromosome_len},
      {"seed", cfg.seed},
      {"tournament_size", cfg.tournament_size},
      {"elitism", cfg.elitism},
      {"invalid_penalty", cfg.invalid_penalty.to_string()},
      {"fitness_mode", cfg.fitness_mode == EvalMode::Rational ? "rational" : "floor"},
      {"max_wraps", cfg.limits.max_wraps},
      {"max_expansions", cfg.limits.max_expansions},
  };
}

inline ordered_json individual_json(const Individual& ind) {
  ordered_json j;
  j["expression"] = ind.expr ? ordered_json(ind.expr->to_string()) : ordered_json(nullptr);
  j["phenotype"] = ind.phenotype.valid() ? ordered_json(ind.phenotype.text())
                                         : ordered_json(std::string(to_string(*ind.phenotype.invalid)));
  j["fitness"] = ind.fitness.to_string();
  j["codons_consumed"] = ind.phenotype.codons_consumed;
  j["wraps_used"] = ind.phenotype.wraps_used;
  j["chromosome"] = ind.chromosome.codons;
  return j;
}

inline ordered_json run_result_json(const RunResult& r) {
  ordered_json j;
  j["tool"] = "frobevo";
  j["version"] = kVersion;
  j["seed"] = r.seed;
  j["dataset_id"] = hex_id(r.dataset_id);
  j["config"] = config_json(r.config);
  j["best"] = individual_json(r.best);
  ordered_json hist = ordered_json::array();
  for (const auto& s : r.history) {
    ordered_json entry;
    entry["best"] = s.best.to_string();
    entry["mean_valid"] = s.mean_valid ? ordered_json(*s.mean_valid) : ordered_json(nullptr);
    entry["valid"] = s.valid_count;
    hist.push_back(std::move(entry));
  }
  j["history"] = std::move(hist);
  return j;
}

inline ordered_json conjecture_record_json(const ConjectureRecord& rec, const std::string& param_name,
                                           bool repaired) {
  ordered_json j;
  j["formula"] = rec.formula.to_string(param_name);
  j["phenotype"] = rec.raw_text;
  j["fitness_floor"] = rec.fitness.to_string();
  j["repaired"] = repaired;
  j["seed"] = rec.seed;
  j["dataset_id"] = hex_id(rec.dataset_id);
  j["config"] = config_json(rec.config);
  return j;
}

inline ordered_json report_json(const Conjecture& c, const VerifyReport& rep) {
  ordered_json j;
  j["conjecture"] = ordered_json{
      {"name", c.name},
      {"description", c.description},
      {"param", c.family.param_name},
      {"family", c.family.to_string()},
      {"formula", c.formula_text()},
      {"k_min", c.k_min},
  };
  j["from"] = rep.from;
  j["to"] = rep.to;
  j["matches"] = rep.matches;
  j["skipped"] = rep.skipped;
  ordered_json cxs = ordered_json::array();
  for (const auto& cx : rep.counterexamples) {
    cxs.push_back(ordered_json{{"k", cx.k},
                               {"tuple", cx.tuple},
                               {"oracle", cx.oracle_value},
                               {"formula", cx.formula_value.to_string()}});
  }
  j["counterexamples"] = std::move(cxs);
  j["verdict"] = rep.verified() ? "verified" : "refuted";
  return j;
}

inline std::string report_text(const Conjecture& c, const VerifyReport& rep) {
  std::ostringstream out;
  out << "conjecture " << c.name << ": g(" << c.family.to_string() << ") = " << c.formula_text() << "\n";
  out << "checked " << c.family.param_name << " = " << rep.from << ".." << rep.to << ": " << rep.matches
      << " matches, " << rep.counterexamples.size() << " counterexamples, " << rep.skipped.size()
      << " skipped\n";
  out << "verdict: " << (rep.verified() ? "VERIFIED" : "REFUTED") << "\n";
  size_t shown = 0;
  for (const auto& cx : rep.counterexamples) {
    if (++shown > 10) {
      out << "  ... " << rep.counterexamples.size() - 10 << " more\n";
      break;
    }
    out << "  " << c.family.param_name << " = " << cx.k << ": oracle " << cx.oracle_value << ", formula "
        << cx.formula_value.to_string() << "\n";
  }
  return out.str();
}

/// Run manifest: everything needed to reproduce an invocation byte-for-byte
/// (given the same build) — subcommand, effective configuration, seed, input
/// content hashes, tool version.
inline ordered_json manifest_json(const std::string& subcommand, const ordered_json& config,
                                  const std::vector<std::pair<std::string, std::string>>& input_hashes,
                                  const std::vector<std::string>& outputs,
                                  std::optional<uint64_t> seed = std::nullopt) {
  ordered_json j;
  j["tool"] = "frobevo";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  j["config"] = config;
  ordered_json inputs = ordered_json::object();
  for (const auto& [name, hash] : input_hashes) inputs[name] = hash;
  j["inputs"] = std::move(inputs);
  j["outputs"] = outputs;
  j["timestamp"] = utc_timestamp();
  return j;
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

}  // namespace frobevo::io
