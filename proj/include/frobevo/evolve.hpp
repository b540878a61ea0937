// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frobevo/dataset.hpp"
#include "frobevo/errors.hpp"
#include "frobevo/expr.hpp"
#include "frobevo/grammar.hpp"
#include "frobevo/mapper.hpp"
#include "frobevo/random.hpp"
#include "frobevo/util.hpp"

namespace frobevo {

// Fitness is a sum of absolute errors (lower is better). Individuals whose
// phenotype is invalid or cannot be evaluated carry the penalty sentinel,
// which ranks strictly worse than every finite value instead of being a
// large number mixed into arithmetic.
struct Fitness {
  std::optional<Rational> value;

  static Fitness penalty() { return Fitness{}; }
  static Fitness of(Rational v) { return Fitness{std::move(v)}; }

  bool valid() const { return value.has_value(); }
  bool is_zero() const { return valid() && value->is_zero(); }

  friend bool operator<(const Fitness& a, const Fitness& b) {
    if (a.valid() != b.valid()) return a.valid();
    if (!a.valid()) return false;  // penalties tie
    return *a.value < *b.value;
  }
  friend bool operator==(const Fitness& a, const Fitness& b) {
    return a.valid() == b.valid() && (!a.valid() || *a.value == *b.value);
  }

  std::string to_string() const { return valid() ? value->to_string() : "penalty"; }
  std::optional<double> to_double() const {
    return valid() ? std::optional<double>(value->to_double()) : std::nullopt;
  }
};

struct GAConfig {
  int population_size = 500;
  int generations = 100;
  double crossover_prob = 0.9;
  double mutation_prob = 0.1;
  int chromosome_len = 100;
  uint64_t seed = 0;
  int tournament_size = 3;
  int elitism = 1;
  Fitness invalid_penalty = Fitness::penalty();
  EvalMode fitness_mode = EvalMode::Rational;
  MappingLimits limits;
  int jobs = 0;  // worker cap for fitness evaluation; 0 = hardware

  void validate() const {
    if (population_size < 2) throw ConfigError("population_size must be >= 2");
    if (generations < 0) throw ConfigError("generations must be >= 0");
    if (crossover_prob < 0.0 || crossover_prob > 1.0) throw ConfigError("crossover_prob must be in [0,1]");
    if (mutation_prob < 0.0 || mutation_prob > 1.0) throw ConfigError("mutation_prob must be in [0,1]");
    if (chromosome_len < 1) throw ConfigError("chromosome_len must be >= 1");
    if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
    if (elitism < 0 || elitism >= population_size) throw ConfigError("elitism must be in [0, population_size)");
    if (limits.max_wraps < 0) throw ConfigError("max_wraps must be >= 0");
    if (limits.max_expansions < 1) throw ConfigError("max_expansions must be >= 1");
  }
};

struct Individual {
  Chromosome chromosome;
  Phenotype phenotype;
  std::optional<Expr> expr;  // parsed phenotype, when valid
  Fitness fitness;
  bool evaluated = false;
};

struct GenerationStats {
  Fitness best;
  std::optional<double> mean_valid;  // mean fitness over valid individuals
  int valid_count = 0;
};

struct RunResult {
  Individual best;  // best individual seen anywhere in the run
  std::vector<GenerationStats> history;
  GAConfig config;
  uint64_t seed = 0;
  uint64_t dataset_id = 0;
};

/// Sum over dataset rows of |e(param) - target|, computed exactly.
/// Zero iff the expression reproduces every target. Throws DivisionByZero or
/// Overflow when the expression cannot be evaluated; GA callers turn those
/// into the penalty fitness.
inline Rational fitness(const Expr& e, const Dataset& d, EvalMode mode) {
  Rational total(0);
  for (const auto& row : d.rows) total = total + (e.evaluate(row.param, mode) - Rational(row.target)).abs();
  return total;
}

namespace detail {

inline void evaluate_individual(Individual& ind, const Grammar& g, const Dataset& d, const GAConfig& cfg) {
  ind.phenotype = map_genotype(ind.chromosome, g, cfg.limits);
  ind.expr.reset();
  if (!ind.phenotype.valid()) {
    ind.fitness = cfg.invalid_penalty;
  } else {
    try {
      Expr e = Expr::parse_tokens(ind.phenotype.tokens);
      ind.fitness = Fitness::of(fitness(e, d, cfg.fitness_mode));
      ind.expr = std::move(e);
    } catch (const Error&) {  // division by zero, overflow
      ind.fitness = cfg.invalid_penalty;
    }
  }
  ind.evaluated = true;
}

inline void evaluate_population(std::vector<Individual>& pop, const Grammar& g, const Dataset& d,
                                const GAConfig& cfg) {
  parallel_for(pop.size(), cfg.jobs, [&](size_t i) {
    if (!pop[i].evaluated) evaluate_individual(pop[i], g, d, cfg);
  });
}

inline size_t best_index(const std::vector<Individual>& pop) {
  size_t best = 0;
  for (size_t i = 1; i < pop.size(); ++i)
    if (pop[i].fitness < pop[best].fitness) best = i;
  return best;
}

inline GenerationStats stats_of(const std::vector<Individual>& pop) {
  GenerationStats s;
  s.best = pop[best_index(pop)].fitness;
  double sum = 0.0;
  for (const auto& ind : pop)
    if (ind.fitness.valid()) {
      sum += ind.fitness.value->to_double();
      ++s.valid_count;
    }
  if (s.valid_count > 0) s.mean_valid = sum / s.valid_count;
  return s;
}

}  // namespace detail

/// One-point crossover at a codon boundary; cut in [1, len-1].
inline std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& a, const Chromosome& b,
                                                             size_t cut) {
  Chromosome c1, c2;
  c1.codons.assign(a.codons.begin(), a.codons.begin() + static_cast<std::ptrdiff_t>(cut));
  c1.codons.insert(c1.codons.end(), b.codons.begin() + static_cast<std::ptrdiff_t>(cut), b.codons.end());
  c2.codons.assign(b.codons.begin(), b.codons.begin() + static_cast<std::ptrdiff_t>(cut));
  c2.codons.insert(c2.codons.end(), a.codons.begin() + static_cast<std::ptrdiff_t>(cut), a.codons.end());
  return {std::move(c1), std::move(c2)};
}

/// One-bit mutation: flips bit `bit` of codon `index`.
inline void flip_bit(Chromosome& c, size_t index, int bit) {
  c.codons[index] = static_cast<uint8_t>(c.codons[index] ^ (1u << bit));
}

/// Generational GA over chromosomes: tournament selection, one-point
/// crossover, one-bit mutation, elitism. Fully deterministic for a given
/// (config, grammar, dataset, seed): all stochastic choices come from one
/// mt19937_64 stream consumed in a fixed order, and fitness evaluation is a
/// pure function fanned out over workers without touching that stream.
inline RunResult run(const GAConfig& cfg, const Grammar& g, const Dataset& d) {
  cfg.validate();
  Rng rng(cfg.seed);
  const size_t pop_size = static_cast<size_t>(cfg.population_size);
  const size_t len = static_cast<size_t>(cfg.chromosome_len);

  std::vector<Individual> pop(pop_size);
  for (auto& ind : pop) {
    ind.chromosome.codons.resize(len);
    for (auto& codon : ind.chromosome.codons) codon = static_cast<uint8_t>(rng.below(256));
  }
  detail::evaluate_population(pop, g, d, cfg);

  RunResult result;
  result.config = cfg;
  result.seed = cfg.seed;
  result.dataset_id = dataset_hash(d);
  result.best = pop[detail::best_index(pop)];
  result.history.reserve(static_cast<size_t>(cfg.generations));

  auto tournament = [&]() -> const Individual& {
    size_t winner = rng.below(pop_size);
    for (int i = 1; i < cfg.tournament_size; ++i) {
      size_t challenger = rng.below(pop_size);
      if (pop[challenger].fitness < pop[winner].fitness) winner = challenger;
    }
    return pop[winner];
  };
  auto mutate = [&](Individual& ind) {
    if (!rng.chance(cfg.mutation_prob)) return;
    size_t index = rng.below(len);
    int bit = static_cast<int>(rng.below(8));
    flip_bit(ind.chromosome, index, bit);
    ind.evaluated = false;
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<Individual> next;
    next.reserve(pop_size);

    if (cfg.elitism > 0) {
      std::vector<size_t> order(pop_size);
      for (size_t i = 0; i < pop_size; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (pop[a].fitness == pop[b].fitness) return a < b;
        return pop[a].fitness < pop[b].fitness;
      });
      for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[static_cast<size_t>(e)]]);
    }

    while (next.size() < pop_size) {
      const Individual& p1 = tournament();
      const Individual& p2 = tournament();
      Individual c1, c2;
      if (len > 1 && rng.chance(cfg.crossover_prob)) {
        size_t cut = 1 + rng.below(len - 1);
        auto [x1, x2] = one_point_crossover(p1.chromosome, p2.chromosome, cut);
        c1.chromosome = std::move(x1);
        c2.chromosome = std::move(x2);
      } else {
        // no crossover: children start as copies, fitness carried over
        c1 = p1;
        c2 = p2;
      }
      mutate(c1);
      next.push_back(std::move(c1));
      if (next.size() < pop_size) {
        mutate(c2);
        next.push_back(std::move(c2));
      }
    }

    detail::evaluate_population(next, g, d, cfg);
    pop = std::move(next);
    result.history.push_back(detail::stats_of(pop));

    size_t gen_best = detail::best_index(pop);
    if (pop[gen_best].fitness < result.best.fitness) result.best = pop[gen_best];
  }
  return result;
}

/// A promoted candidate: the best individual's expression with every division
/// floored, plus enough provenance to reproduce the run that found it.
struct ConjectureRecord {
  Expr formula;          // floorized
  std::string raw_text;  // phenotype as mapped, before floorization
  Fitness fitness;       // floor-division fitness on the training dataset
  uint64_t seed = 0;
  GAConfig config;
  uint64_t dataset_id = 0;
};

/// Promotes a best-of-run individual to a conjecture. The evolved expression
/// is floorized so the conjecture reads as an integer formula.
inline ConjectureRecord promote(const Individual& best, const GAConfig& cfg, uint64_t dataset_id,
                                const Dataset& training) {
  if (!best.phenotype.valid()) throw InvalidPhenotype("cannot promote an invalid phenotype");
  Expr e = best.expr ? *best.expr : Expr::parse_tokens(best.phenotype.tokens);
  ConjectureRecord rec;
  rec.formula = e.floorized();
  rec.raw_text = best.phenotype.text();
  rec.seed = cfg.seed;
  rec.config = cfg;
  rec.dataset_id = dataset_id;
  try {
    rec.fitness = Fitness::of(fitness(rec.formula, training, EvalMode::FloorDiv));
  } catch (const Error&) {
    rec.fitness = Fitness::penalty();
  }
  return rec;
}

inline ConjectureRecord promote(const RunResult& run_result, const Dataset& training) {
  return promote(run_result.best, run_result.config, run_result.dataset_id, training);
}

/// Optional post-processing for near-miss formulas: tries an additive
/// constant c in [-3, 3] on the promoted expression and keeps the best
/// floor-division fit (smallest |c| wins ties, so an already-exact formula
/// is left alone).
inline ConjectureRecord repair_constant(const ConjectureRecord& rec, const Dataset& training) {
  ConjectureRecord best = rec;
  for (int64_t c : {1, -1, 2, -2, 3, -3}) {
    Expr candidate = Expr::binary(c > 0 ? BinaryOp::Add : BinaryOp::Sub, rec.formula,
                                  Expr::constant(Rational(c > 0 ? c : -c)));
    Fitness f;
    try {
      f = Fitness::of(fitness(candidate, training, EvalMode::FloorDiv));
    } catch (const Error&) {
      continue;
    }
    if (f < best.fitness) {
      best.formula = candidate;
      best.fitness = f;
    }
  }
  return best;
}

}  // namespace frobevo
