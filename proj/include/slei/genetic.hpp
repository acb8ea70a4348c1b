#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace slei {

struct GaParams {
  int population = 50;
  int generations = 100;
  double mutation_rate = 0.1;
  int elitism = 2;
};

/// An ordering of k items plus one option index per item.
struct Chromosome {
  std::vector<int> order;
  std::vector<int> choice;  // indexed by item, not by position
};

using ChromosomeCost = std::function<std::optional<std::int64_t>(const Chromosome&)>;

struct GaResult {
  Chromosome best;
  std::optional<std::int64_t> cost;
};

/// Order crossover on the permutation, uniform crossover on the options, swap
/// mutation. Fitness is 1/cost; infeasible chromosomes have fitness zero.
GaResult run_ga(const std::vector<int>& options_per_item, const ChromosomeCost& cost, std::mt19937_64& rng,
                const GaParams& params = {});

}  // namespace slei
