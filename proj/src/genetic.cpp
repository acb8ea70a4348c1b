#include "slei/genetic.hpp"

#include <algorithm>
#include <numeric>

namespace slei {

namespace {

struct Individual {
  Chromosome genes;
  std::optional<std::int64_t> cost;
};

double fitness(const Individual& ind) {
  if (!ind.cost) return 0.0;
  return 1.0 / static_cast<double>(std::max<std::int64_t>(*ind.cost, 0) + 1);
}

bool fitter(const Individual& a, const Individual& b) {
  if (a.cost.has_value() != b.cost.has_value()) return a.cost.has_value();
  if (!a.cost) return false;
  if (*a.cost != *b.cost) return *a.cost < *b.cost;
  if (a.genes.order != b.genes.order) return a.genes.order < b.genes.order;
  return a.genes.choice < b.genes.choice;
}

std::vector<int> order_crossover(const std::vector<int>& p1, const std::vector<int>& p2, std::mt19937_64& rng) {
  const int n = static_cast<int>(p1.size());
  if (n < 2) return p1;
  std::uniform_int_distribution<int> pick(0, n - 1);
  int a = pick(rng), b = pick(rng);
  if (a > b) std::swap(a, b);
  std::vector<int> child(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int i = a; i <= b; ++i) {
    child[static_cast<std::size_t>(i)] = p1[static_cast<std::size_t>(i)];
    used[static_cast<std::size_t>(p1[static_cast<std::size_t>(i)])] = true;
  }
  int pos = (b + 1) % n;
  for (int k = 0; k < n; ++k) {
    const int gene = p2[static_cast<std::size_t>((b + 1 + k) % n)];
    if (used[static_cast<std::size_t>(gene)]) continue;
    child[static_cast<std::size_t>(pos)] = gene;
    used[static_cast<std::size_t>(gene)] = true;
    pos = (pos + 1) % n;
  }
  return child;
}

}  // namespace

GaResult run_ga(const std::vector<int>& options_per_item, const ChromosomeCost& cost, std::mt19937_64& rng,
                const GaParams& params) {
  const int k = static_cast<int>(options_per_item.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_choice = [&](int item) {
    return std::uniform_int_distribution<int>(0, options_per_item[static_cast<std::size_t>(item)] - 1)(rng);
  };
  auto evaluate = [&](Individual& ind) { ind.cost = cost(ind.genes); };

  std::vector<Individual> pop(static_cast<std::size_t>(std::max(params.population, 2)));
  for (auto& ind : pop) {
    ind.genes.order.resize(static_cast<std::size_t>(k));
    std::iota(ind.genes.order.begin(), ind.genes.order.end(), 0);
    std::shuffle(ind.genes.order.begin(), ind.genes.order.end(), rng);
    ind.genes.choice.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) ind.genes.choice[static_cast<std::size_t>(i)] = random_choice(i);
    evaluate(ind);
  }
  auto tournament = [&]() -> const Individual& {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const auto& a = pop[pick(rng)];
    const auto& b = pop[pick(rng)];
    return fitness(a) >= fitness(b) ? a : b;
  };
  for (int gen = 0; gen < params.generations; ++gen) {
    std::sort(pop.begin(), pop.end(), fitter);
    std::vector<Individual> next(pop.begin(), pop.begin() + std::min<std::ptrdiff_t>(params.elitism, pop.size()));
    while (next.size() < pop.size()) {
      const auto& p1 = tournament();
      const auto& p2 = tournament();
      Individual child;
      child.genes.order = order_crossover(p1.genes.order, p2.genes.order, rng);
      child.genes.choice.resize(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i)
        child.genes.choice[static_cast<std::size_t>(i)] =
            unit(rng) < 0.5 ? p1.genes.choice[static_cast<std::size_t>(i)] : p2.genes.choice[static_cast<std::size_t>(i)];
      if (k >= 2 && unit(rng) < params.mutation_rate) {
        std::uniform_int_distribution<int> pick(0, k - 1);
        std::swap(child.genes.order[static_cast<std::size_t>(pick(rng))],
                  child.genes.order[static_cast<std::size_t>(pick(rng))]);
      }
      for (int i = 0; i < k; ++i)
        if (unit(rng) < params.mutation_rate) child.genes.choice[static_cast<std::size_t>(i)] = random_choice(i);
      evaluate(child);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
  }
  std::sort(pop.begin(), pop.end(), fitter);
  return {pop.front().genes, pop.front().cost};
}

}  // namespace slei
