#include "revo/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace revo {

namespace {

// Runs fn(0..n-1) across up to `workers` threads. Tasks must be independent
// (disjoint output slots, shared input read-only); scheduling order is then
// free to vary without affecting results.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t w = std::min<std::size_t>(std::max(workers, 1), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t i = 0; i < w; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::string gen_label(const char* what, long generation) {
  return std::string("engine/") + what + "/g" + std::to_string(generation);
}

}  // namespace

Engine::Engine(ValidatedConfig cfg, const DynamicProblem& problem)
    : cfg_(std::move(cfg)), problem_(problem) {
  if (problem_.dimension() != cfg_.values.dimension)
    throw ConfigError({"problem dimension " + std::to_string(problem_.dimension()) +
                       " does not match config dimension " +
                       std::to_string(cfg_.values.dimension)});
}

void Engine::initialize() {
  const RunConfig& cfg = cfg_.values;
  const Bounds& bounds = problem_.bounds();
  world_ = WorldState{};
  record_ = RunRecord{};
  record_.config = config_echo(cfg);
  gap_sum_ = 0.0;
  optimum_known_ = true;

  RandomStream genome_stream = derive_stream(cfg.seed, "engine/init/genomes");
  world_.individuals.resize(cfg.population_size);
  for (int i = 0; i < cfg.population_size; ++i) {
    Individual& ind = world_.individuals[i];
    ind.genome.resize(cfg.dimension);
    for (int d = 0; d < cfg.dimension; ++d)
      ind.genome[d] = genome_stream.next_in(bounds[d].lo, bounds[d].hi);
    ind.allegiance = static_cast<BeliefId>(i % cfg.initial_belief_count);
    ind.age = 0;
  }
  evaluate_all(0);

  std::size_t history_capacity = static_cast<std::size_t>(cfg.improvement_window) + 1;
  for (int b = 0; b < cfg.initial_belief_count; ++b) {
    BeliefId id = static_cast<BeliefId>(b);
    world_.systems.emplace(id, make_empty_system(id, bounds, history_capacity, 0));
  }
  world_.next_id = static_cast<BeliefId>(cfg.initial_belief_count);

  auto followers = followers_by_system();
  for (auto& [id, belief] : world_.systems)
    update(belief, world_.individuals, followers[id], cfg.elite_fraction);

  RandomStream sentinel_stream = derive_stream(cfg.seed, "engine/init/sentinels");
  world_.sentinels = init_sentinels(problem_, cfg.sentinel_count, sentinel_stream, 0);

  world_.census = build_census(world_.individuals, world_.systems,
                               cfg.improvement_window, cfg.rate_floor);
  last_hegemon_ = world_.census.hegemon;
  initialized_ = true;

  double div = diversity(representative_genomes(world_.systems));
  emit_row(0.0, div, 0, 0);
}

void Engine::evaluate_all(long t) {
  parallel_for(world_.individuals.size(), cfg_.values.workers, [&](std::size_t i) {
    Individual& ind = world_.individuals[i];
    ind.fitness = problem_.evaluate(ind.genome, t);
  });
}

void Engine::restart_population(long t) {
  const RunConfig& cfg = cfg_.values;
  const Bounds& bounds = problem_.bounds();
  RandomStream stream = derive_stream(cfg.seed, gen_label("restart", world_.generation));
  for (auto& ind : world_.individuals) {
    for (int d = 0; d < cfg.dimension; ++d)
      ind.genome[d] = stream.next_in(bounds[d].lo, bounds[d].hi);
    ind.age = 0;
  }
  evaluate_all(t);
  // forget everything learned before the change
  std::size_t history_capacity = static_cast<std::size_t>(cfg.improvement_window) + 1;
  for (auto& [id, belief] : world_.systems) {
    long founded = belief.founded_at;
    belief = make_empty_system(id, bounds, history_capacity, founded);
  }
}

std::map<BeliefId, std::vector<int>> Engine::followers_by_system() const {
  std::map<BeliefId, std::vector<int>> followers;
  for (std::size_t i = 0; i < world_.individuals.size(); ++i)
    followers[world_.individuals[i].allegiance].push_back(static_cast<int>(i));
  for (const auto& [id, list] : followers) {
    if (!world_.systems.count(id))
      throw ContractViolation("followers recorded for dead system " +
                              std::to_string(id));
  }
  return followers;
}

Genome Engine::plain_mutate(std::span<const double> parent,
                            RandomStream& stream) const {
  const Bounds& bounds = problem_.bounds();
  Genome child(parent.begin(), parent.end());
  for (std::size_t d = 0; d < child.size(); ++d) {
    if (stream.next_double() >= cfg_.values.mutation_rate) continue;
    child[d] += stream.next_in(-1.0, 1.0) * 0.1 * bounds[d].width();
    child[d] = bounds[d].clamp(child[d]);
  }
  return child;
}

void Engine::reproduce_subcultures() {
  const RunConfig& cfg = cfg_.values;
  bool cultural = cfg.algo == AlgoKind::Revolutionary ||
                  cfg.algo == AlgoKind::StaticCultural;
  auto followers = followers_by_system();
  std::vector<std::pair<BeliefId, std::vector<int>>> tasks(followers.begin(),
                                                           followers.end());
  std::vector<SubcultureResult> results(tasks.size());
  long t = world_.time_step;

  parallel_for(tasks.size(), cfg.workers, [&](std::size_t task_idx) {
    const auto& [id, member_idx] = tasks[task_idx];
    const BeliefSystem& belief = world_.systems.at(id);
    const std::vector<Individual>& pop = world_.individuals;
    int count = static_cast<int>(member_idx.size());
    RandomStream stream = derive_stream(
        cfg.seed, gen_label("repro", world_.generation) + "/b" + std::to_string(id));

    auto better = [&](int a, int b) {  // ties keep the first draw
      return pop[member_idx[b]].fitness < pop[member_idx[a]].fitness ? b : a;
    };
    auto tournament = [&]() {
      int a = static_cast<int>(stream.next_below(count));
      int b = static_cast<int>(stream.next_below(count));
      return member_idx[better(a, b)];
    };

    int elite = member_idx[0];
    for (int m : member_idx)
      if (pop[m].fitness < pop[elite].fitness) elite = m;

    std::vector<Individual> offspring;
    offspring.reserve(count);
    for (int k = 0; k < count; ++k) {
      int parent_a = tournament();
      int parent_b = tournament();
      Genome child;
      if (stream.next_double() < cfg.crossover_rate) {
        child.resize(cfg.dimension);
        for (int d = 0; d < cfg.dimension; ++d)
          child[d] = stream.next_double() < 0.5 ? pop[parent_a].genome[d]
                                                : pop[parent_b].genome[d];
      } else {
        child = pop[parent_a].genome;
      }
      Genome mutated = cultural
                           ? influence(belief, child, stream, cfg.mutation_rate,
                                       cfg.influence_scale, problem_.bounds())
                           : plain_mutate(child, stream);
      Individual born;
      born.genome = std::move(mutated);
      born.fitness = problem_.evaluate(born.genome, t);
      born.allegiance = id;
      born.age = 0;
      offspring.push_back(std::move(born));
    }

    // elitism of one: the subculture's best survivor stays if no offspring
    // beats it
    int best_off = 0;
    int worst_off = 0;
    for (int k = 1; k < count; ++k) {
      if (offspring[k].fitness < offspring[best_off].fitness) best_off = k;
      if (offspring[k].fitness > offspring[worst_off].fitness) worst_off = k;
    }
    if (pop[elite].fitness < offspring[best_off].fitness) {
      Individual survivor = pop[elite];
      survivor.age += 1;
      offspring[worst_off] = std::move(survivor);
    }

    results[task_idx] = SubcultureResult{id, std::move(offspring)};
  });

  std::vector<Individual> merged;
  merged.reserve(world_.individuals.size());
  for (auto& result : results)
    for (auto& ind : result.members) merged.push_back(std::move(ind));
  world_.individuals = std::move(merged);
  check_conservation("procreation");
}

void Engine::migrate_islands() {
  auto followers = followers_by_system();
  std::vector<BeliefId> ids;
  ids.reserve(followers.size());
  for (const auto& [id, list] : followers) ids.push_back(id);
  int k = static_cast<int>(ids.size());

  struct Move {
    int victim;
    Individual migrant;
  };
  std::vector<Move> moves;
  moves.reserve(k);
  const auto& pop = world_.individuals;
  for (int i = 0; i < k; ++i) {
    BeliefId donor = ids[i];
    BeliefId target = ids[(i + 1) % k];
    const auto& donor_members = followers[donor];
    const auto& target_members = followers[target];
    int best = donor_members[0];
    for (int m : donor_members)
      if (pop[m].fitness < pop[best].fitness) best = m;
    int worst = target_members[0];
    for (int m : target_members)
      if (pop[m].fitness >= pop[worst].fitness) worst = m;
    Individual migrant = pop[best];
    migrant.allegiance = target;
    moves.push_back(Move{worst, std::move(migrant)});
  }
  for (auto& move : moves) world_.individuals[move.victim] = std::move(move.migrant);
  check_conservation("migration");
}

void Engine::step() {
  if (!initialized_) throw ContractViolation("step() before initialize()");
  const RunConfig& cfg = cfg_.values;
  world_.generation += 1;
  world_.time_step = world_.generation;
  long t = world_.time_step;
  long gen = world_.generation;

  // (1) change detection
  note_phase("detect");
  double dp = detect_change(problem_, world_.sentinels, t, cfg.change_tolerance);
  if (dp > 0.0) {
    record_.events.push_back(RunEvent{gen, "change", "dp=" + format_double(dp)});
    if (cfg.algo == AlgoKind::RestartGa) {
      restart_population(t);
      record_.events.push_back(RunEvent{gen, "restart", ""});
    } else {
      evaluate_all(t);
      for (auto& [id, belief] : world_.systems) {
        if (!belief.situational_genome.empty())
          belief.situational_fitness =
              problem_.evaluate(belief.situational_genome, t);
      }
    }
  }

  // (2)+(3) influence, procreation, offspring evaluation
  note_phase("influence");
  note_phase("procreate");
  note_phase("evaluate");
  reproduce_subcultures();

  // (4) belief update
  note_phase("update");
  {
    auto followers = followers_by_system();
    for (auto& [id, belief] : world_.systems) {
      auto it = followers.find(id);
      if (it == followers.end())
        throw ContractViolation("system " + std::to_string(id) +
                                " survived with no followers");
      update(belief, world_.individuals, it->second, cfg.elite_fraction);
    }
  }

  if (cfg.algo == AlgoKind::IslandGa && cfg.migration_interval > 0 &&
      gen % cfg.migration_interval == 0) {
    note_phase("migrate");
    migrate_islands();
    record_.events.push_back(RunEvent{gen, "migration", ""});
  }

  // (5) spawn signal from the post-update snapshot
  note_phase("spawn");
  Census snapshot = build_census(world_.individuals, world_.systems,
                                 cfg.improvement_window, cfg.rate_floor);
  double div = diversity(representative_genomes(world_.systems));
  double p_spawn = spawn_probability(dp, div);

  int foundings = 0;
  int deletions = 0;
  if (cfg.algo != AlgoKind::IslandGa) {
    // (6) allegiance re-sampling; dissident founding is a side product
    note_phase("allegiance");
    RandomStream stream = derive_stream(cfg.seed, gen_label("alleg", gen));
    int cap = static_cast<int>(
        std::ceil(cfg.max_foundings_fraction * cfg.population_size));
    std::size_t history_capacity =
        static_cast<std::size_t>(cfg.improvement_window) + 1;
    for (auto& ind : world_.individuals) {
      double weight =
          cfg.spawning ? spawn_weight_for(ind, p_spawn, snapshot, cfg.stagnation_boost)
                       : 0.0;
      AllegianceDistribution dist = allegiance_distribution(snapshot, ind, weight);
      std::optional<BeliefId> draw = sample_allegiance(dist, stream);
      if (!draw) {
        if (foundings < cap) {
          BeliefId id = world_.next_id++;
          world_.systems.emplace(
              id, found(id, ind, cfg.widen, problem_.bounds(), history_capacity, gen));
          ind.allegiance = id;
          ++foundings;
        }
        // past the cap the draw is consumed and the individual stays put
      } else {
        ind.allegiance = *draw;
      }
    }

    // (7) cull followerless systems
    note_phase("cull");
    std::map<BeliefId, int> counts;
    for (const auto& ind : world_.individuals) ++counts[ind.allegiance];
    CullOutcome outcome = cull(world_.systems, counts);
    deletions = static_cast<int>(outcome.removed.size());
    if (outcome.guard_kept_largest)
      record_.events.push_back(RunEvent{gen, "cull-guard", ""});
    check_conservation("cull");
  }

  // (8) final census + hegemon
  note_phase("census");
  world_.census = build_census(world_.individuals, world_.systems,
                               cfg.improvement_window, cfg.rate_floor);
  if (world_.census.hegemon != last_hegemon_) {
    record_.events.push_back(
        RunEvent{gen, "hegemon",
                 std::to_string(last_hegemon_) + "->" +
                     std::to_string(world_.census.hegemon)});
    last_hegemon_ = world_.census.hegemon;
  }

  // (9) record
  note_phase("record");
  emit_row(dp, div, foundings, deletions);
}

void Engine::emit_row(double dp, double div, int foundings, int deletions) {
  const RunConfig& cfg = cfg_.values;
  const Individual* best = &world_.individuals.front();
  for (const auto& ind : world_.individuals)
    if (ind.fitness < best->fitness) best = &ind;

  GenerationRow row;
  row.generation = world_.generation;
  row.time_step = world_.time_step;
  row.best_fitness = best->fitness;

  std::optional<double> optimum = problem_.known_optimum(world_.time_step);
  if (!optimum) optimum_known_ = false;
  if (optimum_known_) {
    gap_sum_ += best->fitness - *optimum;
    row.known_optimum = *optimum;
    row.offline_error = gap_sum_ / static_cast<double>(record_.rows.size() + 1);
  } else {
    row.known_optimum = std::nan("");
    row.offline_error = std::nan("");
  }

  row.n_systems = world_.census.system_count();
  row.hegemon_id = world_.census.hegemon;
  const CensusEntry* hegemon = world_.census.find(world_.census.hegemon);
  row.hegemon_share =
      static_cast<double>(hegemon->count) / static_cast<double>(cfg.population_size);
  row.dp = dp;
  row.div = div;
  row.foundings = foundings;
  row.deletions = deletions;
  row.census.reserve(world_.census.entries.size());
  for (const auto& entry : world_.census.entries)
    row.census.emplace_back(entry.id, entry.count);
  record_.rows.push_back(std::move(row));

  record_.best_genome = best->genome;
  record_.best_fitness = best->fitness;
}

void Engine::check_conservation(const char* where) const {
  if (world_.individuals.size() !=
      static_cast<std::size_t>(cfg_.values.population_size))
    throw ContractViolation(std::string("population size drifted during ") + where);
  for (const auto& ind : world_.individuals) {
    if (!world_.systems.count(ind.allegiance))
      throw ContractViolation(std::string("dangling allegiance after ") + where);
  }
}

RunRecord Engine::run() {
  initialize();
  for (int g = 0; g < cfg_.values.generations; ++g) step();
  return record_;
}

RunRecord run(const ValidatedConfig& cfg, const DynamicProblem& problem) {
  Engine engine(cfg, problem);
  return engine.run();
}

}  // namespace revo
