#include "surveyor/assign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "nlohmann/json.hpp"
#include "surveyor/routes.hpp"

namespace surveyor {

namespace {

bool mutually_visible(const Vec3& a, const Vec3& b, const VoxelGrid& grid) {
    return grid.raycast(a, b).clear();
}

}  // namespace

void VctSet::refresh(Vct& v) {
    Vec3 sum{};
    for (const Vec3& p : v.vp_positions) sum = sum + p;
    const double n = static_cast<double>(v.vp_positions.size());
    v.p_avg = sum * (1.0 / n);
    v.h_cost = lambda_h_ * (n - 1.0) * d_thr_;
}

int64_t VctSet::add_viewpoint(const Viewpoint5D& vp, const VoxelGrid& grid) {
    std::vector<std::pair<double, int64_t>> candidates;
    for (const auto& [id, v] : vcts_) {
        const double d = (v.p_avg - vp.position).norm();
        if (d <= d_thr_) candidates.push_back({d, id});
    }
    std::sort(candidates.begin(), candidates.end());

    for (const auto& [d, id] : candidates) {
        Vct& v = vcts_.at(id);
        bool ok = true;
        for (const Vec3& member : v.vp_positions) {
            if ((member - vp.position).norm() > d_thr_ ||
                !mutually_visible(member, vp.position, grid)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        v.vp_ids.push_back(vp.id);
        v.vp_positions.push_back(vp.position);
        refresh(v);
        ++version_;
        return id;
    }

    Vct v;
    v.id = next_id_++;
    v.vp_ids.push_back(vp.id);
    v.vp_positions.push_back(vp.position);
    refresh(v);
    const int64_t id = v.id;
    vcts_.emplace(id, std::move(v));
    ++version_;
    return id;
}

bool VctSet::mark_visited(int64_t vct_id, int64_t vp_id) {
    auto it = vcts_.find(vct_id);
    if (it == vcts_.end()) return false;
    Vct& v = it->second;
    auto pos = std::find(v.vp_ids.begin(), v.vp_ids.end(), vp_id);
    if (pos == v.vp_ids.end()) return false;
    const size_t k = static_cast<size_t>(pos - v.vp_ids.begin());
    v.vp_ids.erase(pos);
    v.vp_positions.erase(v.vp_positions.begin() + static_cast<long>(k));
    if (v.vp_ids.empty()) {
        vcts_.erase(it);
    } else {
        refresh(v);
    }
    ++version_;
    return true;
}

std::vector<int64_t> VctSet::open_ids() const {
    std::vector<int64_t> ids;
    ids.reserve(vcts_.size());
    for (const auto& [id, v] : vcts_) ids.push_back(id);
    return ids;
}

double AssignmentCostModel::depot(int agent, int64_t task_id) const {
    const int t = task_index.at(task_id);
    return depot_cost[static_cast<size_t>(agent) * static_cast<size_t>(n_tasks) +
                      static_cast<size_t>(t)];
}

double AssignmentCostModel::leg(int64_t from_id, int64_t to_id) const {
    const int a = task_index.at(from_id);
    const int b = task_index.at(to_id);
    return leg_cost[static_cast<size_t>(a) * static_cast<size_t>(n_tasks) +
                    static_cast<size_t>(b)];
}

double path_cost(const std::vector<int64_t>& path, int agent,
                 const AssignmentCostModel& model) {
    if (path.empty()) return 0.0;
    double cost = model.depot(agent, path[0]);
    for (size_t j = 0; j + 1 < path.size(); ++j) cost += model.leg(path[j], path[j + 1]);
    return cost;
}

double consistency_cost(const std::vector<int64_t>& path,
                        const std::vector<int64_t>& prev_path,
                        const AssignmentCostModel& model) {
    size_t k_same = 0;
    while (k_same < path.size() && k_same < prev_path.size() &&
           path[k_same] == prev_path[k_same])
        ++k_same;
    double cost = 0.0;
    double dsum = 0.0;
    for (size_t k = 0; k < k_same; ++k) {
        if (k > 0) dsum += model.leg(path[k - 1], path[k]);
        cost -= model.consistency_gain * std::exp(-model.consistency_decay * dsum);
    }
    return cost;
}

double fitness(const Individual& ind, const Individual* prev_best,
               const AssignmentCostModel& model) {
    double worst = 0.0;
    double total = 0.0;
    for (size_t i = 0; i < ind.paths.size(); ++i) {
        double c = path_cost(ind.paths[i], static_cast<int>(i), model);
        if (model.consistency_gain != 0.0 && prev_best &&
            i < prev_best->paths.size()) {
            c += consistency_cost(ind.paths[i], prev_best->paths[i], model);
        }
        worst = (i == 0) ? c : std::max(worst, c);
        total += c;
    }
    return -(worst + model.epsilon * total);
}

std::vector<int64_t> filter_path(const std::vector<int64_t>& path,
                                 const std::vector<int64_t>& open_ids) {
    std::vector<int64_t> out;
    for (int64_t id : path)
        if (std::find(open_ids.begin(), open_ids.end(), id) != open_ids.end())
            out.push_back(id);
    return out;
}

std::vector<Individual> init_population(const Individual* prev_best,
                                        const std::vector<int64_t>& open_ids,
                                        const std::vector<int64_t>& new_ids,
                                        int n_agents, int pop_size,
                                        uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Individual> pop;
    pop.reserve(static_cast<size_t>(pop_size));

    if (prev_best) {
        Individual base;
        base.paths.resize(static_cast<size_t>(n_agents));
        for (size_t i = 0; i < base.paths.size(); ++i) {
            if (i < prev_best->paths.size())
                base.paths[i] = filter_path(prev_best->paths[i], open_ids);
        }
        for (int m = 0; m < pop_size; ++m) {
            Individual ind = base;
            for (int64_t id : new_ids) {
                std::uniform_int_distribution<size_t> pick_path(
                    0, ind.paths.size() - 1);
                auto& path = ind.paths[pick_path(rng)];
                std::uniform_int_distribution<size_t> pick_pos(0, path.size());
                path.insert(path.begin() + static_cast<long>(pick_pos(rng)), id);
            }
            pop.push_back(std::move(ind));
        }
        return pop;
    }

    for (int m = 0; m < pop_size; ++m) {
        Individual ind;
        ind.paths.resize(static_cast<size_t>(n_agents));
        std::vector<int64_t> ids = open_ids;
        std::shuffle(ids.begin(), ids.end(), rng);
        std::uniform_int_distribution<size_t> pick_path(0, ind.paths.size() - 1);
        for (int64_t id : ids) ind.paths[pick_path(rng)].push_back(id);
        pop.push_back(std::move(ind));
    }
    return pop;
}

namespace {

void mutate(Individual& ind, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick_op(0, 3);
    std::vector<size_t> nonempty;
    for (size_t i = 0; i < ind.paths.size(); ++i)
        if (!ind.paths[i].empty()) nonempty.push_back(i);
    if (nonempty.empty()) return;

    for (int attempt = 0; attempt < 8; ++attempt) {
        const int op = pick_op(rng);
        std::uniform_int_distribution<size_t> pick_src(0, nonempty.size() - 1);
        auto& src = ind.paths[nonempty[pick_src(rng)]];
        std::uniform_int_distribution<size_t> pick_i(0, src.size() - 1);

        if (op == 0) {
            if (src.size() < 2) continue;
            size_t i = pick_i(rng), j = pick_i(rng);
            if (i == j) continue;
            if (i > j) std::swap(i, j);
            std::reverse(src.begin() + static_cast<long>(i),
                         src.begin() + static_cast<long>(j) + 1);
            return;
        }
        if (op == 1) {
            if (src.size() < 2) continue;
            const size_t i = pick_i(rng);
            const int64_t id = src[i];
            src.erase(src.begin() + static_cast<long>(i));
            std::uniform_int_distribution<size_t> pick_pos(0, src.size());
            size_t j = pick_pos(rng);
            if (j == i) j = (j + 1) % (src.size() + 1);
            src.insert(src.begin() + static_cast<long>(j), id);
            return;
        }
        if (op == 2) {
            if (ind.paths.size() < 2) continue;
            std::uniform_int_distribution<size_t> pick_dst(0, ind.paths.size() - 1);
            auto& dst = ind.paths[pick_dst(rng)];
            if (&dst == &src) continue;
            const size_t i = pick_i(rng);
            const int64_t id = src[i];
            src.erase(src.begin() + static_cast<long>(i));
            std::uniform_int_distribution<size_t> pick_pos(0, dst.size());
            dst.insert(dst.begin() + static_cast<long>(pick_pos(rng)), id);
            return;
        }
        if (nonempty.size() < 2) continue;
        auto& other = ind.paths[nonempty[pick_src(rng)]];
        if (&other == &src) continue;
        std::uniform_int_distribution<size_t> pick_j(0, other.size() - 1);
        std::swap(src[pick_i(rng)], other[pick_j(rng)]);
        return;
    }
}

}  // namespace

Individual run_ga(std::vector<Individual> population,
                  const AssignmentCostModel& model,
                  const Individual* prev_best, int generations,
                  const AssignParams& params, uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto& ind : population) ind.fitness = fitness(ind, prev_best, model);

    auto better = [](const Individual& a, const Individual& b) {
        return a.fitness > b.fitness;
    };
    Individual best = *std::max_element(
        population.begin(), population.end(),
        [&](const Individual& a, const Individual& b) { return better(b, a); });

    std::uniform_int_distribution<size_t> pick(0, population.size() - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    for (int gen = 0; gen < generations; ++gen) {
        std::vector<Individual> next;
        next.reserve(population.size());

        std::vector<size_t> order(population.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return population[a].fitness > population[b].fitness;
        });
        for (int e = 0; e < params.elites && e < static_cast<int>(order.size()); ++e)
            next.push_back(population[order[static_cast<size_t>(e)]]);

        while (next.size() < population.size()) {
            size_t winner = pick(rng);
            for (int t = 1; t < params.tournament; ++t) {
                const size_t rival = pick(rng);
                if (population[rival].fitness > population[winner].fitness)
                    winner = rival;
            }
            Individual child = population[winner];
            int n_mut = 1;
            while (n_mut < params.max_mutations && coin(rng) < 0.5) ++n_mut;
            for (int m = 0; m < n_mut; ++m) mutate(child, rng);
            child.fitness = fitness(child, prev_best, model);
            if (child.fitness > best.fitness) best = child;
            next.push_back(std::move(child));
        }
        population = std::move(next);
    }
    return best;
}

AssignmentCostModel Assigner::build_model(const VctSet& vcts,
                                          const std::vector<Vec3>& photographers,
                                          const VoxelGrid& grid,
                                          const DistanceField& field) {
    AssignmentCostModel m;
    m.n_agents = static_cast<int>(photographers.size());
    m.consistency_gain = params_.consistency_gain;
    m.consistency_decay = params_.consistency_decay;
    m.epsilon = params_.epsilon;

    const auto& clusters = vcts.clusters();
    for (const auto& [id, v] : clusters) {
        m.task_index[id] = static_cast<int>(m.task_ids.size());
        m.task_ids.push_back(id);
    }
    m.n_tasks = static_cast<int>(m.task_ids.size());

    auto path_len = [&](const Vec3& a, const Vec3& b) {
        auto res = grid.astar_path(a, b, params_.clearance, &field);
        return res ? res->length : kUnreachableCost;
    };

    m.depot_cost.resize(static_cast<size_t>(m.n_agents) *
                        static_cast<size_t>(m.n_tasks));
    for (int a = 0; a < m.n_agents; ++a)
        for (int t = 0; t < m.n_tasks; ++t) {
            const Vct& v = clusters.at(m.task_ids[static_cast<size_t>(t)]);
            m.depot_cost[static_cast<size_t>(a) * static_cast<size_t>(m.n_tasks) +
                         static_cast<size_t>(t)] =
                path_len(photographers[static_cast<size_t>(a)], v.p_avg) + v.h_cost;
        }

    // Legs between cluster centers are cached across cycles and only
    // recomputed when a center drifted past d_thr/2.
    for (const auto& [id, v] : clusters) {
        auto it = cache_anchor_.find(id);
        if (it == cache_anchor_.end() ||
            (it->second - v.p_avg).norm() > vcts.d_thr() * 0.5) {
            for (auto c = leg_cache_.begin(); c != leg_cache_.end();) {
                if (c->first.first == id || c->first.second == id)
                    c = leg_cache_.erase(c);
                else
                    ++c;
            }
            cache_anchor_[id] = v.p_avg;
        }
    }

    m.leg_cost.resize(static_cast<size_t>(m.n_tasks) *
                      static_cast<size_t>(m.n_tasks));
    for (int a = 0; a < m.n_tasks; ++a)
        for (int b = 0; b < m.n_tasks; ++b) {
            const int64_t ia = m.task_ids[static_cast<size_t>(a)];
            const int64_t ib = m.task_ids[static_cast<size_t>(b)];
            double len = 0.0;
            if (a != b) {
                const auto key = std::minmax(ia, ib);
                auto it = leg_cache_.find({key.first, key.second});
                if (it != leg_cache_.end()) {
                    len = it->second;
                } else {
                    len = path_len(clusters.at(ia).p_avg, clusters.at(ib).p_avg);
                    leg_cache_[{key.first, key.second}] = len;
                }
            }
            m.leg_cost[static_cast<size_t>(a) * static_cast<size_t>(m.n_tasks) +
                       static_cast<size_t>(b)] = len + clusters.at(ib).h_cost;
        }
    return m;
}

AssignmentOutcome Assigner::assignment_cycle(const VctSet& vcts,
                                             const std::vector<Vec3>& photographers,
                                             const VoxelGrid& grid,
                                             const DistanceField& field,
                                             uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n_agents = static_cast<int>(photographers.size());
    const std::vector<int64_t> open = vcts.open_ids();

    AssignmentOutcome out;
    out.cycle = cycle_++;
    out.k_same.assign(static_cast<size_t>(n_agents), 0);

    if (open.empty()) {
        out.best.paths.assign(static_cast<size_t>(n_agents), {});
        out.best.fitness = 0.0;
        prev_best_ = out.best;
        prev_open_ = open;
        has_prev_ = true;
    } else {
        AssignmentCostModel model = build_model(vcts, photographers, grid, field);

        Individual prev_filtered;
        const Individual* warm = nullptr;
        if (has_prev_) {
            prev_filtered.paths.resize(static_cast<size_t>(n_agents));
            for (size_t i = 0; i < prev_filtered.paths.size(); ++i) {
                if (i < prev_best_.paths.size())
                    prev_filtered.paths[i] = filter_path(prev_best_.paths[i], open);
            }
            warm = &prev_filtered;
        }

        std::vector<int64_t> fresh;
        for (int64_t id : open)
            if (std::find(prev_open_.begin(), prev_open_.end(), id) ==
                prev_open_.end())
                fresh.push_back(id);

        auto pop = init_population(warm, open, fresh, n_agents,
                                   params_.population, seed);
        Individual best =
            run_ga(std::move(pop), model, warm, params_.generations, params_,
                   seed ^ 0x9e3779b97f4a7c15ull);

        // Idle repair: hand the cheapest task to an empty path when that
        // strictly improves fitness.
        for (size_t i = 0; i < best.paths.size(); ++i) {
            if (!best.paths[i].empty()) continue;
            int64_t cheapest = -1;
            double cheapest_cost = std::numeric_limits<double>::infinity();
            for (int64_t id : open) {
                const double c = model.depot(static_cast<int>(i), id);
                if (c < cheapest_cost) {
                    cheapest_cost = c;
                    cheapest = id;
                }
            }
            if (cheapest < 0) continue;
            Individual trial = best;
            for (auto& path : trial.paths) {
                auto it = std::find(path.begin(), path.end(), cheapest);
                if (it != path.end()) {
                    path.erase(it);
                    break;
                }
            }
            trial.paths[i].push_back(cheapest);
            trial.fitness = fitness(trial, warm, model);
            if (trial.fitness > best.fitness) best = trial;
        }

        if (warm) {
            for (size_t i = 0; i < best.paths.size(); ++i) {
                const auto& prev = prev_filtered.paths[i];
                size_t k = 0;
                while (k < best.paths[i].size() && k < prev.size() &&
                       best.paths[i][k] == prev[k])
                    ++k;
                out.k_same[i] = static_cast<int>(k);
            }
        }

        out.best = best;
        prev_best_ = best;
        prev_open_ = open;
        has_prev_ = true;
    }

    out.ga_millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    nlohmann::json j{{"cycle", out.cycle},
                     {"n_vct", open.size()},
                     {"best_fitness", out.best.fitness},
                     {"k_same", out.k_same}};
    out.json_line = j.dump();
    return out;
}

}  // namespace surveyor
