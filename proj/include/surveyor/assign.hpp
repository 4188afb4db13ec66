#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "surveyor/grid.hpp"
#include "surveyor/sensors.hpp"

namespace surveyor {

struct AssignParams {
    double lambda_h = 0.6;
    double d_thr = 6.0;
    double epsilon = 1e-4;
    double consistency_gain = 50.0;   // R in the prefix reward
    double consistency_decay = 0.1;   // alpha
    int generations = 700;
    int population = 32;
    int tournament = 3;
    int elites = 2;
    int max_mutations = 4;
    double clearance = 0.8;
};

// Cluster of nearby, mutually visible viewpoints handled as one task.
struct Vct {
    int64_t id = 0;
    std::vector<int64_t> vp_ids;
    std::vector<Vec3> vp_positions;
    Vec3 p_avg{};
    double h_cost = 0.0;
};

class VctSet {
  public:
    explicit VctSet(double lambda_h = 0.6, double d_thr = 6.0)
        : lambda_h_(lambda_h), d_thr_(d_thr) {}

    // Distance-priority matching: the viewpoint joins the nearest cluster
    // whose members are all within d_thr and mutually visible, else a new
    // singleton cluster is created. Returns the cluster id.
    int64_t add_viewpoint(const Viewpoint5D& vp, const VoxelGrid& grid);

    // Removes a visited viewpoint from its cluster; empty clusters are
    // deleted. Returns false when either id is unknown.
    bool mark_visited(int64_t vct_id, int64_t vp_id);

    const std::map<int64_t, Vct>& clusters() const { return vcts_; }
    std::vector<int64_t> open_ids() const;
    uint64_t version() const { return version_; }
    double d_thr() const { return d_thr_; }

  private:
    void refresh(Vct& v);

    double lambda_h_;
    double d_thr_;
    std::map<int64_t, Vct> vcts_;
    int64_t next_id_ = 0;
    uint64_t version_ = 0;
};

// One ordered task-id list per photographer.
struct Individual {
    std::vector<std::vector<int64_t>> paths;
    double fitness = 0.0;
};

struct AssignmentCostModel {
    int n_agents = 0;
    int n_tasks = 0;
    std::vector<int64_t> task_ids;                  // index -> cluster id
    std::unordered_map<int64_t, int> task_index;    // cluster id -> index
    std::vector<double> depot_cost;                 // n_agents x n_tasks
    std::vector<double> leg_cost;                   // n_tasks x n_tasks
    double consistency_gain = 50.0;
    double consistency_decay = 0.1;
    double epsilon = 1e-4;

    double depot(int agent, int64_t task_id) const;
    double leg(int64_t from_id, int64_t to_id) const;
};

double path_cost(const std::vector<int64_t>& path, int agent,
                 const AssignmentCostModel& model);

// prev_path must already be filtered to ids that still exist.
double consistency_cost(const std::vector<int64_t>& path,
                        const std::vector<int64_t>& prev_path,
                        const AssignmentCostModel& model);

double fitness(const Individual& ind, const Individual* prev_best,
               const AssignmentCostModel& model);

std::vector<int64_t> filter_path(const std::vector<int64_t>& path,
                                 const std::vector<int64_t>& open_ids);

std::vector<Individual> init_population(const Individual* prev_best,
                                        const std::vector<int64_t>& open_ids,
                                        const std::vector<int64_t>& new_ids,
                                        int n_agents, int pop_size,
                                        uint64_t seed);

Individual run_ga(std::vector<Individual> population,
                  const AssignmentCostModel& model,
                  const Individual* prev_best, int generations,
                  const AssignParams& params, uint64_t seed);

struct AssignmentOutcome {
    Individual best;
    std::vector<int> k_same;
    int cycle = 0;
    int64_t ga_millis = 0;
    std::string json_line;
};

class Assigner {
  public:
    explicit Assigner(AssignParams params = {}) : params_(params) {}

    AssignmentOutcome assignment_cycle(const VctSet& vcts,
                                       const std::vector<Vec3>& photographers,
                                       const VoxelGrid& grid,
                                       const DistanceField& field,
                                       uint64_t seed);

    const AssignParams& params() const { return params_; }
    bool has_previous() const { return has_prev_; }
    const Individual& previous_best() const { return prev_best_; }

  private:
    AssignmentCostModel build_model(const VctSet& vcts,
                                    const std::vector<Vec3>& photographers,
                                    const VoxelGrid& grid,
                                    const DistanceField& field);

    AssignParams params_;
    Individual prev_best_;
    bool has_prev_ = false;
    std::vector<int64_t> prev_open_;
    int cycle_ = 0;
    std::map<std::pair<int64_t, int64_t>, double> leg_cache_;
    std::unordered_map<int64_t, Vec3> cache_anchor_;
};

}  // namespace surveyor
