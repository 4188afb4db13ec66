#include "surveyor/routes.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <random>

namespace surveyor {

double pairwise_cost(const VoxelGrid& grid, const Pose& from, const Pose& to,
                     const MotionLimits& limits) {
    const double yaw_time = yaw_distance(from.yaw, to.yaw) / limits.yaw_rate_max;
    if ((from.position - to.position).norm() < 1e-12)
        return yaw_time;
    const auto path = grid.astar_path(from.position, to.position);
    if (!path) return kUnreachableCost;
    return std::max(path->length / limits.v_max, yaw_time);
}

AtspMatrix build_atsp_matrix(const VoxelGrid& grid, const Pose& start,
                             const std::vector<Pose>& nodes,
                             const MotionLimits& limits) {
    const int n = static_cast<int>(nodes.size()) + 1;
    AtspMatrix m;
    m.n = n;
    m.cost.assign(static_cast<size_t>(n) * n, 0.0);
    auto pose_of = [&](int i) -> const Pose& { return i == 0 ? start : nodes[i - 1]; };
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            if (i == j) continue;
            m.at(i, j) = pairwise_cost(grid, pose_of(i), pose_of(j), limits);
        }
    return m;
}

double tour_cost(const AtspMatrix& m, const std::vector<int>& order) {
    double c = 0.0;
    int prev = 0;
    for (int node : order) {
        c += m.at(prev, node);
        prev = node;
    }
    return c;
}

namespace {

std::vector<int> nearest_neighbor_order(const AtspMatrix& m) {
    const int n = m.n;
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::vector<int> order;
    order.reserve(static_cast<size_t>(n) - 1);
    int cur = 0;
    used[0] = true;
    for (int step = 1; step < n; ++step) {
        int best = -1;
        double best_cost = 0.0;
        for (int j = 1; j < n; ++j) {
            if (used[j]) continue;
            const double c = m.at(cur, j);
            if (best < 0 || c < best_cost) {
                best = j;
                best_cost = c;
            }
        }
        used[best] = true;
        order.push_back(best);
        cur = best;
    }
    return order;
}

// First-improvement 2-opt for an open asymmetric path. Reversing a segment
// changes every directed edge inside it, so the delta is recomputed over the
// affected span.
bool two_opt_pass(const AtspMatrix& m, std::vector<int>& order) {
    const int k = static_cast<int>(order.size());
    auto node = [&](int idx) { return idx < 0 ? 0 : order[idx]; };
    for (int i = 0; i < k - 1; ++i)
        for (int j = i + 1; j < k; ++j) {
            // Reverse order[i..j].
            double before = m.at(node(i - 1), node(i));
            for (int t = i; t < j; ++t) before += m.at(node(t), node(t + 1));
            if (j + 1 < k) before += m.at(node(j), node(j + 1));

            double after = m.at(node(i - 1), node(j));
            for (int t = j; t > i; --t) after += m.at(node(t), node(t - 1));
            if (j + 1 < k) after += m.at(node(i), node(j + 1));

            if (after < before - 1e-12) {
                std::reverse(order.begin() + i, order.begin() + j + 1);
                return true;
            }
        }
    return false;
}

// Or-opt: relocate segments of length 1..3, first improvement. Candidate
// costs are evaluated in full; paths here stay short enough that the O(n)
// cost recomputation is irrelevant.
bool or_opt_pass(const AtspMatrix& m, std::vector<int>& order) {
    const int k = static_cast<int>(order.size());
    const double base = tour_cost(m, order);
    for (int len = 1; len <= 3 && len < k; ++len)
        for (int i = 0; i + len <= k; ++i) {
            std::vector<int> rest = order;
            std::vector<int> seg(rest.begin() + i, rest.begin() + i + len);
            rest.erase(rest.begin() + i, rest.begin() + i + len);
            for (int p = 0; p <= static_cast<int>(rest.size()); ++p) {
                if (p == i) continue;  // reinserting in place
                std::vector<int> cand = rest;
                cand.insert(cand.begin() + p, seg.begin(), seg.end());
                if (tour_cost(m, cand) < base - 1e-12) {
                    order = std::move(cand);
                    return true;
                }
            }
        }
    return false;
}

double local_search(const AtspMatrix& m, std::vector<int>& order) {
    while (two_opt_pass(m, order) || or_opt_pass(m, order)) {
    }
    return tour_cost(m, order);
}

}  // namespace

AtspSolution solve_atsp(const AtspMatrix& m, uint64_t seed) {
    AtspSolution best;
    const int n = m.n;
    if (n <= 1) return best;
    if (n == 2) {
        best.order = {1};
        best.cost = m.at(0, 1);
        best.has_unreachable_edge = best.cost >= kUnreachableCost;
        return best;
    }

    std::mt19937_64 rng(seed);
    constexpr int kRestarts = 4;
    for (int restart = 0; restart < kRestarts; ++restart) {
        std::vector<int> order;
        if (restart == 0) {
            order = nearest_neighbor_order(m);
        } else {
            order.resize(static_cast<size_t>(n) - 1);
            std::iota(order.begin(), order.end(), 1);
            std::shuffle(order.begin(), order.end(), rng);
        }
        const double cost = local_search(m, order);
        if (best.order.empty() || cost < best.cost) {
            best.order = std::move(order);
            best.cost = cost;
        }
    }

    best.has_unreachable_edge = false;
    int prev = 0;
    for (int node : best.order) {
        if (m.at(prev, node) >= kUnreachableCost) best.has_unreachable_edge = true;
        prev = node;
    }
    return best;
}

}  // namespace surveyor
