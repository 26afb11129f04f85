#include "dynmo/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dynmo {

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dominates: length mismatch");
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strictly = true;
    }
    return strictly;
}

FrontPartition fast_nondominated_sort(std::span<const Vector> points) {
    const std::size_t n = points.size();
    FrontPartition fronts;
    if (n == 0) return fronts;

    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(points[p], points[q])) {
                dominated_by_me[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(points[q], points[p])) {
                dominated_by_me[q].push_back(p);
                ++domination_count[p];
            }
        }
    }

    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p)
        if (domination_count[p] == 0) current.push_back(p);

    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto p : current)
            for (auto q : dominated_by_me[p])
                if (--domination_count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(std::span<const Vector> front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) return std::vector<double>(n, inf);

    std::vector<double> distance(n, 0.0);
    std::vector<std::size_t> order(n);
    const std::size_t m = front.front().size();
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front[a][k] < front[b][k];
        });
        const double lo = front[order.front()][k];
        const double hi = front[order.back()][k];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double range = hi - lo;
        if (!(range > 0.0)) continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            distance[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / range;
        }
    }
    return distance;
}

std::vector<std::size_t> truncate_by_crowding(std::span<const Vector> points, std::size_t keep) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (keep >= points.size()) return order;
    const auto distance = crowding_distance(points);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distance[a] > distance[b]; });
    order.resize(keep);
    return order;
}

std::vector<Vector> nondominated_objectives(const Population& pop) {
    std::vector<Vector> objs;
    objs.reserve(pop.size());
    for (const auto& ind : pop) {
        if (!ind.evaluated())
            throw std::invalid_argument("nondominated_objectives: unevaluated individual");
        objs.push_back(*ind.f);
    }
    std::vector<Vector> out;
    if (objs.empty()) return out;
    const auto fronts = fast_nondominated_sort(objs);
    for (auto i : fronts.front()) out.push_back(objs[i]);
    return out;
}

}  // namespace dynmo
