#include "prefco/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "prefco/error.hpp"

namespace prefco {

Permutation canonical_tour(std::span<const int> perm) {
    const std::size_t n = perm.size();
    const auto zero = std::find(perm.begin(), perm.end(), 0);
    if (zero == perm.end()) fail(ErrorCode::kInvalidTour, "tour does not contain node 0");
    Permutation out(perm.begin(), perm.end());
    std::rotate(out.begin(), out.begin() + (zero - perm.begin()), out.end());
    if (n > 2 && out[1] > out[n - 1]) std::reverse(out.begin() + 1, out.end());
    return out;
}

OracleResult solve_exhaustive(const Instance& inst) {
    const std::size_t n = inst.size();
    if (n > kMaxExhaustiveNodes) {
        fail(ErrorCode::kTooLarge, "exhaustive search is limited to " + std::to_string(kMaxExhaustiveNodes) +
                                       " nodes, got " + std::to_string(n));
    }
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    OracleResult best;
    best.method = OracleMethod::kExhaustive;
    best.best_length = std::numeric_limits<double>::infinity();
    // next_permutation over positions 1..n-1 visits permutations in lexicographic
    // order, so a strict < keeps the lexicographically smallest optimum.
    do {
        if (perm[1] > perm[n - 1]) continue;  // reversed duplicate
        const double len = tour_length(inst, perm);
        if (len < best.best_length) {
            best.best_length = len;
            best.best_perm = perm;
        }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

OracleResult solve_held_karp(const Instance& inst, std::size_t max_nodes) {
    const std::size_t n = inst.size();
    if (n > max_nodes) {
        fail(ErrorCode::kTooLarge,
             "Held-Karp is limited to " + std::to_string(max_nodes) + " nodes, got " + std::to_string(n));
    }
    if (n > 30) fail(ErrorCode::kTooLarge, "Held-Karp subset table cannot exceed 30 nodes");

    // Node 0 is the fixed start; subsets range over nodes 1..n-1 (bit k-1 <-> node k).
    const std::size_t m = n - 1;
    const std::size_t full = (std::size_t{1} << m) - 1;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> cost((full + 1) * m, kInf);
    std::vector<std::int8_t> parent((full + 1) * m, -1);

    for (std::size_t k = 0; k < m; ++k) cost[(std::size_t{1} << k) * m + k] = inst.distance(0, k + 1);

    for (std::size_t set = 1; set <= full; ++set) {
        for (std::size_t last = 0; last < m; ++last) {
            if (!(set & (std::size_t{1} << last))) continue;
            const double base = cost[set * m + last];
            if (base == kInf) continue;
            for (std::size_t next = 0; next < m; ++next) {
                if (set & (std::size_t{1} << next)) continue;
                const std::size_t grown = set | (std::size_t{1} << next);
                const double cand = base + inst.distance(last + 1, next + 1);
                if (cand < cost[grown * m + next]) {
                    cost[grown * m + next] = cand;
                    parent[grown * m + next] = static_cast<std::int8_t>(last);
                }
            }
        }
    }

    double best_total = kInf;
    std::size_t best_last = 0;
    for (std::size_t last = 0; last < m; ++last) {
        const double total = cost[full * m + last] + inst.distance(last + 1, 0);
        if (total < best_total) {
            best_total = total;
            best_last = last;
        }
    }

    Permutation reversed;
    reversed.reserve(n);
    std::size_t set = full;
    std::size_t cur = best_last;
    while (true) {
        reversed.push_back(static_cast<int>(cur + 1));
        const std::int8_t prev = parent[set * m + cur];
        set &= ~(std::size_t{1} << cur);
        if (prev < 0) break;
        cur = static_cast<std::size_t>(prev);
    }
    reversed.push_back(0);
    std::reverse(reversed.begin(), reversed.end());

    OracleResult out;
    out.method = OracleMethod::kHeldKarp;
    out.best_perm = canonical_tour(reversed);
    out.best_length = tour_length(inst, out.best_perm);
    return out;
}

double optimality_gap(const Instance& inst, const Tour& tour, const OracleResult& oracle) {
    if (oracle.best_perm.size() != inst.size()) fail(ErrorCode::kInvalidArgument, "oracle was computed for another instance");
    validate_permutation(tour.perm, inst.size());
    return (tour.length - oracle.best_length) / oracle.best_length;
}

}  // namespace prefco
