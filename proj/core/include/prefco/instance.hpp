#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prefco {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

using Permutation = std::vector<int>;

/// A symmetric Euclidean TSP instance. Immutable after construction, so one
/// instance may be shared by any number of threads.
class Instance {
public:
    /// Requires at least 3 nodes; the dense distance matrix is derived here.
    Instance(std::string id, std::vector<Point> coords);

    const std::string& id() const noexcept { return id_; }
    std::size_t size() const noexcept { return coords_.size(); }
    std::span<const Point> coords() const noexcept { return coords_; }

    double distance(std::size_t i, std::size_t j) const noexcept { return dist_[i * coords_.size() + j]; }
    std::span<const double> distance_row(std::size_t i) const noexcept {
        return {dist_.data() + i * coords_.size(), coords_.size()};
    }

private:
    std::string id_;
    std::vector<Point> coords_;
    std::vector<double> dist_;
};

/// A closed tour. reward is always exactly -length: larger reward means shorter tour.
struct Tour {
    Permutation perm;
    double length = 0.0;
    double reward = 0.0;
};

/// `count` instances with coordinates i.i.d. uniform on [0,1)^2. Instance i is
/// drawn from its own seed split from (seed, i).
std::vector<Instance> generate_uniform(int n, int count, std::uint64_t seed);

/// Throws invalid-tour unless perm holds each of 0..n-1 exactly once.
void validate_permutation(std::span<const int> perm, std::size_t n);

double tour_length(const Instance& inst, std::span<const int> perm);
Tour make_tour(const Instance& inst, Permutation perm);
double reward(const Instance& inst, const Tour& tour);

/// TSPLib subset: TYPE TSP, EDGE_WEIGHT_TYPE EUC_2D, NODE_COORD_SECTION.
/// Distances are exact Euclidean, not TSPLib's nint-rounded convention.
Instance parse_tsplib(std::string_view text, std::string fallback_id = "tsplib");

/// Native format: {"id": str, "coords": [[x, y], ...]}.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(std::string_view text);

}  // namespace prefco
