#include "prefco/instance.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "prefco/error.hpp"
#include "prefco/rng.hpp"

namespace prefco {

Instance::Instance(std::string id, std::vector<Point> coords) : id_(std::move(id)), coords_(std::move(coords)) {
    const std::size_t n = coords_.size();
    if (n < 3) fail(ErrorCode::kInvalidArgument, "instance needs at least 3 nodes, got " + std::to_string(n));
    for (const Point& p : coords_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(ErrorCode::kInvalidArgument, "non-finite coordinate");
    }
    dist_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::hypot(coords_[i].x - coords_[j].x, coords_[i].y - coords_[j].y);
            dist_[i * n + j] = d;
            dist_[j * n + i] = d;
        }
    }
}

std::vector<Instance> generate_uniform(int n, int count, std::uint64_t seed) {
    if (n < 3) fail(ErrorCode::kInvalidArgument, "n must be >= 3, got " + std::to_string(n));
    if (count < 1) fail(ErrorCode::kInvalidArgument, "count must be >= 1, got " + std::to_string(count));

    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Rng rng(split_seed(seed, SeedStream::kInstance, static_cast<std::uint64_t>(k)));
        std::vector<Point> coords(static_cast<std::size_t>(n));
        for (Point& p : coords) {
            p.x = uniform01(rng);
            p.y = uniform01(rng);
        }
        out.emplace_back("uniform-n" + std::to_string(n) + "-s" + std::to_string(seed) + "-" + std::to_string(k),
                         std::move(coords));
    }
    return out;
}

void validate_permutation(std::span<const int> perm, std::size_t n) {
    if (perm.size() != n) {
        fail(ErrorCode::kInvalidTour,
             "tour has " + std::to_string(perm.size()) + " nodes, instance has " + std::to_string(n));
    }
    std::vector<char> seen(n, 0);
    for (int v : perm) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) fail(ErrorCode::kInvalidTour, "node out of range: " + std::to_string(v));
        if (seen[static_cast<std::size_t>(v)]) fail(ErrorCode::kInvalidTour, "duplicate node: " + std::to_string(v));
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

double tour_length(const Instance& inst, std::span<const int> perm) {
    validate_permutation(perm, inst.size());
    const std::size_t n = perm.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        total += inst.distance(static_cast<std::size_t>(perm[k]), static_cast<std::size_t>(perm[(k + 1) % n]));
    }
    return total;
}

Tour make_tour(const Instance& inst, Permutation perm) {
    Tour t;
    t.length = tour_length(inst, perm);
    t.reward = -t.length;
    t.perm = std::move(perm);
    return t;
}

double reward(const Instance& inst, const Tour& tour) { return -tour_length(inst, tour.perm); }

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    fail(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Instance parse_tsplib(std::string_view text, std::string fallback_id) {
    std::string name = std::move(fallback_id);
    std::string type;
    std::string weight_type;
    long dimension = -1;
    std::vector<std::pair<long, Point>> nodes;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    bool in_coords = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (upper(line) == "EOF") break;

        if (in_coords) {
            std::istringstream fields(line);
            long index = 0;
            Point p;
            std::string extra;
            if (!(fields >> index >> p.x >> p.y) || (fields >> extra)) {
                // A keyword line ends the coordinate section.
                if (std::isalpha(static_cast<unsigned char>(line[0]))) {
                    in_coords = false;
                } else {
                    parse_fail(line_no, "malformed coordinate line '" + line + "'");
                }
            } else {
                nodes.emplace_back(index, p);
                continue;
            }
        }

        const std::string key_upper = upper(line);
        if (key_upper.rfind("NODE_COORD_SECTION", 0) == 0) {
            if (weight_type.empty()) parse_fail(line_no, "NODE_COORD_SECTION before EDGE_WEIGHT_TYPE");
            in_coords = true;
            continue;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos) parse_fail(line_no, "expected 'KEY : VALUE', got '" + line + "'");
        const std::string key = upper(trim(std::string_view(line).substr(0, colon)));
        const std::string value = trim(std::string_view(line).substr(colon + 1));
        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            type = upper(value);
            if (type != "TSP") fail(ErrorCode::kUnsupportedFormat, "TYPE " + value + " (only TSP is supported)");
        } else if (key == "EDGE_WEIGHT_TYPE") {
            weight_type = upper(value);
            if (weight_type != "EUC_2D") {
                fail(ErrorCode::kUnsupportedFormat, "EDGE_WEIGHT_TYPE " + value + " (only EUC_2D is supported)");
            }
        } else if (key == "DIMENSION") {
            const auto res = std::from_chars(value.data(), value.data() + value.size(), dimension);
            if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || dimension < 3) {
                parse_fail(line_no, "bad DIMENSION '" + value + "'");
            }
        }
        // COMMENT and other header keys are ignored.
    }

    if (weight_type.empty()) fail(ErrorCode::kParseError, "missing EDGE_WEIGHT_TYPE");
    if (dimension < 0) fail(ErrorCode::kParseError, "missing DIMENSION");
    if (static_cast<long>(nodes.size()) != dimension) {
        fail(ErrorCode::kParseError, "DIMENSION is " + std::to_string(dimension) + " but " +
                                         std::to_string(nodes.size()) + " coordinate lines were found");
    }
    std::vector<Point> coords(nodes.size());
    std::vector<char> seen(nodes.size(), 0);
    for (const auto& [index, p] : nodes) {
        if (index < 1 || index > dimension || seen[static_cast<std::size_t>(index - 1)]) {
            fail(ErrorCode::kParseError, "node index " + std::to_string(index) + " out of range or repeated");
        }
        seen[static_cast<std::size_t>(index - 1)] = 1;
        coords[static_cast<std::size_t>(index - 1)] = p;
    }
    return Instance(name, std::move(coords));
}

std::string instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["id"] = inst.id();
    auto coords = nlohmann::json::array();
    for (const Point& p : inst.coords()) coords.push_back({p.x, p.y});
    j["coords"] = std::move(coords);
    return j.dump();
}

Instance instance_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kParseError, std::string("instance JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("coords") || !j["coords"].is_array()) {
        fail(ErrorCode::kParseError, "instance JSON needs a \"coords\" array");
    }
    std::vector<Point> coords;
    for (const auto& c : j["coords"]) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
            fail(ErrorCode::kParseError, "each coordinate must be [x, y]");
        }
        coords.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    std::string id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : std::string("instance");
    return Instance(std::move(id), std::move(coords));
}

}  // namespace prefco
