#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prefco/instance.hpp"

namespace prefco::cli {

namespace fs = std::filesystem;

// All of these raise ErrorCode::kIo on filesystem failures.
std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view content);
void ensure_directory(const fs::path& dir);

/// Accepts a directory holding index.json, an index.json file, a JSON array of
/// instances, a single instance JSON file, or a TSPLib .tsp file.
std::vector<Instance> load_instances(const fs::path& path);

/// Writes the instances as one JSON array.
void save_instance_set(const fs::path& path, const std::vector<Instance>& instances);

/// Zero-padded file stem for the k-th instance of a run.
std::string slot_name(std::size_t k);

}  // namespace prefco::cli
