#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prefco/error.hpp"

namespace prefco::cli {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorCode::kIo, "error reading " + path.string());
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(ErrorCode::kIo, "error writing " + path.string());
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) fail(ErrorCode::kIo, "cannot create directory " + dir.string());
}

std::string slot_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04zu", k);
    return buf;
}

namespace {

nlohmann::json parse_json(const std::string& text, const fs::path& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kParseError, origin.string() + ": " + e.what());
    }
}

std::vector<Instance> load_index(const fs::path& index_path) {
    const auto index = parse_json(read_file(index_path), index_path);
    if (!index.contains("files") || !index["files"].is_array()) {
        fail(ErrorCode::kParseError, index_path.string() + ": index needs a \"files\" array");
    }
    std::vector<Instance> out;
    for (const auto& f : index["files"]) {
        const fs::path file = index_path.parent_path() / f.get<std::string>();
        out.push_back(instance_from_json(read_file(file)));
    }
    return out;
}

}  // namespace

std::vector<Instance> load_instances(const fs::path& path) {
    if (fs::is_directory(path)) return load_index(path / "index.json");
    if (!fs::exists(path)) fail(ErrorCode::kIo, "no such file: " + path.string());
    if (path.extension() == ".tsp") return {parse_tsplib(read_file(path), path.stem().string())};

    const std::string text = read_file(path);
    const auto j = parse_json(text, path);
    if (j.is_array()) {
        std::vector<Instance> out;
        for (const auto& item : j) out.push_back(instance_from_json(item.dump()));
        return out;
    }
    if (j.is_object() && j.contains("files")) return load_index(path);
    return {instance_from_json(text)};
}

void save_instance_set(const fs::path& path, const std::vector<Instance>& instances) {
    auto arr = nlohmann::json::array();
    for (const auto& inst : instances) arr.push_back(nlohmann::json::parse(instance_to_json(inst)));
    write_file(path, arr.dump(1) + "\n");
}

}  // namespace prefco::cli
