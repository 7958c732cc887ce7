#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace angiomim {

/// One image (and optional ground-truth mask) of a dataset, paths relative
/// to the manifest location.
struct DatasetItem {
    std::string image;
    std::string mask; // empty when absent
};

struct Manifest {
    nlohmann::json config; // generation snapshot, opaque here
    std::vector<DatasetItem> items;
    std::filesystem::path base_dir;

    std::filesystem::path image_path(std::size_t i) const { return base_dir / items[i].image; }
    std::filesystem::path mask_path(std::size_t i) const { return base_dir / items[i].mask; }
};

inline Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("manifest '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!j.contains("items") || !j["items"].is_array() || j["items"].empty())
        throw std::runtime_error("manifest '" + path.string() + "' has no items");
    Manifest m;
    m.base_dir = path.parent_path();
    if (j.contains("config")) m.config = j["config"];
    for (const auto& item : j["items"]) {
        DatasetItem d;
        d.image = item.at("image").get<std::string>();
        if (item.contains("mask")) d.mask = item["mask"].get<std::string>();
        m.items.push_back(std::move(d));
    }
    return m;
}

} // namespace angiomim
