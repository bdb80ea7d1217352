#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "ppad/errors.hpp"

namespace ppad {

/// Lists the .pgm/.png files of a directory, sorted by path so every
/// consumer sees the same deterministic order.
inline std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw FileNotFound("no such directory: " + dir.string());
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return char(std::tolower(c)); });
        if (ext == ".pgm" || ext == ".png") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Dataset layout: <root>/normal/*.{pgm,png} and <root>/abnormal/*.{pgm,png}.
struct DatasetPaths {
    std::vector<std::filesystem::path> normal;
    std::vector<std::filesystem::path> abnormal;
};

inline DatasetPaths list_dataset(const std::filesystem::path& root) {
    DatasetPaths d;
    d.normal = list_images(root / "normal");
    const auto abn = root / "abnormal";
    if (std::filesystem::is_directory(abn)) d.abnormal = list_images(abn);
    return d;
}

} // namespace ppad
