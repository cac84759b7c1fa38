#pragma once

// Locates the optional MovieLens directories. Benchmarks that need the real
// data are skipped (with a message) when the directories are absent; see the
// README for where to place them.

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

namespace testsupport {

inline std::optional<std::filesystem::path> find_dataset(const std::string& name) {
    namespace fs = std::filesystem;
    std::vector<fs::path> roots;
    if (const char* env = std::getenv("GRAPHREC_DATA")) roots.emplace_back(env);
    roots.emplace_back("data");
    roots.emplace_back("../data");
    roots.emplace_back("../../data");
    const std::string probe = name == "ml-100k" ? "u.data" : "ratings.dat";
    for (const fs::path& root : roots) {
        const fs::path dir = root / name;
        if (fs::exists(dir / probe)) return dir;
    }
    return std::nullopt;
}

}  // namespace testsupport
