#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <concord/concord.hpp>

namespace testsupport {

inline concord::LabelVector random_labels(std::size_t n, std::uint32_t max_clusters,
                                          concord::Xoshiro256pp& gen) {
  std::vector<std::uint32_t> raw(n);
  for (auto& v : raw) v = gen.below(max_clusters);
  return concord::factorize(raw);
}

// Merge cluster b of c into cluster a, then re-densify the ids.
inline concord::LabelVector fuse_clusters(const concord::LabelVector& c, std::uint32_t a,
                                          std::uint32_t b) {
  std::vector<std::uint32_t> mapped(c.assignments());
  for (auto& v : mapped)
    if (v == b) v = a;
  return concord::factorize(mapped);
}

template <class Fn>
concord::Errc thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const concord::Error& e) {
    return e.code();
  }
  return concord::Errc::none;
}

// Scratch directory for file-based tests, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("concord_tests_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto file = path_ / name;
    std::ofstream out(file);
    out << content;
    return file;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
