#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "phylocompat/character.hpp"
#include "phylocompat/tree.hpp"

namespace testing_support {

/// Reads the usual a1b1b2|a2a3 notation. Labels are runs of letters followed
/// by digits.
inline phylocompat::Character parse_partition(const phylocompat::TaxonSet& taxa,
                                              const std::string& text,
                                              const std::string& name = {}) {
  std::vector<phylocompat::TaxonSubset> states;
  std::stringstream ss(text);
  std::string block;
  static const std::regex label(R"([A-Za-z]+[0-9]+)");
  while (std::getline(ss, block, '|')) {
    phylocompat::TaxonSubset state;
    for (std::sregex_iterator it(block.begin(), block.end(), label), end; it != end; ++it) {
      state.push_back(taxa.id(it->str()));
    }
    states.push_back(phylocompat::make_subset(std::move(state)));
  }
  return phylocompat::normalize(phylocompat::Character(taxa.size(), std::move(states), name));
}

inline std::set<std::string> leaf_labels(const phylocompat::Tree& t) {
  std::set<std::string> out;
  for (auto id : t.leaves()) out.insert(t.taxa().label(id));
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("phylocompat-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace testing_support
