#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcl/errors.hpp"

namespace qcl {

using Point = std::uint32_t;

// An explicit map [M] -> [N] stored as its image array.
class FunctionTable {
 public:
  FunctionTable() = default;

  FunctionTable(std::uint64_t domain_size, std::uint64_t codomain_size, std::vector<Point> images)
      : m_(domain_size), n_(codomain_size), images_(std::move(images)) {
    if (m_ == 0 || n_ == 0) throw ParameterError("function table needs positive domain and codomain");
    if (images_.size() != m_) throw ParameterError("image array length differs from domain size");
    for (Point y : images_) {
      if (y >= n_) throw ParameterError("image " + std::to_string(y) + " outside codomain");
    }
  }

  static FunctionTable identity(std::uint64_t size) {
    std::vector<Point> images(size);
    std::iota(images.begin(), images.end(), Point{0});
    return {size, size, std::move(images)};
  }

  static FunctionTable constant(std::uint64_t domain_size, std::uint64_t codomain_size, Point value) {
    return {domain_size, codomain_size, std::vector<Point>(domain_size, value)};
  }

  std::uint64_t domain_size() const { return m_; }
  std::uint64_t codomain_size() const { return n_; }
  std::span<const Point> images() const { return images_; }
  Point operator()(std::uint64_t x) const { return images_[x]; }

  bool is_injective() const;

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;

 private:
  std::uint64_t m_ = 0;
  std::uint64_t n_ = 0;
  std::vector<Point> images_;
};

// counts[i] = number of image points with exactly i preimages.
struct CollisionProfile {
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t distinct_images() const {
    std::uint64_t total = 0;
    for (const auto& [mult, count] : counts) total += count;
    return total;
  }
  std::uint64_t domain_size() const {
    std::uint64_t total = 0;
    for (const auto& [mult, count] : counts) total += mult * count;
    return total;
  }
  // Number of unordered pairs {x1, x2} with x1 != x2 and f(x1) == f(x2).
  std::uint64_t colliding_pairs() const {
    std::uint64_t total = 0;
    for (const auto& [mult, count] : counts) total += count * (mult * (mult - 1) / 2);
    return total;
  }

  friend bool operator==(const CollisionProfile&, const CollisionProfile&) = default;
};

inline CollisionProfile collision_profile(std::span<const Point> images) {
  std::unordered_map<Point, std::uint64_t> preimages;
  preimages.reserve(images.size());
  for (Point y : images) ++preimages[y];
  CollisionProfile profile;
  for (const auto& [y, mult] : preimages) ++profile.counts[mult];
  return profile;
}

inline CollisionProfile collision_profile(const FunctionTable& f) { return collision_profile(f.images()); }

inline bool FunctionTable::is_injective() const {
  return collision_profile(*this).distinct_images() == m_;
}

// Two injective tables [N] -> [M] promised to have identical (case 1) or
// disjoint (case 3) ranges. Case 2 is the intermediate hybrid with random
// component functions.
struct SetEqualityInstance {
  FunctionTable f;
  FunctionTable g;
  int case_label = 1;

  // f and g viewed as one table on [2N]: f on the first half, g on the second.
  FunctionTable combined() const {
    std::vector<Point> images(f.images().begin(), f.images().end());
    images.insert(images.end(), g.images().begin(), g.images().end());
    return {f.domain_size() + g.domain_size(), f.codomain_size(), std::move(images)};
  }
};

inline void to_json(nlohmann::json& j, const FunctionTable& f) {
  j = nlohmann::json{{"m", f.domain_size()}, {"n", f.codomain_size()},
                     {"images", std::vector<Point>(f.images().begin(), f.images().end())}};
}

inline void from_json(const nlohmann::json& j, FunctionTable& f) {
  f = FunctionTable(j.at("m").get<std::uint64_t>(), j.at("n").get<std::uint64_t>(),
                    j.at("images").get<std::vector<Point>>());
}

inline void to_json(nlohmann::json& j, const SetEqualityInstance& s) {
  j = nlohmann::json{{"case", s.case_label}, {"f", s.f}, {"g", s.g}};
}

inline void from_json(const nlohmann::json& j, SetEqualityInstance& s) {
  s.case_label = j.at("case").get<int>();
  s.f = j.at("f").get<FunctionTable>();
  s.g = j.at("g").get<FunctionTable>();
}

}  // namespace qcl
