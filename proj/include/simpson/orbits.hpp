#pragma once

// Orbits of single triangulations, ordered pairs, and summand-unordered
// triples under the simultaneous action of the 48 cube symmetries.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "simpson/errors.hpp"
#include "simpson/triangulation.hpp"

namespace simpson {

/// Ids of an arity-1/2/3 tuple. For triples the first two entries are the
/// (unordered, distinct) summands and are kept sorted; the third is the sum.
using ClassKey = std::vector<int>;

struct OrbitClass {
  ClassKey representative;
  std::vector<ClassKey> members;
  std::size_t size() const { return members.size(); }
};

namespace detail {

inline void normalize_key(ClassKey& key) {
  if (key.size() == 3 && key[0] > key[1]) std::swap(key[0], key[1]);
}

inline void validate_key(const ClassKey& key, const Catalog& cat) {
  if (key.empty() || key.size() > 3) throw DomainError("class keys have 1, 2 or 3 ids");
  for (int id : key) {
    if (id < 1 || id > cat.size()) throw DomainError("unknown triangulation id " + std::to_string(id));
  }
  if (key.size() == 3 && key[0] == key[1]) throw DomainError("triple summands must be distinct triangulations");
}

}  // namespace detail

/// All class partitions of one arity, with representatives chosen as the
/// lexicographically least member. Classes are ordered by representative.
class OrbitPartition {
 public:
  OrbitPartition(int arity, const Catalog& cat) : arity_(arity), n_(cat.size()) {
    if (arity < 1 || arity > 3) throw DomainError("arity must be 1, 2 or 3");
    const std::size_t slots = static_cast<std::size_t>(n_) * n_ * n_;
    class_of_.assign(slots, -1);
    std::vector<ClassKey> all = all_keys();
    const auto& group = cube_symmetries();
    for (const auto& key : all) {
      if (class_of_[encode(key)] != -1) continue;
      OrbitClass cls;
      std::vector<ClassKey> orbit;
      for (std::size_t g = 0; g < group.size(); ++g) {
        ClassKey img(key.size());
        for (std::size_t i = 0; i < key.size(); ++i) img[i] = cat.image(g, key[i]);
        detail::normalize_key(img);
        const std::size_t code = encode(img);
        if (class_of_[code] == -2) continue;
        class_of_[code] = -2;
        orbit.push_back(img);
      }
      std::sort(orbit.begin(), orbit.end());
      cls.representative = orbit.front();
      cls.members = std::move(orbit);
      classes_.push_back(std::move(cls));
    }
    std::sort(classes_.begin(), classes_.end(),
              [](const OrbitClass& a, const OrbitClass& b) { return a.representative < b.representative; });
    for (std::size_t c = 0; c < classes_.size(); ++c)
      for (const auto& m : classes_[c].members) class_of_[encode(m)] = static_cast<int>(c);
  }

  int arity() const { return arity_; }
  const std::vector<OrbitClass>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }

  std::size_t total_members() const {
    std::size_t s = 0;
    for (const auto& c : classes_) s += c.size();
    return s;
  }

  /// Index of the class containing `key` (summand order of triples ignored).
  int class_index(ClassKey key, const Catalog& cat = catalog()) const {
    if (static_cast<int>(key.size()) != arity_) throw DomainError("key arity does not match partition");
    detail::validate_key(key, cat);
    detail::normalize_key(key);
    return class_of_[encode(key)];
  }

  const ClassKey& canonical(const ClassKey& key, const Catalog& cat = catalog()) const {
    return classes_[class_index(key, cat)].representative;
  }

 private:
  std::vector<ClassKey> all_keys() const {
    std::vector<ClassKey> out;
    if (arity_ == 1) {
      for (int a = 1; a <= n_; ++a) out.push_back({a});
    } else if (arity_ == 2) {
      for (int a = 1; a <= n_; ++a)
        for (int b = 1; b <= n_; ++b) out.push_back({a, b});
    } else {
      for (int a = 1; a <= n_; ++a)
        for (int b = a + 1; b <= n_; ++b)
          for (int c = 1; c <= n_; ++c) out.push_back({a, b, c});
    }
    return out;
  }

  std::size_t encode(const ClassKey& key) const {
    std::size_t code = 0;
    for (int id : key) code = code * n_ + static_cast<std::size_t>(id - 1);
    return code;
  }

  int arity_;
  int n_;
  std::vector<int> class_of_;
  std::vector<OrbitClass> classes_;
};

inline std::vector<OrbitClass> orbit_classes(int arity, const Catalog& cat = catalog()) {
  return OrbitPartition(arity, cat).classes();
}

/// Shared partitions, built on first use.
inline const OrbitPartition& orbit_partition(int arity) {
  switch (arity) {
    case 1: {
      static const OrbitPartition p1(1, catalog());
      return p1;
    }
    case 2: {
      static const OrbitPartition p2(2, catalog());
      return p2;
    }
    case 3: {
      static const OrbitPartition p3(3, catalog());
      return p3;
    }
    default: throw DomainError("arity must be 1, 2 or 3");
  }
}

inline ClassKey canonical_class_of(const ClassKey& ids) {
  if (ids.empty() || ids.size() > 3) throw DomainError("class keys have 1, 2 or 3 ids");
  return orbit_partition(static_cast<int>(ids.size())).canonical(ids);
}

inline std::string key_to_string(const ClassKey& key) {
  std::string s = "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(key[i]);
  }
  return s + ")";
}

}  // namespace simpson
