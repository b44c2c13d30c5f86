#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "gfc/error.hpp"

namespace gfc {

/// Largest spatial dimension handled by the library.
inline constexpr std::size_t kMaxDim = 3;

/// α = (α_1, …, α_d) selecting ∂^α = ∂_1^{α_1}···∂_d^{α_d}.
class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(std::size_t dim) : dim_(dim) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::invalid_argument, "multi-index dimension must be 1..3");
  }

  MultiIndex(std::initializer_list<int> entries) : dim_(entries.size()) {
    require(dim_ >= 1 && dim_ <= kMaxDim, ErrorKind::invalid_argument, "multi-index dimension must be 1..3");
    std::size_t i = 0;
    for (int e : entries) {
      require(e >= 0, ErrorKind::invalid_argument, "multi-index entries must be natural numbers");
      entries_[i++] = e;
    }
  }

  static MultiIndex zero(std::size_t dim) { return MultiIndex(dim); }

  static MultiIndex unit(std::size_t dim, std::size_t axis, int power = 1) {
    MultiIndex m(dim);
    require(axis < dim, ErrorKind::invalid_argument, "axis out of range");
    m.entries_[axis] = power;
    return m;
  }

  std::size_t dim() const { return dim_; }
  int operator[](std::size_t i) const { return entries_[i]; }

  int order() const {
    int s = 0;
    for (std::size_t i = 0; i < dim_; ++i) s += entries_[i];
    return s;
  }

  MultiIndex with_entry(std::size_t axis, int value) const {
    require(axis < dim_ && value >= 0, ErrorKind::invalid_argument, "invalid multi-index entry");
    MultiIndex r(*this);
    r.entries_[axis] = value;
    return r;
  }

  MultiIndex operator+(const MultiIndex& other) const {
    require(dim_ == other.dim_, ErrorKind::dimension_mismatch, "adding multi-indices of different dimension");
    MultiIndex r(*this);
    for (std::size_t i = 0; i < dim_; ++i) r.entries_[i] += other.entries_[i];
    return r;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i) s += ",";
      s += std::to_string(entries_[i]);
    }
    return s + ")";
  }

 private:
  std::size_t dim_ = 1;
  std::array<int, kMaxDim> entries_{};
};

/// All multi-indices of dimension `dim` with |α| ≤ max_order, ordered by |α|.
inline std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, int max_order) {
  std::vector<MultiIndex> out;
  std::array<int, kMaxDim> e{};
  for (int total = 0; total <= max_order; ++total) {
    // enumerate compositions of `total` into `dim` parts
    auto rec = [&](auto&& self, std::size_t axis, int left) -> void {
      if (axis + 1 == dim) {
        e[axis] = left;
        MultiIndex m(dim);
        for (std::size_t i = 0; i < dim; ++i)
          if (e[i]) m = m + MultiIndex::unit(dim, i, e[i]);
        out.push_back(m);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[axis] = k;
        self(self, axis + 1, left - k);
      }
    };
    rec(rec, 0, total);
  }
  return out;
}

}  // namespace gfc
