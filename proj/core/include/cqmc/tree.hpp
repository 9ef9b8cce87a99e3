#pragma once

// Coordinates and enumeration order on the semi-infinite Cayley tree of order k.
//
// A vertex is the path of branch indices (i_1, ..., i_n), each in [1, k], that
// leads to it from the root; the root is the empty path. Level n holds k^n
// vertices, always enumerated in lexicographic order. Throughout the library a
// vertex's "site index" is its position in the concatenation of levels 0, 1, ...

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cqmc {

/// Branching order of the tree. Construction rejects k < 2.
class TreeParams {
 public:
  explicit TreeParams(int k);
  int k() const noexcept { return k_; }

 private:
  int k_;
};

class VertexCoord {
 public:
  VertexCoord() = default;  // root
  /// Throws ParamError if any index is < 1.
  explicit VertexCoord(std::vector<int> path);

  static VertexCoord root() { return {}; }

  /// Parses the dotted form "1.2.1"; "0" is the root.
  static VertexCoord parse(std::string_view text);

  const std::vector<int>& path() const noexcept { return path_; }
  int level() const noexcept { return static_cast<int>(path_.size()); }
  bool is_root() const noexcept { return path_.empty(); }

  VertexCoord child(int i) const;
  /// Throws DomainError on the root.
  VertexCoord parent() const;

  /// True when every index is <= k.
  bool fits(const TreeParams& params) const noexcept;

  std::string to_string() const;

  friend auto operator<=>(const VertexCoord&, const VertexCoord&) = default;
  friend bool operator==(const VertexCoord&, const VertexCoord&) = default;

 private:
  std::vector<int> path_;
};

struct VolumeSize {
  std::uint64_t wn;     // |W_n| = k^n
  std::uint64_t lam_n;  // |Lambda_n| = (k^{n+1} - 1) / (k - 1)
};

/// All k^n vertices of level n in lexicographic order.
std::vector<VertexCoord> level_vertices(const TreeParams& params, int n);

/// Direct successors (v,1), ..., (v,k) in forward order.
std::vector<VertexCoord> successors(const VertexCoord& v, const TreeParams& params);

VolumeSize volume_size(const TreeParams& params, int n);

/// Position of v in the concatenated level order (root = 0).
std::size_t site_index(const VertexCoord& v, const TreeParams& params);

/// Inverse of site_index.
VertexCoord vertex_at(std::size_t index, const TreeParams& params);

}  // namespace cqmc
