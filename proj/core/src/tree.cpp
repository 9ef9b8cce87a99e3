#include "cqmc/tree.hpp"

#include <charconv>

#include "cqmc/errors.hpp"

namespace cqmc {

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > UINT64_MAX / base) throw ParamError("tree level too deep for 64-bit counts");
    r *= base;
  }
  return r;
}

}  // namespace

TreeParams::TreeParams(int k) : k_(k) {
  if (k < 2) throw ParamError("branching order k must be >= 2, got " + std::to_string(k));
}

VertexCoord::VertexCoord(std::vector<int> path) : path_(std::move(path)) {
  for (int i : path_) {
    if (i < 1) throw ParamError("vertex index must be >= 1, got " + std::to_string(i));
  }
}

VertexCoord VertexCoord::parse(std::string_view text) {
  if (text == "0") return root();
  if (text.empty()) throw ParamError("empty vertex coordinate");
  std::vector<int> path;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = text.find('.', pos);
    const std::string_view part =
        text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    int value = 0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc{} || end != part.data() + part.size()) {
      throw ParamError("malformed vertex coordinate '" + std::string(text) + "'");
    }
    path.push_back(value);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return VertexCoord(std::move(path));
}

VertexCoord VertexCoord::child(int i) const {
  std::vector<int> p = path_;
  p.push_back(i);
  return VertexCoord(std::move(p));
}

VertexCoord VertexCoord::parent() const {
  if (is_root()) throw DomainError("the root has no parent");
  return VertexCoord(std::vector<int>(path_.begin(), path_.end() - 1));
}

bool VertexCoord::fits(const TreeParams& params) const noexcept {
  for (int i : path_) {
    if (i > params.k()) return false;
  }
  return true;
}

std::string VertexCoord::to_string() const {
  if (is_root()) return "0";
  std::string out;
  for (std::size_t m = 0; m < path_.size(); ++m) {
    if (m) out += '.';
    out += std::to_string(path_[m]);
  }
  return out;
}

std::vector<VertexCoord> level_vertices(const TreeParams& params, int n) {
  if (n < 0) throw ParamError("level must be >= 0");
  const int k = params.k();
  const std::uint64_t count = checked_pow(static_cast<std::uint64_t>(k), n);
  std::vector<VertexCoord> out;
  out.reserve(count);
  std::vector<int> path(n, 1);
  for (std::uint64_t r = 0; r < count; ++r) {
    out.emplace_back(path);
    // odometer increment, last index fastest
    for (int m = n - 1; m >= 0; --m) {
      if (path[m] < k) {
        ++path[m];
        break;
      }
      path[m] = 1;
    }
  }
  return out;
}

std::vector<VertexCoord> successors(const VertexCoord& v, const TreeParams& params) {
  std::vector<VertexCoord> out;
  out.reserve(params.k());
  for (int i = 1; i <= params.k(); ++i) out.push_back(v.child(i));
  return out;
}

VolumeSize volume_size(const TreeParams& params, int n) {
  if (n < 0) throw ParamError("level must be >= 0");
  const auto k = static_cast<std::uint64_t>(params.k());
  const std::uint64_t wn = checked_pow(k, n);
  const std::uint64_t next = checked_pow(k, n + 1);
  return {wn, (next - 1) / (k - 1)};
}

std::size_t site_index(const VertexCoord& v, const TreeParams& params) {
  if (!v.fits(params)) throw ParamError("vertex " + v.to_string() + " has an index above k");
  const auto k = static_cast<std::size_t>(params.k());
  std::size_t offset = 0;  // |Lambda_{level-1}|
  std::size_t width = 1;
  for (int l = 0; l < v.level(); ++l) {
    offset += width;
    width *= k;
  }
  std::size_t rank = 0;
  for (int i : v.path()) rank = rank * k + static_cast<std::size_t>(i - 1);
  return offset + rank;
}

VertexCoord vertex_at(std::size_t index, const TreeParams& params) {
  const auto k = static_cast<std::size_t>(params.k());
  int level = 0;
  std::size_t width = 1;
  while (index >= width) {
    index -= width;
    width *= k;
    ++level;
  }
  std::vector<int> path(level);
  for (int m = level - 1; m >= 0; --m) {
    path[m] = static_cast<int>(index % k) + 1;
    index /= k;
  }
  return VertexCoord(std::move(path));
}

}  // namespace cqmc
