#ifndef FRLP_NODE_SET_HPP
#define FRLP_NODE_SET_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace frlp {

using NodeId = std::size_t;

/// Fixed-width bitset over the dense node ids of one network.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
  NodeSet(std::size_t universe, std::initializer_list<NodeId> members) : NodeSet(universe) {
    for (NodeId v : members) insert(v);
  }
  template <class Range>
  static NodeSet of(std::size_t universe, const Range& members) {
    NodeSet s(universe);
    for (NodeId v : members) s.insert(v);
    return s;
  }
  static NodeSet full(std::size_t universe) {
    NodeSet s(universe);
    for (NodeId v = 0; v < universe; ++v) s.insert(v);
    return s;
  }
  /// Low bits of `mask` become the members; universe must be <= 64.
  static NodeSet from_mask(std::size_t universe, std::uint64_t mask) {
    NodeSet s(universe);
    if (!s.words_.empty()) s.words_[0] = universe >= 64 ? mask : (mask & ((std::uint64_t{1} << universe) - 1));
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  void insert(NodeId v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(NodeId v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool contains(NodeId v) const noexcept {
    return v < universe_ && ((words_[v >> 6] >> (v & 63)) & 1U) != 0;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  bool is_subset_of(const NodeSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
  }
  bool intersects(const NodeSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }

  NodeSet& operator|=(const NodeSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  NodeSet& operator&=(const NodeSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  /// Members of the universe not in this set.
  NodeSet complement() const {
    NodeSet out(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    if (universe_ % 64 != 0 && !out.words_.empty())
      out.words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    return out;
  }

  std::vector<NodeId> members() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto w = words_[i];
      while (w != 0) {
        out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }
  std::uint64_t low_word() const noexcept { return words_.empty() ? 0 : words_[0]; }

  friend bool operator==(const NodeSet& a, const NodeSet& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  /// Lexicographic order on the ascending member lists ({1,2} < {1,2,3} < {2}).
  friend bool operator<(const NodeSet& a, const NodeSet& b) {
    const auto ma = a.members();
    const auto mb = b.members();
    return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
  }

  std::size_t hash() const noexcept {
    std::size_t h = universe_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct NodeSetHash {
  std::size_t operator()(const NodeSet& s) const noexcept { return s.hash(); }
};

}  // namespace frlp

#endif  // FRLP_NODE_SET_HPP
