#pragma once

// Exact maximum-clique search over at most 16 vertices, vertices indexed in
// ascending node-id order. Not installed.

#include <bit>
#include <cstdint>
#include <span>

namespace aft::detail {

struct CliqueResult {
  std::uint32_t members = 0;  // bitmask over vertex indices
  int size = 0;
  bool tied = false;  // a different clique of the same size exists
};

/// Include-first depth-first search. Subsets are visited in lexicographic
/// order of their sorted index sequences, so the first maximum clique found is
/// the lexicographically smallest one; later cliques of equal size only set
/// `tied`. `allowed` restricts the search to a vertex subset.
class CliqueSearch {
 public:
  CliqueSearch(std::span<const std::uint32_t> adjacency, std::uint32_t allowed)
      : adjacency_(adjacency) {
    expand(0, 0, allowed);
  }

  const CliqueResult& result() const noexcept { return best_; }

 private:
  void record(std::uint32_t chosen, int size) {
    if (size > best_.size) {
      best_ = {chosen, size, false};
    } else if (size == best_.size && size > 0 && chosen != best_.members) {
      best_.tied = true;
    }
  }

  void expand(std::uint32_t chosen, int size, std::uint32_t candidates) {
    record(chosen, size);
    while (candidates != 0) {
      // Equal-size branches are still explored so ties are noticed.
      if (size + std::popcount(candidates) < best_.size) return;
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      expand(chosen | (1u << v), size + 1, candidates & adjacency_[v]);
    }
  }

  std::span<const std::uint32_t> adjacency_;
  CliqueResult best_;
};

}  // namespace aft::detail
