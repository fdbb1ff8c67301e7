#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cartankit {

/// Index subsets of {0..n-1} as bitmasks. Every sign in the exterior algebra goes through sort_sign.
using Subset = std::uint32_t;

inline int popcount(Subset s) { return __builtin_popcount(s); }
inline bool contains(Subset s, std::size_t i) { return (s >> i) & 1u; }

inline std::vector<std::size_t> elements(Subset s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; s >> i; ++i)
    if (contains(s, i)) out.push_back(i);
  return out;
}

/// Sign of the permutation sorting seq into increasing order; 0 if seq has a repeat.
/// On success *mask receives the set of entries.
inline int sort_sign(const std::vector<std::size_t>& seq, Subset* mask) {
  Subset m = 0;
  int inversions = 0;
  for (std::size_t a = 0; a < seq.size(); ++a) {
    if (contains(m, seq[a])) return 0;
    m |= Subset(1) << seq[a];
    for (std::size_t b = a + 1; b < seq.size(); ++b)
      if (seq[a] > seq[b]) ++inversions;
  }
  if (mask) *mask = m;
  return inversions % 2 ? -1 : 1;
}

/// Number of elements of s strictly below i.
inline int count_below(Subset s, std::size_t i) { return popcount(s & ((Subset(1) << i) - 1)); }

/// e_i ^ e_S = wedge_sign * e_{S+i}; 0 if i is in S.
inline int wedge_sign(std::size_t i, Subset s) {
  if (contains(s, i)) return 0;
  return count_below(s, i) % 2 ? -1 : 1;
}

/// e_S ^ e_T = merge_sign * e_{S+T}; 0 if they meet.
inline int merge_sign(Subset s, Subset t) {
  if (s & t) return 0;
  int inv = 0;
  for (std::size_t i : elements(t)) inv += popcount(s >> (i + 1));
  return inv % 2 ? -1 : 1;
}

/// All subsets of size m of {0..n-1}, lexicographic by sorted element list.
inline std::vector<Subset> subsets_of_size(std::size_t n, std::size_t m) {
  std::vector<Subset> out;
  if (m > n) return out;
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  for (;;) {
    Subset s = 0;
    for (auto i : idx) s |= Subset(1) << i;
    out.push_back(s);
    std::size_t k = m;
    while (k > 0 && idx[k - 1] == n - m + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace cartankit
