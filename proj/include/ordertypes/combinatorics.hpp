#pragma once

#include <vector>

namespace ordertypes {

/// Calls f(subset) for every k-subset of {0..n-1}, in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Elements of {0..n-1} not in the sorted list `subset`.
inline std::vector<int> complement(int n, const std::vector<int>& subset) {
  std::vector<int> out;
  out.reserve(n - subset.size());
  std::size_t s = 0;
  for (int i = 0; i < n; ++i) {
    if (s < subset.size() && subset[s] == i) ++s;
    else out.push_back(i);
  }
  return out;
}

/// n! / (n-k)!
inline long long falling_factorial(int n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

}  // namespace ordertypes
