#pragma once

// Textbook binary changes-in-changes counterfactual, coded independently of
// the library for cross-checking: linear-scan counting and exact integer
// rank arithmetic instead of binary searches and floating-point ranks.
//
// For each treated pre-period outcome y:
//   rank   c = #{control pre <= y}
//   index  k = smallest k with k/n_post >= c/n_pre, i.e. ceil(c*n_post/n_pre)
//   value    = k-th smallest control post outcome (minimum when c = 0)

#include <algorithm>
#include <cstdint>
#include <vector>

namespace refcic {

inline std::vector<double> counterfactual(std::vector<double> control_pre,
                                          std::vector<double> control_post,
                                          const std::vector<double>& treated_pre) {
  std::sort(control_post.begin(), control_post.end());
  const std::uint64_t n_pre = control_pre.size();
  const std::uint64_t n_post = control_post.size();

  std::vector<double> out;
  out.reserve(treated_pre.size());
  for (double y : treated_pre) {
    std::uint64_t c = 0;
    for (double a : control_pre)
      if (a <= y) ++c;
    if (c == 0) {
      out.push_back(control_post.front());
    } else {
      const std::uint64_t k = (c * n_post + n_pre - 1) / n_pre;
      out.push_back(control_post[k - 1]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace refcic
