#pragma once

#include <vector>

namespace mlrh {

// Gauss-Legendre rule on [-1, 1].
struct GLRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes/weights by Newton iteration on P_n (cached per n, thread-safe).
const GLRule& gauss_legendre(int n);

}  // namespace mlrh
