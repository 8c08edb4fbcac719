#pragma once

#include <vector>

#include "opalg/types.hpp"

namespace opalg {

/// Finite abelian group Z_{n1} x ... x Z_{nr}. Elements are indexed
/// 0..order-1 in mixed radix with the last factor fastest, so the identity
/// is index 0 and the group law never touches floating point.
class FiniteAbelianGroup {
 public:
  explicit FiniteAbelianGroup(std::vector<int> cyclic_orders);

  int order() const { return order_; }
  int rank() const { return static_cast<int>(orders_.size()); }
  const std::vector<int>& cyclic_orders() const { return orders_; }

  int identity() const { return 0; }
  std::vector<int> tuple(int index) const;
  int index(const std::vector<int>& tuple) const;
  int add(int a, int b) const;
  int negate(int a) const;
  bool trivial() const { return order_ == 1; }

  bool operator==(const FiniteAbelianGroup& other) const { return orders_ == other.orders_; }

 private:
  std::vector<int> orders_;
  int order_;
};

/// Character of a finite abelian group, stored as an exponent tuple:
/// chi(g) = exp(2 pi i sum_j k_j g_j / n_j).
struct Character {
  std::vector<int> exponents;
};

/// The dual of Z_{n1} x ... x Z_{nr} is the same group, with element k
/// acting as the character with exponent tuple k.
FiniteAbelianGroup dual_group(const FiniteAbelianGroup& g);

Character character(const FiniteAbelianGroup& g, int index);

Complex pairing(const FiniteAbelianGroup& g, const Character& chi, int element);

/// pairing(character(g, chiIndex), element) by index.
Complex pairing(const FiniteAbelianGroup& g, int chiIndex, int element);

}  // namespace opalg
