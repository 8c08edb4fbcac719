#include "opalg/group.hpp"

#include <cmath>

namespace opalg {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int> cyclic_orders)
    : orders_(std::move(cyclic_orders)) {
  if (orders_.empty()) orders_ = {1};
  order_ = 1;
  for (int n : orders_) {
    if (n < 1) throw DimensionError("cyclic orders must be positive");
    order_ *= n;
  }
}

std::vector<int> FiniteAbelianGroup::tuple(int index) const {
  if (index < 0 || index >= order_) throw DimensionError("group element index out of range");
  std::vector<int> t(orders_.size());
  for (int j = rank() - 1; j >= 0; --j) {
    t[static_cast<size_t>(j)] = index % orders_[static_cast<size_t>(j)];
    index /= orders_[static_cast<size_t>(j)];
  }
  return t;
}

int FiniteAbelianGroup::index(const std::vector<int>& tuple) const {
  if (tuple.size() != orders_.size()) throw DimensionError("group tuple rank mismatch");
  int idx = 0;
  for (size_t j = 0; j < orders_.size(); ++j) {
    int c = tuple[j] % orders_[j];
    if (c < 0) c += orders_[j];
    idx = idx * orders_[j] + c;
  }
  return idx;
}

int FiniteAbelianGroup::add(int a, int b) const {
  const auto ta = tuple(a);
  const auto tb = tuple(b);
  std::vector<int> t(orders_.size());
  for (size_t j = 0; j < orders_.size(); ++j) t[j] = (ta[j] + tb[j]) % orders_[j];
  return index(t);
}

int FiniteAbelianGroup::negate(int a) const {
  auto t = tuple(a);
  for (size_t j = 0; j < orders_.size(); ++j) t[j] = (orders_[j] - t[j]) % orders_[j];
  return index(t);
}

FiniteAbelianGroup dual_group(const FiniteAbelianGroup& g) {
  return FiniteAbelianGroup(g.cyclic_orders());
}

Character character(const FiniteAbelianGroup& g, int index) {
  return Character{g.tuple(index)};
}

Complex pairing(const FiniteAbelianGroup& g, const Character& chi, int element) {
  if (chi.exponents.size() != static_cast<size_t>(g.rank()))
    throw DimensionError("character rank mismatch");
  const auto t = g.tuple(element);
  double phase = 0.0;
  for (size_t j = 0; j < t.size(); ++j)
    phase += static_cast<double>(chi.exponents[j]) * static_cast<double>(t[j]) /
             static_cast<double>(g.cyclic_orders()[j]);
  return std::exp(Complex(0.0, 2.0 * M_PI * phase));
}

Complex pairing(const FiniteAbelianGroup& g, int chiIndex, int element) {
  return pairing(g, character(g, chiIndex), element);
}

}  // namespace opalg
