#include "locality/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace locality::knapsack {

namespace {

bool is_integer(double x) { return std::floor(x) == x; }

Solution make_solution(const Instance& instance, std::vector<std::size_t> selected) {
  std::sort(selected.begin(), selected.end());
  Solution s;
  for (std::size_t i : selected) {
    s.total_value += instance.items[i].value;
    s.total_size += instance.items[i].size;
  }
  s.selected = std::move(selected);
  return s;
}

Solution exact_dp(const Instance& instance) {
  const auto cap = static_cast<std::size_t>(instance.capacity);
  const std::size_t n = instance.items.size();
  // best[i][c]: best value over the first i items within capacity c.
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(cap + 1, 0.0));
  for (std::size_t i = 1; i <= n; ++i) {
    const Item& item = instance.items[i - 1];
    const auto size = static_cast<std::size_t>(item.size);
    for (std::size_t c = 0; c <= cap; ++c) {
      best[i][c] = best[i - 1][c];
      if (size <= c) best[i][c] = std::max(best[i][c], best[i - 1][c - size] + item.value);
    }
  }
  std::vector<std::size_t> chosen;
  std::size_t c = cap;
  for (std::size_t i = n; i > 0; --i) {
    if (best[i][c] != best[i - 1][c]) {
      chosen.push_back(i - 1);
      c -= static_cast<std::size_t>(instance.items[i - 1].size);
    }
  }
  return make_solution(instance, std::move(chosen));
}

Solution exact_exhaustive(const Instance& instance) {
  const std::size_t n = instance.items.size();
  if (n > kMaxExhaustiveItems) {
    throw TooLarge("exhaustive knapsack search supports at most " +
                   std::to_string(kMaxExhaustiveItems) + " items, got " + std::to_string(n));
  }
  std::uint32_t best_mask = 0;
  double best_value = -1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double value = 0, size = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        value += instance.items[i].value;
        size += instance.items[i].size;
      }
    }
    if (size <= instance.capacity && value > best_value) {
      best_value = value;
      best_mask = mask;
    }
  }
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask >> i & 1u) chosen.push_back(i);
  }
  return make_solution(instance, std::move(chosen));
}

}  // namespace

void Instance::validate() const {
  if (items.empty()) throw std::invalid_argument("knapsack instance has no items");
  if (!(capacity > 0) || !std::isfinite(capacity)) {
    throw std::invalid_argument("knapsack capacity must be a positive finite number");
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    if (!(it.value >= 0) || !(it.size >= 0) || !std::isfinite(it.value) || !std::isfinite(it.size)) {
      throw std::invalid_argument("item " + std::to_string(i) +
                                  " needs a nonnegative finite value and size");
    }
  }
}

Solution greedy(const Instance& instance) {
  instance.validate();
  std::vector<std::size_t> order(instance.items.size());
  std::iota(order.begin(), order.end(), 0);
  // Compare densities by cross-multiplication; zero sizes rank first.
  auto denser = [&](std::size_t a, std::size_t b) {
    const Item& x = instance.items[a];
    const Item& y = instance.items[b];
    const bool x_free = x.size == 0;
    const bool y_free = y.size == 0;
    if (x_free != y_free) return x_free;
    if (!x_free) {
      const double lhs = x.value * y.size;
      const double rhs = y.value * x.size;
      if (lhs != rhs) return lhs > rhs;
    }
    if (x.value != y.value) return x.value > y.value;
    return a < b;
  };
  std::sort(order.begin(), order.end(), denser);

  std::vector<std::size_t> chosen;
  double used = 0;
  for (std::size_t i : order) {
    if (used + instance.items[i].size > instance.capacity) break;
    used += instance.items[i].size;
    chosen.push_back(i);
  }
  return make_solution(instance, std::move(chosen));
}

Solution exact(const Instance& instance) {
  instance.validate();
  const bool integral =
      is_integer(instance.capacity) &&
      (instance.capacity + 1) * static_cast<double>(instance.items.size() + 1) <= kMaxDpCells &&
      std::all_of(instance.items.begin(), instance.items.end(),
                  [](const Item& it) { return is_integer(it.size); });
  return integral ? exact_dp(instance) : exact_exhaustive(instance);
}

double alpha(const Instance& instance) {
  instance.validate();
  double largest = 0;
  for (const Item& it : instance.items) largest = std::max(largest, it.size);
  return largest / instance.capacity;
}

}  // namespace locality::knapsack
