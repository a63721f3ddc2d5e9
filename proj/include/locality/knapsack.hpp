#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace locality::knapsack {

struct Item {
  double value = 0;
  double size = 0;
};

struct Instance {
  std::vector<Item> items;
  double capacity = 0;

  void validate() const;
};

struct Solution {
  std::vector<std::size_t> selected;  // ascending original indices
  double total_value = 0;
  double total_size = 0;
};

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Items by nonincreasing value/size (zero size first; ties: larger value,
// then lower index), then the longest prefix whose total size fits.
Solution greedy(const Instance& instance);

// Optimal subset. Dynamic program over capacity when all sizes and the
// capacity are integers and the table stays under kMaxDpCells; otherwise exhaustive
// search, which requires at most kMaxExhaustiveItems items.
Solution exact(const Instance& instance);

inline constexpr std::size_t kMaxExhaustiveItems = 20;
inline constexpr double kMaxDpCells = 1e7;

// max_i size_i / capacity.
double alpha(const Instance& instance);

}  // namespace locality::knapsack
