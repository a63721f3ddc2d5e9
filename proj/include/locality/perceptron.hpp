#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace locality::perceptron {

using Vector = std::vector<double>;

struct Witness {
  Vector w_star;  // unit vector
  double mu = 0;  // b_i (w_star . x_i) >= mu for every point
};

struct Dataset {
  std::size_t dim = 0;
  std::vector<Vector> points;  // unit vectors
  std::vector<int> labels;     // -1 or +1
  std::optional<Witness> witness;

  void validate() const;
};

struct Step {
  double norm_sq = 0;                 // |w_t|^2
  std::optional<double> projection;   // w_t . w_star when a witness is known
};

struct Trace {
  Vector final_w;
  std::size_t updates = 0;
  std::vector<Step> steps;  // w_1 .. w_{updates+1}
  bool converged = false;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double dot(std::span<const double> a, std::span<const double> b);

// Starts from w = 0. Each pass scans points in index order and updates on
// the first point with sgn(w . x_i) != b_i, where sgn(0) matches neither
// label. Stops after a clean pass or after max_updates updates.
Trace train(const Dataset& data, std::size_t max_updates);

// Rejection-samples unit points around a random unit w_star, keeping those
// with |w_star . x| >= mu and labelling them by the sign of w_star . x.
Dataset margin_dataset(std::size_t dim, std::size_t n, double mu, std::uint64_t seed);

// min_i b_i (w . x_i) / |w|.
double margin_lower_bound(const Dataset& data, std::span<const double> w);

}  // namespace locality::perceptron
