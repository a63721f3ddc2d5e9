#include "locality/perceptron.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace locality::perceptron {

namespace {

constexpr double kUnitTolerance = 1e-12;

Vector random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  double norm = 0;
  do {
    norm = 0;
    for (double& x : v) {
      x = gauss(rng);
      norm += x * x;
    }
  } while (norm == 0);
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in dot product");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void Dataset::validate() const {
  if (dim == 0) throw DatasetError("dataset dimension must be >= 1");
  if (points.size() != labels.size()) throw DatasetError("points and labels differ in count");
  if (points.empty()) throw DatasetError("dataset has no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      throw DatasetError("point " + std::to_string(i) + " has dimension " +
                         std::to_string(points[i].size()) + ", expected " + std::to_string(dim));
    }
    if (std::abs(std::sqrt(dot(points[i], points[i])) - 1.0) > kUnitTolerance) {
      throw DatasetError("point " + std::to_string(i) + " is not a unit vector");
    }
    if (labels[i] != 1 && labels[i] != -1) {
      throw DatasetError("label of point " + std::to_string(i) + " must be -1 or +1");
    }
  }
  if (witness) {
    if (witness->w_star.size() != dim) throw DatasetError("witness has the wrong dimension");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (labels[i] * dot(witness->w_star, points[i]) < witness->mu) {
        throw DatasetError("witness margin fails at point " + std::to_string(i));
      }
    }
  }
}

Trace train(const Dataset& data, std::size_t max_updates) {
  data.validate();
  Trace trace;
  trace.final_w.assign(data.dim, 0.0);
  Vector& w = trace.final_w;

  auto record = [&] {
    Step s{dot(w, w), std::nullopt};
    if (data.witness) s.projection = dot(w, data.witness->w_star);
    trace.steps.push_back(s);
  };
  record();

  while (true) {
    std::size_t wrong = data.points.size();
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      if (data.labels[i] * dot(w, data.points[i]) <= 0) {
        wrong = i;
        break;
      }
    }
    if (wrong == data.points.size()) {
      trace.converged = true;
      break;
    }
    if (trace.updates == max_updates) break;
    const Vector& x = data.points[wrong];
    for (std::size_t j = 0; j < data.dim; ++j) w[j] += data.labels[wrong] * x[j];
    ++trace.updates;
    record();
  }
  return trace;
}

Dataset margin_dataset(std::size_t dim, std::size_t n, double mu, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("margin_dataset needs dimension >= 2");
  if (n == 0) throw std::invalid_argument("margin_dataset needs n >= 1");
  if (!(mu > 0 && mu < 1)) throw std::invalid_argument("margin must lie strictly between 0 and 1");

  std::mt19937_64 rng(seed);
  Dataset data;
  data.dim = dim;
  Witness witness{random_unit(rng, dim), mu};

  const std::size_t budget = 10'000 * n + 100'000;
  std::size_t attempts = 0;
  while (data.points.size() < n) {
    if (++attempts > budget) {
      throw DatasetError("rejection budget exhausted after " + std::to_string(budget) +
                         " samples; a margin of " + std::to_string(mu) + " in dimension " +
                         std::to_string(dim) + " is too rare, lower mu or the dimension");
    }
    Vector x = random_unit(rng, dim);
    const double proj = dot(witness.w_star, x);
    if (std::abs(proj) < mu) continue;
    data.labels.push_back(proj > 0 ? 1 : -1);
    data.points.push_back(std::move(x));
  }
  data.witness = std::move(witness);
  return data;
}

double margin_lower_bound(const Dataset& data, std::span<const double> w) {
  const double norm = std::sqrt(dot(w, w));
  if (norm == 0) throw std::invalid_argument("margin_lower_bound needs a nonzero w");
  double worst = INFINITY;
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    worst = std::min(worst, data.labels[i] * dot(w, data.points[i]) / norm);
  }
  return worst;
}

}  // namespace locality::perceptron
