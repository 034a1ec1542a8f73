#pragma once

#include "fhj/error.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fhj {

/// Uniform periodic grid on the unit torus T^d, d in {1, 2}; node index n wraps to 0.
class TorusGrid {
public:
  TorusGrid(int dim, std::size_t nodes_per_dim);

  int dim() const noexcept { return dim_; }
  std::size_t nodes_per_dim() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return dim_ == 1 ? n_ : n_ * n_; }

  /// Periodic wrap of a signed per-axis index.
  std::size_t wrap(std::ptrdiff_t i) const noexcept {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    return static_cast<std::size_t>(((i % n) + n) % n);
  }

  /// Flat index; axis 0 is the slow index.
  std::size_t flat(std::size_t i, std::size_t j = 0) const noexcept {
    return dim_ == 1 ? i : i * n_ + j;
  }

  /// Flat index of the neighbour of `flat_index` shifted by `step` along `axis`.
  std::size_t neighbour(std::size_t flat_index, int axis, int step) const noexcept;

  /// Coordinates of a node, x_k = i_k * h.
  std::array<double, 2> point(std::size_t flat_index) const noexcept;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

private:
  int dim_;
  std::size_t n_;
  double h_;
};

using SpaceFunction = std::function<double(std::span<const double>)>;

/// Real values on one time slice of a TorusGrid.
class GridFunction {
public:
  explicit GridFunction(TorusGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}
  GridFunction(TorusGrid grid, std::vector<double> values);

  static GridFunction sample(TorusGrid grid, const SpaceFunction& f);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  double max_abs() const;
  /// max over axis-neighbour pairs of |u_i - u_j| / h.
  double discrete_lipschitz() const;

private:
  TorusGrid grid_;
  std::vector<double> values_;
};

}  // namespace fhj
