#include "fhj/grid.hpp"

#include "fhj/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fhj {

TorusGrid::TorusGrid(int dim, std::size_t nodes_per_dim) : dim_(dim), n_(nodes_per_dim) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::domain, "torus dimension must be 1 or 2");
  if (nodes_per_dim < 2) throw Error(ErrorCode::domain, "torus grid needs at least 2 nodes per axis");
  h_ = 1.0 / static_cast<double>(n_);
}

std::size_t TorusGrid::neighbour(std::size_t flat_index, int axis, int step) const noexcept {
  if (dim_ == 1) return wrap(static_cast<std::ptrdiff_t>(flat_index) + step);
  std::size_t i = flat_index / n_;
  std::size_t j = flat_index % n_;
  if (axis == 0)
    i = wrap(static_cast<std::ptrdiff_t>(i) + step);
  else
    j = wrap(static_cast<std::ptrdiff_t>(j) + step);
  return i * n_ + j;
}

std::array<double, 2> TorusGrid::point(std::size_t flat_index) const noexcept {
  if (dim_ == 1) return {static_cast<double>(flat_index) * h_, 0.0};
  return {static_cast<double>(flat_index / n_) * h_, static_cast<double>(flat_index % n_) * h_};
}

GridFunction::GridFunction(TorusGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorCode::grid_mismatch, "grid function has " + std::to_string(values_.size()) +
                                              " values, grid has " + std::to_string(grid_.size()));
  if (!kernels::all_finite(values_))
    throw Error(ErrorCode::domain, "grid function values must be finite");
}

GridFunction GridFunction::sample(TorusGrid grid, const SpaceFunction& f) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto p = grid.point(k);
    v[k] = f(std::span<const double>(p.data(), static_cast<std::size_t>(grid.dim())));
  }
  return GridFunction(grid, std::move(v));
}

double GridFunction::max_abs() const { return kernels::max_abs(values_); }

double GridFunction::discrete_lipschitz() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k)
    for (int axis = 0; axis < grid_.dim(); ++axis)
      m = std::max(m, std::fabs(values_[grid_.neighbour(k, axis, 1)] - values_[k]));
  return m / grid_.spacing();
}

}  // namespace fhj
