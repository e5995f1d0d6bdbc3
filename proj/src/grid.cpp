#include "gphl/grid.hpp"

#include <cmath>

namespace gphl {

LatticeGrid::LatticeGrid(int dimension, int points_per_axis, double box_length)
    : d_(dimension), n_(points_per_axis), length_(box_length) {
  if (d_ < 1 || d_ > 3) throw DomainError("grid dimension must be 1, 2, or 3");
  if (n_ < 8 || n_ > 64 || !is_power_of_two(static_cast<std::uint64_t>(n_)))
    throw DomainError("points_per_axis must be a power of two in [8, 64]");
  if (!(length_ > 0.0) || !std::isfinite(length_))
    throw DomainError("box_length must be positive and finite");
  h_ = length_ / n_;
}

double LatticeGrid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < d_; ++i) v *= h_;
  return v;
}

double LatticeGrid::min_image(double delta) const {
  double r = std::remainder(delta, length_);
  // std::remainder returns (-L/2, L/2]; fold the closed end down.
  if (r == length_ / 2.0) r = -r;
  return r;
}

std::size_t LatticeGrid::total_points(int axes) const {
  std::size_t t = 1;
  for (int i = 0; i < axes; ++i) t *= static_cast<std::size_t>(n_);
  return t;
}

std::size_t LatticeGrid::flat_index(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (int v : idx) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  return f;
}

void LatticeGrid::unflatten(std::size_t flat, int axes, std::vector<int>& idx) const {
  idx.resize(static_cast<std::size_t>(axes));
  for (int a = axes - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
}

}  // namespace gphl
