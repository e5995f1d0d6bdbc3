#pragma once

#include <cstddef>
#include <vector>

#include "gphl/common.hpp"

namespace gphl {

// Periodic box [0, L)^d sampled on n points per axis, n a power of two in
// [8, 64]. Positions x_m = m h, h = L/n; Fourier frequencies are the signed
// integers scaled by 2*pi/L.
class LatticeGrid {
 public:
  LatticeGrid() : LatticeGrid(1, 8, 1.0) {}
  LatticeGrid(int dimension, int points_per_axis, double box_length);

  int dimension() const { return d_; }
  int points_per_axis() const { return n_; }
  double box_length() const { return length_; }
  double spacing() const { return h_; }
  // Cell volume h^d for one particle's coordinates.
  double cell_volume() const;

  double position(int m) const { return h_ * m; }
  // Signed mode integer: m for m < n/2, m-n otherwise.
  int signed_mode(int m) const { return m < n_ / 2 ? m : m - n_; }
  double frequency(int m) const { return 2.0 * kPi * signed_mode(m) / length_; }
  // Largest magnitude of a resolvable frequency (Nyquist): pi*n/L.
  double nyquist_frequency() const { return kPi * n_ / length_; }

  // Displacement wrapped into [-L/2, L/2): distances respect periodicity.
  double min_image(double delta) const;

  // Row-major flat indexing for a tensor with `axes` coordinates on this grid.
  std::size_t total_points(int axes) const;
  std::size_t flat_index(const std::vector<int>& idx) const;
  void unflatten(std::size_t flat, int axes, std::vector<int>& idx) const;

 private:
  int d_;
  int n_;
  double length_;
  double h_;
};

}  // namespace gphl
