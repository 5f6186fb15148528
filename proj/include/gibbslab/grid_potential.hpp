#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/core.hpp"
#include "gibbslab/potentials.hpp"

namespace gibbslab {

/// Values on a regular grid over a box, multilinearly interpolated and +inf
/// outside the box. A corner value of +inf makes the interpolant +inf
/// wherever that corner has positive weight.
///
/// CSV layout (lines starting with '#' are skipped):
///   d,<d>
///   lo,<lo_1>,...,<lo_d>
///   hi,<hi_1>,...,<hi_d>
///   step,<h>
///   values
///   <v>,<v>,...            row-major, last axis fastest, any line breaks
///
/// Binary layout (little-endian): 8-byte magic "GLGRID1\0", uint64 d,
/// d doubles lo, d doubles hi, double step, then the values.
class TabulatedGrid {
 public:
  TabulatedGrid(Point lo, Point hi, double step, std::vector<double> values);

  static TabulatedGrid read_csv(std::istream& is);
  static TabulatedGrid read_binary(std::istream& is);
  /// Chooses the format from the magic bytes.
  static TabulatedGrid load(const std::string& path);

  void write_csv(std::ostream& os) const;
  void write_binary(std::ostream& os) const;

  std::size_t dim() const { return lo_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  double operator()(std::span<const double> x) const;

 private:
  Point lo_, hi_;
  double step_;
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

namespace potentials {

/// V(x) = table(x).
ConfinementFn tabulated_confinement(TabulatedGrid table);
/// W(x, y) = table(x - y), table over R^d.
InteractionFn tabulated_kernel(TabulatedGrid table);
/// W(x, y) = table(x, y), table over R^{2d}.
InteractionFn tabulated_pair(TabulatedGrid table);

}  // namespace potentials
}  // namespace gibbslab
