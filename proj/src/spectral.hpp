#pragma once

// Internal FFTW wrapper for the periodic pseudo-spectral backend.

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "savns/grid.hpp"

namespace savns::detail {

using Complex = std::complex<double>;

/// Real-to-complex 2-D transform on an nx-by-ny periodic grid. Plans are
/// shared per (nx, ny) and executed with the new-array interface, so one
/// instance can be used from several threads at once.
class Fourier {
 public:
  static std::shared_ptr<const Fourier> for_grid(const Grid& grid);
  ~Fourier();
  Fourier(const Fourier&) = delete;
  Fourier& operator=(const Fourier&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  /// Number of stored x-modes (nx/2 + 1).
  int ncx() const { return ncx_; }
  std::size_t spectrum_size() const {
    return static_cast<std::size_t>(ncx_) * ny_;
  }

  std::vector<Complex> forward(std::span<const double> values) const;
  /// Normalised inverse: inverse(forward(v)) == v up to roundoff.
  std::vector<double> inverse(std::vector<Complex> spectrum) const;

  /// Signed mode index along y for spectrum row j.
  int mode_y(int j) const { return j <= ny_ / 2 ? j : j - ny_; }

  /// 2/3-rule truncation mask.
  bool resolved(int m, int j) const {
    int my = mode_y(j);
    return 3 * m <= nx_ && 3 * (my < 0 ? -my : my) <= ny_;
  }

  Fourier(int nx, int ny);

 private:
  int nx_, ny_, ncx_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Wavenumbers of a periodic grid. `dx`/`dy` are the first-derivative
/// symbols (Nyquist modes zeroed so odd derivatives stay real); `lap` is
/// the full -|k|^2 symbol.
struct Wavenumbers {
  explicit Wavenumbers(const Grid& grid);
  double dx(int m) const { return (2 * m == nx) ? 0.0 : m * sx; }
  double dy(int j) const {
    int my = j <= ny / 2 ? j : j - ny;
    return (2 * j == ny) ? 0.0 : my * sy;
  }
  double k2(int m, int j) const {
    int my = j <= ny / 2 ? j : j - ny;
    double kx = m * sx, ky = my * sy;
    return kx * kx + ky * ky;
  }
  int nx, ny;
  double sx, sy;
};

}  // namespace savns::detail
