#include "spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace savns::detail {

namespace {
// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fourier::Fourier(int nx, int ny) : nx_(nx), ny_(ny), ncx_(nx / 2 + 1) {
  std::vector<double> real(static_cast<std::size_t>(nx) * ny);
  std::vector<Complex> spec(static_cast<std::size_t>(ncx_) * ny);
  auto* r = real.data();
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  // ESTIMATE keeps the algorithm choice (and so every output bit) fixed.
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(plan_mutex());
  forward_plan_ = fftw_plan_dft_r2c_2d(ny, nx, r, c, flags);
  inverse_plan_ = fftw_plan_dft_c2r_2d(ny, nx, c, r, flags);
}

Fourier::~Fourier() {
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

std::shared_ptr<const Fourier> Fourier::for_grid(const Grid& grid) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const Fourier>> cache;
  std::lock_guard lock(cache_mutex);
  auto key = std::make_pair(grid.nx(), grid.ny());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const Fourier>(grid.nx(), grid.ny());
  cache.emplace(key, f);
  return f;
}

std::vector<Complex> Fourier::forward(std::span<const double> values) const {
  std::vector<double> in(values.begin(), values.end());
  std::vector<Complex> out(spectrum_size());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> Fourier::inverse(std::vector<Complex> spectrum) const {
  std::vector<double> out(static_cast<std::size_t>(nx_) * ny_);
  // c2r overwrites its input; `spectrum` is our own copy.
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(spectrum.data()),
                       out.data());
  const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
  for (double& v : out) v *= scale;
  return out;
}

Wavenumbers::Wavenumbers(const Grid& grid)
    : nx(grid.nx()), ny(grid.ny()),
      sx(2 * std::numbers::pi / (grid.x1() - grid.x0())),
      sy(2 * std::numbers::pi / (grid.y1() - grid.y0())) {}

}  // namespace savns::detail
