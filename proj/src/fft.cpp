#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace rriqa::detail {
namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void fft2(ComplexGrid& grid, int width, int height, bool inverse) {
  auto* data = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(height, width, data, data, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace rriqa::detail
