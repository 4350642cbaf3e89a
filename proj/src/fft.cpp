#include "fcdg/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>

namespace fcdg {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

struct FftwqFree {
  void operator()(void* p) const { fftwq_free(p); }
};

}  // namespace

template <>
void dft_inplace<double>(std::span<std::complex<double>> data, DftSign sign) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return;
  std::unique_ptr<fftw_complex, FftwFree> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
  fftw_plan plan = fftw_plan_dft_1d(n, buf.get(), buf.get(), static_cast<int>(sign),
                                    FFTW_ESTIMATE);
  auto* raw = reinterpret_cast<std::complex<double>*>(buf.get());
  std::copy(data.begin(), data.end(), raw);
  fftw_execute(plan);
  std::copy(raw, raw + n, data.begin());
  fftw_destroy_plan(plan);
}

template <>
void dft_inplace<Extended>(std::span<std::complex<Extended>> data, DftSign sign) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return;
  std::unique_ptr<fftwq_complex, FftwqFree> buf(
      static_cast<fftwq_complex*>(fftwq_malloc(sizeof(fftwq_complex) * n)));
  fftwq_plan plan = fftwq_plan_dft_1d(n, buf.get(), buf.get(), static_cast<int>(sign),
                                      FFTW_ESTIMATE);
  auto* raw = reinterpret_cast<std::complex<Extended>*>(buf.get());
  std::copy(data.begin(), data.end(), raw);
  fftwq_execute(plan);
  std::copy(raw, raw + n, data.begin());
  fftwq_destroy_plan(plan);
}

}  // namespace fcdg
