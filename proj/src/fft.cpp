#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace xsb::fft {
namespace {

// (dims, howmany, stride, dist, direction)
using Key = std::tuple<std::vector<int>, int, int, int, int>;

struct Cache {
  std::mutex mu;
  std::map<Key, fftw_plan> plans;
  ~Cache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }
};

Cache& cache() {
  static Cache c;
  return c;
}

fftw_plan plan_for(const std::vector<int>& dims, int howmany, int stride, int dist, int dir) {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  Key key{dims, howmany, stride, dist, dir};
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;

  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  total = (total - 1) * stride + static_cast<std::size_t>(howmany - 1) * dist + 1;
  auto* scratch = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany, scratch,
                                   nullptr, stride, dist, scratch, nullptr, stride, dist, dir,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  c.plans.emplace(std::move(key), p);
  return p;
}

void run(fftw_plan p, std::complex<double>* data) {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

}  // namespace

void transform(std::complex<double>* data, const std::vector<int>& dims, Direction dir) {
  run(plan_for(dims, 1, 1, 0, dir), data);
}

void transform_rows(std::complex<double>* data, std::size_t rows, int len, Direction dir) {
  if (rows == 0) return;
  run(plan_for({len}, static_cast<int>(rows), 1, len, dir), data);
}

void transform_leading(std::complex<double>* data, const std::vector<int>& dims, int inner,
                       Direction dir) {
  run(plan_for(dims, inner, inner, 1, dir), data);
}

}  // namespace xsb::fft
