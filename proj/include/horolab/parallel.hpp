#pragma once
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace horo {

// Every hot loop exists twice: a plain serial loop (the reference) and an
// OpenMP loop. Both write per-item results into fixed slots which are then
// combined serially, so output does not depend on the thread count.
enum class Backend { serial, openmp };

template <class F>
void for_each_index(std::size_t n, Backend backend, F&& body) {
  if (backend == Backend::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < nn; ++i) body(static_cast<std::size_t>(i));
}

// compensated (Neumaier) accumulator
template <class T>
struct Neumaier {
  T sum{};
  T comp{};
  void add(T x) {
    T t = sum + x;
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
      else
        comp += (x - t) + sum;
    } else {
      // complex: compensate the two parts independently
      auto part = [](double s, double v, double tt) {
        return std::abs(s) >= std::abs(v) ? (s - tt) + v : (v - tt) + s;
      };
      comp += T(part(sum.real(), x.real(), t.real()), part(sum.imag(), x.imag(), t.imag()));
    }
    sum = t;
  }
  T value() const { return sum + comp; }
};

// running mean / variance, mergeable in a fixed order (Chan et al.)
struct Moments {
  double n = 0, mean = 0, m2 = 0;
  void add(double x) {
    n += 1;
    double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) { *this = o; return; }
    double tot = n + o.n;
    double delta = o.mean - mean;
    mean += delta * (o.n / tot);
    m2 += o.m2 + delta * delta * (n * o.n / tot);
    n = tot;
  }
  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
  double stderr_of_mean() const { return n > 1 ? std::sqrt(variance() / n) : 0.0; }
};

}  // namespace horo
