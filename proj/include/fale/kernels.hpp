/*
 * Copyright 2026 The FALE Plots Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Dense double-precision kernels behind the scoring and reduction loops.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active variant is chosen once at startup from CPUID
// and can be forced with FALE_KERNELS=scalar|avx2. Vector variants may
// reassociate sums, so results can differ from the scalar reference by a few
// ulps; the equivalence tests pin the tolerance.

#ifndef FALE_KERNELS_HPP_
#define FALE_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fale {
namespace kernels {

struct Backend {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  const char* name;
};

extern const Backend kScalarBackend;
#if defined(__x86_64__) || defined(__i386__)
extern const Backend kAvx2Backend;
#endif

// Active backend for this process (CPUID + FALE_KERNELS override).
const Backend& active();

// Name of the active backend, "scalar" or "avx2".
std::string active_name();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}

inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void scale(double alpha, std::span<double> x) {
  active().scale(alpha, x.data(), x.size());
}

// Mean of a multiset of values, independent of input order: the values are
// sorted before summation so that row shuffles cannot perturb the rounding.
// Group statistics in the fairness measures rely on this.
double stable_mean(std::vector<double> values);

}  // namespace kernels
}  // namespace fale

#endif  // FALE_KERNELS_HPP_
