// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <functional>

namespace catsim {

// Modified Bessel function of the first kind, order zero.
double bessel_i0(double x);
// exp(-|x|) I0(x); finite for any argument.
double bessel_i0_scaled(double x);

struct QuadratureResult {
  std::complex<double> value;
  double error = 0.0;
  int intervals = 0;
};

// Adaptive 7/15-point Gauss-Kronrod on [a, b], bisecting the interval with the
// largest error estimate until the summed estimate drops below abs_tol.
QuadratureResult integrate_gk15(const std::function<std::complex<double>(double)>& f, double a,
                                double b, double abs_tol, int max_intervals = 4000);

}  // namespace catsim
