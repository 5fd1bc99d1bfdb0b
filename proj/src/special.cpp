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

#include "catsim/special.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "catsim/error.hpp"

namespace catsim {

namespace {

constexpr double kSeriesLimit = 15.0;

// sum_k (x^2/4)^k / (k!)^2, all terms positive.
double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * double(k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k [(2k-1)!!]^2 / (k! (8x)^k)
double i0_asymptotic_scaled(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (std::abs(next) > std::abs(term)) break;  // asymptotic series turns around
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

struct Segment {
  double a, b;
  std::complex<double> value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// Abscissae and weights for the 15-point Kronrod rule with its embedded
// 7-point Gauss rule (nodes at odd positions).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

Segment gk15(const std::function<std::complex<double>(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> k = fc * kWgk[7];
  std::complex<double> g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const std::complex<double> s = f(c - dx) + f(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

double bessel_i0(double x) {
  x = std::abs(x);
  if (x < kSeriesLimit) return i0_series(x);
  return std::exp(x) * i0_asymptotic_scaled(x);
}

double bessel_i0_scaled(double x) {
  x = std::abs(x);
  if (x < kSeriesLimit) return std::exp(-x) * i0_series(x);
  return i0_asymptotic_scaled(x);
}

QuadratureResult integrate_gk15(const std::function<std::complex<double>(double)>& f, double a,
                                double b, double abs_tol, int max_intervals) {
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  std::complex<double> total = first.value;
  double err = first.error;
  heap.push(first);
  int n = 1;
  while (err > abs_tol) {
    if (n >= max_intervals) {
      std::ostringstream os;
      os << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << err
         << " after " << n << " intervals";
      fail(ErrorCode::Integration, os.str());
    }
    Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    Segment l = gk15(f, s.a, mid), r = gk15(f, mid, s.b);
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++n;
    // Guard against drift in the running sums.
    if (n % 64 == 0) {
      std::priority_queue<Segment> copy = heap;
      total = 0.0;
      err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, err, n};
}

}  // namespace catsim
