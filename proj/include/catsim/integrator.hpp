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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "catsim/error.hpp"

namespace catsim {

// Explicit single-step integrators over Eigen dense types (vectors or
// matrices). After every accepted step the interval [t0, t1] can be sampled
// through interpolate(); trajectory jumps rely on this.
template <class State>
class OdeStepper {
 public:
  using Rhs = std::function<void(double, const State&, State&)>;
  virtual ~OdeStepper() = default;

  virtual void reset(double t, const State& y) = 0;
  // Advance by one accepted step, never past t_limit.
  virtual void step(double t_limit) = 0;
  virtual void interpolate(double theta, State& out) const = 0;

  double time() const { return t_; }
  double last_t0() const { return t0_; }
  double last_h() const { return t_ - t0_; }
  const State& state() const { return y_; }
  long accepted() const { return accepted_; }
  long rejected() const { return rejected_; }

 protected:
  double t_ = 0.0, t0_ = 0.0;
  State y_, y0_;
  long accepted_ = 0, rejected_ = 0;
};

template <class State>
class DormandPrince final : public OdeStepper<State> {
 public:
  using typename OdeStepper<State>::Rhs;

  DormandPrince(Rhs f, double rtol, double atol, double max_step)
      : f_(std::move(f)), rtol_(rtol), atol_(atol), max_step_(max_step) {}

  void reset(double t, const State& y) override {
    this->t_ = this->t0_ = t;
    this->y_ = y;
    this->y0_ = y;
    f_(t, this->y_, k1_);
    h_ = 0.0;  // re-estimated on the next step
  }

  void step(double t_limit) override {
    const double t = this->t_;
    const State& y = this->y_;
    const double span = t_limit - t;
    if (!(span > 0.0)) fail(ErrorCode::Integration, "integrator asked to step backwards");
    if (h_ == 0.0) h_ = initial_step();
    double h = std::min({h_, max_step_, span});
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));

    for (;;) {
      if (h < h_min) {
        std::ostringstream os;
        os << "step size underflow at t=" << t << " (h=" << h << ", accepted "
           << this->accepted_ << ", rejected " << this->rejected_
           << "); the problem is too stiff for the explicit integrator";
        fail(ErrorCode::Stiffness, os.str());
      }
      tmp_ = y + (h * a21) * k1_;
      f_(t + c2 * h, tmp_, k2_);
      tmp_ = y + h * (a31 * k1_ + a32 * k2_);
      f_(t + c3 * h, tmp_, k3_);
      tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
      f_(t + c4 * h, tmp_, k4_);
      tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
      f_(t + c5 * h, tmp_, k5_);
      tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
      f_(t + h, tmp_, k6_);
      y1_ = y + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
      const double t1 = (h == span) ? t_limit : t + h;
      f_(t1, y1_, k7_);
      err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
      const double en = error_norm(y, y1_, err_);

      if (en <= 1.0) {
        prepare_dense(h);
        this->t0_ = t;
        this->y0_.swap(this->y_);
        this->y_.swap(y1_);
        this->t_ = t1;
        k1_.swap(k7_);
        ++this->accepted_;
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h_ = h * (rejected_last_ ? std::min(1.0, fac) : fac);
        rejected_last_ = false;
        return;
      }
      ++this->rejected_;
      rejected_last_ = true;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }

  void interpolate(double theta, State& out) const override {
    const double s = 1.0 - theta;
    out = r1_ + theta * (r2_ + s * (r3_ + theta * (r4_ + s * r5_)));
  }

 private:
  double error_norm(const State& y0, const State& y1, const State& err) const {
    const auto scale = atol_ + rtol_ * y0.array().abs().max(y1.array().abs());
    return std::sqrt((err.array().abs() / scale).square().mean());
  }

  double initial_step() {
    const auto scale = atol_ + rtol_ * this->y_.array().abs();
    const double d0 = std::sqrt((this->y_.array().abs() / scale).square().mean());
    const double d1 = std::sqrt((k1_.array().abs() / scale).square().mean());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, max_step_);
    tmp_ = this->y_ + h0 * k1_;
    f_(this->t_ + h0, tmp_, k2_);
    const double d2 = std::sqrt(((k2_ - k1_).array().abs() / scale).square().mean()) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                 : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min({100.0 * h0, h1, max_step_});
  }

  void prepare_dense(double h) {
    const State& y = this->y_;
    r1_ = y;
    r2_ = y1_ - y;
    r3_ = h * k1_ - r2_;
    r4_ = r2_ - h * k7_ - r3_;
    r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Rhs f_;
  double rtol_, atol_, max_step_;
  double h_ = 0.0;
  bool rejected_last_ = false;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y1_, err_;
  State r1_, r2_, r3_, r4_, r5_;
};

// Classic RK4 with a fixed step; dense output by cubic Hermite interpolation.
template <class State>
class FixedRk4 final : public OdeStepper<State> {
 public:
  using typename OdeStepper<State>::Rhs;

  FixedRk4(Rhs f, double h) : f_(std::move(f)), h_(h) {
    if (!(h > 0.0)) fail(ErrorCode::Integration, "fixed step must be positive");
  }

  void reset(double t, const State& y) override {
    this->t_ = this->t0_ = t;
    this->y_ = y;
    this->y0_ = y;
    f_(t, this->y_, f0_);
  }

  void step(double t_limit) override {
    const double t = this->t_;
    const double span = t_limit - t;
    if (!(span > 0.0)) fail(ErrorCode::Integration, "integrator asked to step backwards");
    // Land exactly on t_limit when within a step of it.
    const double h = span <= h_ * (1.0 + 1e-12) ? span : h_;
    const State& y = this->y_;
    tmp_ = y + (0.5 * h) * f0_;
    f_(t + 0.5 * h, tmp_, k2_);
    tmp_ = y + (0.5 * h) * k2_;
    f_(t + 0.5 * h, tmp_, k3_);
    tmp_ = y + h * k3_;
    f_(t + h, tmp_, k4_);
    y1_ = y + (h / 6.0) * (f0_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    const double t1 = h == span ? t_limit : t + h;
    hstep_ = h;
    this->t0_ = t;
    this->y0_ = y;
    fa_ = f0_;
    this->y_.swap(y1_);
    this->t_ = t1;
    f_(t1, this->y_, f0_);
    ++this->accepted_;
  }

  void interpolate(double theta, State& out) const override {
    const double t2 = theta * theta, t3 = t2 * theta;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    out = h00 * this->y0_ + (h10 * hstep_) * fa_ + h01 * this->y_ + (h11 * hstep_) * f0_;
  }

 private:
  Rhs f_;
  double h_, hstep_ = 0.0;
  State f0_, fa_, k2_, k3_, k4_, tmp_, y1_;
};

}  // namespace catsim
