// Copyright 2026 The qhopfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

namespace qhop {

/// Classical fourth-order Runge-Kutta step for a linear autonomous system
/// y' = f(y), with the stage buffers kept between calls. `State` is any
/// Eigen dense object; `f(const State& in, State& out)` writes the
/// derivative.
template <class State>
class Rk4Stepper {
 public:
  template <class F>
  void step(State& y, double h, F&& f) {
    f(y, slope_);
    step_with_slope(y, h, f);
  }

  /// Same as step() but reuses slope() computed by the caller for the
  /// current y (first stage).
  template <class F>
  void step_with_slope(State& y, double h, F&& f) {
    sum_ = slope_;
    tmp_ = y + (0.5 * h) * slope_;
    f(tmp_, k_);
    sum_ += 2.0 * k_;
    tmp_ = y + (0.5 * h) * k_;
    f(tmp_, k_);
    sum_ += 2.0 * k_;
    tmp_ = y + h * k_;
    f(tmp_, k_);
    sum_ += k_;
    y += (h / 6.0) * sum_;
  }

  /// First-stage derivative of the most recent step (f at the step start).
  State& slope() { return slope_; }
  const State& slope() const { return slope_; }

 private:
  State slope_, tmp_, k_, sum_;
};

}  // namespace qhop
