#pragma once

#include "fhj/error.hpp"

#include <cmath>
#include <string>

namespace fhj {

/// Order alpha of the Caputo derivative, 0 < alpha <= 1.
class FractionalOrder {
public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw Error(ErrorCode::domain,
                  "fractional order must satisfy 0 < alpha <= 1, got " + std::to_string(alpha));
  }

  double value() const noexcept { return alpha_; }
  bool is_classical() const noexcept { return alpha_ == 1.0; }

  friend bool operator==(FractionalOrder, FractionalOrder) = default;

private:
  double alpha_;
};

}  // namespace fhj
