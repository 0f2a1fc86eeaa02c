#include "tokencore/matrix.hpp"

#include <cmath>
#include <string>

#include "tokencore/errors.hpp"

namespace tokencore {

FloatMatrix::FloatMatrix(std::size_t dim, std::vector<float> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0 && !values_.empty()) {
    throw SchemaError("matrix with zero dimension cannot hold values");
  }
  if (dim_ != 0 && values_.size() % dim_ != 0) {
    throw SchemaError("matrix value count " + std::to_string(values_.size()) +
                      " is not a multiple of dim " + std::to_string(dim_));
  }
}

void FloatMatrix::append_row(std::span<const float> v) {
  if (v.size() != dim_) {
    throw SchemaError("row of width " + std::to_string(v.size()) +
                      " appended to matrix of dim " + std::to_string(dim_));
  }
  values_.insert(values_.end(), v.begin(), v.end());
}

bool FloatMatrix::all_finite() const noexcept {
  for (float x : values_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double squared_l2(std::span<const float> a, std::span<const float> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += diff * diff;
  }
  return acc;
}

}  // namespace tokencore
