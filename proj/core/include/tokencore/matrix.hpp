#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tokencore {

/// Dense row-major float32 matrix. Rows are embedding vectors of width dim().
class FloatMatrix {
 public:
  FloatMatrix() = default;
  explicit FloatMatrix(std::size_t dim) : dim_(dim) {}
  FloatMatrix(std::size_t rows, std::size_t dim)
      : dim_(dim), values_(rows * dim, 0.0f) {}
  /// Takes ownership of `values`; its size must be a multiple of `dim`.
  FloatMatrix(std::size_t dim, std::vector<float> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<float> row(std::size_t i) { return {values_.data() + i * dim_, dim_}; }

  /// Rows [first, first + count) as a contiguous block.
  std::span<const float> block(std::size_t first, std::size_t count) const {
    return {values_.data() + first * dim_, count * dim_};
  }

  void append_row(std::span<const float> v);
  void reserve_rows(std::size_t n) { values_.reserve(n * dim_); }

  const std::vector<float>& values() const noexcept { return values_; }
  std::vector<float>& values() noexcept { return values_; }

  bool all_finite() const noexcept;

  friend bool operator==(const FloatMatrix&, const FloatMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

/// Squared Euclidean distance accumulated in float64.
double squared_l2(std::span<const float> a, std::span<const float> b) noexcept;

}  // namespace tokencore
