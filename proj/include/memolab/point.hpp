#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>

namespace memolab {

inline constexpr std::size_t kMaxDim = 4;

// A point of an instance space: up to kMaxDim real coordinates, compared by
// exact value. Finite discrete spaces store the element index in coordinate 0.
class Point {
 public:
  constexpr Point() = default;
  constexpr Point(double x) : coords_{x, 0.0, 0.0, 0.0}, dim_(1) {}  // NOLINT(implicit)
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  constexpr std::size_t dim() const { return dim_; }
  constexpr double operator[](std::size_t i) const { return coords_[i]; }
  constexpr double x() const { return coords_[0]; }
  std::span<const double> coords() const { return {coords_.data(), dim_}; }

  friend constexpr bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.coords_[i] != b.coords_[i]) return false;
    return true;
  }
  friend std::partial_ordering operator<=>(const Point& a, const Point& b);

  std::string to_string() const;

 private:
  std::array<double, kMaxDim> coords_{};
  std::uint8_t dim_ = 1;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

}  // namespace memolab
