#include "memolab/point.hpp"

#include <bit>

#include "memolab/csv.hpp"
#include "memolab/error.hpp"

namespace memolab {

Point::Point(std::initializer_list<double> coords) : Point(std::span<const double>(coords.begin(), coords.size())) {}

Point::Point(std::span<const double> coords) {
  if (coords.empty() || coords.size() > kMaxDim)
    throw LabError(errc::kInvalidArgument, "point dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  dim_ = static_cast<std::uint8_t>(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) coords_[i] = coords[i];
}

std::partial_ordering operator<=>(const Point& a, const Point& b) {
  if (a.dim_ != b.dim_) return a.dim_ <=> b.dim_;
  for (std::size_t i = 0; i < a.dim_; ++i) {
    if (auto c = a.coords_[i] <=> b.coords_[i]; c != 0) return c;
  }
  return std::partial_ordering::equivalent;
}

std::string Point::to_string() const {
  if (dim_ == 1) return format_real(coords_[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) out += ' ';
    out += format_real(coords_[i]);
  }
  return out + ")";
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.dim();
  for (double c : p.coords()) {
    // +0.0 and -0.0 compare equal, so they must hash equal.
    const double v = c == 0.0 ? 0.0 : c;
    h ^= std::bit_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace memolab
