#pragma once

#include <cstdint>
#include <ostream>

namespace shimura {

/// Binary quadratic form a x^2 + b x y + c y^2.
struct QuadForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  std::int64_t discriminant() const { return b * b - 4 * a * c; }

  friend bool operator==(const QuadForm&, const QuadForm&) = default;
  friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const QuadForm& f) {
  return os << '(' << f.a << ',' << f.b << ',' << f.c << ')';
}

}  // namespace shimura
