#include "vgrasp/geometry/math.hpp"

#include <algorithm>

namespace vgrasp {

Quat slerp(const Quat& a, const Quat& b, double t)
{
  double cos_half = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  Quat end = b;
  if (cos_half < 0.0) {
    cos_half = -cos_half;
    end = {-b.w, -b.x, -b.y, -b.z};
  }
  double wa = 1.0 - t;
  double wb = t;
  if (cos_half < 0.9995) {
    const double theta = std::acos(std::clamp(cos_half, -1.0, 1.0));
    const double s = std::sin(theta);
    wa = std::sin((1.0 - t) * theta) / s;
    wb = std::sin(t * theta) / s;
  }
  const Quat q{wa * a.w + wb * end.w, wa * a.x + wb * end.x, wa * a.y + wb * end.y,
               wa * a.z + wb * end.z};
  return q.normalized();
}

}  // namespace vgrasp
