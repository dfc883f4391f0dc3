#include "pkrg/cubes.hpp"

namespace pkrg {

Real wrapped_delta(Real a, Real b, Real period) {
  Real d = std::fmod(a - b, period);
  if (d < -period / 2) d += period;
  if (d >= period / 2) d -= period;
  return d;
}

bool boxes_overlap(const Box& a, const Box& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.side >= a.period || b.side >= b.period) continue;  // wraps the axis fully
    const Real d = std::abs(wrapped_delta(a.center[i], b.center[i], a.period));
    if (d >= (a.side + b.side) / 2) return false;
  }
  return true;
}

bool box_inside(const Box& a, const Box& b) {
  for (int i = 0; i < 3; ++i) {
    if (b.side >= b.period) continue;
    if (a.side >= a.period) return false;
    const Real d = std::abs(wrapped_delta(a.center[i], b.center[i], a.period));
    if (d + a.side / 2 >= b.side / 2) return false;
  }
  return true;
}

bool box_touches_surface(const Box& a, const Box& b) {
  return boxes_overlap(a, b) && !box_inside(a, b);
}

std::vector<Cube> tile_lattice(int level, Real epsilon, Real period) {
  const Cube proto{Vec3::Zero(), level, epsilon, period};
  const Real side = cube_side(proto);
  const int m = std::max(1, static_cast<int>(std::ceil(period / side - 1e-12)));
  std::vector<Cube> cubes;
  cubes.reserve(static_cast<std::size_t>(m) * m * m);
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2)
      for (int i3 = 0; i3 < m; ++i3) {
        Cube q = proto;
        q.center = Vec3((i1 + 0.5) * side, (i2 + 0.5) * side, (i3 + 0.5) * side);
        for (int ax = 0; ax < 3; ++ax) q.center[ax] = std::fmod(q.center[ax], period);
        cubes.push_back(q);
      }
  return cubes;
}

}  // namespace pkrg
