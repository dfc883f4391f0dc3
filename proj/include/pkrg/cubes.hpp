#pragma once

#include <cmath>
#include <vector>

#include "pkrg/types.hpp"

namespace pkrg {

/// Axis-aligned cube on the torus, arbitrary sidelength (dilations, barrier
/// shells). Geometry predicates wrap periodically.
struct Box {
  Vec3 center;
  Real side = 0;
  Real period = 1;
};

/// A j-cube: sidelength period * 2^{-j(1-eps)}, concentric dilation/ancestor
/// algebra. epsilon must satisfy 0 < eps < min((4 alpha - 4)/3, 1/20); the
/// alpha-dependent part is enforced where alpha is known (solver/pipeline).
struct Cube {
  Vec3 center;
  int level = 0;
  Real epsilon = 0.01;
  Real period = 1;
};

inline Real cube_side(const Cube& q) {
  return q.period * std::exp2(-q.level * (1.0 - q.epsilon));
}

inline Box box_of(const Cube& q) { return {q.center, cube_side(q), q.period}; }

/// aQ: same center, a times the sidelength.
inline Box dilate(const Box& b, Real a) { return {b.center, a * b.side, b.period}; }
inline Box dilate(const Cube& q, Real a) { return dilate(box_of(q), a); }

/// Q_k = 2^{(j-k)(1-eps)} Q: the concentric k-cube.
inline Cube ancestor(const Cube& q, int k) { return {q.center, k, q.epsilon, q.period}; }

/// Signed minimum-image difference a - b in [-period/2, period/2).
Real wrapped_delta(Real a, Real b, Real period);

/// Open-open intersection test (periodic).
bool boxes_overlap(const Box& a, const Box& b);

/// a is contained in the open interior of b.
bool box_inside(const Box& a, const Box& b);

/// Open box a meets the surface of box b: a intersects closure(b) but is not
/// contained in the interior.
bool box_touches_surface(const Box& a, const Box& b);

/// Axis-aligned tiling of the torus by level-j cubes anchored at the origin
/// (ceil(period/side)^3 cubes; the last row wraps).
std::vector<Cube> tile_lattice(int level, Real epsilon, Real period = 1.0);

}  // namespace pkrg
