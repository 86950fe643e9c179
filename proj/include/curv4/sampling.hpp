#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curv4/curvop.hpp"

namespace curv4 {

enum class Constraint {
  bianchi,
  wpic,
  pic,
  a_nonneg,
  c_nonneg,
  ricci_nonneg,
  ricci_2nonneg,
  einstein,
};

const char* constraint_name(Constraint c);
Constraint constraint_from_name(const std::string& name);

struct SampleSpec {
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
  double scale = 1.0;
  std::vector<Constraint> constraints;

  bool has(Constraint c) const;
};

struct SampleMeta {
  std::uint64_t index = 0;
  int attempts = 0;
  bool shifted = false;   // cone constraints met by an identity shift
  double shift = 0.0;     // s with A -> A + sI, C -> C + sI
};

// Deterministic function of (spec.seed, index): rejection sampling against
// the cone constraints with a bounded attempt budget, then a single identity
// shift of A and C as fallback (Bianchi-preserving; flagged in meta).
CurvOp4 sample_curvop(const SampleSpec& spec, std::uint64_t index,
                      SampleMeta* meta = nullptr);

// Haar-distributed element of SO(4): Gaussian matrix, twice-applied modified
// Gram-Schmidt with positive diagonal, last column flipped if det < 0.
Mat4 sample_frame(std::uint64_t seed, std::uint64_t index);

// Sorted triple for the three-dimensional reaction system with
// 2 m1 + m2 + m3 >= 0 enforced by rejection.
Vec3 sample_m3(std::uint64_t seed, std::uint64_t index, double scale = 1.0);

}  // namespace curv4
