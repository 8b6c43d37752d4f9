#pragma once

#include <cstdint>

#include "weedsim/defaults.hpp"
#include "weedsim/pointproc.hpp"

namespace weedsim {

enum class ThinningLabel { obs1, obs2, custom };

struct ReferenceCounts {
  int ground_truth = defaults::kReferenceCount;
  int observed_early = defaults::kObservedEarlyCount;
  int observed_late = defaults::kObservedLateCount;
};

struct ThinningSpec {
  double retain_probability = 1.0;
  ThinningLabel label = ThinningLabel::custom;

  static ThinningSpec obs1(const ReferenceCounts& counts = {});
  static ThinningSpec obs2(const ReferenceCounts& counts = {});
  static ThinningSpec custom(double p);
};

// Independent thinning. Point i survives iff hashed_uniform(seed, i) < p, so
// the decision depends only on (seed, i) and order is preserved.
PointPattern thin(const PointPattern& pattern, const ThinningSpec& spec, std::uint64_t seed);

// Single-linkage merge: points closer than `radius` (strict) are joined
// transitively and each component is replaced by its centroid. Output is
// ordered by the smallest input index of each component.
PointPattern merge_close(const PointPattern& pattern, double radius = defaults::kMergeRadius);

}  // namespace weedsim
