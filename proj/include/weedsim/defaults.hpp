#pragma once

#include <array>
#include <limits>

namespace weedsim::defaults {

// Reference counts of the experimental survey: combined ground truth and the
// two observation dates.
inline constexpr int kReferenceCount = 2313;
inline constexpr int kObservedEarlyCount = 550;
inline constexpr int kObservedLateCount = 1792;

inline constexpr std::array<double, 3> kIntensityFactors{0.5, 1.0, 2.0};
inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();
inline constexpr std::array<double, 3> kActionThresholds{2.5, 5.0, kUnlimited};
inline constexpr std::array<double, 3> kTreatmentRadii{0.2, 0.4, 1.25};
inline constexpr std::array<int, 3> kSectionCounts{1, 5, 10};
inline constexpr double kMeanderWidth = 2.5;
inline constexpr int kReplications = 10;

// Cen dispersion matrix (m^2) and Sin wavelength (m).
inline constexpr double kCenCovXX = 218.8;
inline constexpr double kCenCovXY = 324.1;
inline constexpr double kCenCovYY = 549.4;
inline constexpr double kSinWavelength = 28.3;

// Cal bandwidth candidates ~ Gamma with this mean and standard deviation.
inline constexpr double kBandwidthMean = 1.5;
inline constexpr double kBandwidthSd = 1.1;
inline constexpr int kBandwidthCandidates = 50;

inline constexpr double kGridStep = 0.05;
inline constexpr double kMergeRadius = 0.05;
inline constexpr double kDensityDiskRadius = 2.0;

// Stand-in field: 128 m x 64.5 m = 8256 m^2.
inline constexpr double kFieldWidth = 128.0;
inline constexpr double kFieldHeight = 64.5;

}  // namespace weedsim::defaults
