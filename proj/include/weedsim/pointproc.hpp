#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "weedsim/defaults.hpp"
#include "weedsim/geometry.hpp"
#include "weedsim/kernels.hpp"

namespace weedsim {

enum class PatternRole { ground_truth, observed, targeted, treated };

struct PointPattern {
  std::vector<Vec2> points;
  PatternRole role = PatternRole::ground_truth;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Throws InvalidArgument if a location lies outside the field or two
// locations coincide within 1e-9 m.
void validate_pattern(const PointPattern& pattern, const Field& field);

enum class ModelKind { Cal, Hom, Cen, Sin };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct Covariance2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;
  double det() const { return xx * yy - xy * xy; }
};

// Intensity lambda(x) = intensity_factor * alpha * base(x). alpha is set by
// normalize() so that the base integrates to the reference count over W.
class IntensityModel {
 public:
  static IntensityModel homogeneous(double intensity_factor, int reference_count);
  static IntensityModel centered(Vec2 mean, Covariance2 covariance, double intensity_factor, int reference_count);
  // base(x) = amplitude * sin(2 pi <normal, x> / wavelength) + 2
  static IntensityModel sinusoidal(Vec2 wave_normal, double wavelength, double intensity_factor,
                                   int reference_count, double amplitude = 1.0);
  // base(x) = sum_i exp(-|x - anchor_i|^2 / (2 h^2)), truncated at 8 h.
  static IntensityModel calibrated(std::vector<Vec2> anchors, double bandwidth, double intensity_factor,
                                   int reference_count);

  ModelKind kind() const { return kind_; }
  double intensity_factor() const { return intensity_factor_; }
  int reference_count() const { return reference_count_; }
  bool normalized() const { return alpha_.has_value(); }
  std::optional<double> alpha() const { return alpha_; }
  // Maximum of base() over the field grid cells, recorded by normalize().
  double base_grid_max() const { return base_grid_max_; }

  double base(Vec2 x) const;

  IntensityModel with_intensity_factor(double factor) const;

  // Kind-specific parameters.
  Vec2 mean() const { return mean_; }
  Covariance2 covariance() const { return covariance_; }
  Vec2 wave_normal() const { return wave_normal_; }
  double wavelength() const { return wavelength_; }
  double amplitude() const { return amplitude_; }
  double bandwidth() const;
  std::span<const Vec2> anchors() const;

  void validate() const;

 private:
  friend IntensityModel normalize(const IntensityModel&, const Field&, kernels::Exec);

  struct KernelSum;

  ModelKind kind_ = ModelKind::Hom;
  double intensity_factor_ = 1.0;
  int reference_count_ = defaults::kReferenceCount;
  std::optional<double> alpha_;
  double base_grid_max_ = 0.0;

  Vec2 mean_;
  Covariance2 covariance_;
  Vec2 wave_normal_{1.0, 0.0};
  double wavelength_ = defaults::kSinWavelength;
  double amplitude_ = 1.0;
  std::shared_ptr<const KernelSum> kernel_;
};

// lambda(x); throws NotNormalized before normalize().
double eval_intensity(const IntensityModel& model, Vec2 x);

// Midpoint quadrature of base() over the field grid; sets alpha = n_ref / integral.
IntensityModel normalize(const IntensityModel& model, const Field& field,
                         kernels::Exec exec = kernels::Exec::parallel);

// Gamma(shape, scale) matching the configured mean and standard deviation.
struct GammaParams {
  double shape;
  double scale;
};
GammaParams bandwidth_gamma(double mean = defaults::kBandwidthMean, double sd = defaults::kBandwidthSd);
std::vector<double> bandwidth_candidates(std::uint64_t seed, std::size_t count = defaults::kBandwidthCandidates);

struct BandwidthSelection {
  double bandwidth = 0.0;
  std::vector<double> candidates;
  std::vector<double> log_likelihoods;  // -inf for skipped candidates
};

// Draws gamma-distributed candidate bandwidths and returns the one maximizing
// the leave-one-out likelihood of the anchors; ties go to the smaller value.
BandwidthSelection select_bandwidth(const PointPattern& anchors, const Field& field, std::uint64_t seed,
                                    std::size_t candidate_count = defaults::kBandwidthCandidates,
                                    kernels::Exec exec = kernels::Exec::parallel);

// Inhomogeneous Poisson sample: N ~ Poisson(factor * n_ref), then rejection
// sampling from the field's bounding box against 1.001 x the grid maximum.
PointPattern sample_poisson(const IntensityModel& model, const Field& field, std::uint64_t seed);

// Builds a model with the default parameters for the given field: Cen is
// centered at the field centroid, Sin waves run along the long side of the
// field's minimum bounding box. Cal needs anchors and a bandwidth.
IntensityModel make_default_model(ModelKind kind, const Field& field, double intensity_factor,
                                  int reference_count = defaults::kReferenceCount,
                                  std::span<const Vec2> anchors = {}, double bandwidth = 0.0);

}  // namespace weedsim
