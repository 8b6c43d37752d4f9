#include "weedsim/pointproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "weedsim/error.hpp"
#include "weedsim/rng.hpp"

namespace weedsim {

void validate_pattern(const PointPattern& pattern, const Field& field) {
  for (const Vec2 p : pattern.points) {
    if (!contains(field, p)) throw Error(ErrorKind::InvalidArgument, "pattern location outside the field");
  }
  std::vector<Vec2> sorted = pattern.points;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    // Neighbours in x-order are not enough; scan the x-window.
    for (std::size_t m = k; m-- > 0 && sorted[k].x - sorted[m].x <= 1e-9;) {
      if (distance(sorted[k], sorted[m]) < 1e-9) throw Error(ErrorKind::InvalidArgument, "duplicate locations");
    }
  }
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Cal: return "Cal";
    case ModelKind::Hom: return "Hom";
    case ModelKind::Cen: return "Cen";
    case ModelKind::Sin: return "Sin";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "Cal" || text == "cal") return ModelKind::Cal;
  if (text == "Hom" || text == "hom") return ModelKind::Hom;
  if (text == "Cen" || text == "cen") return ModelKind::Cen;
  if (text == "Sin" || text == "sin") return ModelKind::Sin;
  throw Error(ErrorKind::InvalidConfig, "unknown model kind '" + std::string(text) + "'");
}

// Gaussian kernel sum over anchors, bucketed by a uniform grid whose cell is
// the truncation radius so a query scans at most 3x3 buckets.
struct IntensityModel::KernelSum {
  static constexpr double kCutoffBandwidths = 8.0;

  std::vector<Vec2> anchors;
  double bandwidth = 1.0;
  double cutoff = 8.0;
  double inv_two_h2 = 0.5;
  Vec2 origin;
  double cell = 8.0;
  int nx = 1;
  int ny = 1;
  std::vector<std::size_t> start;  // CSR offsets, size nx*ny + 1
  std::vector<Vec2> bucketed;

  KernelSum(std::vector<Vec2> pts, double h) : anchors(std::move(pts)), bandwidth(h) {
    cutoff = kCutoffBandwidths * h;
    inv_two_h2 = 1.0 / (2.0 * h * h);
    const BoundingBox box = bounding_box(anchors);
    origin = box.min;
    const double extent = std::max({box.width(), box.height(), 1e-9});
    cell = std::max(cutoff, extent / 2048.0);
    nx = static_cast<int>(box.width() / cell) + 1;
    ny = static_cast<int>(box.height() / cell) + 1;
    std::vector<std::size_t> counts(static_cast<std::size_t>(nx) * ny + 1, 0);
    std::vector<std::size_t> which(anchors.size());
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      which[k] = bucket(anchors[k]);
      ++counts[which[k] + 1];
    }
    for (std::size_t b = 1; b < counts.size(); ++b) counts[b] += counts[b - 1];
    start = counts;
    bucketed.resize(anchors.size());
    for (std::size_t k = 0; k < anchors.size(); ++k) bucketed[counts[which[k]]++] = anchors[k];
  }

  std::size_t bucket(Vec2 p) const {
    const int i = std::clamp(static_cast<int>((p.x - origin.x) / cell), 0, nx - 1);
    const int j = std::clamp(static_cast<int>((p.y - origin.y) / cell), 0, ny - 1);
    return static_cast<std::size_t>(j) * nx + i;
  }

  double operator()(Vec2 x) const {
    const int ci = static_cast<int>(std::floor((x.x - origin.x) / cell));
    const int cj = static_cast<int>(std::floor((x.y - origin.y) / cell));
    const double cutoff2 = cutoff * cutoff;
    double sum = 0.0;
    for (int j = std::max(cj - 1, 0); j <= std::min(cj + 1, ny - 1); ++j) {
      for (int i = std::max(ci - 1, 0); i <= std::min(ci + 1, nx - 1); ++i) {
        const std::size_t b = static_cast<std::size_t>(j) * nx + i;
        for (std::size_t k = start[b]; k < start[b + 1]; ++k) {
          const double d2 = distance_sq(x, bucketed[k]);
          if (d2 <= cutoff2) sum += std::exp(-d2 * inv_two_h2);
        }
      }
    }
    return sum;
  }
};

IntensityModel IntensityModel::homogeneous(double intensity_factor, int reference_count) {
  IntensityModel m;
  m.kind_ = ModelKind::Hom;
  m.intensity_factor_ = intensity_factor;
  m.reference_count_ = reference_count;
  m.validate();
  return m;
}

IntensityModel IntensityModel::centered(Vec2 mean, Covariance2 covariance, double intensity_factor,
                                        int reference_count) {
  IntensityModel m;
  m.kind_ = ModelKind::Cen;
  m.mean_ = mean;
  m.covariance_ = covariance;
  m.intensity_factor_ = intensity_factor;
  m.reference_count_ = reference_count;
  m.validate();
  return m;
}

IntensityModel IntensityModel::sinusoidal(Vec2 wave_normal, double wavelength, double intensity_factor,
                                          int reference_count, double amplitude) {
  IntensityModel m;
  m.kind_ = ModelKind::Sin;
  m.wave_normal_ = wave_normal;
  m.wavelength_ = wavelength;
  m.amplitude_ = amplitude;
  m.intensity_factor_ = intensity_factor;
  m.reference_count_ = reference_count;
  m.validate();
  return m;
}

IntensityModel IntensityModel::calibrated(std::vector<Vec2> anchors, double bandwidth, double intensity_factor,
                                          int reference_count) {
  if (anchors.empty()) throw Error(ErrorKind::EmptyPattern, "Cal model needs anchor locations");
  if (!(bandwidth > 0.0)) throw Error(ErrorKind::InvalidArgument, "Cal bandwidth must be positive");
  IntensityModel m;
  m.kind_ = ModelKind::Cal;
  m.kernel_ = std::make_shared<const KernelSum>(std::move(anchors), bandwidth);
  m.intensity_factor_ = intensity_factor;
  m.reference_count_ = reference_count;
  m.validate();
  return m;
}

double IntensityModel::bandwidth() const { return kernel_ ? kernel_->bandwidth : 0.0; }

std::span<const Vec2> IntensityModel::anchors() const {
  if (!kernel_) return {};
  return kernel_->anchors;
}

void IntensityModel::validate() const {
  if (!(intensity_factor_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "intensity factor must be positive");
  if (reference_count_ <= 0) throw Error(ErrorKind::InvalidArgument, "reference count must be positive");
  switch (kind_) {
    case ModelKind::Hom: break;
    case ModelKind::Cen:
      if (!(covariance_.xx > 0.0 && covariance_.det() > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "Cen covariance must be positive definite");
      }
      break;
    case ModelKind::Sin:
      if (std::abs(norm(wave_normal_) - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "Sin wave normal must be unit");
      if (!(wavelength_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "Sin wavelength must be positive");
      if (!(amplitude_ >= 0.0 && amplitude_ <= 2.0)) {
        throw Error(ErrorKind::InvalidArgument, "Sin amplitude must lie in [0, 2] to keep the intensity non-negative");
      }
      break;
    case ModelKind::Cal:
      if (!kernel_ || !(kernel_->bandwidth > 0.0)) throw Error(ErrorKind::InvalidArgument, "Cal bandwidth must be positive");
      break;
  }
}

double IntensityModel::base(Vec2 x) const {
  switch (kind_) {
    case ModelKind::Hom: return 1.0;
    case ModelKind::Cen: {
      const double det = covariance_.det();
      const Vec2 d = x - mean_;
      // d^T Sigma^{-1} d with the closed-form 2x2 inverse.
      const double q = (covariance_.yy * d.x * d.x - 2.0 * covariance_.xy * d.x * d.y + covariance_.xx * d.y * d.y) / det;
      return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
    }
    case ModelKind::Sin:
      return amplitude_ * std::sin(2.0 * std::numbers::pi * dot(wave_normal_, x) / wavelength_) + 2.0;
    case ModelKind::Cal: return (*kernel_)(x);
  }
  return 0.0;
}

IntensityModel IntensityModel::with_intensity_factor(double factor) const {
  IntensityModel m = *this;
  m.intensity_factor_ = factor;
  m.validate();
  return m;
}

double eval_intensity(const IntensityModel& model, Vec2 x) {
  if (!model.normalized()) throw Error(ErrorKind::NotNormalized, "intensity model has not been normalized");
  return model.intensity_factor() * *model.alpha() * model.base(x);
}

IntensityModel normalize(const IntensityModel& model, const Field& field, kernels::Exec exec) {
  model.validate();
  const auto reduction =
      kernels::reduce_cells(field.grid(), field.inside_mask(), [&model](Vec2 x) { return model.base(x); }, exec);
  const double step = field.grid_step();
  const double integral = reduction.sum * step * step;
  if (!(integral > 0.0)) throw Error(ErrorKind::ZeroIntensity, "base intensity integrates to zero over the field");
  IntensityModel out = model;
  out.alpha_ = static_cast<double>(model.reference_count()) / integral;
  out.base_grid_max_ = reduction.max;
  return out;
}

GammaParams bandwidth_gamma(double mean, double sd) {
  const double shape = (mean / sd) * (mean / sd);
  return {shape, sd * sd / mean};
}

std::vector<double> bandwidth_candidates(std::uint64_t seed, std::size_t count) {
  const GammaParams g = bandwidth_gamma();
  Rng rng(seed);
  std::gamma_distribution<double> gamma(g.shape, g.scale);
  std::vector<double> out(count);
  for (auto& h : out) h = gamma(rng);
  return out;
}

BandwidthSelection select_bandwidth(const PointPattern& anchors, const Field& field, std::uint64_t seed,
                                    std::size_t candidate_count, kernels::Exec exec) {
  if (anchors.size() < 10) throw Error(ErrorKind::InvalidArgument, "bandwidth selection needs at least 10 anchors");
  for (const Vec2 p : anchors.points) {
    if (!contains(field, p)) throw Error(ErrorKind::InvalidArgument, "anchor outside the field");
  }
  BandwidthSelection out;
  out.candidates = bandwidth_candidates(seed, candidate_count);
  out.log_likelihoods.resize(out.candidates.size());
  double best_ll = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t k = 0; k < out.candidates.size(); ++k) {
    const double h = out.candidates[k];
    const double ll = h > 0.0 ? kernels::loo_log_likelihood(anchors.points, h, exec)
                              : -std::numeric_limits<double>::infinity();
    out.log_likelihoods[k] = ll;
    if (!std::isfinite(ll)) continue;
    if (!found || ll > best_ll || (ll == best_ll && h < out.bandwidth)) {
      best_ll = ll;
      out.bandwidth = h;
      found = true;
    }
  }
  if (!found) throw Error(ErrorKind::BandwidthSelectionFailed, "every candidate bandwidth had zero likelihood");
  return out;
}

PointPattern sample_poisson(const IntensityModel& model, const Field& field, std::uint64_t seed) {
  if (!model.normalized()) throw Error(ErrorKind::NotNormalized, "intensity model has not been normalized");
  const double expected = model.intensity_factor() * model.reference_count();
  const double scale = model.intensity_factor() * *model.alpha();
  const double lambda_max = 1.001 * scale * model.base_grid_max();

  Rng rng(seed);
  std::poisson_distribution<long> poisson(expected);
  const long n = poisson(rng);

  PointPattern out;
  out.role = PatternRole::ground_truth;
  out.points.reserve(static_cast<std::size_t>(n));
  const BoundingBox& box = field.bbox();
  while (static_cast<long>(out.points.size()) < n) {
    const Vec2 p{box.min.x + uniform01(rng) * box.width(), box.min.y + uniform01(rng) * box.height()};
    const double u = uniform01(rng);
    if (!contains(field, p)) continue;
    const double accept = scale * model.base(p) / lambda_max;
    if (accept > 1.0) {
      throw Error(ErrorKind::LambdaMaxViolation, "intensity exceeds the grid-estimated maximum");
    }
    if (u < accept) out.points.push_back(p);
  }
  return out;
}

IntensityModel make_default_model(ModelKind kind, const Field& field, double intensity_factor, int reference_count,
                                  std::span<const Vec2> anchors, double bandwidth) {
  switch (kind) {
    case ModelKind::Hom: return IntensityModel::homogeneous(intensity_factor, reference_count);
    case ModelKind::Cen:
      return IntensityModel::centered(field.centroid(),
                                      {defaults::kCenCovXX, defaults::kCenCovXY, defaults::kCenCovYY},
                                      intensity_factor, reference_count);
    case ModelKind::Sin: {
      const OrientedBox box = min_bounding_box(field.boundary());
      return IntensityModel::sinusoidal(box.axis, defaults::kSinWavelength, intensity_factor, reference_count);
    }
    case ModelKind::Cal:
      return IntensityModel::calibrated(std::vector<Vec2>(anchors.begin(), anchors.end()), bandwidth,
                                        intensity_factor, reference_count);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown model kind");
}

}  // namespace weedsim
