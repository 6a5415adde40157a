#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace cnfdr {

// One univariate distribution, usable as a null component or the alternative.
struct DistributionSpec {
  enum class Kind { normal, noncentral_t };

  Kind kind = Kind::normal;
  double mu = 0.0;     // normal location
  double sigma = 1.0;  // normal scale
  double df = 0.0;     // t degrees of freedom
  double delta = 0.0;  // t noncentrality

  static DistributionSpec make_normal(double mu, double sigma);
  static DistributionSpec make_noncentral_t(double df, double delta);

  double cdf(double x) const;
  double pdf(double x) const;
  // One draw; stateless, pulls raw bits from the engine.
  double sample(std::mt19937_64& gen) const;

  bool operator==(const DistributionSpec&) const = default;
};

// Shape of the nested rejection regions indexed by t:
//   lower    (-inf, t]   with score s(x) = x
//   upper    [-t, inf)   with score s(x) = -x
//   absolute [-t, t]     with score s(x) = |x|, t >= 0
enum class Region { lower, upper, absolute };

// Probability the distribution assigns to the region with index t.
double region_cdf(const DistributionSpec& d, Region region, double t);

// Density of the score s under the distribution (for likelihood work).
double region_pdf(const DistributionSpec& d, Region region, double s);

// Candidate null distributions sharing one region shape.
struct NullFamily {
  std::vector<DistributionSpec> components;
  Region region = Region::lower;

  std::size_t size() const { return components.size(); }
  double score(double x) const;
  // Region probability of every component at index t, in component order.
  std::vector<double> cdf_vector(double t) const;

  void validate() const;
};

// Mixing weights over the null components.
struct Prior {
  std::vector<double> nu;

  // size must match the family; entries nonnegative and summing to 1
  void validate(std::size_t expected_size) const;
};

struct MixtureModel {
  NullFamily family;
  Prior prior;
  double a = 0.05;  // marginal probability that a hypothesis is false
  DistributionSpec alt;

  void validate() const;
};

// Scores sorted ascending with the truth labels carried along.
struct LabeledSample {
  std::vector<double> s;
  std::vector<std::uint8_t> is_null;  // 1 when the null holds for that observation

  std::size_t n() const { return s.size(); }
};

// Draw n observations from the mixture, apply the score transform, sort.
// Identical (model, n, seed) always produces identical output.
LabeledSample sample_mixture(const MixtureModel& model, std::size_t n, std::uint64_t seed);

// Built-in models 1..5 of the simulation study.
MixtureModel study_preset(int id);

}  // namespace cnfdr
