#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "glance/shapes.hpp"

namespace glance {

/// One local-exponent override: inside `radius` of `location` the damping
/// exponent switches (hard, no blend) from the base to `exponent`.
struct ExponentOverride {
    TorusPoint location;
    double exponent{1.0};
    double radius{0.05};
};

/// The damping coefficient W(z) = d(z)^beta built from a shape, where d is
/// the distance to the undamped region. Optional overrides adjust the
/// exponent near individual glancing points, and an optional cutoff
/// saturates W smoothly away from the boundary (W = (cutoff*tanh(d/cutoff))^beta).
class DampingField {
  public:
    DampingField(DampingShape shape, double beta,
                 std::vector<ExponentOverride> overrides = {},
                 std::optional<double> support_cutoff = std::nullopt);

    double operator()(TorusPoint z) const { return evaluate(z); }
    double evaluate(TorusPoint z) const;

    /// Exponent in effect at z (base or nearest override).
    double exponent_at(TorusPoint z) const;

    const DampingShape& shape() const { return *shape_; }
    double beta() const { return beta_; }
    const std::vector<ExponentOverride>& overrides() const { return overrides_; }
    bool inside(TorusPoint z) const { return shape_->contains(z); }

  private:
    std::shared_ptr<const DampingShape> shape_;
    double beta_;
    std::vector<ExponentOverride> overrides_;
    std::optional<double> cutoff_;
};

/// Sampling evidence for membership in the regularity class
/// |d^alpha W| <= C W^(1 - |alpha|/4), |alpha| <= 2. Finite differences at
/// interior points; evidence only, never a certificate.
struct RegularityReport {
    double max_ratio{0.0};
    TorusPoint worst_point;
    int order_of_worst{0};  // |alpha| at the worst sample
    double h_used{1e-4};
    int samples_used{0};
};
RegularityReport regularity_check(const DampingField& field, int sample_count,
                                  std::uint64_t seed = 7u, double h = 1e-4,
                                  double w_threshold = 1e-7);

}  // namespace glance
