#include "glance/damping_field.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace glance {

DampingField::DampingField(DampingShape shape, double beta,
                           std::vector<ExponentOverride> overrides,
                           std::optional<double> support_cutoff)
    : shape_(std::make_shared<const DampingShape>(std::move(shape))),
      beta_(beta),
      overrides_(std::move(overrides)),
      cutoff_(support_cutoff) {
    if (!(beta_ > 0.0)) throw std::domain_error("DampingField: beta must be positive");
    for (const auto& o : overrides_)
        if (!(o.exponent > 0.0) || !(o.radius > 0.0))
            throw std::domain_error("DampingField: override exponent/radius must be positive");
    if (cutoff_ && !(*cutoff_ > 0.0))
        throw std::domain_error("DampingField: cutoff must be positive");
}

double DampingField::exponent_at(TorusPoint z) const {
    double best_d = std::numeric_limits<double>::infinity();
    double exponent = beta_;
    for (const auto& o : overrides_) {
        const double d = torus_distance(z, o.location);
        if (d <= o.radius && d < best_d) {
            best_d = d;
            exponent = o.exponent;
        }
    }
    return exponent;
}

double DampingField::evaluate(TorusPoint z) const {
    const double d = shape_->distance_to_complement(z);
    if (d <= 0.0) return 0.0;
    const double eff = cutoff_ ? *cutoff_ * std::tanh(d / *cutoff_) : d;
    return std::pow(eff, exponent_at(z));
}

RegularityReport regularity_check(const DampingField& field, int sample_count,
                                  std::uint64_t seed, double h, double w_threshold) {
    if (sample_count < 100)
        throw std::domain_error("regularity_check: need sample_count >= 100");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    RegularityReport rep;
    rep.h_used = h;
    const auto W = [&](double x, double y) { return field.evaluate(TorusPoint{x, y}); };

    int used = 0, tried = 0;
    while (used < sample_count && tried < 100 * sample_count) {
        ++tried;
        const double x = uni(rng), y = uni(rng);
        const double w0 = W(x, y);
        if (w0 < w_threshold) continue;
        ++used;

        const double wxp = W(x + h, y), wxm = W(x - h, y);
        const double wyp = W(x, y + h), wym = W(x, y - h);
        const double wpp = W(x + h, y + h), wpm = W(x + h, y - h);
        const double wmp = W(x - h, y + h), wmm = W(x - h, y - h);

        const double d1[2] = {(wxp - wxm) / (2 * h), (wyp - wym) / (2 * h)};
        const double d2[3] = {(wxp - 2 * w0 + wxm) / (h * h),
                              (wyp - 2 * w0 + wym) / (h * h),
                              (wpp - wpm - wmp + wmm) / (4 * h * h)};

        const double bound1 = std::pow(w0, 0.75);  // W^{1 - 1/4}
        const double bound2 = std::pow(w0, 0.5);   // W^{1 - 2/4}
        for (double g : d1) {
            const double r = std::fabs(g) / bound1;
            if (r > rep.max_ratio) {
                rep.max_ratio = r;
                rep.worst_point = TorusPoint{x, y};
                rep.order_of_worst = 1;
            }
        }
        for (double g : d2) {
            const double r = std::fabs(g) / bound2;
            if (r > rep.max_ratio) {
                rep.max_ratio = r;
                rep.worst_point = TorusPoint{x, y};
                rep.order_of_worst = 2;
            }
        }
    }
    rep.samples_used = used;
    return rep;
}

}  // namespace glance
