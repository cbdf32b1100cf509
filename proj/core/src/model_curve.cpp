#include "glance/model_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "glance/numerics.hpp"

namespace glance {

ModelCurve::ModelCurve(double eta_, double c_) : eta(eta_), c(c_) {
    if (!(eta > 0.0) || !(c > 0.0)) throw std::domain_error("ModelCurve: eta and c must be positive");
}

double ModelCurve::x_at(double y) const { return c * std::pow(std::fabs(y), eta); }

double ModelCurve::distance(Vec2 z) const {
    if (z.x < 0.0) throw std::domain_error("ModelCurve::distance: requires x0 >= 0");
    // By the y -> -y symmetry the nearest branch is the one with sign(y0).
    if (eta == 1.0) return std::fabs(c * std::fabs(z.y) - z.x) / std::sqrt(1.0 + c * c);

    // By symmetry work with y0 >= 0; the nearest curve point then also has
    // y >= 0 (reflecting y -> -y can only shorten the segment).
    const double y0 = std::fabs(z.y);
    const double ymax = 3.0 * std::max({z.x, y0, 1e-9});

    const auto d2 = [&](double y) {
        const double dx = x_at(y) - z.x;
        const double dy = y - y0;
        return dx * dx + dy * dy;
    };

    constexpr int kScan = 100000;
    double best = d2(0.0);
    int best_i = 0;
    for (int i = 1; i <= kScan; ++i) {
        const double y = ymax * static_cast<double>(i) / kScan;
        const double v = d2(y);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    const double h = ymax / kScan;
    const double lo = std::max(0.0, (best_i - 1) * h);
    const double hi = std::min(ymax, (best_i + 1) * h);
    const auto [ym, vm] = golden_minimize(d2, lo, hi, 1e-13 * std::max(1.0, ymax));
    (void)ym;
    return std::sqrt(std::min(best, vm));
}

double ModelCurve::sandwich_ratio(Vec2 z) const {
    const double y0 = std::fabs(z.y);
    double proxy;
    if (eta >= 1.0)
        proxy = std::fabs(std::pow(y0, eta) - z.x / c);
    else
        proxy = std::fabs(y0 - std::pow(z.x / c, 1.0 / eta));
    if (proxy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return distance(z) / proxy;
}

SandwichReport sandwich_check(const ModelCurve& curve, double eps, int samples,
                              std::uint64_t seed) {
    if (!(eps > 0.0) || eps > 0.1)
        throw std::domain_error("sandwich_check: eps must be in (0, 0.1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, eps);
    std::uniform_real_distribution<double> uy(-eps, eps);

    SandwichReport rep;
    rep.ratio_min = std::numeric_limits<double>::infinity();
    rep.ratio_max = 0.0;
    while (rep.accepted < samples) {
        const Vec2 z{ux(rng), uy(rng)};
        const double r = curve.sandwich_ratio(z);
        if (!std::isfinite(r) || r == 0.0) {
            ++rep.skipped;
            if (rep.skipped > 100 * samples)
                throw std::runtime_error("sandwich_check: degenerate cloud");
            continue;
        }
        rep.ratio_min = std::min(rep.ratio_min, r);
        rep.ratio_max = std::max(rep.ratio_max, r);
        ++rep.accepted;
    }
    return rep;
}

}  // namespace glance
