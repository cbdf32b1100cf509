#include "glance/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace glance {

double exponent_transform(double beta, double eta) {
    if (!(beta > 0.0) || !(eta > 0.0))
        throw std::domain_error("exponent_transform: beta and eta must be positive");
    return beta / std::min(eta, 1.0) + 1.0 / eta;
}

double alpha_for_uniform_order(double beta, double eta) {
    return 1.0 - 1.0 / (exponent_transform(beta, eta) + 3.0);
}

DecayPrediction predict(const GlancingReport& report, const DampingField& field) {
    (void)field;  // exponents were already resolved into the report's points
    DecayPrediction out;

    if (report.g_empty) {
        out.regime = DecayRegime::gcc_exponential;
        out.alpha = std::numeric_limits<double>::infinity();  // exponential decay
        return out;
    }

    std::map<RationalDirection, DirectionRates> rates;
    for (const auto& line : report.lines) {
        auto& dr = rates.try_emplace(line.direction, DirectionRates{line.direction, {}, {}, false})
                       .first->second;
        for (const auto& pt : line.touch_points) {
            // A point with no usable order falls back to the raw exponent:
            // no averaging improvement is claimed for that direction.
            const double transformed =
                pt.order.order ? exponent_transform(pt.damping_exponent, *pt.order.order)
                               : pt.damping_exponent;
            if (!pt.order.order) dr.used_fallback = true;
            if (line.sided == Sidedness::one_sided) {
                dr.beta_v = dr.beta_v ? std::min(*dr.beta_v, transformed) : transformed;
            } else {
                dr.gamma_v = dr.gamma_v ? std::max(*dr.gamma_v, transformed) : transformed;
            }
        }
    }
    for (auto& [v, dr] : rates) {
        out.per_direction.push_back(dr);
        out.degraded_confidence |= dr.used_fallback;
        if (dr.beta_v)
            out.beta_prime = out.beta_prime ? std::min(*out.beta_prime, *dr.beta_v) : *dr.beta_v;
        if (dr.gamma_v)
            out.gamma_prime =
                out.gamma_prime ? std::max(*out.gamma_prime, *dr.gamma_v) : *dr.gamma_v;
    }

    if (!report.l1_empty) {
        out.regime = DecayRegime::one_sided;
        if (!out.beta_prime)
            throw std::logic_error("predict: one-sided lines present but no beta_v resolved");
        out.alpha = 1.0 - 1.0 / (*out.beta_prime + 3.0);
    } else {
        out.regime = DecayRegime::two_sided_only;
        if (!out.gamma_prime)
            throw std::logic_error("predict: two-sided-only report without gamma_v");
        out.alpha = 1.0 + 2.0 / *out.gamma_prime;
    }
    return out;
}

std::vector<RateRow> rate_table(const std::vector<double>& betas) {
    std::vector<RateRow> rows;
    for (double beta : betas) {
        rows.push_back({"strip (no order)", beta, std::nullopt, 1.0 - 1.0 / (beta + 3.0)});
        rows.push_back({"curvature tangency (order 2)", beta, 2.0, alpha_for_uniform_order(beta, 2.0)});
        rows.push_back({"polygon corner (order 1)", beta, 1.0, alpha_for_uniform_order(beta, 1.0)});
    }
    return rows;
}

nlohmann::json prediction_to_json(const DecayPrediction& p) {
    nlohmann::json j;
    j["schema"] = "glance.prediction/1";
    switch (p.regime) {
        case DecayRegime::gcc_exponential: j["regime"] = "gcc_exponential"; break;
        case DecayRegime::one_sided: j["regime"] = "one_sided"; break;
        case DecayRegime::two_sided_only: j["regime"] = "two_sided_only"; break;
    }
    if (p.regime == DecayRegime::gcc_exponential)
        j["alpha"] = nullptr;  // energy decays exponentially, no polynomial rate
    else
        j["alpha"] = p.alpha;
    if (p.beta_prime) j["beta_prime"] = *p.beta_prime;
    if (p.gamma_prime) j["gamma_prime"] = *p.gamma_prime;
    j["degraded_confidence"] = p.degraded_confidence;
    auto dirs = nlohmann::json::array();
    for (const auto& dr : p.per_direction) {
        nlohmann::json dj;
        dj["direction"] = {dr.direction.p, dr.direction.q};
        if (dr.beta_v) dj["beta_v"] = *dr.beta_v;
        if (dr.gamma_v) dj["gamma_v"] = *dr.gamma_v;
        dj["used_fallback"] = dr.used_fallback;
        dirs.push_back(std::move(dj));
    }
    j["per_direction"] = std::move(dirs);
    return j;
}

std::string prediction_table(const DecayPrediction& p) {
    std::ostringstream os;
    switch (p.regime) {
        case DecayRegime::gcc_exponential:
            os << "regime: geometric control holds -> exponential energy decay\n";
            return os.str();
        case DecayRegime::one_sided:
            os << "regime: one-sided glancing lines present\n";
            os << "beta' = " << *p.beta_prime << "\n";
            os << "alpha = 1 - 1/(beta'+3) = " << p.alpha << "\n";
            break;
        case DecayRegime::two_sided_only:
            os << "regime: only two-sided glancing lines\n";
            os << "gamma' = " << *p.gamma_prime << "\n";
            os << "alpha = 1 + 2/gamma' = " << p.alpha << "\n";
            break;
    }
    for (const auto& dr : p.per_direction) {
        os << "  (" << dr.direction.p << "," << dr.direction.q << ")";
        if (dr.beta_v) os << "  beta_v = " << *dr.beta_v;
        if (dr.gamma_v) os << "  gamma_v = " << *dr.gamma_v;
        if (dr.used_fallback) os << "  [no-order fallback]";
        os << "\n";
    }
    if (p.degraded_confidence) os << "note: some points had no resolved order\n";
    return os.str();
}

}  // namespace glance
