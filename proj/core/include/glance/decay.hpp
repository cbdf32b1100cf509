#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "glance/glancing.hpp"

namespace glance {

enum class DecayRegime { gcc_exponential, one_sided, two_sided_only };

struct DirectionRates {
    RationalDirection direction;
    std::optional<double> beta_v;   // min transform over points on one-sided lines
    std::optional<double> gamma_v;  // max transform over points on two-sided lines
    bool used_fallback{false};      // some point had no order: raw exponent used
};

struct DecayPrediction {
    DecayRegime regime{DecayRegime::gcc_exponential};
    double alpha{0.0};  // meaningful for the polynomial regimes
    std::optional<double> beta_prime;
    std::optional<double> gamma_prime;
    std::vector<DirectionRates> per_direction;
    bool degraded_confidence{false};  // fallback exponents involved
};

/// beta / min(eta, 1) + 1 / eta: the vanishing exponent of the directional
/// average produced by a point of order eta with local damping exponent beta.
double exponent_transform(double beta, double eta);

DecayPrediction predict(const GlancingReport& report, const DampingField& field);

/// alpha for a hypothetical geometry: every glancing point of the given
/// order and local exponent, on one-sided lines.
double alpha_for_uniform_order(double beta, double eta);

struct RateRow {
    std::string label;
    double beta;
    std::optional<double> eta;  // nullopt = no order (strip-like)
    double alpha;
};
std::vector<RateRow> rate_table(const std::vector<double>& betas);

nlohmann::json prediction_to_json(const DecayPrediction& p);
std::string prediction_table(const DecayPrediction& p);

}  // namespace glance
