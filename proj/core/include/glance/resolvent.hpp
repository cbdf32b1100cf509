#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "glance/numerics.hpp"

namespace glance {

/// Second-order periodic discretization of  -d^2/ds^2 + i*lambda*V(s) - E
/// on a circle of circumference `length`: cyclic tridiagonal, diagonal
/// 2/h^2 + i*lambda*V_j - E, off-diagonal and corner entries -1/h^2.
struct DiscreteDampedOperator {
    double length{1.0};
    int n{256};
    std::vector<double> V;
    double lambda{1.0};
    double E{0.0};

    double h() const { return length / n; }
};

/// Validates V >= 0 (not identically zero), n >= 256.
DiscreteDampedOperator build_operator(std::vector<double> V, double length, double lambda,
                                      double E);

/// y = A x for the cyclic tridiagonal operator.
std::vector<std::complex<double>> apply_operator(const DiscreteDampedOperator& op,
                                                 const std::vector<std::complex<double>>& x);

/// Solves A u = f with the cyclic tridiagonal factorization (bordered
/// Sherman-Morrison over a pivoted tridiagonal LU).
std::vector<std::complex<double>> solve_operator(const DiscreteDampedOperator& op,
                                                 const std::vector<std::complex<double>>& f);

/// Operator norm of A^{-1} on the discrete L2 space: 1/sigma_min(A), by
/// inverse iteration on A^H A (two bordered solves per step), converged to
/// 1e-8 relative with randomized restarts. The result is a certified lower
/// bound 1/||A x|| at the final unit iterate x.
double resolvent_norm(const DiscreteDampedOperator& op, std::uint64_t seed = 1234u);

/// Dense SVD oracle (LAPACK zgesvd); intended for n <= 512.
double dense_resolvent_norm(const DiscreteDampedOperator& op);

/// Real parts of the eigenvalues of -d^2 + i*lambda*V with the smallest
/// imaginary parts (dense zgeev at the operator's own resolution); these are
/// the resonant E candidates for the sweep.
std::vector<double> resonance_candidates(const std::function<double(double)>& V, double length,
                                         double lambda, int n_eigen, int count);

struct SweepResult {
    double norm{0.0};
    double E_max{0.0};
    bool boundary_flagged{false};
    int evaluations{0};
};

struct SweepOptions {
    int n_min{4096};
    int points_per_wavelength{20};
    double E_floor{-10.0};
    double E_cap_scale{50.0};  // cap = max(1e3, scale * lambda^(2/3)), clipped at 1e8
    std::uint64_t seed{1234u};
};

/// sup over E of the resolvent norm for V given as a callable on [0, length).
SweepResult sweep_E(const std::function<double(double)>& V, double length, double lambda,
                    const SweepOptions& opt = {});

struct ResolventScan {
    std::vector<double> lambdas;
    std::vector<double> norms;
    std::vector<double> E_max;
};

ResolventScan scan_lambda(const std::function<double(double)>& V, double length,
                          const std::vector<double>& lambdas, const SweepOptions& opt = {});

struct ScalingFit {
    double exponent{0.0};
    double intercept{0.0};
    double max_residual{0.0};
    std::optional<double> stable_window_exponent;
};
ScalingFit fit_scaling(const ResolventScan& scan);

/// Both pairing inequalities for one discrete solve A u = f.
struct PairingReport {
    double lhs1{0.0}, rhs1{0.0};
    bool first_holds{false};
    double lhs2{0.0}, rhs2_bracket{0.0};
    double second_constant{0.0};  // lhs2 / rhs2_bracket
    bool has_second{false};
};
PairingReport pairing_check(const DiscreteDampedOperator& op,
                            const std::vector<std::complex<double>>& f,
                            const std::vector<double>* psi = nullptr,
                            double first_slack = 1e-8);

}  // namespace glance
