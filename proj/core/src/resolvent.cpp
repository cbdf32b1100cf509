#include "glance/resolvent.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_float_real(z) ((z).real())
#define lapack_complex_float_imag(z) ((z).imag())
#define lapack_complex_double std::complex<double>
#define lapack_complex_double_real(z) ((z).real())
#define lapack_complex_double_imag(z) ((z).imag())
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace glance {

using cplx = std::complex<double>;

DiscreteDampedOperator build_operator(std::vector<double> V, double length, double lambda,
                                      double E) {
    if (static_cast<int>(V.size()) < 256)
        throw std::domain_error("build_operator: need at least 256 grid points");
    if (!(length > 0.0) || !(lambda > 0.0))
        throw std::domain_error("build_operator: length and lambda must be positive");
    bool any_positive = false;
    for (double v : V) {
        if (v < 0.0) throw std::domain_error("build_operator: V must be nonnegative");
        if (v > 0.0) any_positive = true;
    }
    if (!any_positive) throw std::domain_error("build_operator: V must not vanish identically");
    return {length, static_cast<int>(V.size()), std::move(V), lambda, E};
}

std::vector<cplx> apply_operator(const DiscreteDampedOperator& op, const std::vector<cplx>& x) {
    const int n = op.n;
    const double w = 1.0 / (op.h() * op.h());
    std::vector<cplx> y(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const cplx diag(2.0 * w - op.E, op.lambda * op.V[static_cast<std::size_t>(j)]);
        y[static_cast<std::size_t>(j)] =
            diag * x[static_cast<std::size_t>(j)] -
            w * x[static_cast<std::size_t>((j + 1) % n)] -
            w * x[static_cast<std::size_t>((j + n - 1) % n)];
    }
    return y;
}

namespace {

/// Pivoted LU of a tridiagonal matrix plus the Sherman-Morrison bordering
/// that restores the cyclic corner entries.
class CyclicSolver {
  public:
    CyclicSolver(const DiscreteDampedOperator& op, bool adjoint) {
        const int n = op.n;
        n_ = n;
        const double w = 1.0 / (op.h() * op.h());
        const double off = -w;
        std::vector<cplx> diag(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            cplx d(2.0 * w - op.E, op.lambda * op.V[static_cast<std::size_t>(j)]);
            if (adjoint) d = std::conj(d);
            diag[static_cast<std::size_t>(j)] = d;
        }
        // A = B + gamma^{-1} u v^T with u = (gamma, 0, .., 0, off)^T,
        // v = (1, 0, .., 0, off/gamma)^T — the NR cyclic reduction. gamma is
        // retried against accidental singularity of B.
        const double scale = 2.0 * w;
        for (int attempt = 0; attempt < 4; ++attempt) {
            gamma_ = cplx(-scale, attempt * 0.37 * scale);
            dl_.assign(static_cast<std::size_t>(n) - 1, off);
            du_.assign(static_cast<std::size_t>(n) - 1, off);
            d_ = diag;
            d_[0] -= gamma_;
            d_[static_cast<std::size_t>(n - 1)] -= off * off / gamma_;
            du2_.assign(static_cast<std::size_t>(n) - 2, cplx{});
            ipiv_.assign(static_cast<std::size_t>(n), 0);
            const int info = LAPACKE_zgttrf(n, dl_.data(), d_.data(), du_.data(), du2_.data(),
                                            ipiv_.data());
            if (info == 0) {
                // z = B^{-1} u, shared by every solve
                z_.assign(static_cast<std::size_t>(n), cplx{});
                z_[0] = gamma_;
                z_[static_cast<std::size_t>(n - 1)] = off;
                solve_tridiag(z_);
                off_over_gamma_ = off / gamma_;
                denom_ = 1.0 + z_[0] + off_over_gamma_ * z_[static_cast<std::size_t>(n - 1)];
                if (std::abs(denom_) > 1e-14) return;
            }
        }
        throw std::runtime_error("CyclicSolver: factorization failed");
    }

    void solve(std::vector<cplx>& rhs) const {
        solve_tridiag(rhs);
        const cplx factor =
            (rhs[0] + off_over_gamma_ * rhs[static_cast<std::size_t>(n_ - 1)]) / denom_;
        for (int j = 0; j < n_; ++j)
            rhs[static_cast<std::size_t>(j)] -= factor * z_[static_cast<std::size_t>(j)];
    }

  private:
    void solve_tridiag(std::vector<cplx>& rhs) const {
        const int info =
            LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n_, 1, dl_.data(), d_.data(), du_.data(),
                           du2_.data(), ipiv_.data(), rhs.data(), n_);
        if (info != 0) throw std::runtime_error("CyclicSolver: tridiagonal solve failed");
    }

    int n_{0};
    cplx gamma_{};
    cplx denom_{};
    cplx off_over_gamma_{};
    std::vector<cplx> dl_, d_, du_, du2_, z_;
    std::vector<lapack_int> ipiv_;
};

double norm_h(const std::vector<cplx>& x, double h) {
    double acc = 0.0;
    for (const cplx& v : x) acc += std::norm(v);
    return std::sqrt(acc * h);
}

cplx inner_h(const std::vector<cplx>& a, const std::vector<cplx>& b, double h) {
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc * h;
}

}  // namespace

std::vector<cplx> solve_operator(const DiscreteDampedOperator& op, const std::vector<cplx>& f) {
    const CyclicSolver solver(op, false);
    std::vector<cplx> u = f;
    solver.solve(u);
    return u;
}

double resolvent_norm(const DiscreteDampedOperator& op, std::uint64_t seed) {
    const CyclicSolver fwd(op, false);
    const CyclicSolver adj(op, true);
    const int n = op.n;
    const double h = op.h();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double best = 0.0;
    for (int restart = 0; restart < 5; ++restart) {
        std::vector<cplx> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = cplx(gauss(rng), gauss(rng));
        double nx = norm_h(x, h);
        for (auto& v : x) v /= nx;

        double sigma_prev = -1.0;
        bool converged = false;
        for (int it = 0; it < 400; ++it) {
            // x <- (A^H A)^{-1} x, normalized
            std::vector<cplx> y = x;
            adj.solve(y);  // y = A^{-H} x
            fwd.solve(y);  // y = A^{-1} A^{-H} x
            const double ny = norm_h(y, h);
            if (!(ny > 0.0) || !std::isfinite(ny)) break;
            for (auto& v : y) v /= ny;
            x = std::move(y);

            const double sigma = norm_h(apply_operator(op, x), h);  // ||A x||, ||x|| = 1
            if (sigma_prev > 0.0 && std::fabs(sigma - sigma_prev) <= 1e-8 * sigma) {
                converged = true;
                sigma_prev = sigma;
                break;
            }
            sigma_prev = sigma;
        }
        if (sigma_prev > 0.0) best = std::max(best, 1.0 / sigma_prev);
        if (converged) return best;
    }
    if (best == 0.0) throw std::runtime_error("resolvent_norm: inverse iteration failed");
    return best;
}

double dense_resolvent_norm(const DiscreteDampedOperator& op) {
    const int n = op.n;
    const double w = 1.0 / (op.h() * op.h());
    std::vector<cplx> a(static_cast<std::size_t>(n) * n, cplx{});
    for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(j) * n + j] =
            cplx(2.0 * w - op.E, op.lambda * op.V[static_cast<std::size_t>(j)]);
        a[static_cast<std::size_t>(j) * n + (j + 1) % n] = -w;          // column j, row j+1
        a[static_cast<std::size_t>((j + 1) % n) * n + j] = -w;          // column j+1, row j
    }
    std::vector<double> s(static_cast<std::size_t>(n));
    std::vector<double> superb(static_cast<std::size_t>(n));
    const int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', n, n, a.data(), n, s.data(),
                                    nullptr, 1, nullptr, 1, superb.data());
    if (info != 0) throw std::runtime_error("dense_resolvent_norm: zgesvd failed");
    return 1.0 / s[static_cast<std::size_t>(n - 1)];
}

std::vector<double> resonance_candidates(const std::function<double(double)>& V, double length,
                                         double lambda, int n_eigen, int count) {
    const int n = n_eigen;
    const double h = length / n;
    const double w = 1.0 / (h * h);
    std::vector<cplx> a(static_cast<std::size_t>(n) * n, cplx{});
    for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(j) * n + j] = cplx(2.0 * w, lambda * V(h * j));
        a[static_cast<std::size_t>(j) * n + (j + 1) % n] = -w;
        a[static_cast<std::size_t>((j + 1) % n) * n + j] = -w;
    }
    std::vector<cplx> eig(static_cast<std::size_t>(n));
    const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, eig.data(),
                                   nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("resonance_candidates: zgeev failed");
    std::sort(eig.begin(), eig.end(),
              [](const cplx& x, const cplx& y) { return x.imag() < y.imag(); });
    std::vector<double> out;
    for (int i = 0; i < std::min<int>(count, n); ++i)
        out.push_back(eig[static_cast<std::size_t>(i)].real());
    return out;
}

SweepResult sweep_E(const std::function<double(double)>& V, double length, double lambda,
                    const SweepOptions& opt) {
    const double E_cap =
        std::min(1e8, std::max(1e3, opt.E_cap_scale * std::pow(lambda, 2.0 / 3.0)));

    // Grid chosen so the fastest admissible mode keeps >= points_per_wavelength.
    const int n_wave = static_cast<int>(std::ceil(
        opt.points_per_wavelength * std::sqrt(E_cap) * length / (2.0 * std::numbers::pi)));
    const int n = std::max(opt.n_min, n_wave);
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) samples[static_cast<std::size_t>(j)] = V(length * j / n);

    SweepResult result;
    const auto norm_at = [&](double E) {
        const DiscreteDampedOperator op =
            build_operator(samples, length, lambda, E);
        ++result.evaluations;
        return resolvent_norm(op, opt.seed);
    };

    std::vector<double> candidates;
    for (int i = 0; i <= 20; ++i)
        candidates.push_back(opt.E_floor + (10.0 - opt.E_floor) * i / 20.0);
    const int geom = 60;
    for (int i = 0; i <= geom; ++i)
        candidates.push_back(10.0 * std::pow(E_cap / 10.0, static_cast<double>(i) / geom));
    for (double e : resonance_candidates(V, length, lambda, 512, 48))
        if (e > opt.E_floor && e < E_cap) candidates.push_back(e);
    std::sort(candidates.begin(), candidates.end());

    std::vector<double> values(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) values[i] = norm_at(candidates[i]);

    // Refine around the best few coarse maximizers until golden section
    // stabilizes; the reported sup is the max over everything evaluated.
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    double best = 0.0, best_E = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (values[i] > best) {
            best = values[i];
            best_E = candidates[i];
        }

    const std::size_t top = std::min<std::size_t>(4, order.size());
    for (std::size_t k = 0; k < top; ++k) {
        const std::size_t i = order[k];
        const double lo = i > 0 ? candidates[i - 1] : candidates[i] - 1.0;
        const double hi = i + 1 < candidates.size() ? candidates[i + 1] : candidates[i] + 1.0;
        const auto [em, vm] = golden_minimize([&](double E) { return -norm_at(E); }, lo, hi,
                                              1e-4 * std::max(1.0, std::fabs(candidates[i])));
        if (-vm > best) {
            best = -vm;
            best_E = em;
        }
    }

    result.norm = best;
    result.E_max = best_E;
    result.boundary_flagged = best_E > 0.98 * E_cap || best_E < opt.E_floor + 0.02;
    return result;
}

ResolventScan scan_lambda(const std::function<double(double)>& V, double length,
                          const std::vector<double>& lambdas, const SweepOptions& opt) {
    ResolventScan scan;
    for (double lam : lambdas) {
        const SweepResult r = sweep_E(V, length, lam, opt);
        scan.lambdas.push_back(lam);
        scan.norms.push_back(r.norm);
        scan.E_max.push_back(r.E_max);
    }
    return scan;
}

ScalingFit fit_scaling(const ResolventScan& scan) {
    if (scan.lambdas.size() < 3) throw std::domain_error("fit_scaling: need >= 3 points");
    const LineFit f = fit_loglog(scan.lambdas, scan.norms);
    ScalingFit fit;
    fit.exponent = f.slope;
    fit.intercept = f.intercept;
    fit.max_residual = f.max_residual;
    if (scan.lambdas.size() >= 7) {
        const StabilizedSlope s = stabilized_loglog_slope(scan.lambdas, scan.norms, 4, 3, 0.05);
        fit.stable_window_exponent = s.slope;
    }
    return fit;
}

PairingReport pairing_check(const DiscreteDampedOperator& op, const std::vector<cplx>& f,
                            const std::vector<double>* psi, double first_slack) {
    const double h = op.h();
    const std::vector<cplx> u = solve_operator(op, f);

    PairingReport rep;
    double vu2 = 0.0;
    for (int j = 0; j < op.n; ++j)
        vu2 += op.V[static_cast<std::size_t>(j)] * std::norm(u[static_cast<std::size_t>(j)]);
    vu2 *= h;
    rep.lhs1 = std::sqrt(vu2);
    const cplx fu = inner_h(f, u, h);
    rep.rhs1 = std::sqrt(std::abs(fu) / op.lambda);
    rep.first_holds = rep.lhs1 <= rep.rhs1 * (1.0 + first_slack) + first_slack;

    if (psi) {
        const std::vector<double>& p = *psi;
        if (static_cast<int>(p.size()) != op.n)
            throw std::domain_error("pairing_check: psi size mismatch");
        // support condition: psi lives strictly inside {V > 0}
        const double vmax = *std::max_element(op.V.begin(), op.V.end());
        const double pmax = *std::max_element(p.begin(), p.end());
        for (int j = 0; j < op.n; ++j) {
            if (p[static_cast<std::size_t>(j)] < 0.0)
                throw std::domain_error("pairing_check: psi must be nonnegative");
            const int prev = (j + op.n - 1) % op.n;
            const int next = (j + 1) % op.n;
            const bool active = p[static_cast<std::size_t>(j)] > 1e-12 * pmax ||
                                p[static_cast<std::size_t>(prev)] > 1e-12 * pmax ||
                                p[static_cast<std::size_t>(next)] > 1e-12 * pmax;
            if (active && op.V[static_cast<std::size_t>(j)] <= 1e-12 * vmax)
                throw std::domain_error("pairing_check: psi not supported inside {V > 0}");
        }
        double acc = 0.0;
        for (int j = 0; j < op.n; ++j) {
            const cplx du =
                (u[static_cast<std::size_t>((j + 1) % op.n)] - u[static_cast<std::size_t>(j)]) / h;
            acc += p[static_cast<std::size_t>(j)] * std::norm(du);
        }
        rep.lhs2 = std::sqrt(acc * h);
        double fn = 0.0;
        for (const cplx& v : f) fn += std::norm(v);
        fn = std::sqrt(fn * h);
        rep.rhs2_bracket = (1.0 + std::sqrt(std::max(0.0, op.E))) *
                               std::sqrt(std::abs(fu) / op.lambda) +
                           fn;
        rep.second_constant = rep.rhs2_bracket > 0.0 ? rep.lhs2 / rep.rhs2_bracket : 0.0;
        rep.has_second = true;
    }
    return rep;
}

}  // namespace glance
