#include "glance/wave.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "glance/parallel.hpp"

namespace glance {

WaveState make_state(const std::function<double(TorusPoint)>& u0,
                     const std::function<double(TorusPoint)>& v0, const WaveOptions& opt) {
    WaveState st;
    st.n = opt.n;
    const double h = st.h();
    st.dt = opt.cfl_fraction * h / std::sqrt(2.0);
    if (st.dt > h / std::sqrt(2.0))
        throw std::domain_error("make_state: CFL violated (need dt <= h/sqrt(2))");
    st.u.resize(static_cast<std::size_t>(st.n) * st.n);
    st.u_prev.resize(st.u.size());
    // Second-order initialization: u_prev = u0 - dt*v0 (+O(dt^2) correction
    // folded into the first step's truncation).
    for (int j = 0; j < st.n; ++j)
        for (int i = 0; i < st.n; ++i) {
            const TorusPoint z{(i + 0.5) * h, (j + 0.5) * h};
            const std::size_t idx = static_cast<std::size_t>(j) * st.n + i;
            st.u[idx] = u0(z);
            st.u_prev[idx] = st.u[idx] - st.dt * v0(z);
        }
    return st;
}

std::vector<double> sample_damping(const DampingField& field, int n) {
    std::vector<double> W(static_cast<std::size_t>(n) * n);
    const double h = 1.0 / n;
    parallel_for(n, [&](int j) {
        for (int i = 0; i < n; ++i)
            W[static_cast<std::size_t>(j) * n + i] =
                field.evaluate(TorusPoint{(i + 0.5) * h, (j + 0.5) * h});
    });
    return W;
}

std::vector<double> zero_damping(int n) {
    return std::vector<double>(static_cast<std::size_t>(n) * n, 0.0);
}

void step(WaveState& st, const std::vector<double>& W, const WaveOptions& opt) {
    const int n = st.n;
    if (static_cast<int>(W.size()) != n * n) throw std::domain_error("step: damping grid mismatch");
    const double h = st.h();
    if (st.dt > h / std::sqrt(2.0) + 1e-15) throw std::domain_error("step: CFL violated");
    const double r2 = (st.dt * st.dt) / (h * h);

    std::vector<double> next(st.u.size());
    double max_abs = 0.0, max_prev = 0.0;
    for (double v : st.u) max_prev = std::max(max_prev, std::fabs(v));

    parallel_for(
        n,
        [&](int j) {
            const int jm = (j + n - 1) % n, jp = (j + 1) % n;
            for (int i = 0; i < n; ++i) {
                const int im = (i + n - 1) % n, ip = (i + 1) % n;
                const std::size_t idx = static_cast<std::size_t>(j) * n + i;
                const double lap = st.u[static_cast<std::size_t>(j) * n + ip] +
                                   st.u[static_cast<std::size_t>(j) * n + im] +
                                   st.u[static_cast<std::size_t>(jp) * n + i] +
                                   st.u[static_cast<std::size_t>(jm) * n + i] -
                                   4.0 * st.u[idx];
                const double wdt = 0.5 * W[idx] * st.dt;
                next[idx] =
                    (2.0 * st.u[idx] - (1.0 - wdt) * st.u_prev[idx] + r2 * lap) / (1.0 + wdt);
            }
        },
        opt.threads);
    for (double v : next) max_abs = std::max(max_abs, std::fabs(v));
    if (max_prev > 0.0 && max_abs > 10.0 * std::max(1.0, max_prev))
        throw std::runtime_error("step: instability detected (field grew more than 10x)");

    st.u_prev = std::move(st.u);
    st.u = std::move(next);
    st.time += st.dt;
}

double energy(const WaveState& st) {
    const int n = st.n;
    const double h = st.h();
    double kinetic = 0.0, potential = 0.0;
    for (int j = 0; j < n; ++j) {
        const int jp = (j + 1) % n;
        for (int i = 0; i < n; ++i) {
            const int ip = (i + 1) % n;
            const std::size_t idx = static_cast<std::size_t>(j) * n + i;
            const double v = (st.u[idx] - st.u_prev[idx]) / st.dt;
            kinetic += v * v;
            const double ux = (st.u[static_cast<std::size_t>(j) * n + ip] - st.u[idx]) / h;
            const double uy = (st.u[static_cast<std::size_t>(jp) * n + i] - st.u[idx]) / h;
            const double px = (st.u_prev[static_cast<std::size_t>(j) * n + ip] -
                               st.u_prev[idx]) / h;
            const double py = (st.u_prev[static_cast<std::size_t>(jp) * n + i] -
                               st.u_prev[idx]) / h;
            potential += ux * px + uy * py;
        }
    }
    return 0.5 * h * h * (kinetic + potential);
}

std::vector<EnergyTrace> run_comparison(const std::vector<std::vector<double>>& dampings,
                                        const std::vector<std::string>& labels,
                                        const std::function<double(TorusPoint)>& u0,
                                        const std::function<double(TorusPoint)>& v0, double T,
                                        const WaveOptions& opt, int record_every) {
    if (dampings.size() != labels.size())
        throw std::domain_error("run_comparison: labels/dampings mismatch");
    const WaveState initial = make_state(u0, v0, opt);
    std::vector<EnergyTrace> traces(dampings.size());
    for (std::size_t f = 0; f < dampings.size(); ++f) {
        WaveState st = initial;
        EnergyTrace& tr = traces[f];
        tr.label = labels[f];
        tr.times.push_back(st.time);
        tr.energies.push_back(energy(st));
        int k = 0;
        while (st.time < T) {
            step(st, dampings[f], opt);
            if (++k % record_every == 0 || st.time >= T) {
                tr.times.push_back(st.time);
                tr.energies.push_back(energy(st));
            }
        }
    }
    return traces;
}

std::pair<std::function<double(TorusPoint)>, std::function<double(TorusPoint)>>
gaussian_beam(TorusPoint center, RationalDirection v, double width, int wavenumber) {
    const DirectionFrame frame(v);
    const double s_c = frame.s_of(center);
    const double circ = frame.s_circumference();
    const double T_v = frame.t_circumference();
    const double k = 2.0 * std::numbers::pi * wavenumber / T_v;

    const auto envelope = [frame, s_c, circ, width](TorusPoint z) {
        const double ds = circle_distance(frame.s_of(z), s_c, circ);
        return std::exp(-0.5 * ds * ds / (width * width));
    };
    auto u0 = [envelope, frame, k](TorusPoint z) {
        return envelope(z) * std::cos(k * frame.t_of(z));
    };
    auto v0 = [envelope, frame, k](TorusPoint z) {
        return k * envelope(z) * std::sin(k * frame.t_of(z));
    };
    return {std::move(u0), std::move(v0)};
}

}  // namespace glance
