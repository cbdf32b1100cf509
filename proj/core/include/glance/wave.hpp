#pragma once

#include <functional>
#include <string>
#include <vector>

#include "glance/damping_field.hpp"

namespace glance {

/// Leapfrog state of the damped wave equation on an N x N periodic grid.
/// Holds the two time levels the scheme needs; `velocity` is reconstructed
/// as a backward difference.
struct WaveState {
    int n{256};
    double dt{0.0};
    double time{0.0};
    std::vector<double> u;       // current level
    std::vector<double> u_prev;  // previous level

    double h() const { return 1.0 / n; }
};

struct WaveOptions {
    int n{256};
    double cfl_fraction{0.9};  // dt = fraction * h / sqrt(2)
    int threads{0};
};

/// Initial data u0, v0 as callables on the torus.
WaveState make_state(const std::function<double(TorusPoint)>& u0,
                     const std::function<double(TorusPoint)>& v0, const WaveOptions& opt);

/// Damping samples at grid points, evaluated once.
std::vector<double> sample_damping(const DampingField& field, int n);
std::vector<double> zero_damping(int n);

/// One leapfrog step with semi-implicit damping:
/// u+ = [2u - (1 - W dt/2) u- + dt^2 Lap u] / (1 + W dt/2).
/// Throws on CFL violation or blow-up (growth > 10x).
void step(WaveState& state, const std::vector<double>& W_grid, const WaveOptions& opt = {});

/// Staggered (midpoint-consistent) discrete energy
/// 1/2 * sum h^2 [ ((u - u-)/dt)^2 + grad u . grad u- ].
double energy(const WaveState& state);

struct EnergyTrace {
    std::string label;
    std::vector<double> times;
    std::vector<double> energies;
};

/// Shared initial data, one trace per damping grid, energy recorded every
/// `record_every` steps.
std::vector<EnergyTrace> run_comparison(const std::vector<std::vector<double>>& dampings,
                                        const std::vector<std::string>& labels,
                                        const std::function<double(TorusPoint)>& u0,
                                        const std::function<double(TorusPoint)>& v0, double T,
                                        const WaveOptions& opt = {}, int record_every = 16);

/// Gaussian beam of the given width centered on the geodesic through
/// `center` with direction v, traveling along +v: returns (u0, v0).
std::pair<std::function<double(TorusPoint)>, std::function<double(TorusPoint)>>
gaussian_beam(TorusPoint center, RationalDirection v, double width, int wavenumber = 8);

}  // namespace glance
