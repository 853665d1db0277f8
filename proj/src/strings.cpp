#include "ectba/strings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ectba {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr cplx kI(0.0, 1.0);

double wrap_to_momentum_branch(double x) {
    // representative in (-2 pi, 0]
    double t = std::fmod(x, 2.0 * kPi);
    if (t > 0.0) t -= 2.0 * kPi;
    return t;
}

} // namespace

StringMomenta qstring_momenta(const QString& s, const DispersionContext& ctx) {
    if (s.Q < 1) throw numeric_error("qstring_momenta: Q must be >= 1");
    StringMomenta out;
    out.momenta.resize(s.Q);
    out.regions.assign(s.Q, 0);
    const double base = -(s.Q + 1.0) / 2.0;
    for (int j = 1; j <= s.Q; ++j) {
        const double level = j + base; // rung imaginary part
        if (level > 0.25 && std::abs(level - 0.5) > 1e-12) {
            // interior upper rung: conjugate of the mirrored lower rung
            const int jm = s.Q + 1 - j;
            out.momenta[j - 1] = std::conj(out.momenta[jm - 1]);
            continue;
        }
        // the +i/2 rung is inverted directly: on the doubly-attained band the
        // fundamental branch is not closed under conjugation
        out.momenta[j - 1] = ctx.invert_phi_fundamental(cplx(s.theta, level));
    }
    return out;
}

double qstring_momentum(const QString& s, const DispersionContext& ctx) {
    const StringMomenta sm = qstring_momenta(s, ctx);
    cplx sum(0.0, 0.0);
    for (const cplx& p : sm.momenta) sum += p;
    return wrap_to_momentum_branch(-std::real(sum));
}

double qstring_momentum_derivative(const QString& s, const DispersionContext& ctx) {
    const StringMomenta sm = qstring_momenta(s, ctx);
    cplx d(0.0, 0.0);
    for (const cplx& p : sm.momenta) d += 1.0 / ctx.phi_derivative(p);
    return -std::real(d);
}

double qstring_energy(const QString& s, const DispersionContext& ctx) {
    const StringMomenta sm = qstring_momenta(s, ctx);
    cplx e(0.0, 0.0);
    for (const cplx& p : sm.momenta) e += ctx.epsilon(p);
    return std::real(e);
}

double rescaled_energy(int M, double p_total, const DispersionContext& ctx) {
    const double target = M * p_total;
    if (!(target > 0.0) || !(target < 2.0 * kPi)) {
        std::ostringstream oss;
        oss << "rescaled_energy: M*p = " << target << " outside the attainable window (0, 2 pi)";
        throw numeric_error(oss.str());
    }
    // total momentum -p_Q(theta) decreases from 2 pi to 0 as theta runs over R
    const double theta_max = 1e3;
    auto S = [&](double th) { return -qstring_momentum(QString{M, th}, ctx); };
    double a = -theta_max, b = theta_max;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (S(m) > target) a = m; else b = m;
        if (b - a < 1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) break;
    }
    const double theta_star = 0.5 * (a + b);
    return qstring_energy(QString{M, theta_star}, ctx) / M;
}

double two_particle_amplitude(cplx p1, cplx p2, int separation, double kappa) {
    if (separation == 0)
        throw numeric_error("two_particle_amplitude: separation must be nonzero");
    if (!(std::imag(p1 - p2) < 0.0))
        throw numeric_error("two_particle_amplitude: convention requires Im(p1 - p2) < 0");
    const double n = separation;
    const cplx dp = p1 - p2;
    const cplx bracket = std::exp(cplx(2.0 * kappa * n, 0.0)) + std::exp(cplx(-2.0 * kappa * n, 0.0))
                       - std::exp(kI * double(n) * dp) - std::exp(-kI * double(n) * dp);
    const double sh = std::abs(std::sinh(kappa * n));
    return 4.0 / (sh * sh) * std::real(bracket);
}

cplx smatrix(cplx theta, cplx theta2) {
    const cplx d = theta - theta2;
    if (std::abs(d - kI) < 1e-12 || std::abs(d + kI) < 1e-12)
        throw pole_proximity_error("smatrix: argument at the pole theta - theta' = +/- i");
    return (d + kI) / (d - kI);
}

cplx smatrix_PQ(int P, int Q, cplx theta, cplx theta2) {
    cplx prod(1.0, 0.0);
    for (int j = 1; j <= P; ++j)
        for (int k = 1; k <= Q; ++k) {
            const cplx u = theta + cplx(0.0, j - (P + 1.0) / 2.0);
            const cplx v = theta2 + cplx(0.0, k - (Q + 1.0) / 2.0);
            prod *= smatrix(u, v);
        }
    return prod;
}

// --- kernels -----------------------------------------------------------------

double kernel_K(int P, double theta) {
    return (1.0 / kPi) * P / (double(P) * P + theta * theta);
}

double kernel_K_hat(int P, double omega) {
    return std::exp(-P * std::abs(omega));
}

int kernel_K_PQ_mass(int P, int Q) {
    return 2 * std::min(P, Q) - (P == Q ? 1 : 0);
}

double kernel_K_PQ(int P, int Q, double theta) {
    double v = 0.0;
    const int lo = std::abs(P - Q);
    if (lo > 0) v += kernel_K(lo, theta);
    v += kernel_K(P + Q, theta);
    for (int j = 1; j <= std::min(P, Q) - 1; ++j)
        v += 2.0 * kernel_K(lo + 2 * j, theta);
    return v;
}

double kernel_K_PQ_hat(int P, int Q, double omega) {
    double v = 0.0;
    const int lo = std::abs(P - Q);
    if (lo > 0) v += kernel_K_hat(lo, omega);
    v += kernel_K_hat(P + Q, omega);
    for (int j = 1; j <= std::min(P, Q) - 1; ++j)
        v += 2.0 * kernel_K_hat(lo + 2 * j, omega);
    return v;
}

double counting_function(int P, double theta,
                         const std::vector<std::pair<int, double>>& occupied,
                         int L, const DispersionContext& ctx) {
    double c = qstring_momentum(QString{P, theta}, ctx) / (2.0 * kPi);
    cplx logsum(0.0, 0.0);
    for (const auto& [Q, thr] : occupied)
        logsum += std::log(smatrix_PQ(P, Q, cplx(theta, 0.0), cplx(thr, 0.0)));
    const cplx corr = logsum / (2.0 * kPi * kI) / double(L);
    return c - std::real(corr);
}

// --- worked solution sets ------------------------------------------------------

SolutionSet build_solution(const SolutionSpec& spec, const DispersionContext& ctx) {
    std::vector<std::pair<cplx, int>> all = spec.entries;
    if (spec.add_conjugates)
        for (const auto& [th, n] : spec.entries)
            all.emplace_back(std::conj(th), -n);
    SolutionSet out;
    cplx psum(0.0, 0.0), esum(0.0, 0.0);
    for (const auto& [th, n] : all) {
        const cplx p = ctx.invert_phi_region(th, n);
        out.momenta.push_back(p);
        psum += p;
        esum += ctx.epsilon(p);
    }
    out.total_momentum = std::real(psum);
    out.energy = std::real(esum);
    out.momentum_imag_residual = std::abs(std::imag(psum));
    out.energy_imag_residual = std::abs(std::imag(esum));
    return out;
}

SolutionSpec example_solution_spec(ExampleKind kind) {
    SolutionSpec s;
    switch (kind) {
    case ExampleKind::TwoComponentM4:
        // two-component M = 4 set: theta_R = 0.6, theta_I = 1.8; the lower
        // chain occupies ladder levels theta_I - 2 and theta_I - 3
        s.entries = {{cplx(0.6, 1.2), 0}, {cplx(0.6, 0.2), 2}};
        break;
    case ExampleKind::CoincidingM4:
        // theta_R = 1.4, theta_I = 1.89; one minus (fundamental region) on the
        // top level, three pluses in regions 1,2,3 on the level below
        s.entries = {{cplx(1.4, 1.89), 0},
                     {cplx(1.4, 0.89), 1},
                     {cplx(1.4, 0.89), 2},
                     {cplx(1.4, 0.89), 3}};
        break;
    case ExampleKind::CoincidingM6:
        // theta_R = 1.4, theta_I = 2.6, four levels; minuses in the
        // fundamental region, pluses in regions per the worked configuration
        s.entries = {{cplx(1.4, 2.6), 0},
                     {cplx(1.4, 1.6), 0},
                     {cplx(1.4, 0.6), 0},
                     {cplx(1.4, 1.6), 1},
                     {cplx(1.4, -0.4), 0},
                     {cplx(1.4, -0.4), 1}};
        break;
    }
    return s;
}

} // namespace ectba
