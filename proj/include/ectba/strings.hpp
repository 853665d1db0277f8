#ifndef ECTBA_STRINGS_HPP
#define ECTBA_STRINGS_HPP

#include <vector>

#include "ectba/dispersion.hpp"

namespace ectba {

// Q-string: Q rapidities theta + (j - (Q+1)/2) i, j = 1..Q.
struct QString {
    int Q;
    double theta;
};

struct StringMomenta {
    std::vector<cplx> momenta;
    std::vector<int> regions;
};

// Constituent momenta of a Q-string, fundamental-region branch.
StringMomenta qstring_momenta(const QString& s, const DispersionContext& ctx);

// Total momentum of the Q-string on the monotone increasing branch in
// (-2 pi, 0]; the physical momentum is the same value mod 2 pi.
double qstring_momentum(const QString& s, const DispersionContext& ctx);
// d p_Q / d theta = -sum_j 1/phi'(p_j) > 0.
double qstring_momentum_derivative(const QString& s, const DispersionContext& ctx);
// E_Q(theta) = sum_j eps(p_j), real and >= 0 for ferromagnetic coupling.
double qstring_energy(const QString& s, const DispersionContext& ctx);

// E_M at total momentum M*p_total, divided by M.  p_total must satisfy
// M*p_total in (0, 2 pi), the attainable window of an M-string.
double rescaled_energy(int M, double p_total, const DispersionContext& ctx);

// |psi(n1,n2)|^2 of the two-magnon wavefunction at separation n = n1 - n2.
// Nonnegative for momenta inside the |Im p| <= kappa strip; the returned
// value is the (real) bracket including its sign, so non-normalizable
// configurations show up as growth in magnitude.
double two_particle_amplitude(cplx p1, cplx p2, int separation, double kappa);

// elementary and fused string S-matrices
cplx smatrix(cplx theta, cplx theta2);
cplx smatrix_PQ(int P, int Q, cplx theta, cplx theta2);

// --- scattering kernels -----------------------------------------------------
// K_P(theta) = (1/pi) P/(P^2 + theta^2), Fourier transform exp(-P|w|).
double kernel_K(int P, double theta);
double kernel_K_hat(int P, double omega);
// smooth part of the fused kernel K_PQ (the P = Q delta term is dropped;
// it is bookkeeping absorbed into the left-hand sides of the integral
// equations, never a numerical object)
double kernel_K_PQ(int P, int Q, double theta);
double kernel_K_PQ_hat(int P, int Q, double omega);
// integral of the smooth fused kernel: 2 min(P,Q) - delta_PQ
int kernel_K_PQ_mass(int P, int Q);

struct ScatteringKernelTable {
    int P, Q;
    double operator()(double theta) const { return kernel_K_PQ(P, Q, theta); }
    double hat(double omega) const { return kernel_K_PQ_hat(P, Q, omega); }
};

// counting function c_P(theta) for a finite set of occupied strings (Q, theta_r)
double counting_function(int P, double theta,
                         const std::vector<std::pair<int, double>>& occupied,
                         int L, const DispersionContext& ctx);

// --- worked solution sets ---------------------------------------------------
// Bethe-equation solution assembled from (rapidity, region) choices; the
// conjugate momenta are appended so that total momentum and energy are real.
struct SolutionSpec {
    std::vector<std::pair<cplx, int>> entries; // (theta, region)
    bool add_conjugates = true;
};

struct SolutionSet {
    std::vector<cplx> momenta;
    double total_momentum; // real part; imaginary residual checked by caller
    double energy;
    double momentum_imag_residual;
    double energy_imag_residual;
};

SolutionSet build_solution(const SolutionSpec& spec, const DispersionContext& ctx);

// catalog of the worked examples at kappa = 1.26
enum class ExampleKind { TwoComponentM4, CoincidingM4, CoincidingM6 };
SolutionSpec example_solution_spec(ExampleKind kind);

} // namespace ectba

#endif
