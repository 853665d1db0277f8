#ifndef ECTBA_EXACTDIAG_HPP
#define ECTBA_EXACTDIAG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ectba/elliptic.hpp"

namespace ectba {

enum class PotentialKind { XXX, HS, Elliptic, Hyperbolic };

struct PotentialSpec {
    PotentialKind kind;
    int L;
    double J = 1.0;
    double kappa = 1.0; // used by Elliptic and Hyperbolic

    PotentialSpec(PotentialKind k, int length, double coupling = 1.0, double kap = 1.0);
};

std::string potential_kind_name(PotentialKind k);

// V(j) for 1 <= |j| <= L-1; periodic kinds satisfy V(j) = V(L - j)
double potential_value(const PotentialSpec& spec, int j);

struct SectorSpectrum {
    int magnon_number;
    std::vector<double> eigenvalues; // ascending, length C(L, M)
};

// dense symmetric eigensolve of the M-magnon block
SectorSpectrum build_sector(const PotentialSpec& spec, int M);

// all 2^L eigenvalues, sector by sector
struct ChainSpectra {
    PotentialSpec spec;
    std::vector<SectorSpectrum> sectors; // M = 0..L

    std::size_t total_states() const;
    double trace() const;
};

ChainSpectra compute_chain_spectra(const PotentialSpec& spec);

// f = -(T/L) log Tr exp(-H/T); the ferromagnetic ground state sits at 0, so
// the sum is overflow-free as written
double free_energy_trace(const ChainSpectra& spectra, double T);
double free_energy_trace(const PotentialSpec& spec, double T);

struct StabilizedFreeEnergy {
    double f;
    int L_used;
    bool stabilized;
    double last_rel_change;
};

// grow L in steps of two until consecutive free energies differ by less
// than tol (default 2%), capped at L_max
StabilizedFreeEnergy stabilized_free_energy(PotentialKind kind, double kappa, double J,
                                            double T, double tol = 0.02,
                                            int L_min = 6, int L_max = 15);

std::uint64_t binomial(int n, int k);

} // namespace ectba

#endif
