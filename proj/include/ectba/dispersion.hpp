#ifndef ECTBA_DISPERSION_HPP
#define ECTBA_DISPERSION_HPP

#include <memory>
#include <utility>

#include "ectba/elliptic.hpp"

namespace ectba {

// Point of the momentum strip D = { -pi <= Re p < pi }.
struct StripPoint {
    cplx p;
};

struct RegionIndex {
    int n; // D_n = D_f + 2*kappa*i*n, n = 0 is the fundamental region
};

double fold_to_strip(double re_p);

// Critical point of Re phi(x + i kappa) on [0, pi] and the critical value.
std::pair<double, double> find_critical(double kappa);

// One-particle dispersion and rapidity map of the elliptic chain with
// interaction range kappa and ferromagnetic coupling J, built on the
// Weierstrass lattice (1, i pi / kappa).
class DispersionContext {
public:
    DispersionContext(double kappa, double J);

    double kappa() const { return m_kappa; }
    double J() const { return m_J; }
    cplx zeta_const() const { return m_zeta_const; } // zeta(i pi / 2 kappa)
    double p_crit() const { return m_p_crit; }
    double theta_crit() const { return m_theta_crit; }
    const WeierstrassCell& cell() const { return *m_cell; }

    // closed elliptic form; real and >= 0 on real momenta, eps(0) = 0
    cplx epsilon(cplx p) const;
    // phi(p) = p zeta(i pi/2k)/(2 pi i k) - zeta(i p/2k)/(2 i k)
    cplx phi(cplx p) const;
    cplx phi_derivative(cplx p) const;

    // index n of the region D_n containing p (Re p folded into [-pi, pi));
    // boundary arcs assigned per the fundamental-region conventions
    int region_index(cplx p) const;

    // unique preimage of theta in the fundamental region
    cplx invert_phi_fundamental(cplx theta) const;
    cplx invert_phi_region(cplx theta, int n) const;

    // N - P for phi - theta over the boundary of the |Im p| <= kappa strip;
    // 0 certifies a unique preimage
    int argument_principle_count(cplx theta) const;

private:
    cplx newton_invert(cplx theta, cplx seed, int max_iter, bool& ok) const;
    // solve Re phi(x + i kappa) = t on the monotone piece [xa, xb]
    double boundary_bisect(double t, double xa, double xb) const;

    double m_kappa, m_J;
    std::shared_ptr<const WeierstrassCell> m_cell;
    cplx m_zeta_const;
    double m_p_crit, m_theta_crit;
    cplx m_eps_quad; // Taylor coefficient of eps at the removable point p = 0
};

} // namespace ectba

#endif
