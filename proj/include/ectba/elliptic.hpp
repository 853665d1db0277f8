#ifndef ECTBA_ELLIPTIC_HPP
#define ECTBA_ELLIPTIC_HPP

#include <complex>

#include "ectba/errors.hpp"

namespace ectba {

using cplx = std::complex<double>;

// Rectangular period lattice: first full period omega1 (real, > 0), second
// full period i*omega2_im.  The nome q = exp(i pi omega2/omega1) is real in
// (0,1) for such lattices.
struct LatticeParams {
    double omega1;
    double omega2_im;

    LatticeParams(double w1, double w2_im);

    cplx omega2() const { return cplx(0.0, omega2_im); }
    double nome_q() const;
    double min_period() const { return omega1 < omega2_im ? omega1 : omega2_im; }
};

// Weierstrass zeta and p on a rectangular lattice, evaluated through Jacobi
// theta series.  When the nome of the given basis exceeds 1/2 the evaluation
// switches to the swapped basis (omega2, -omega1), whose nome is again real
// and small; zeta and p are lattice functions, so the value is unchanged.
//
// All evaluation methods are const and thread-safe after construction.
class WeierstrassCell {
public:
    explicit WeierstrassCell(const LatticeParams& lat, double pole_guard = -1.0);

    cplx zeta(cplx z) const;
    cplx p(cplx z) const;

    // zeta at the half periods of the *original* basis.
    cplx eta1() const { return m_eta1_user; }   // zeta(omega1/2)
    cplx eta2() const { return m_eta2_user; }   // zeta(omega2/2)

    const LatticeParams& lattice() const { return m_lat; }
    double pole_guard() const { return m_guard; }

private:
    struct Reduced {
        cplx z;     // representative in the centered cell
        long m, n;  // z_original = z + m*b1 + n*b2
    };

    Reduced reduce(cplx z) const;
    void check_pole(const Reduced& r) const;
    // theta1'(v)/theta1(v) and theta1''(v)/theta1(v), scaled series
    void theta_ratios(cplx v, cplx& r1, cplx& r2) const;

    LatticeParams m_lat;
    double m_guard;
    cplx m_b1, m_b2;       // evaluation basis (possibly swapped)
    double m_lnq;          // log nome of evaluation basis (real, < 0)
    cplx m_eta_b1;         // zeta(b1/2)
    cplx m_eta_b2;         // zeta(b2/2), from the Legendre relation
    cplx m_eta1_user, m_eta2_user;
    double m_det;          // Im(conj(b1)*b2), for the coordinate solve
};

// zeta(omega2/2): the cached constant entering the rapidity map.
cplx zeta_halfperiod_constant(const LatticeParams& lat);

} // namespace ectba

#endif
