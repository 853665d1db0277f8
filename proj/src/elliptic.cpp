#include "ectba/elliptic.hpp"

#include <cmath>
#include <limits>

namespace ectba {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// sin(m*v) and cos(m*v) scaled by exp(-m*|Im v|); bounded for any v.
cplx scaled_sin(double m, double re, double im) {
    const double t = std::exp(-2.0 * m * std::abs(im));
    const double sgn = im >= 0.0 ? 1.0 : -1.0;
    return cplx(std::sin(m * re) * 0.5 * (1.0 + t),
                sgn * std::cos(m * re) * 0.5 * (1.0 - t));
}

cplx scaled_cos(double m, double re, double im) {
    const double t = std::exp(-2.0 * m * std::abs(im));
    const double sgn = im >= 0.0 ? 1.0 : -1.0;
    return cplx(std::cos(m * re) * 0.5 * (1.0 + t),
                -sgn * std::sin(m * re) * 0.5 * (1.0 - t));
}

} // namespace

LatticeParams::LatticeParams(double w1, double w2_im) : omega1(w1), omega2_im(w2_im) {
    if (!(omega1 > 0.0) || !(omega2_im > 0.0))
        throw numeric_error("LatticeParams: periods must satisfy omega1 > 0, Im(omega2) > 0");
}

double LatticeParams::nome_q() const {
    // q = exp(i pi omega2 / omega1) with omega2 = i*omega2_im
    return std::exp(-kPi * omega2_im / omega1);
}

WeierstrassCell::WeierstrassCell(const LatticeParams& lat, double pole_guard)
    : m_lat(lat) {
    m_guard = pole_guard > 0.0 ? pole_guard : 1e-8 * lat.min_period();

    const cplx w1(lat.omega1, 0.0);
    const cplx w2(0.0, lat.omega2_im);
    bool swapped = lat.nome_q() > 0.5;
    if (swapped) {
        // same lattice, basis (omega2, -omega1); nome exp(-pi*omega1/omega2_im)
        m_b1 = w2;
        m_b2 = -w1;
        m_lnq = -kPi * lat.omega1 / lat.omega2_im;
    } else {
        m_b1 = w1;
        m_b2 = w2;
        m_lnq = -kPi * lat.omega2_im / lat.omega1;
    }
    m_det = std::imag(std::conj(m_b1) * m_b2);

    // eta(b1/2) = -(pi^2/(6 b1)) theta1'''(0)/theta1'(0)
    double s1 = 0.0, s3 = 0.0;
    for (int n = 0;; ++n) {
        const double odd = 2.0 * n + 1.0;
        const double w = std::exp(double(n) * (n + 1.0) * m_lnq);
        if (w * odd * odd * odd < 1e-19 && n > 0) break;
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        s1 += sgn * w * odd;
        s3 += sgn * w * odd * odd * odd;
        if (n > 64) throw numeric_error("WeierstrassCell: theta series stalled");
    }
    m_eta_b1 = (kPi * kPi / (6.0 * m_b1)) * (s3 / s1);
    // Legendre relation eta(b1/2) b2 - eta(b2/2) b1 = pi i  (Im(b2/b1) > 0)
    m_eta_b2 = (m_eta_b1 * m_b2 - cplx(0.0, kPi)) / m_b1;

    if (swapped) {
        m_eta1_user = -m_eta_b2; // zeta(omega1/2) = zeta(-b2/2) = -eta(b2/2)
        m_eta2_user = m_eta_b1;
    } else {
        m_eta1_user = m_eta_b1;
        m_eta2_user = m_eta_b2;
    }
}

WeierstrassCell::Reduced WeierstrassCell::reduce(cplx z) const {
    // coordinates of z in the (b1, b2) basis; m_det = Im(conj(b1)*b2)
    const double aa = (std::real(z) * std::imag(m_b2) - std::imag(z) * std::real(m_b2)) / m_det;
    const double bb = (std::imag(z) * std::real(m_b1) - std::real(z) * std::imag(m_b1)) / m_det;
    const double mr = std::nearbyint(aa);
    const double nr = std::nearbyint(bb);
    Reduced r;
    r.m = static_cast<long>(mr);
    r.n = static_cast<long>(nr);
    r.z = z - mr * m_b1 - nr * m_b2;
    return r;
}

void WeierstrassCell::check_pole(const Reduced& r) const {
    double d2 = std::norm(r.z);
    for (int s = -1; s <= 1; ++s)
        for (int t = -1; t <= 1; ++t) {
            const cplx w = r.z - double(s) * m_b1 - double(t) * m_b2;
            const double n2 = std::norm(w);
            if (n2 < d2) d2 = n2;
        }
    if (d2 < m_guard * m_guard)
        throw pole_proximity_error("Weierstrass evaluation within pole guard of a lattice point");
}

void WeierstrassCell::theta_ratios(cplx v, cplx& r1, cplx& r2) const {
    const double re = std::real(v), im = std::imag(v);
    const double s = std::abs(im);
    cplx S0(0.0, 0.0), S1(0.0, 0.0), S2(0.0, 0.0);
    for (int n = 0;; ++n) {
        const double odd = 2.0 * n + 1.0;
        const double lnu = double(n) * (n + 1.0) * m_lnq + 2.0 * n * s;
        const double u = std::exp(lnu);
        if (n > 0 && u * odd * odd < 1e-19) break;
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        const cplx sn = scaled_sin(odd, re, im);
        const cplx cn = scaled_cos(odd, re, im);
        S0 += sgn * u * sn;
        S1 += sgn * u * odd * cn;
        S2 += sgn * u * odd * odd * sn;
        if (n > 64) throw numeric_error("WeierstrassCell: theta series stalled");
    }
    if (std::abs(S0) == 0.0)
        throw pole_proximity_error("theta1 vanished: argument at a lattice point");
    r1 = S1 / S0;
    r2 = -S2 / S0;
}

cplx WeierstrassCell::zeta(cplx z) const {
    const Reduced r = reduce(z);
    check_pole(r);
    cplx r1, r2;
    const cplx v = kPi * r.z / m_b1;
    theta_ratios(v, r1, r2);
    return 2.0 * m_eta_b1 * r.z / m_b1 + (kPi / m_b1) * r1
         + 2.0 * double(r.m) * m_eta_b1 + 2.0 * double(r.n) * m_eta_b2;
}

cplx WeierstrassCell::p(cplx z) const {
    const Reduced r = reduce(z);
    check_pole(r);
    cplx r1, r2;
    const cplx v = kPi * r.z / m_b1;
    theta_ratios(v, r1, r2);
    // p = -zeta' = -2 eta1/b1 - (pi/b1)^2 d/dv [theta1'/theta1]
    const cplx pref = (kPi / m_b1) * (kPi / m_b1);
    return -2.0 * m_eta_b1 / m_b1 - pref * (r2 - r1 * r1);
}

cplx zeta_halfperiod_constant(const LatticeParams& lat) {
    return WeierstrassCell(lat).eta2();
}

} // namespace ectba
