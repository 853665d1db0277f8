#include "ectba/dispersion.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace ectba {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr cplx kI(0.0, 1.0);

double sqr(double x) { return x * x; }

} // namespace

double fold_to_strip(double re_p) {
    double r = re_p - 2.0 * kPi * std::floor((re_p + kPi) / (2.0 * kPi));
    if (r >= kPi) r -= 2.0 * kPi; // guard against floor rounding at the seam
    return r;
}

DispersionContext::DispersionContext(double kappa, double J) : m_kappa(kappa), m_J(J) {
    if (!(kappa > 0.0) || !(J > 0.0))
        throw numeric_error("DispersionContext: kappa and J must be positive");
    if (kappa < 1e-3 || kappa > 1e3)
        throw numeric_error("DispersionContext: kappa outside supported range [1e-3, 1e3]");
    m_cell = std::make_shared<const WeierstrassCell>(LatticeParams(1.0, kPi / kappa));
    m_zeta_const = m_cell->eta2(); // zeta(i pi / 2 kappa)

    auto crit = find_critical(kappa);
    m_p_crit = crit.first;
    m_theta_crit = crit.second;

    // quadratic Taylor coefficient at the removable singularity p = 0,
    // Richardson-extrapolated central evaluation
    const double h = 1e-3;
    const cplx e1 = epsilon(cplx(h, 0.0));
    const cplx e2 = epsilon(cplx(2.0 * h, 0.0));
    m_eps_quad = (4.0 * e1 - e2) / (3.0 * h * h);
}

cplx DispersionContext::epsilon(cplx p) const {
    const double re = fold_to_strip(std::real(p));
    const cplx pf(re, std::imag(p));
    // distance to the remaining p-lattice points 2 i kappa m
    const double m = std::nearbyint(std::imag(pf) / (2.0 * m_kappa));
    if (std::abs(m) > 0.5) {
        const cplx d = pf - cplx(0.0, 2.0 * m_kappa * m);
        if (std::abs(d) < 1e-9)
            throw pole_proximity_error("epsilon: momentum at a non-removable pole 2 i kappa m");
    }
    if (std::abs(pf) < 1e-6) return m_eps_quad * pf * pf; // removable point

    const cplx z = kI * pf / (2.0 * m_kappa);
    const cplx wp = m_cell->p(z);
    const cplx wz = m_cell->zeta(z);
    const double sh = std::sinh(m_kappa);
    const cplx pref = m_J * sh * sh / (2.0 * m_kappa * m_kappa);
    const cplx lin = (pf / kPi) * m_zeta_const - wz;
    return pref * (-0.5 * wp + 0.5 * lin * lin - (2.0 * kI * m_kappa / kPi) * m_zeta_const);
}

cplx DispersionContext::phi(cplx p) const {
    const cplx pf(fold_to_strip(std::real(p)), std::imag(p));
    const cplx z = kI * pf / (2.0 * m_kappa);
    return pf * m_zeta_const / (2.0 * kPi * kI * m_kappa) - m_cell->zeta(z) / (2.0 * kI * m_kappa);
}

cplx DispersionContext::phi_derivative(cplx p) const {
    const cplx pf(fold_to_strip(std::real(p)), std::imag(p));
    const cplx z = kI * pf / (2.0 * m_kappa);
    return m_zeta_const / (2.0 * kPi * kI * m_kappa) + m_cell->p(z) / (4.0 * m_kappa * m_kappa);
}

std::pair<double, double> find_critical(double kappa) {
    if (kappa < 1e-3 || kappa > 1e3)
        throw numeric_error("find_critical: kappa outside supported range [1e-3, 1e3]");
    const WeierstrassCell cell(LatticeParams(1.0, kPi / kappa));
    const cplx zc = cell.eta2();
    auto phi_top = [&](double x) {
        const cplx p(x, kappa);
        const cplx z = kI * p / (2.0 * kappa);
        return p * zc / (2.0 * kPi * kI * kappa) - cell.zeta(z) / (2.0 * kI * kappa);
    };
    auto dre = [&](double x) {
        const cplx p(x, kappa);
        const cplx z = kI * p / (2.0 * kappa);
        return std::real(zc / (2.0 * kPi * kI * kappa) + cell.p(z) / (4.0 * kappa * kappa));
    };
    // golden-section maximum of Re phi(x + i kappa) on (0, pi)
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 1e-9, b = kPi - 1e-9;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = std::real(phi_top(c)), fd = std::real(phi_top(d));
    for (int it = 0; it < 90; ++it) {
        if (fc > fd) { b = d; d = c; fd = fc; c = b - gr * (b - a); fc = std::real(phi_top(c)); }
        else { a = c; c = d; fc = fd; d = a + gr * (b - a); fd = std::real(phi_top(d)); }
        if (b - a < 1e-13) break;
    }
    // derivative-based polish: d/dx Re phi changes sign at the maximum
    double xa = std::max(1e-10, a - 1e-6), xb = std::min(kPi - 1e-10, b + 1e-6);
    double ga = dre(xa), gb = dre(xb);
    double x = 0.5 * (a + b);
    if (ga > 0.0 && gb < 0.0) {
        for (int it = 0; it < 200; ++it) {
            x = 0.5 * (xa + xb);
            const double gx = dre(x);
            if (std::abs(gx) < 1e-14 || xb - xa < 1e-16) break;
            if (gx > 0.0) xa = x; else xb = x;
        }
    } else {
        throw convergence_error("find_critical: derivative not bracketed around the maximum");
    }
    const double theta_crit = std::real(phi_top(x));
    return {x, theta_crit};
}

int DispersionContext::region_index(cplx p) const {
    const double q = fold_to_strip(std::real(p));
    const double y = std::imag(p);
    const double k = m_kappa;
    // on an odd multiple of kappa the arc split decides membership
    const double u = y / k;
    const double odd = std::nearbyint((u - 1.0) / 2.0) * 2.0 + 1.0; // nearest odd integer
    if (std::abs(u - odd) < 1e-9) {
        const long n = std::lround((odd - 1.0) / 2.0); // line between D_n and D_{n+1}
        return (std::abs(q) >= m_p_crit) ? int(n) : int(n + 1);
    }
    return int(std::floor((u + 1.0) / 2.0));
}

double DispersionContext::boundary_bisect(double t, double xa, double xb) const {
    auto g = [&](double x) { return std::real(phi(cplx(x, m_kappa))) - t; };
    double fa = g(xa), fb = g(xb);
    if (fa * fb > 0.0)
        throw convergence_error("boundary_bisect: target not bracketed on the arc");
    for (int it = 0; it < 200; ++it) {
        const double xm = 0.5 * (xa + xb);
        const double fm = g(xm);
        if (fm == 0.0 || 0.5 * (xb - xa) < 1e-15) return xm;
        if (fa * fm <= 0.0) { xb = xm; fb = fm; } else { xa = xm; fa = fm; }
    }
    return 0.5 * (xa + xb);
}

cplx DispersionContext::newton_invert(cplx theta, cplx seed, int max_iter, bool& ok) const {
    cplx p = seed;
    ok = false;
    for (int it = 0; it < max_iter; ++it) {
        cplx f, df;
        try {
            f = phi(p) - theta;
            df = phi_derivative(p);
        } catch (const pole_proximity_error&) {
            p += cplx(1e-6, 1e-6);
            continue;
        }
        if (std::abs(df) == 0.0) { p += cplx(1e-8, 1e-8); continue; }
        cplx step = f / df;
        const double cap = 1.0;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        p -= step;
        p = cplx(fold_to_strip(std::real(p)), std::imag(p));
        if (std::abs(step) < 1e-14 && std::abs(f) < 1e-11 * std::max(1.0, std::abs(theta))) {
            ok = true;
            return p;
        }
    }
    // accept a slow but converged iterate
    if (std::abs(phi(p) - theta) < 1e-11 * std::max(1.0, std::abs(theta))) ok = true;
    return p;
}

cplx DispersionContext::invert_phi_fundamental(cplx theta) const {
    const double ti = std::imag(theta);
    const double tr = std::real(theta);
    const double band_tol = 1e-9;

    // real rapidity: real momentum, phi decreasing on (0, pi]
    if (std::abs(ti) < band_tol) {
        if (std::abs(tr) < 1e-13) return cplx(-kPi, 0.0);
        const double s = tr > 0.0 ? 1.0 : -1.0;
        double xa = 1e-12, xb = kPi;
        auto g = [&](double x) { return std::real(phi(cplx(s * x, 0.0))) - tr; };
        // phi(s*xa) ~ 1/(s*xa) huge with sign s, phi(s*pi) = 0
        for (int it = 0; it < 200; ++it) {
            const double xm = 0.5 * (xa + xb);
            if (s * g(xm) > 0.0) xa = xm; else xb = xm;
            if (xb - xa < 1e-15) break;
        }
        double x = s * 0.5 * (xa + xb);
        // Newton polish on the real line
        for (int it = 0; it < 8; ++it) {
            const double f = std::real(phi(cplx(x, 0.0))) - tr;
            const double d = std::real(phi_derivative(cplx(x, 0.0)));
            if (d == 0.0) break;
            x -= f / d;
        }
        return cplx(fold_to_strip(x), 0.0);
    }

    // doubly-attained band Im theta = -1/2 (top arc) and +1/2 (bottom arc)
    if (std::abs(std::abs(ti) - 0.5) < band_tol && std::abs(tr) < m_theta_crit - 1e-12) {
        if (ti < 0.0) {
            // top boundary, outer branch |x| in [p_crit, pi)
            if (std::abs(tr) < 1e-13) return cplx(-kPi, m_kappa);
            if (tr > 0.0) {
                const double x = boundary_bisect(tr, m_p_crit, kPi);
                return cplx(fold_to_strip(x), m_kappa);
            }
            const double x = boundary_bisect(-tr, m_p_crit, kPi);
            return cplx(fold_to_strip(-x), m_kappa);
        }
        // bottom boundary, inner branch |x| < p_crit; Re phi(x - i k) = Re phi(x + i k)
        if (std::abs(tr) < 1e-13) return cplx(0.0, -m_kappa);
        if (tr > 0.0) {
            const double x = boundary_bisect(tr, 0.0, m_p_crit);
            return cplx(x, -m_kappa);
        }
        const double x = boundary_bisect(-tr, 0.0, m_p_crit);
        return cplx(-x, -m_kappa);
    }

    // interior root: Newton from the xxx seed, then homotopy in kappa
    std::vector<cplx> seeds;
    seeds.push_back(2.0 * std::atan(1.0 / (2.0 * theta)));
    if (std::abs(theta) > 0.5) seeds.push_back(1.0 / theta);
    seeds.push_back(cplx(0.5, ti > 0.0 ? -0.5 * m_kappa : 0.5 * m_kappa));

    for (const cplx& s0 : seeds) {
        bool ok = false;
        const cplx p = newton_invert(theta, cplx(fold_to_strip(std::real(s0)), std::imag(s0)), 200, ok);
        if (ok && region_index(p) == 0) return p;
    }

    // homotopy: walk kappa down from an xxx-like value, reusing each root
    const double k_hi = std::max(10.0, 2.0 * m_kappa);
    const int steps = 8 + int(6.0 * std::abs(std::log(k_hi / m_kappa)));
    cplx p = 2.0 * std::atan(1.0 / (2.0 * theta));
    bool ok = false;
    for (int j = 0; j <= steps; ++j) {
        const double kj = m_kappa * std::pow(k_hi / m_kappa, double(steps - j) / steps);
        if (std::abs(kj - m_kappa) < 1e-15 * m_kappa) break;
        DispersionContext ctx_j(kj, m_J);
        p = ctx_j.newton_invert(theta, p, 80, ok);
    }
    p = newton_invert(theta, p, 200, ok);
    if (ok && region_index(p) == 0) return p;

    std::ostringstream oss;
    oss << "invert_phi_fundamental: no fundamental-region root for theta = ("
        << std::real(theta) << ", " << std::imag(theta) << "), last iterate ("
        << std::real(p) << ", " << std::imag(p) << ")";
    throw convergence_error(oss.str());
}

cplx DispersionContext::invert_phi_region(cplx theta, int n) const {
    const cplx pf = invert_phi_fundamental(theta + cplx(0.0, double(n)));
    return pf + cplx(0.0, 2.0 * m_kappa * double(n));
}

int DispersionContext::argument_principle_count(cplx theta) const {
    const int N = 1 << 12;
    // rectangle (-pi,-k) -> (pi,-k) -> (pi,k) -> (-pi,k) -> close, counterclockwise
    std::vector<cplx> nodes;
    nodes.reserve(4 * (N / 4));
    const int m = N / 4;
    for (int i = 0; i < m; ++i)
        nodes.push_back(cplx(-kPi + 2.0 * kPi * i / m, -m_kappa));
    for (int i = 0; i < m; ++i)
        nodes.push_back(cplx(kPi, -m_kappa + 2.0 * m_kappa * i / m));
    for (int i = 0; i < m; ++i)
        nodes.push_back(cplx(kPi - 2.0 * kPi * i / m, m_kappa));
    for (int i = 0; i < m; ++i)
        nodes.push_back(cplx(-kPi, m_kappa - 2.0 * m_kappa * i / m));

    cplx integral(0.0, 0.0);
    double min_dist = 1e300;
    const std::size_t n = nodes.size();
    std::vector<cplx> fvals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx p = nodes[i];
        const cplx ft = phi(p) - theta;
        min_dist = std::min(min_dist, std::abs(ft));
        fvals[i] = phi_derivative(p) / ft;
    }
    if (min_dist < 1e-4)
        throw numeric_error("argument_principle_count: theta within 1e-4 of the boundary image");
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        integral += 0.5 * (fvals[i] + fvals[j]) * (nodes[j] - nodes[i]);
    }
    const double count = std::real(integral / (2.0 * kPi * kI));
    return int(std::lround(count));
}

} // namespace ectba
