#include "ectba/exactdiag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork,
             int* info);
}

namespace ectba {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// colex rank of a sorted position list: sum_i C(c_i, i+1)
std::uint64_t combinadic_rank(const std::vector<int>& pos) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) r += binomial(pos[i], int(i) + 1);
    return r;
}

bool next_combination(std::vector<int>& pos, int L) {
    const int M = int(pos.size());
    for (int i = 0; i < M; ++i) {
        const int limit = (i + 1 < M) ? pos[i + 1] : L;
        if (pos[i] + 1 < limit) {
            ++pos[i];
            for (int j = 0; j < i; ++j) pos[j] = j;
            return true;
        }
    }
    return false;
}

} // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
    return r;
}

PotentialSpec::PotentialSpec(PotentialKind k, int length, double coupling, double kap)
    : kind(k), L(length), J(coupling), kappa(kap) {
    if (L < 2 || L > 15) throw numeric_error("PotentialSpec: L must be in [2, 15]");
    if (!(J > 0.0)) throw numeric_error("PotentialSpec: J must be positive");
    if ((k == PotentialKind::Elliptic || k == PotentialKind::Hyperbolic) && !(kappa > 0.0))
        throw numeric_error("PotentialSpec: kappa must be positive");
}

std::string potential_kind_name(PotentialKind k) {
    switch (k) {
    case PotentialKind::XXX: return "xxx";
    case PotentialKind::HS: return "hs";
    case PotentialKind::Elliptic: return "elliptic";
    case PotentialKind::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

double potential_value(const PotentialSpec& spec, int j) {
    const int L = spec.L;
    const int a = std::abs(j);
    if (a < 1 || a > L - 1) throw numeric_error("potential_value: need 1 <= |j| <= L-1");
    switch (spec.kind) {
    case PotentialKind::XXX: {
        const int m = ((j % L) + L) % L;
        return (m == 1 || m == L - 1) ? 1.0 : 0.0;
    }
    case PotentialKind::HS: {
        const double s = std::sin(kPi * a / L);
        return kPi * kPi / (double(L) * L * s * s);
    }
    case PotentialKind::Hyperbolic: {
        // infinite-length potential on the ring: nearest-image separation
        const int d = std::min(a % L, L - a % L);
        const double sh = std::sinh(spec.kappa);
        const double shj = std::sinh(spec.kappa * d);
        return sh * sh / (shj * shj);
    }
    case PotentialKind::Elliptic: {
        const WeierstrassCell cell(LatticeParams(double(L), kPi / spec.kappa));
        const cplx shift = (2.0 * spec.kappa / (cplx(0.0, 1.0) * kPi)) * cell.eta2();
        if (std::abs(std::imag(shift)) > 1e-12)
            throw numeric_error("potential_value: elliptic constant shift not real");
        const cplx w = cell.p(cplx(double(a), 0.0));
        if (std::abs(std::imag(w)) > 1e-10)
            throw numeric_error("potential_value: elliptic potential not real at integer site");
        const double sh = std::sinh(spec.kappa);
        return sh * sh / (spec.kappa * spec.kappa) * (std::real(w) + std::real(shift));
    }
    }
    return 0.0;
}

SectorSpectrum build_sector(const PotentialSpec& spec, int M) {
    const int L = spec.L;
    if (M < 0 || M > L) throw numeric_error("build_sector: M out of range");
    SectorSpectrum out;
    out.magnon_number = M;
    const std::uint64_t dim64 = binomial(L, M);
    if (dim64 > 10000) throw numeric_error("build_sector: sector dimension exceeds 10^4");
    const int dim = int(dim64);
    if (M == 0 || M == L) {
        out.eigenvalues = {0.0};
        return out;
    }

    // potential table (by distance) once per sector
    std::vector<double> V(L, 0.0);
    for (int d = 1; d <= L - 1; ++d) V[d] = potential_value(spec, d);

    std::vector<double> H(std::size_t(dim) * dim, 0.0);
    std::vector<int> pos(M);
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<char> occ(L, 0);
    do {
        const std::uint64_t row = combinadic_rank(pos);
        std::fill(occ.begin(), occ.end(), 0);
        for (int p : pos) occ[p] = 1;
        double diag = 0.0;
        for (int j = 0; j < L; ++j)
            for (int k = j + 1; k < L; ++k) {
                const double v = V[k - j];
                if (v == 0.0) continue;
                if (occ[j] == occ[k]) continue;
                // H = (J/2) sum_{j<k} V(j-k) (1 - P_jk)
                diag += 0.5 * spec.J * v;
                // swapped state: move the flipped site
                std::vector<int> q(pos);
                const int from = occ[j] ? j : k;
                const int to = occ[j] ? k : j;
                q.erase(std::find(q.begin(), q.end(), from));
                q.insert(std::upper_bound(q.begin(), q.end(), to), to);
                const std::uint64_t col = combinadic_rank(q);
                H[row * dim + col] -= 0.5 * spec.J * v;
            }
        H[row * dim + row] += diag;
    } while (next_combination(pos, L));

    out.eigenvalues.resize(dim);
    int info = 0, n = dim, lwork = -1, liwork = -1, iworkq = 0;
    double workq = 0.0;
    dsyevd_("N", "U", &n, H.data(), &n, out.eigenvalues.data(), &workq, &lwork, &iworkq,
            &liwork, &info);
    lwork = int(workq);
    liwork = iworkq;
    std::vector<double> work(std::size_t(std::max(lwork, 1)));
    std::vector<int> iwork(std::size_t(std::max(liwork, 1)));
    dsyevd_("N", "U", &n, H.data(), &n, out.eigenvalues.data(), work.data(), &lwork,
            iwork.data(), &liwork, &info);
    if (info != 0) throw numeric_error("build_sector: dsyevd failed");
    return out;
}

std::size_t ChainSpectra::total_states() const {
    std::size_t n = 0;
    for (const auto& s : sectors) n += s.eigenvalues.size();
    return n;
}

double ChainSpectra::trace() const {
    double t = 0.0;
    for (const auto& s : sectors)
        for (double e : s.eigenvalues) t += e;
    return t;
}

ChainSpectra compute_chain_spectra(const PotentialSpec& spec) {
    ChainSpectra out{spec, {}};
    out.sectors.reserve(spec.L + 1);
    for (int M = 0; M <= spec.L; ++M) out.sectors.push_back(build_sector(spec, M));
    return out;
}

double free_energy_trace(const ChainSpectra& spectra, double T) {
    if (!(T > 0.0)) throw numeric_error("free_energy_trace: T must be positive");
    double z = 0.0;
    for (const auto& s : spectra.sectors)
        for (double e : s.eigenvalues) z += std::exp(-e / T);
    return -(T / spectra.spec.L) * std::log(z);
}

double free_energy_trace(const PotentialSpec& spec, double T) {
    return free_energy_trace(compute_chain_spectra(spec), T);
}

StabilizedFreeEnergy stabilized_free_energy(PotentialKind kind, double kappa, double J,
                                            double T, double tol, int L_min, int L_max) {
    StabilizedFreeEnergy out{0.0, 0, false, 1.0};
    double prev = 0.0;
    bool have_prev = false;
    for (int L = L_min; L <= L_max; L += 2) {
        const PotentialSpec spec(kind, L, J, kappa);
        const double f = free_energy_trace(spec, T);
        if (have_prev) {
            out.last_rel_change = std::abs(f - prev) / std::abs(f);
            if (out.last_rel_change < tol) {
                out.f = f;
                out.L_used = L;
                out.stabilized = true;
                return out;
            }
        }
        prev = f;
        have_prev = true;
        out.f = f;
        out.L_used = L;
    }
    return out; // not stabilized within the cap; caller sees the flag
}

} // namespace ectba
