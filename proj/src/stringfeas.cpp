#include "ectba/stringfeas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace ectba {

// --- configurations -----------------------------------------------------------

int SignConfiguration::total_signs() const {
    int n = 0;
    for (const auto& l : levels) n += l.plus + l.minus;
    return n;
}

void SignConfiguration::validate() const {
    if (levels.size() < 2)
        throw numeric_error("SignConfiguration: at least two levels required");
    for (const auto& l : levels) {
        if (l.plus < 0 || l.minus < 0 || l.plus + l.minus == 0)
            throw numeric_error("SignConfiguration: every level needs at least one sign");
    }
    if (levels.front().plus > 0)
        throw numeric_error("SignConfiguration: a plus on the top level has no helper above");
    if (levels.back().minus > 0)
        throw numeric_error("SignConfiguration: a minus on the bottom level has no helper below");
    if (total_signs() < 2) throw numeric_error("SignConfiguration: M >= 2 required");
}

std::string SignConfiguration::to_literal() const {
    std::ostringstream oss;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (j) oss << '/';
        if (levels[j].plus > 0) oss << levels[j].plus << '+';
        if (levels[j].minus > 0) oss << levels[j].minus << '-';
    }
    return oss.str();
}

SignConfiguration SignConfiguration::parse(const std::string& literal) {
    SignConfiguration cfg;
    std::size_t i = 0;
    Level cur;
    bool any = false;
    auto flush_level = [&]() {
        if (!any) throw numeric_error("SignConfiguration::parse: empty level in '" + literal + "'");
        cfg.levels.push_back(cur);
        cur = Level{};
        any = false;
    };
    while (i < literal.size()) {
        const char c = literal[i];
        if (c == '/') {
            flush_level();
            ++i;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            std::ostringstream oss;
            oss << "SignConfiguration::parse: expected count at position " << i << " in '" << literal << "'";
            throw numeric_error(oss.str());
        }
        int count = 0;
        while (i < literal.size() && std::isdigit(static_cast<unsigned char>(literal[i])))
            count = count * 10 + (literal[i++] - '0');
        if (i >= literal.size() || (literal[i] != '+' && literal[i] != '-')) {
            std::ostringstream oss;
            oss << "SignConfiguration::parse: expected '+' or '-' at position " << i << " in '" << literal << "'";
            throw numeric_error(oss.str());
        }
        if (literal[i] == '+') cur.plus += count; else cur.minus += count;
        ++i;
        any = true;
    }
    flush_level();
    cfg.validate();
    return cfg;
}

// --- rate system ----------------------------------------------------------------

RateSystem build_rate_system(const SignConfiguration& cfg) {
    cfg.validate();
    RateSystem sys;
    const int m = int(cfg.levels.size());
    std::vector<std::vector<int>> level_vars(m);
    for (int j = 0; j < m; ++j) {
        for (int t = 0; t < cfg.levels[j].plus; ++t) {
            level_vars[j].push_back(sys.n_vars);
            sys.var_origin.emplace_back(j, +1);
            ++sys.n_vars;
        }
        for (int t = 0; t < cfg.levels[j].minus; ++t) {
            level_vars[j].push_back(sys.n_vars);
            sys.var_origin.emplace_back(j, -1);
            ++sys.n_vars;
        }
    }
    for (int j = 0; j < m; ++j) {
        int idx = 0;
        for (int t = 0; t < cfg.levels[j].plus + cfg.levels[j].minus; ++t, ++idx) {
            RateSystem::Constraint c;
            c.self = level_vars[j][idx];
            c.is_plus = (t < cfg.levels[j].plus);
            if (j + 1 < m) c.below = level_vars[j + 1];
            if (j > 0) c.above = level_vars[j - 1];
            sys.constraints.push_back(std::move(c));
        }
    }
    return sys;
}

double RateSystem::evaluate(const Constraint& c, const std::vector<double>& d) const {
    double v = 0.0;
    for (int o : c.below) v += std::min(d[c.self], d[o]);
    for (int o : c.above) v -= std::min(d[c.self], d[o]);
    return v;
}

double RateSystem::min_margin(const std::vector<double>& d) const {
    double m = 1e300;
    for (const auto& c : constraints) {
        const double v = evaluate(c, d);
        m = std::min(m, c.is_plus ? -v : v);
    }
    return m;
}

// --- exact decision machinery -----------------------------------------------------

namespace {

// small exact fraction on int64 with __int128 intermediates
struct Frac {
    long long num = 0, den = 1;
    Frac() = default;
    Frac(long long n) : num(n), den(1) {}
    Frac(long long n, long long d) : num(n), den(d) { normalize(); }
    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(std::abs(num), den);
        if (g > 1) { num /= g; den /= g; }
        if (den == 0) throw numeric_error("Frac: zero denominator");
    }
    static Frac make(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw numeric_error("Frac: overflow in exact arithmetic");
        Frac f; f.num = (long long)n; f.den = (long long)d; return f;
    }
    Frac operator+(const Frac& o) const {
        return make((__int128)num * o.den + (__int128)o.num * den, (__int128)den * o.den);
    }
    Frac operator-(const Frac& o) const {
        return make((__int128)num * o.den - (__int128)o.num * den, (__int128)den * o.den);
    }
    Frac operator*(const Frac& o) const {
        return make((__int128)num * o.num, (__int128)den * o.den);
    }
    Frac operator/(const Frac& o) const {
        if (o.num == 0) throw numeric_error("Frac: division by zero");
        return make((__int128)num * o.den, (__int128)den * o.num);
    }
    bool positive() const { return num > 0; }
    bool operator<(const Frac& o) const {
        return (__int128)num * o.den < (__int128)o.num * den;
    }
    double to_double() const { return double(num) / double(den); }
};

// Homogeneous strict system sum_j c_j u_j > 0 (rows), u_j > 0 implicit.
// Fourier-Motzkin elimination; exact for rational data.
struct StrictCone {
    int n;
    std::vector<std::vector<long long>> rows; // strict > 0

    static void reduce(std::vector<long long>& r) {
        long long g = 0;
        for (long long x : r) g = std::gcd(g, std::abs(x));
        if (g > 1)
            for (long long& x : r) x /= g;
    }

    // returns true when feasible and fills an exact interior witness u > 0
    bool solve(std::vector<Frac>& witness) const {
        std::vector<std::vector<long long>> sys = rows;
        for (auto& r : sys) reduce(r);
        // record elimination stages for back-substitution
        std::vector<std::vector<std::vector<long long>>> stages;
        std::vector<std::vector<long long>> cur = sys;
        for (int k = n - 1; k >= 1; --k) {
            stages.push_back(cur);
            std::vector<std::vector<long long>> next;
            std::set<std::vector<long long>> seen;
            std::vector<const std::vector<long long>*> pos, neg;
            for (const auto& r : cur) {
                if (r[k] > 0) pos.push_back(&r);
                else if (r[k] < 0) neg.push_back(&r);
                else {
                    auto rr = r;
                    if (seen.insert(rr).second) next.push_back(rr);
                }
            }
            // u_k > 0 itself acts as a positive row; combinations with neg rows
            // give the pure constraint "rest > 0" is not implied -- handle by
            // adding the positivity row explicitly
            std::vector<long long> posk(std::size_t(n), 0);
            posk[k] = 1;
            pos.push_back(&posk);
            for (const auto* p : pos)
                for (const auto* q : neg) {
                    std::vector<long long> r(std::size_t(n), 0);
                    const long long a = (*p)[k], b = -(*q)[k];
                    for (int j = 0; j < n; ++j) {
                        const __int128 v = (__int128)b * (*p)[j] + (__int128)a * (*q)[j];
                        if (v > INT64_MAX || v < INT64_MIN)
                            throw numeric_error("StrictCone: coefficient overflow");
                        r[j] = (long long)v;
                    }
                    r[k] = 0;
                    bool all_zero = true;
                    for (long long x : r) all_zero = all_zero && (x == 0);
                    if (all_zero) return false; // derived 0 > 0
                    bool nonpos_const = true;
                    for (int j = 0; j < n; ++j) nonpos_const = nonpos_const && (r[j] <= 0);
                    if (nonpos_const) return false; // sum of nonpositive terms must be > 0
                    reduce(r);
                    if (seen.insert(r).second) next.push_back(r);
                    if (next.size() > 200000)
                        throw numeric_error("StrictCone: elimination blow-up");
                }
            cur = std::move(next);
        }
        // only u_0 left: rows are c_0 u_0 > 0
        for (const auto& r : cur)
            if (r[0] <= 0) return false;
        // back-substitute: assign u_0 = 1, then u_k from stage bounds
        witness.assign(std::size_t(n), Frac(1));
        for (int k = 1; k <= n - 1; ++k) {
            const auto& stage = stages[n - 1 - k];
            // bounds on u_k given u_0..u_{k-1} (higher indices were eliminated
            // in later stages, rows in this stage involve only u_0..u_k)
            bool has_hi = false;
            Frac lo(0), hi(0);
            for (const auto& r : stage) {
                if (r[k] == 0) continue;
                Frac rest(0);
                for (int j = 0; j < k; ++j)
                    rest = rest + Frac(r[j]) * witness[j];
                // r[k] u_k + rest > 0
                const Frac bound = Frac(-1) * rest / Frac(r[k]);
                if (r[k] > 0) {
                    if (lo < bound) lo = bound; // u_k > bound
                } else {
                    if (!has_hi || bound < hi) { hi = bound; has_hi = true; } // u_k < bound
                }
            }
            if (lo.num < 0) lo = Frac(0); // positivity
            Frac val = has_hi ? (lo + hi) / Frac(2) : lo + Frac(1);
            if (!(lo < val) || (has_hi && !(val < hi)))
                throw numeric_error("StrictCone: empty back-substitution interval");
            witness[k] = val;
        }
        return true;
    }
};

struct Enumerator {
    const RateSystem& sys;
    int n;
    std::uint64_t cells = 0;
    bool feasible = false;
    std::vector<double> witness;
    double margin = 0.0;
    std::vector<int> depth1_blocked; // vars that cannot sit in the minimum class
    bool depth1_closed = true;       // all depth-1 branches pruned

    std::vector<int> rank;           // class rank per var, -1 unassigned
    std::vector<std::vector<int>> classes;

    explicit Enumerator(const RateSystem& s) : sys(s), n(s.n_vars) {
        rank.assign(std::size_t(n), -1);
    }

    // bound-based pruning of a partial weak ordering: ranks 0..d-1 assigned,
    // unassigned variables all have rank >= d.
    bool prune() const {
        const int d = int(classes.size());
        for (const auto& c : sys.constraints) {
            // coefficient per rank 0..d (rank d stands for "any later class"),
            // plus a flag when an unresolved term appears with given sign
            std::vector<int> coef(std::size_t(d) + 1, 0);
            bool neg_unres = false, pos_unres = false;
            auto add_term = [&](int other, int sgn) {
                const int rs = rank[c.self];
                const int ro = rank[other];
                if (rs < 0 && ro < 0) {
                    (sgn > 0 ? pos_unres : neg_unres) = true;
                    coef[d] += sgn; // min >= v_d (next class value)
                    return;
                }
                int r;
                if (rs < 0) r = ro;
                else if (ro < 0) r = rs;
                else r = std::min(rs, ro);
                coef[r] += sgn;
            };
            for (int o : c.below) add_term(o, +1);
            for (int o : c.above) add_term(o, -1);
            // expression = sum_r coef[r] v_r with 0 < v_0 < ... < v_{d-1} < v_d,
            // where terms counted at rank d are lower bounds (>= v_d)
            // suffix sums decide the sign over the open cone
            if (c.is_plus) {
                // need expression < 0 possible: impossible iff no negative
                // unresolved slack and all suffix sums >= 0
                if (neg_unres) continue;
                bool nonneg = true;
                int s = 0;
                for (int r = d; r >= 0; --r) {
                    s += coef[r];
                    if (s < 0) { nonneg = false; break; }
                }
                if (nonneg) return true;
            } else {
                if (pos_unres) continue;
                bool nonpos = true;
                int s = 0;
                for (int r = d; r >= 0; --r) {
                    s += coef[r];
                    if (s > 0) { nonpos = false; break; }
                }
                if (nonpos) return true;
            }
        }
        return false;
    }

    bool leaf_check() {
        ++cells;
        const int d = int(classes.size());
        // constraints become integer forms in class values v_0..v_{d-1};
        // u-coordinates u_j = v_j - v_{j-1} > 0 turn the ordered cone into the
        // positive orthant: coefficient of u_j is the suffix sum over r >= j
        StrictCone cone;
        cone.n = d;
        for (const auto& c : sys.constraints) {
            std::vector<int> coef(std::size_t(d), 0);
            auto add_term = [&](int other, int sgn) {
                coef[std::min(rank[c.self], rank[other])] += sgn;
            };
            for (int o : c.below) add_term(o, +1);
            for (int o : c.above) add_term(o, -1);
            std::vector<long long> row(std::size_t(d), 0);
            long long s = 0;
            for (int j = d - 1; j >= 0; --j) {
                s += coef[j];
                row[j] = c.is_plus ? -s : s; // orient all rows to "> 0"
            }
            bool all_zero = true;
            for (long long x : row) all_zero = all_zero && (x == 0);
            if (all_zero) return false; // expression identically 0, strict fails
            cone.rows.push_back(std::move(row));
        }
        std::vector<Frac> u;
        if (!cone.solve(u)) return false;
        // class values = prefix sums
        std::vector<double> v(d);
        Frac acc(0);
        for (int j = 0; j < d; ++j) {
            acc = acc + u[j];
            v[j] = acc.to_double();
        }
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) w[i] = v[rank[i]];
        const double mx = *std::max_element(w.begin(), w.end());
        for (double& x : w) x /= mx;
        const double mg = sys.min_margin(w);
        if (mg <= 0.0) return false; // rational rounding landed on a face; keep searching
        feasible = true;
        witness = std::move(w);
        margin = mg;
        return true;
    }

    // choose the next (minimum) class among unassigned vars
    bool recurse(std::vector<int> unassigned, int depth) {
        if (unassigned.empty()) return leaf_check();
        const int m = int(unassigned.size());
        // enumerate nonempty subsets as the next class
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << m); ++mask) {
            classes.emplace_back();
            std::vector<int> rest;
            for (int b = 0; b < m; ++b) {
                if (mask & (std::uint64_t(1) << b)) {
                    classes.back().push_back(unassigned[b]);
                    rank[unassigned[b]] = int(classes.size()) - 1;
                } else {
                    rest.push_back(unassigned[b]);
                }
            }
            bool pruned = prune();
            if (!pruned) {
                if (depth == 0) depth1_closed = false;
                if (recurse(rest, depth + 1)) return true;
            } else if (depth == 0 && classes.back().size() == 1) {
                depth1_blocked.push_back(classes.back().front());
            }
            for (int vv : classes.back()) rank[vv] = -1;
            classes.pop_back();
        }
        return false;
    }
};

std::vector<double> random_rates(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> d(n);
    for (double& x : d) x = std::exp(u(rng));
    return d;
}

// weak ordering of a sample: group values within a relative tolerance
std::vector<int> ranks_of_sample(const std::vector<double>& d, double rel_tol = 1e-9) {
    const int n = int(d.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<int> rank(n);
    int r = 0;
    for (int i = 0; i < n; ++i) {
        if (i > 0 && d[idx[i]] >
                         d[idx[i - 1]] * (1.0 + rel_tol))
            ++r;
        rank[idx[i]] = r;
    }
    return rank;
}

// exact check of a single ordering cell given per-variable ranks
bool check_cell(const RateSystem& sys, const std::vector<int>& rank,
                std::vector<double>& witness, double& margin) {
    const int n = sys.n_vars;
    const int d = 1 + *std::max_element(rank.begin(), rank.end());
    StrictCone cone;
    cone.n = d;
    for (const auto& c : sys.constraints) {
        std::vector<int> coef(std::size_t(d), 0);
        for (int o : c.below) coef[std::size_t(std::min(rank[c.self], rank[o]))] += 1;
        for (int o : c.above) coef[std::size_t(std::min(rank[c.self], rank[o]))] -= 1;
        std::vector<long long> row(std::size_t(d), 0);
        long long s = 0;
        for (int j = d - 1; j >= 0; --j) {
            s += coef[j];
            row[j] = c.is_plus ? -s : s;
        }
        bool all_zero = true;
        for (long long x : row) all_zero = all_zero && (x == 0);
        if (all_zero) return false;
        cone.rows.push_back(std::move(row));
    }
    std::vector<Frac> u;
    if (!cone.solve(u)) return false;
    std::vector<double> v(d);
    Frac acc(0);
    for (int j = 0; j < d; ++j) {
        acc = acc + u[j];
        v[j] = acc.to_double();
    }
    witness.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) witness[i] = v[rank[i]];
    const double mx = *std::max_element(witness.begin(), witness.end());
    for (double& x : witness) x /= mx;
    margin = sys.min_margin(witness);
    return margin > 0.0;
}

} // namespace

FeasibilityVerdict decide_feasibility(const RateSystem& sys, int exact_var_cap,
                                      std::uint64_t rng_seed) {
    FeasibilityVerdict out;
    const int n = sys.n_vars;
    if (n == 0) throw numeric_error("decide_feasibility: empty system");

    // randomized pre-pass; a hit pins an ordering cell that is then proven exactly
    std::mt19937_64 rng(rng_seed);
    // structured tent patterns first (the known string-solution shape:
    // rates rise toward the middle of the ladder, peak possibly tied)
    std::vector<std::vector<double>> candidates;
    for (int peak = 0; peak < n; ++peak) {
        std::vector<double> d(n);
        for (int i = 0; i < n; ++i) d[i] = double(n - std::abs(i - peak));
        candidates.push_back(d);
    }
    {
        std::vector<double> d(n);
        for (int i = 0; i < n; ++i) d[i] = 1.0 + std::min(i, n - 1 - i);
        candidates.push_back(d);
    }
    for (int t = 0; t < 400; ++t) candidates.push_back(random_rates(rng, n));
    for (const auto& d : candidates) {
        if (sys.min_margin(d) > 0.0) {
            std::vector<double> w;
            double mg = 0.0;
            if (check_cell(sys, ranks_of_sample(d), w, mg)) {
                out.status = FeasStatus::Feasible;
                out.witness = std::move(w);
                out.witness_margin = mg;
                return out;
            }
        }
    }

    if (n > exact_var_cap) {
        // randomized fallback only; a miss is not a proof of infeasibility
        for (int t = 0; t < 20000; ++t) {
            const auto d = random_rates(rng, n);
            if (sys.min_margin(d) > 0.0) {
                out.status = FeasStatus::InconclusiveFeasible;
                out.witness = d;
                const double mx = *std::max_element(out.witness.begin(), out.witness.end());
                for (double& x : out.witness) x /= mx;
                out.witness_margin = sys.min_margin(out.witness);
                out.certificate = "variable count above exact cap; randomized witness (not an exact proof)";
                return out;
            }
        }
        throw numeric_error("decide_feasibility: system above exact cap and randomized search found no witness");
    }

    Enumerator e(sys);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    if (e.recurse(all, 0)) {
        out.status = FeasStatus::Feasible;
        out.witness = e.witness;
        out.witness_margin = e.margin;
        out.cells_visited = e.cells;
        return out;
    }
    out.status = FeasStatus::Infeasible;
    out.cells_visited = e.cells;
    std::sort(e.depth1_blocked.begin(), e.depth1_blocked.end());
    e.depth1_blocked.erase(std::unique(e.depth1_blocked.begin(), e.depth1_blocked.end()),
                           e.depth1_blocked.end());
    if (e.depth1_closed && int(e.depth1_blocked.size()) == n) {
        out.no_minimum_vars = e.depth1_blocked;
        out.certificate = "no rate can be the smallest: every candidate minimum class violates a constraint";
    } else {
        out.certificate = "exhaustive weak-ordering enumeration found no nonempty cell";
    }
    return out;
}

ThreeLevelReport enumerate_three_level(int cfg_bound) {
    if (cfg_bound < 1) throw numeric_error("enumerate_three_level: bound must be >= 1");
    ThreeLevelReport rep;
    rep.infeasible_exactly_ex1 = true;
    for (int m1 = 1; m1 <= cfg_bound; ++m1)
        for (int p2 = 0; p2 <= cfg_bound; ++p2)
            for (int m2 = 0; m2 <= cfg_bound; ++m2) {
                if (p2 + m2 == 0) continue;
                for (int p3 = 1; p3 <= cfg_bound; ++p3) {
                    SignConfiguration cfg;
                    cfg.levels = {{0, m1}, {p2, m2}, {p3, 0}};
                    const auto verdict = decide_feasibility(build_rate_system(cfg));
                    ThreeLevelEntry e;
                    e.cfg = cfg;
                    e.feasible = verdict.status == FeasStatus::Feasible;
                    e.ex1_substructure = (p2 > 0 && m2 > 0 && m1 == 1 && p3 == 1);
                    if (e.feasible == e.ex1_substructure) rep.infeasible_exactly_ex1 = false;
                    rep.entries.push_back(std::move(e));
                }
            }
    return rep;
}

} // namespace ectba
