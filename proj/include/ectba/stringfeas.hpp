#ifndef ECTBA_STRINGFEAS_HPP
#define ECTBA_STRINGFEAS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ectba/errors.hpp"

namespace ectba {

// Sign configuration of a coinciding-solution candidate, levels top to
// bottom.  A plus needs a helper on the level above, a minus on the level
// below, so the top level holds only minuses and the bottom only pluses.
struct SignConfiguration {
    struct Level {
        int plus = 0;
        int minus = 0;
    };
    std::vector<Level> levels;

    int total_signs() const;
    void validate() const;
    std::string to_literal() const;            // e.g. "1-/1+1-/1+"
    static SignConfiguration parse(const std::string& literal);
};

// Convergence-rate system: one positive rate per sign; for the sign s at
// level j the expression
//     sum_{level below} min(d_s, d_o) - sum_{level above} min(d_s, d_o)
// must be < 0 when s is a plus and > 0 when s is a minus.
struct RateSystem {
    struct Constraint {
        int self;
        std::vector<int> below;
        std::vector<int> above;
        bool is_plus;
    };
    int n_vars = 0;
    std::vector<Constraint> constraints;
    std::vector<std::pair<int, int>> var_origin; // (level, +1 plus / -1 minus)

    // signed expression value for a rate assignment
    double evaluate(const Constraint& c, const std::vector<double>& rates) const;
    // smallest satisfied strict margin over all constraints; negative if violated
    double min_margin(const std::vector<double>& rates) const;
};

RateSystem build_rate_system(const SignConfiguration& cfg);

enum class FeasStatus { Feasible, Infeasible, InconclusiveFeasible };

struct FeasibilityVerdict {
    FeasStatus status = FeasStatus::Infeasible;
    std::vector<double> witness;       // normalized to max = 1 when feasible
    double witness_margin = 0.0;
    std::string certificate;           // explanation for infeasibility
    std::vector<int> no_minimum_vars;  // set when the no-smallest-rate argument closes it
    std::uint64_t cells_visited = 0;
};

// Exact decision by enumeration of weak orderings (ordered set partitions)
// of the rates; within an ordering every min() resolves and the cell is an
// open polyhedron decided exactly in rational arithmetic.  Systems larger
// than exact_var_cap fall back to randomized search and can only return
// Feasible/InconclusiveFeasible.
FeasibilityVerdict decide_feasibility(const RateSystem& sys, int exact_var_cap = 12,
                                      std::uint64_t rng_seed = 12345);

struct ThreeLevelEntry {
    SignConfiguration cfg;
    bool feasible;
    // mixed middle level inside the single-helper frame M_1 = P_3 = 1: the
    // configurations whose restrictions contain the no-smallest-rate pair as
    // a subsystem.  Extra helpers above or below break the subsystem and the
    // exact decision shows those configurations are feasible.
    bool ex1_substructure;
};

struct ThreeLevelReport {
    std::vector<ThreeLevelEntry> entries;
    bool infeasible_exactly_ex1; // infeasible <=> ex1 substructure present
};

ThreeLevelReport enumerate_three_level(int cfg_bound = 2);

} // namespace ectba

#endif
