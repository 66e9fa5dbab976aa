#pragma once

#include <string>
#include <vector>

namespace ds {

enum class Sense { LE, GE, EQ };

struct LinTerm {
    int var;
    double coef;
};

struct LpConstraint {
    std::string name;
    std::vector<LinTerm> terms;
    Sense sense;
    double rhs;
};

/// Sparse LP over named nonnegative variables, minimization objective.
class LpProblem {
public:
    int add_variable(std::string name);
    void add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense, double rhs);
    void set_objective(std::vector<LinTerm> terms);

    int num_variables() const { return static_cast<int>(names_.size()); }
    const std::string& variable_name(int v) const { return names_.at(v); }
    const std::vector<LpConstraint>& constraints() const { return rows_; }
    const std::vector<LinTerm>& objective() const { return objective_; }

private:
    void check_terms(const std::vector<LinTerm>& terms) const;
    std::vector<std::string> names_;
    std::vector<LpConstraint> rows_;
    std::vector<LinTerm> objective_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status{LpStatus::Infeasible};
    std::vector<double> values;  // per variable, when Optimal
    double objective{0.0};
    long long pivots{0};
};

inline constexpr double kLpEps = 1e-7;  // feasibility tolerance

/// Two-phase dense-tableau simplex with Bland's anti-cycling rule.
/// Deterministic: a fixed problem always walks the same pivot sequence.
/// Throws std::runtime_error if the pivot budget is exhausted.
LpSolution solve(const LpProblem& problem);

/// Basic (vertex) feasible solution with objective <= value_cap, found by
/// running the same simplex; the returned point is always a vertex of the
/// feasible polytope. Status Infeasible when even the minimum exceeds the cap.
LpSolution find_vertex_solution(const LpProblem& problem, double value_cap);

/// Conventional LP text format (Minimize / Subject To / Bounds / End),
/// bit-stable for a fixed problem.
std::string export_lp_text(const LpProblem& problem);

}  // namespace ds
