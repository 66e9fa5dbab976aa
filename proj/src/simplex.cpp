#include "delaysched/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ds {

int LpProblem::add_variable(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<int>(names_.size()) - 1;
}

void LpProblem::check_terms(const std::vector<LinTerm>& terms) const {
    for (const auto& t : terms) {
        if (t.var < 0 || t.var >= num_variables())
            throw std::invalid_argument("constraint references undeclared variable");
        if (!std::isfinite(t.coef)) throw std::invalid_argument("non-finite coefficient");
    }
}

void LpProblem::add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense,
                               double rhs) {
    check_terms(terms);
    if (!std::isfinite(rhs)) throw std::invalid_argument("non-finite rhs");
    rows_.push_back({std::move(name), std::move(terms), sense, rhs});
}

void LpProblem::set_objective(std::vector<LinTerm> terms) {
    check_terms(terms);
    objective_ = std::move(terms);
}

namespace {

// Dense row-major tableau. Column layout: structural | slack/surplus |
// artificial | rhs. The basis holds one column index per row.
class Tableau {
public:
    explicit Tableau(const LpProblem& p) : prob_(p) {
        n_ = p.num_variables();
        rows_ = static_cast<int>(p.constraints().size());
        int slack = 0, art = 0;
        for (const auto& c : p.constraints()) {
            switch (effective_sense(c.sense, c.rhs < 0)) {
                case Sense::LE: ++slack; break;
                case Sense::GE: ++slack; ++art; break;
                case Sense::EQ: ++art; break;
            }
        }
        slack_base_ = n_;
        art_base_ = n_ + slack;
        cols_ = n_ + slack + art + 1;
        a_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
        basis_.assign(rows_, -1);

        int next_slack = slack_base_, next_art = art_base_;
        for (int r = 0; r < rows_; ++r) {
            const auto& c = p.constraints()[r];
            bool flip = c.rhs < 0;
            double sign = flip ? -1.0 : 1.0;
            for (const auto& t : c.terms) at(r, t.var) += sign * t.coef;
            rhs(r) = sign * c.rhs;
            switch (effective_sense(c.sense, flip)) {
                case Sense::LE:
                    at(r, next_slack) = 1.0;
                    basis_[r] = next_slack++;
                    break;
                case Sense::GE:
                    at(r, next_slack++) = -1.0;
                    at(r, next_art) = 1.0;
                    basis_[r] = next_art++;
                    break;
                case Sense::EQ:
                    at(r, next_art) = 1.0;
                    basis_[r] = next_art++;
                    break;
            }
        }
        pivot_budget_ = 50000 + 400LL * (rows_ + cols_);
    }

    LpSolution run() {
        LpSolution sol;
        if (art_base_ < cols_ - 1) {  // phase 1: minimize the artificial sum
            std::vector<double> z(cols_, 0.0);
            for (int r = 0; r < rows_; ++r)
                if (basis_[r] >= art_base_)
                    for (int j = 0; j < cols_; ++j) z[j] += a_[idx(r, j)];
            for (int j = art_base_; j < cols_ - 1; ++j) z[j] -= 1.0;
            if (!iterate(z, /*allow_artificials=*/true))
                throw std::logic_error("phase 1 cannot be unbounded");
            if (z[cols_ - 1] > kLpEps) {
                sol.status = LpStatus::Infeasible;
                sol.pivots = pivots_;
                return sol;
            }
            for (int r = 0; r < rows_; ++r) {
                if (basis_[r] < art_base_) continue;
                for (int j = 0; j < art_base_; ++j)
                    if (std::fabs(a_[idx(r, j)]) > kLpEps) {
                        pivot(r, j, z);
                        break;
                    }
                // A row with no structural entry is redundant; its artificial
                // stays basic at ~0.
            }
        }

        // Phase 2 objective row from the current basis.
        std::vector<double> cost(cols_ - 1, 0.0);
        for (const auto& t : prob_.objective()) cost[t.var] += t.coef;
        std::vector<double> z(cols_, 0.0);
        for (int r = 0; r < rows_; ++r) {
            double cb = cost[basis_[r]];
            if (cb == 0.0) continue;
            for (int j = 0; j < cols_; ++j) z[j] += cb * a_[idx(r, j)];
        }
        for (int j = 0; j < cols_ - 1; ++j) z[j] -= cost[j];
        if (!iterate(z, /*allow_artificials=*/false)) {
            sol.status = LpStatus::Unbounded;
            sol.pivots = pivots_;
            return sol;
        }

        sol.status = LpStatus::Optimal;
        sol.values.assign(n_, 0.0);
        for (int r = 0; r < rows_; ++r)
            if (basis_[r] < n_) sol.values[basis_[r]] = std::max(0.0, rhs(r));
        sol.objective = 0.0;
        for (const auto& t : prob_.objective()) sol.objective += t.coef * sol.values[t.var];
        sol.pivots = pivots_;
        return sol;
    }

private:
    static Sense effective_sense(Sense s, bool flip) {
        if (!flip) return s;
        if (s == Sense::LE) return Sense::GE;
        if (s == Sense::GE) return Sense::LE;
        return Sense::EQ;
    }

    std::size_t idx(int r, int j) const { return static_cast<std::size_t>(r) * cols_ + j; }
    double& at(int r, int j) { return a_[idx(r, j)]; }
    double& rhs(int r) { return a_[idx(r, cols_ - 1)]; }

    // Bland's rule: entering = lowest-index column with z_j - c_j > eps,
    // leaving = min ratio, ties by lowest basis column. Artificial columns
    // never re-enter once phase 1 is done. Returns false when unbounded.
    bool iterate(std::vector<double>& z, bool allow_artificials) {
        int scan = allow_artificials ? cols_ - 1 : art_base_;
        for (;;) {
            int enter = -1;
            for (int j = 0; j < scan; ++j)
                if (z[j] > kLpEps) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            double best_ratio = 0.0;
            for (int r = 0; r < rows_; ++r) {
                double arj = a_[idx(r, enter)];
                if (arj > kLpEps) {
                    double ratio = rhs(r) / arj;
                    if (leave < 0 || ratio < best_ratio - 1e-12 ||
                        (std::fabs(ratio - best_ratio) <= 1e-12 && basis_[r] < basis_[leave])) {
                        leave = r;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter, z);
        }
    }

    void pivot(int r, int j, std::vector<double>& z) {
        if (++pivots_ > pivot_budget_)
            throw std::runtime_error("simplex stalled: pivot budget exceeded");
        double piv = a_[idx(r, j)];
        for (int k = 0; k < cols_; ++k) a_[idx(r, k)] /= piv;
        a_[idx(r, j)] = 1.0;
        for (int r2 = 0; r2 < rows_; ++r2) {
            if (r2 == r) continue;
            double f = a_[idx(r2, j)];
            if (f == 0.0) continue;
            for (int k = 0; k < cols_; ++k) a_[idx(r2, k)] -= f * a_[idx(r, k)];
            a_[idx(r2, j)] = 0.0;
        }
        double fz = z[j];
        if (fz != 0.0) {
            for (int k = 0; k < cols_; ++k) z[k] -= fz * a_[idx(r, k)];
            z[j] = 0.0;
        }
        basis_[r] = j;
    }

    const LpProblem& prob_;
    int n_{0}, rows_{0}, cols_{0}, slack_base_{0}, art_base_{0};
    std::vector<double> a_;
    std::vector<int> basis_;
    long long pivots_{0}, pivot_budget_{0};
};

}  // namespace

LpSolution solve(const LpProblem& problem) { return Tableau(problem).run(); }

LpSolution find_vertex_solution(const LpProblem& problem, double value_cap) {
    LpSolution sol = solve(problem);
    if (sol.status != LpStatus::Optimal) return sol;
    if (sol.objective > value_cap + kLpEps) {
        LpSolution out;
        out.status = LpStatus::Infeasible;
        out.pivots = sol.pivots;
        return out;
    }
    return sol;  // simplex solutions are basic, hence vertices
}

namespace {

void append_terms(std::ostringstream& os, const std::vector<LinTerm>& terms,
                  const LpProblem& p) {
    bool first = true;
    for (const auto& t : terms) {
        if (t.coef == 0.0) continue;
        if (t.coef < 0)
            os << (first ? "- " : " - ");
        else if (!first)
            os << " + ";
        double mag = std::fabs(t.coef);
        if (mag != 1.0) os << mag << " ";
        os << p.variable_name(t.var);
        first = false;
    }
    if (first) os << "0";
}

}  // namespace

std::string export_lp_text(const LpProblem& p) {
    std::ostringstream os;
    os.precision(12);
    os << "Minimize\n obj: ";
    append_terms(os, p.objective(), p);
    os << "\nSubject To\n";
    for (const auto& c : p.constraints()) {
        os << " " << c.name << ": ";
        append_terms(os, c.terms, p);
        switch (c.sense) {
            case Sense::LE: os << " <= "; break;
            case Sense::GE: os << " >= "; break;
            case Sense::EQ: os << " = "; break;
        }
        os << c.rhs << "\n";
    }
    os << "Bounds\n";
    for (int v = 0; v < p.num_variables(); ++v) os << " 0 <= " << p.variable_name(v) << "\n";
    os << "End\n";
    return os.str();
}

}  // namespace ds
