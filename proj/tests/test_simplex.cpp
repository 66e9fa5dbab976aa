#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "delaysched/oracle.hpp"
#include "delaysched/rational.hpp"
#include "delaysched/simplex.hpp"

using namespace ds;

TEST_CASE("one-variable problems") {
    LpProblem p;
    int x = p.add_variable("x");
    p.add_constraint("lo", {{x, 1.0}}, Sense::GE, 3.0);
    p.set_objective({{x, 1.0}});
    auto sol = solve(p);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(3.0));
    CHECK(sol.values[x] == doctest::Approx(3.0));
}

TEST_CASE("max of lower bounds through a shared makespan variable") {
    LpProblem p;
    int c = p.add_variable("C");
    int ca = p.add_variable("C_a");
    int cb = p.add_variable("C_b");
    p.add_constraint("m_a", {{c, 1.0}, {ca, -1.0}}, Sense::GE, 0.0);
    p.add_constraint("lo_a", {{ca, 1.0}}, Sense::GE, 1.0);
    p.add_constraint("m_b", {{c, 1.0}, {cb, -1.0}}, Sense::GE, 0.0);
    p.add_constraint("lo_b", {{cb, 1.0}}, Sense::GE, 2.0);
    p.set_objective({{c, 1.0}});
    auto sol = solve(p);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(2.0));
}

TEST_CASE("statuses: infeasible and unbounded") {
    LpProblem p;
    int x = p.add_variable("x");
    p.add_constraint("a", {{x, 1.0}}, Sense::LE, 1.0);
    p.add_constraint("b", {{x, 1.0}}, Sense::GE, 2.0);
    p.set_objective({{x, 1.0}});
    CHECK(solve(p).status == LpStatus::Infeasible);

    LpProblem q;
    int y = q.add_variable("y");
    q.add_constraint("a", {{y, 1.0}}, Sense::GE, 1.0);
    q.set_objective({{y, -1.0}});  // minimize -y, y unbounded above
    CHECK(solve(q).status == LpStatus::Unbounded);
}

TEST_CASE("determinism: identical pivot counts and values") {
    LpProblem p;
    int x = p.add_variable("x");
    int y = p.add_variable("y");
    p.add_constraint("c1", {{x, 2.0}, {y, 1.0}}, Sense::GE, 4.0);
    p.add_constraint("c2", {{x, 1.0}, {y, 3.0}}, Sense::GE, 6.0);
    p.set_objective({{x, 1.0}, {y, 1.0}});
    auto a = solve(p);
    auto b = solve(p);
    CHECK(a.pivots == b.pivots);
    CHECK(a.values == b.values);
}

TEST_CASE("scaling rows never flips feasibility") {
    LpProblem p;
    int x = p.add_variable("x");
    int y = p.add_variable("y");
    p.add_constraint("c1", {{x, 1.0}, {y, 1.0}}, Sense::GE, 2.0);
    p.add_constraint("c2", {{x, 1.0}}, Sense::LE, 5.0);
    p.set_objective({{x, 1.0}, {y, 2.0}});
    LpProblem q;
    q.add_variable("x");
    q.add_variable("y");
    q.add_constraint("c1", {{0, 100.0}, {1, 100.0}}, Sense::GE, 200.0);
    q.add_constraint("c2", {{0, 0.01}}, Sense::LE, 0.05);
    q.set_objective({{0, 1.0}, {1, 2.0}});
    CHECK(solve(p).status == solve(q).status);
    CHECK(solve(p).objective == doctest::Approx(solve(q).objective));
}

// Exact oracle: enumerate candidate vertices by solving every square
// subsystem of tight constraints with rational Gaussian elimination.
namespace {

struct ExactRow {
    std::vector<Rat> a;
    Rat b;
    Sense sense;
};

struct ExactLp {
    int n;
    std::vector<ExactRow> rows;  // includes x_i >= 0 internally
    std::vector<Rat> obj;
};

bool solve_square(const std::vector<std::vector<Rat>>& m, const std::vector<Rat>& rhs,
                  std::vector<Rat>& out) {
    int n = static_cast<int>(rhs.size());
    std::vector<std::vector<Rat>> a = m;
    std::vector<Rat> b = rhs;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != Rat(0)) {
                piv = r;
                break;
            }
        if (piv < 0) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == Rat(0)) continue;
            Rat f = a[r][col] / a[col][col];
            for (int k = col; k < n; ++k) a[r][k] = a[r][k] - f * a[col][k];
            b[r] = b[r] - f * b[col];
        }
    }
    out.assign(n, Rat(0));
    for (int i = 0; i < n; ++i) out[i] = b[i] / a[i][i];
    return true;
}

// Minimum objective over all vertices, or nullopt when infeasible.
std::optional<Rat> enumerate_optimum(const ExactLp& lp) {
    std::vector<ExactRow> all = lp.rows;
    for (int i = 0; i < lp.n; ++i) {
        ExactRow r;
        r.a.assign(lp.n, Rat(0));
        r.a[i] = Rat(1);
        r.b = Rat(0);
        r.sense = Sense::GE;
        all.push_back(r);
    }
    int total = static_cast<int>(all.size());
    std::vector<int> pick(lp.n);
    std::optional<Rat> best;
    std::function<void(int, int)> rec = [&](int idx, int from) {
        if (idx == lp.n) {
            std::vector<std::vector<Rat>> m;
            std::vector<Rat> rhs;
            for (int i : pick) {
                m.push_back(all[i].a);
                rhs.push_back(all[i].b);
            }
            std::vector<Rat> x;
            if (!solve_square(m, rhs, x)) return;
            for (const auto& row : all) {
                Rat lhs(0);
                for (int k = 0; k < lp.n; ++k) lhs += row.a[k] * x[k];
                if (row.sense == Sense::GE && lhs < row.b) return;
                if (row.sense == Sense::LE && lhs > row.b) return;
                if (row.sense == Sense::EQ && lhs != row.b) return;
            }
            Rat val(0);
            for (int k = 0; k < lp.n; ++k) val += lp.obj[k] * x[k];
            if (!best || val < *best) best = val;
        } else {
            for (int i = from; i < total; ++i) {
                pick[idx] = i;
                rec(idx + 1, i + 1);
            }
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

TEST_CASE("random small LPs match exact vertex enumeration") {
    Rng rng(2024);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng.range(0, 2));
        int rows = 2 + static_cast<int>(rng.range(0, 3));
        ExactLp exact;
        exact.n = n;
        LpProblem p;
        for (int v = 0; v < n; ++v) p.add_variable("x" + std::to_string(v));
        for (int r = 0; r < rows; ++r) {
            ExactRow row;
            row.a.assign(n, Rat(0));
            std::vector<LinTerm> terms;
            for (int v = 0; v < n; ++v) {
                long long c = rng.range(-3, 3);
                row.a[v] = Rat(c);
                if (c != 0) terms.push_back({v, static_cast<double>(c)});
            }
            row.b = Rat(rng.range(-4, 8));
            row.sense = rng.coin(0.5) ? Sense::GE : Sense::LE;
            if (rng.coin(0.1)) row.sense = Sense::EQ;
            exact.rows.push_back(row);
            p.add_constraint("c" + std::to_string(r), terms, row.sense, row.b.to_double());
        }
        exact.obj.assign(n, Rat(0));
        std::vector<LinTerm> obj;
        for (int v = 0; v < n; ++v) {
            long long c = rng.range(0, 4);  // nonneg objective: never unbounded
            exact.obj[v] = Rat(c);
            if (c != 0) obj.push_back({v, static_cast<double>(c)});
        }
        p.set_objective(obj);

        auto expected = enumerate_optimum(exact);
        auto got = solve(p);
        CAPTURE(trial);
        if (expected) {
            REQUIRE(got.status == LpStatus::Optimal);
            CHECK(got.objective == doctest::Approx(expected->to_double()).epsilon(1e-6));
            ++solved;
        } else {
            CHECK(got.status == LpStatus::Infeasible);
        }
    }
    CHECK(solved >= 10);
}

TEST_CASE("vertex solutions") {
    SUBCASE("one item, one machine: the 0/1 vertex") {
        LpProblem p;
        int x = p.add_variable("assign");
        p.add_constraint("once", {{x, 1.0}}, Sense::EQ, 1.0);
        p.set_objective({{x, 1.0}});
        auto sol = find_vertex_solution(p, 10.0);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.values[x] == doctest::Approx(1.0));
    }
    SUBCASE("value cap filters out expensive polytopes") {
        LpProblem p;
        int x = p.add_variable("x");
        p.add_constraint("lo", {{x, 1.0}}, Sense::GE, 5.0);
        p.set_objective({{x, 1.0}});
        CHECK(find_vertex_solution(p, 4.0).status == LpStatus::Infeasible);
        CHECK(find_vertex_solution(p, 6.0).status == LpStatus::Optimal);
    }
    SUBCASE("basic solutions have at most #constraints nonzeros") {
        LpProblem p;
        std::vector<LinTerm> sum;
        for (int v = 0; v < 6; ++v) sum.push_back({p.add_variable("x" + std::to_string(v)), 1.0});
        p.add_constraint("total", sum, Sense::GE, 3.0);
        p.add_constraint("first", {{0, 1.0}, {1, 1.0}}, Sense::LE, 1.0);
        p.set_objective(sum);
        auto sol = find_vertex_solution(p, 100.0);
        REQUIRE(sol.status == LpStatus::Optimal);
        int nonzeros = 0;
        for (double v : sol.values) nonzeros += v > 1e-9;
        CHECK(nonzeros <= 2);
    }
    SUBCASE("bipartite fractional assignment: vertex support is a forest") {
        // items 0..3 on machines 0..2 with equal loads; any vertex of the
        // assignment polytope has acyclic support.
        Rng rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            int items = 3 + static_cast<int>(rng.range(0, 2));
            int machines = 2 + static_cast<int>(rng.range(0, 1));
            LpProblem p;
            std::vector<std::vector<int>> var(items, std::vector<int>(machines));
            for (int it = 0; it < items; ++it)
                for (int mc = 0; mc < machines; ++mc)
                    var[it][mc] = p.add_variable("a" + std::to_string(it) + "_" +
                                                 std::to_string(mc));
            std::vector<LinTerm> obj;
            for (int it = 0; it < items; ++it) {
                std::vector<LinTerm> once;
                for (int mc = 0; mc < machines; ++mc) once.push_back({var[it][mc], 1.0});
                p.add_constraint("once" + std::to_string(it), once, Sense::EQ, 1.0);
            }
            for (int mc = 0; mc < machines; ++mc) {
                std::vector<LinTerm> load;
                for (int it = 0; it < items; ++it) {
                    double w = 1.0 + static_cast<double>(rng.range(0, 3));
                    load.push_back({var[it][mc], w});
                    obj.push_back({var[it][mc], w});
                }
                p.add_constraint("load" + std::to_string(mc), load, Sense::LE,
                                 4.0 + static_cast<double>(rng.range(0, 6)));
            }
            p.set_objective(obj);
            auto sol = solve(p);
            if (sol.status != LpStatus::Optimal) continue;
            // Cycle check on the fractional support graph.
            std::vector<std::pair<int, int>> edges;
            for (int it = 0; it < items; ++it)
                for (int mc = 0; mc < machines; ++mc)
                    if (sol.values[var[it][mc]] > 1e-9) edges.emplace_back(it, items + mc);
            std::vector<int> parent(items + machines);
            for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
            std::function<int(int)> find = [&](int v) {
                while (parent[v] != v) v = parent[v] = parent[parent[v]];
                return v;
            };
            bool forest = true;
            for (auto [u, v] : edges) {
                int ru = find(u), rv = find(v);
                if (ru == rv) forest = false;
                parent[ru] = rv;
            }
            CAPTURE(trial);
            CHECK(forest);
        }
    }
}

TEST_CASE("lp text export is stable and complete") {
    LpProblem p;
    int x = p.add_variable("x");
    p.add_constraint("lo", {{x, 1.0}}, Sense::GE, 3.0);
    p.set_objective({{x, 1.0}});
    std::string text = export_lp_text(p);
    CHECK(text ==
          "Minimize\n obj: x\nSubject To\n lo: x >= 3\nBounds\n 0 <= x\nEnd\n");
    CHECK(export_lp_text(p) == text);
}
