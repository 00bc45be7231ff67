#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "cusplab/simplex.hpp"
#include "oracles.hpp"

using namespace cusplab;
using oracle::make_flow;

static LinearFunctional psi_half() { return LinearFunctional(QVec{Rat(1, 2), Rat(-1, 2)}); }

TEST_CASE("simplex: small known problems") {
    SUBCASE("bounded") {
        LPProblem p;
        p.nvars = 2;
        p.obj = {Rat(-1), Rat(-1)};
        p.rows.push_back({{Rat(1), Rat(1)}, -1, Rat(1)});
        p.nonneg = {true, true};
        auto s = solve_lp(p);
        REQUIRE(s.status == LPStatus::optimal);
        CHECK(s.value == Rat(-1));
        CHECK(s.x[0] + s.x[1] == Rat(1));
    }
    SUBCASE("unbounded") {
        LPProblem p;
        p.nvars = 1;
        p.obj = {Rat(-1)};
        p.nonneg = {true};
        CHECK(solve_lp(p).status == LPStatus::unbounded);
    }
    SUBCASE("infeasible") {
        LPProblem p;
        p.nvars = 1;
        p.obj = {Rat(0)};
        p.rows.push_back({{Rat(1)}, -1, Rat(-1)});
        p.nonneg = {true};
        CHECK(solve_lp(p).status == LPStatus::infeasible);
    }
    SUBCASE("equality with free variable") {
        LPProblem p;
        p.nvars = 1;
        p.obj = {Rat(1)};
        p.rows.push_back({{Rat(1)}, 0, Rat(5)});
        p.nonneg = {false};
        auto s = solve_lp(p);
        REQUIRE(s.status == LPStatus::optimal);
        CHECK(s.value == Rat(5));
        CHECK(s.x[0] == Rat(5));
    }
    SUBCASE("epigraph minimax with a free variable") {
        // min t s.t. t >= 1 - c, t >= c  ->  1/2 at c = 1/2
        LPProblem p;
        p.nvars = 2;  // (t, c)
        p.obj = {Rat(1), Rat(0)};
        p.rows.push_back({{Rat(1), Rat(1)}, 1, Rat(1)});
        p.rows.push_back({{Rat(1), Rat(-1)}, 1, Rat(0)});
        p.nonneg = {false, false};
        auto s = solve_lp(p);
        REQUIRE(s.status == LPStatus::optimal);
        CHECK(s.value == Rat(1, 2));
        CHECK(s.x[1] == Rat(1, 2));
    }
    SUBCASE("Beale degeneracy terminates under Bland") {
        LPProblem p;
        p.nvars = 4;
        p.obj = {Rat(-3, 4), Rat(150), Rat(-1, 50), Rat(6)};
        p.rows.push_back({{Rat(1, 4), Rat(-60), Rat(-1, 25), Rat(9)}, -1, Rat(0)});
        p.rows.push_back({{Rat(1, 2), Rat(-90), Rat(-1, 50), Rat(3)}, -1, Rat(0)});
        p.rows.push_back({{Rat(0), Rat(0), Rat(1), Rat(0)}, -1, Rat(1)});
        p.nonneg = {true, true, true, true};
        auto s = solve_lp(p);
        REQUIRE(s.status == LPStatus::optimal);
        CHECK(s.value == Rat(-1, 20));
    }
    SUBCASE("redundant equalities stay consistent") {
        LPProblem p;
        p.nvars = 2;
        p.obj = {Rat(1), Rat(2)};
        p.rows.push_back({{Rat(1), Rat(1)}, 0, Rat(2)});
        p.rows.push_back({{Rat(2), Rat(2)}, 0, Rat(4)});  // same hyperplane
        p.nonneg = {true, true};
        auto s = solve_lp(p);
        REQUIRE(s.status == LPStatus::optimal);
        CHECK(s.value == Rat(2));  // all weight on the cheap variable
    }
}

TEST_CASE("bound_cusp reference values") {
    auto f2 = make_flow({"1/2", "-1/2"});
    CHECK(bound_cusp(f2, psi_half()) == Rat(1, 2));
    CHECK(bound_cusp(f2, LinearFunctional::zero(2)) == Rat(1));
    auto z3 = make_flow({"0", "0", "0"});
    CHECK(bound_cusp(z3, LinearFunctional(QVec{Rat(1), Rat(-2), Rat(1)})) == Rat(0));
}

TEST_CASE("bound_at_P reference values") {
    auto f2 = make_flow({"1/2", "-1/2"});
    CHECK(bound_at_P(f2, ParabolicSubgroup::borel(2), psi_half()) == Rat(1, 2));

    auto f3 = make_flow({"1/2", "1/2", "-1"});
    LinearFunctional arbitrary(QVec{Rat(7), Rat(-2), Rat(1)});
    CHECK(bound_at_P(f3, ParabolicSubgroup::full(3), arbitrary) == Rat(3));
    CHECK(bound_at_P(make_flow({"0", "0"}), ParabolicSubgroup::borel(2),
                     LinearFunctional::zero(2)) == Rat(0));
}

TEST_CASE("bound_cusp equals the direct row maximum") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        int d = 2 + trial % 3;
        auto flow = oracle::random_flow(rng, d, trial % 4 == 1);
        QVec raw(d);
        std::uniform_int_distribution<int> num(-3, 3);
        for (auto& q : raw) q = Rat(num(rng), 1 + trial % 2);
        LinearFunctional phi(raw);
        std::vector<ParabolicSubgroup> proper;
        for (const auto& P : enumerate_parabolics(d))
            if (!P.is_full()) proper.push_back(P);
        CHECK(bound_cusp(flow, phi) == oracle::brute_max_hphi(flow, phi, proper));
        for (const auto& P : proper)
            CHECK(bound_at_P(flow, P, phi) == oracle::brute_max_hphi(flow, phi, {P}));
    }
}

TEST_CASE("bound_weighted") {
    auto f2 = make_flow({"1/2", "-1/2"});
    auto B2 = ParabolicSubgroup::borel(2);
    auto cosets = weyl_double_cosets(f2, B2);
    REQUIRE(cosets.size() == 2);

    SUBCASE("all mass on the trivial full-group coset") {
        auto G = ParabolicSubgroup::full(2);
        auto oG = weyl_double_cosets(f2, G).at(0);
        MeasureVector mu{{{oG, Rat(1)}}};
        CHECK(bound_weighted(f2, LinearFunctional::zero(2), mu) == Rat(1));
    }
    SUBCASE("half mass on each Borel coset") {
        MeasureVector mu{{{cosets[0], Rat(1, 2)}, {cosets[1], Rat(1, 2)}}};
        CHECK(bound_weighted(f2, psi_half(), mu) == Rat(1, 2));
    }
    SUBCASE("empty measure is rejected") {
        MeasureVector mu;
        CHECK_THROWS_AS(bound_weighted(f2, psi_half(), mu), std::invalid_argument);
    }
    SUBCASE("negative and oversized masses are rejected") {
        MeasureVector neg{{{cosets[0], Rat(-1, 2)}, {cosets[1], Rat(3, 2)}}};
        CHECK_THROWS_AS(bound_weighted(f2, psi_half(), neg), std::invalid_argument);
        MeasureVector big{{{cosets[0], Rat(2)}}};
        CHECK_THROWS_AS(bound_weighted(f2, psi_half(), big), std::invalid_argument);
    }
    SUBCASE("point mass on the max row reproduces bound_cusp") {
        LinearFunctional phi0 = LinearFunctional::zero(2);
        // the identity Borel coset carries h = 1 = bound_cusp(phi=0)
        for (const auto& o : cosets)
            if (h_phi(f2, o, phi0) == Rat(1)) {
                MeasureVector mu{{{o, Rat(1)}}};
                CHECK(bound_weighted(f2, phi0, mu) == bound_cusp(f2, phi0));
            }
    }
    SUBCASE("residual mass is charged at the global maximum") {
        // half mass on the h=0 coset, half unassigned; global max of h is 1
        LinearFunctional phi0 = LinearFunctional::zero(2);
        for (const auto& o : cosets)
            if (h_phi(f2, o, phi0) == Rat(0)) {
                MeasureVector mu{{{o, Rat(1, 2)}}};
                CHECK(bound_weighted(f2, phi0, mu) == Rat(1, 2));
            }
    }
}

TEST_CASE("optimize_phi reference values") {
    auto f2 = make_flow({"1/2", "-1/2"});
    auto r2 = optimize_phi(f2, ParabolicScope::cusp());
    REQUIRE(r2.status == LPStatus::optimal);
    CHECK(r2.value == Rat(1, 2));
    CHECK(r2.phi.coeffs == QVec{Rat(1, 2), Rat(-1, 2)});

    auto f3 = make_flow({"1/2", "1/2", "-1"});
    auto r3 = optimize_phi(f3, ParabolicScope::cusp());
    REQUIRE(r3.status == LPStatus::optimal);
    CHECK(r3.value == Rat(2));

    auto z2 = make_flow({"0", "0"});
    auto rz = optimize_phi(z2, ParabolicScope::cusp());
    REQUIRE(rz.status == LPStatus::optimal);
    CHECK(rz.value == Rat(0));
}

TEST_CASE("optimize_phi is dominated by every bound_cusp and is scale/permutation equivariant") {
    std::mt19937 rng(2026);
    for (int trial = 0; trial < 6; ++trial) {
        int d = 2 + trial % 3;
        auto flow = oracle::random_flow(rng, d, trial % 3 == 2);
        auto opt = optimize_phi(flow, ParabolicScope::cusp());
        REQUIRE(opt.status == LPStatus::optimal);
        // achieved value: the optimizer really attains it
        CHECK(bound_cusp(flow, opt.phi) == opt.value);
        // dominated by arbitrary functionals
        std::uniform_int_distribution<int> num(-3, 3);
        for (int k = 0; k < 5; ++k) {
            QVec raw(d);
            for (auto& q : raw) q = Rat(num(rng));
            CHECK(opt.value <= bound_cusp(flow, LinearFunctional(raw)));
        }
        // homogeneity under alpha -> 3 alpha
        QVec scaled = flow.alpha;
        for (auto& q : scaled) q *= 3;
        auto opt3 = optimize_phi(DiagonalFlow(d, scaled), ParabolicScope::cusp());
        CHECK(opt3.value == Rat(3) * opt.value);
        // permutation invariance (reverse the exponents)
        QVec rev(flow.alpha.rbegin(), flow.alpha.rend());
        auto optr = optimize_phi(DiagonalFlow(d, rev), ParabolicScope::cusp());
        CHECK(optr.value == opt.value);
        CHECK(closed_form_hinf(DiagonalFlow(d, rev)) == closed_form_hinf(flow));
    }
}

TEST_CASE("optimize_phi agrees exactly with the closed forms") {
    std::mt19937 rng(424242);
    std::vector<DiagonalFlow> flows = {
        make_flow({"1/2", "-1/2"}),
        make_flow({"1/2", "1/2", "-1"}),
        make_flow({"1", "0", "-1"}),
        make_flow({"3", "1", "-1", "-3"}),
        make_flow({"1", "1", "-1", "-1"}),
    };
    for (int d = 2; d <= 4; ++d)
        for (int i = 0; i < 2; ++i) flows.push_back(oracle::random_flow(rng, d, i == 1));
    for (const auto& flow : flows) {
        auto opt = optimize_phi(flow, ParabolicScope::cusp());
        REQUIRE(opt.status == LPStatus::optimal);
        Rat hinf = closed_form_hinf(flow);
        CHECK(opt.value == hinf);
        auto pk = closed_form_hinf_Pk(flow, 1);
        CHECK(pk.value == hinf);
    }
}

TEST_CASE("grid-search oracle confirms the LP optimum") {
    std::vector<DiagonalFlow> flows = {
        make_flow({"1/2", "-1/2"}),
        make_flow({"1/2", "1/2", "-1"}),
        make_flow({"1", "0", "-1"}),
    };
    Rat tol(1, 1000000000);  // 1e-9
    for (const auto& flow : flows) {
        auto scope = scope_parabolics(ParabolicScope::cusp(), flow.d);
        Rat grid = oracle::grid_min_phi(flow, scope);
        auto opt = optimize_phi(flow, ParabolicScope::cusp());
        REQUIRE(opt.status == LPStatus::optimal);
        CHECK(opt.value <= grid);           // the grid can never beat the true min
        CHECK(grid - opt.value <= tol);     // and it comes within 1e-9
    }
}

TEST_CASE("closed_form_hinf reference values") {
    CHECK(closed_form_hinf(make_flow({"1/2", "-1/2"})) == Rat(1, 2));
    CHECK(closed_form_hinf(make_flow({"1/2", "1/2", "-1"})) == Rat(2));
    CHECK(closed_form_hinf(make_flow({"0", "0", "0"})) == Rat(0));
}

TEST_CASE("closed_form_hinf_Pk") {
    auto f3 = make_flow({"1/2", "1/2", "-1"});
    auto p1 = closed_form_hinf_Pk(f3, 1);
    CHECK(p1.value == Rat(2));
    CHECK(p1.m == 2);
    CHECK(p1.k_effective == 1);

    auto z3 = make_flow({"0", "0", "0"});
    auto pz = closed_form_hinf_Pk(z3, 1);
    CHECK(pz.value == Rat(0));
    CHECK(pz.m == 1);

    auto f4 = make_flow({"3", "1", "-1", "-3"});
    auto q2 = closed_form_hinf_Pk(f4, 2);
    CHECK(q2.value == Rat(14));
    CHECK(q2.m == 1);
    CHECK(q2.k_effective == 2);
    auto q3 = closed_form_hinf_Pk(f4, 3);  // symmetry k -> d-k
    CHECK(q3.k_effective == 1);
    CHECK(q3.value == Rat(16));
    CHECK(q3.value == closed_form_hinf(f4));

    CHECK_THROWS_AS(closed_form_hinf_Pk(f4, 0), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_hinf_Pk(f4, 4), std::invalid_argument);

    std::mt19937 rng(31415);
    for (int trial = 0; trial < 10; ++trial) {
        auto flow = oracle::random_flow(rng, 2 + trial % 4, trial % 3 == 0);
        CHECK(closed_form_hinf_Pk(flow, 1).value == closed_form_hinf(flow));
    }
}

TEST_CASE("closed_form_B_bound") {
    auto b2 = closed_form_B_bound(make_flow({"1/2", "-1/2"}));
    CHECK(b2.value == Rat(1, 2));
    CHECK(b2.sharp);

    auto b3 = closed_form_B_bound(make_flow({"1/2", "1/2", "-1"}));
    CHECK(b3.value == Rat(3, 2));
    CHECK(b3.sharp);  // exactly two distinct exponents

    auto bz = closed_form_B_bound(make_flow({"0", "0", "0"}));
    CHECK(bz.value == Rat(0));

    auto b4 = closed_form_B_bound(make_flow({"2", "0", "0", "-2"}));
    CHECK(b4.value == Rat(6));
    CHECK_FALSE(b4.sharp);  // three distinct values, one repeated

    auto b5 = closed_form_B_bound(make_flow({"3", "1", "-1", "-3"}));
    CHECK(b5.value == Rat(10));
    CHECK(b5.sharp);  // all multiplicities one
}

TEST_CASE("assemble_partition_labels") {
    SUBCASE("d=2 reference: the full group wins under phi = 0") {
        auto f2 = make_flow({"1/2", "-1/2"});
        auto labels = assemble_partition_labels(f2, LinearFunctional::zero(2));
        bool found = false;
        for (const auto& L : labels) {
            CHECK(is_subgroup(L.Q, L.P));
            CHECK(is_subgroup(L.Q, L.H));
            CHECK(is_subgroup(L.H, L.P));
            CHECK(L.value >= h_phi(f2, L.wQ, LinearFunctional::zero(2)));
            if (L.P.is_full() && L.Q.jumps == std::vector<int>{1}) {
                // both Borel cosets label up to the full group under phi = 0:
                // the identity coset ties at 1 and lex prefers no jumps, the
                // swapped coset strictly prefers the full group (1 > 0)
                found = true;
                CHECK(L.H.is_full());
                if (L.wQ.rep == std::vector<int>{0, 1}) CHECK(L.value == Rat(1));
            }
            if (L.P == L.Q) CHECK(L.H == L.P);
        }
        CHECK(found);
    }
    SUBCASE("zero flow: total tie resolves to the lex-smallest jump sequence") {
        auto z3 = make_flow({"0", "0", "0"});
        auto labels = assemble_partition_labels(z3, LinearFunctional::zero(3));
        for (const auto& L : labels) {
            CHECK(L.value == Rat(0));
            auto interval = parabolic_interval(L.Q, L.P);
            auto lexmin = interval.front().jumps;
            for (const auto& H : interval) lexmin = std::min(lexmin, H.jumps);
            CHECK(L.H.jumps == lexmin);
        }
    }
    SUBCASE("argmax matches brute enumeration of the interval") {
        std::mt19937 rng(137);
        for (int trial = 0; trial < 4; ++trial) {
            int d = 2 + trial % 3;
            auto flow = oracle::random_flow(rng, d, trial == 3);
            std::uniform_int_distribution<int> num(-2, 2);
            QVec raw(d);
            for (auto& q : raw) q = Rat(num(rng), 2);
            LinearFunctional phi(raw);
            for (const auto& L : assemble_partition_labels(flow, phi)) {
                Rat best;
                bool have = false;
                for (const auto& H : parabolic_interval(L.Q, L.P)) {
                    Rat v = h_phi(flow, coset_of(flow, H, L.wQ.rep), phi);
                    if (!have || v > best) best = v, have = true;
                }
                CHECK(L.value == best);
                CHECK(h_phi(flow, L.wH, phi) == best);
            }
        }
    }
    SUBCASE("deterministic output") {
        auto f3 = make_flow({"1", "0", "-1"});
        LinearFunctional phi(QVec{Rat(1, 3), Rat(0), Rat(-1, 3)});
        auto a = assemble_partition_labels(f3, phi);
        auto b = assemble_partition_labels(f3, phi);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].P == b[i].P);
            CHECK(a[i].Q == b[i].Q);
            CHECK(a[i].wQ == b[i].wQ);
            CHECK(a[i].H == b[i].H);
            CHECK(a[i].wH == b[i].wH);
            CHECK(a[i].value == b[i].value);
        }
    }
}

TEST_CASE("bound_rows is deterministic and internally consistent") {
    auto f3 = make_flow({"1/2", "1/2", "-1"});
    LinearFunctional phi(QVec{Rat(1), Rat(0), Rat(-1)});
    auto rows = bound_rows(f3, phi, ParabolicScope::all());
    CHECK(!rows.empty());
    Rat maxProper;
    bool have = false;
    for (const auto& r : rows) {
        CHECK(r.hphi == r.h - phi.apply(r.pi));
        CHECK(r.h == entropy(f3, r.o));
        CHECK(r.pi == project(f3, r.o));
        if (!r.o.P.is_full()) {
            if (!have || r.hphi > maxProper) maxProper = r.hphi, have = true;
        }
    }
    CHECK(maxProper == bound_cusp(f3, phi));
}
