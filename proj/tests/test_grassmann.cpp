#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cusplab/grassmann.hpp"
#include "cusplab/real.hpp"
#include "cusplab/subspace.hpp"
#include "oracles.hpp"

using namespace cusplab;

namespace {

QMat qmat(const std::vector<std::vector<std::string>>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows[0].size());
    QMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = *rat_from_string(rows[i][j]);
    return m;
}

ZMat zmat(const std::vector<std::vector<long>>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows[0].size());
    ZMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    return m;
}

ZVec zvec(const std::vector<long>& v) {
    ZVec z;
    for (long x : v) z.emplace_back(x);
    return z;
}

QVec qvec(const std::vector<std::string>& v) {
    QVec q;
    for (const auto& s : v) q.push_back(*rat_from_string(s));
    return q;
}

/// Independent reference for alpha_min_covol: enumerate every subspace
/// spanned by integer coefficient columns in a box, deduplicate by canonical
/// form, and take the exact minimum covolume.  Valid whenever some minimizer
/// has generators inside the box.
Rat brute_alpha_sq(const Lattice& x, int l, int box) {
    std::set<RationalSubspace> seen;
    const int cells = 2 * box + 1;
    long total = 1;
    for (int i = 0; i < x.d * l; ++i) total *= cells;
    ZMat G(x.d, l);
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int i = 0; i < x.d; ++i)
            for (int j = 0; j < l; ++j) {
                G(i, j) = static_cast<long>(c % cells) - box;
                c /= cells;
            }
        RationalSubspace V(x.d, G);
        if (V.l == l) seen.insert(std::move(V));
    }
    REQUIRE(!seen.empty());
    bool have = false;
    Rat best(0);
    for (const auto& V : seen) {
        const Rat cv = covol_sq_exact(x, V);
        if (!have || cv < best) {
            best = cv;
            have = true;
        }
    }
    return best;
}

ZMat random_generators(std::mt19937& rng, int d, int l) {
    std::uniform_int_distribution<int> entry(-3, 3);
    ZMat G(d, l);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < l; ++j) G(i, j) = entry(rng);
    return G;
}

}  // namespace

TEST_CASE("rational subspaces: construction and canonical form") {
    // canonical generators are independent of the presented spanning set
    const auto V1 = RationalSubspace(3, zmat({{2}, {4}, {0}}));
    CHECK(V1.l == 1);
    CHECK(V1.coeffs == zmat({{1}, {2}, {0}}));  // saturated and sign-fixed

    const auto V2 = RationalSubspace(3, zmat({{-3}, {-6}, {0}}));
    CHECK(V1 == V2);

    // rank collapses: three generators spanning a plane
    const auto P = RationalSubspace(3, zmat({{1, 1, 0}, {0, 1, 1}, {0, 0, 0}}));
    CHECK(P.l == 2);
    CHECK(P == RationalSubspace::coordinate(3, {0, 1}));

    // full-rank integer generators saturate to the whole space
    const auto F = RationalSubspace(2, zmat({{2, 0}, {1, 3}}));
    CHECK(F.l == 2);
    CHECK(F.coeffs == ZMat::identity(2));

    // zero generators give the trivial subspace
    const auto Z = RationalSubspace(3, ZMat(3, 1));
    CHECK(Z.l == 0);

    // canonical form is invariant under unimodular recombination
    std::mt19937 rng(7);
    const auto base = zmat({{1, 0}, {2, 1}, {0, 3}, {1, 1}});
    const auto V = RationalSubspace(4, base);
    for (int trial = 0; trial < 20; ++trial) {
        const ZMat mixed = mat_mul(base, oracle::random_unimodular(rng, 2, 8));
        CHECK(RationalSubspace(4, mixed) == V);
    }

    CHECK(RationalSubspace::coordinate(3, {2}).coeffs == zmat({{0}, {0}, {1}}));
    CHECK_THROWS_AS(RationalSubspace::coordinate(3, {3}), std::invalid_argument);
    CHECK_THROWS_AS(RationalSubspace(2, ZMat(3, 1)), std::invalid_argument);

    // the deterministic total order separates distinct subspaces
    CHECK(RationalSubspace::coordinate(3, {0}) != RationalSubspace::coordinate(3, {1}));
    const auto a = RationalSubspace::coordinate(3, {0});
    const auto b = RationalSubspace::coordinate(3, {1});
    CHECK((a < b || b < a));
    CHECK_FALSE((a < b && b < a));
}

TEST_CASE("covolume: exact and snapshot") {
    const Lattice z3 = Lattice::standard(3);
    for (int l = 1; l <= 2; ++l)
        CHECK(covol_sq_exact(z3, RationalSubspace::coordinate(3, {l - 1})) == Rat(1));

    const Lattice x(qmat({{"1/4", "0", "0"}, {"0", "1", "0"}, {"0", "0", "4"}}));
    CHECK(covol_sq_exact(x, RationalSubspace::coordinate(3, {0})) == Rat(1, 16));
    CHECK(covol_sq_exact(x, RationalSubspace::coordinate(3, {0, 1})) == Rat(1, 16));
    CHECK(covol_sq_exact(x, RationalSubspace::coordinate(3, {0, 1, 2})) == Rat(1));
    CHECK(covol_sq_exact(x, RationalSubspace::coordinate(3, {2})) == Rat(16));
    // trivial subspace has covolume 1 by convention
    CHECK(covol_sq_exact(x, RationalSubspace(3, ZMat(3, 1))) == Rat(1));

    // a diagonal flow scales each coordinate subspace by e^{t sum alpha_J}
    const auto flow = oracle::make_flow({"1/2", "1/2", "-1"});
    const auto snap = LatticeSnapshot::make(z3, flow, Real(2));
    CHECK(approx_equal(covol(snap, RationalSubspace::coordinate(3, {0})), real_exp(Real(1)),
                       Real(1e-30)));
    CHECK(approx_equal(covol(snap, RationalSubspace::coordinate(3, {2})), real_exp(Real(-2)),
                       Real(1e-30)));
    CHECK(approx_equal(covol(snap, RationalSubspace::coordinate(3, {0, 2})),
                       real_exp(Real(-1)), Real(1e-30)));
    CHECK(approx_equal(covol(snap, RationalSubspace::coordinate(3, {0, 1, 2})), Real(1),
                       Real(1e-30)));

    // still snapshot agrees with the exact form
    const auto still = LatticeSnapshot::still(x);
    const auto V = RationalSubspace::coordinate(3, {0, 1});
    CHECK(approx_equal(covol(still, V), real_sqrt(to_real(Rat(1, 16))), Real(1e-30)));

    CHECK_THROWS_AS(covol_sq_exact(x, RationalSubspace::coordinate(2, {0})),
                    std::invalid_argument);
}

TEST_CASE("sum, intersection, submodularity") {
    const auto e0 = RationalSubspace::coordinate(3, {0});
    const auto e1 = RationalSubspace::coordinate(3, {1});
    CHECK(subspace_sum(e0, e1) == RationalSubspace::coordinate(3, {0, 1}));
    CHECK(subspace_intersection(e0, e1).l == 0);

    const auto p01 = RationalSubspace::coordinate(3, {0, 1});
    const auto p12 = RationalSubspace::coordinate(3, {1, 2});
    CHECK(subspace_intersection(p01, p12) == e1);
    CHECK(subspace_sum(p01, p12).l == 3);

    // a skew pair: span{(1,1,0),(0,0,1)} /\ span{(1,1,1),(0,1,0)} = span{(1,1,1)}
    const auto W1 = RationalSubspace(3, zmat({{1, 0}, {1, 0}, {0, 1}}));
    const auto W2 = RationalSubspace(3, zmat({{1, 0}, {1, 1}, {1, 0}}));
    CHECK(subspace_intersection(W1, W2) == RationalSubspace(3, zmat({{1}, {1}, {1}})));

    // covolume submodularity, exact, on random lattices and subspace pairs
    std::mt19937 rng(42);
    int checked = 0;
    while (checked < 60) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const Lattice x(qmat_from_z(oracle::random_unimodular(rng, d, 8)));
        const int lv = 1 + static_cast<int>(rng() % d);
        const int lw = 1 + static_cast<int>(rng() % d);
        const RationalSubspace V(d, random_generators(rng, d, lv));
        const RationalSubspace W(d, random_generators(rng, d, lw));
        if (V.l == 0 || W.l == 0) continue;
        const Rat lhs = covol_sq_exact(x, subspace_intersection(V, W)) *
                        covol_sq_exact(x, subspace_sum(V, W));
        const Rat rhs = covol_sq_exact(x, V) * covol_sq_exact(x, W);
        CHECK(lhs <= rhs);
        ++checked;
    }
}

TEST_CASE("plucker coordinates and decomposability") {
    CHECK(plucker(RationalSubspace::coordinate(3, {0})) == zvec({1, 0, 0}));
    CHECK(plucker(RationalSubspace::coordinate(3, {2})) == zvec({0, 0, 1}));
    CHECK(plucker(RationalSubspace(3, zmat({{1}, {0}, {1}}))) == zvec({1, 0, 1}));
    // combinations(4,2) in lexicographic order: 01,02,03,12,13,23
    CHECK(plucker(RationalSubspace::coordinate(4, {0, 1})) == zvec({1, 0, 0, 0, 0, 0}));
    CHECK(plucker(RationalSubspace::coordinate(4, {1, 3})) == zvec({0, 0, 0, 0, 1, 0}));
    // primitivity and sign normalization
    CHECK(plucker(RationalSubspace(3, zmat({{-2}, {-4}, {0}}))) == zvec({1, 2, 0}));
    // wedge of two explicit generators
    const auto V = RationalSubspace(3, zmat({{1, 0}, {0, 1}, {1, 1}}));
    CHECK(plucker(V) == zvec({1, 1, -1}));  // p01=1, p02=1, p12=-1

    // every subspace's coordinates pass the relations test
    std::mt19937 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int l = 1 + static_cast<int>(rng() % d);
        const RationalSubspace R(d, random_generators(rng, d, l));
        if (R.l == 0) continue;
        CHECK(plucker_relations_check(d, R.l, plucker(R)));
    }

    // the classic non-decomposable bivector e01 + e23 in dimension 4
    CHECK_FALSE(plucker_relations_check(4, 2, zvec({1, 0, 0, 0, 0, 1})));
    CHECK(plucker_relations_check(4, 2, zvec({1, 0, 0, 0, 0, 0})));
    CHECK_FALSE(plucker_relations_check(3, 1, zvec({0, 0, 0})));  // zero vector
    CHECK_FALSE(plucker_relations_check(3, 1, zvec({1, 0})));     // wrong length
    CHECK(plucker_relations_check(3, 3, zvec({5})));              // top degree

    // exterior lattice of the identity basis: identity wedges, subset weights
    const auto flow = oracle::make_flow({"1/2", "1/2", "-1"});
    const auto ext = exterior_lattice(qmat_from_z(ZMat::identity(3)), flow.alpha, Real(0), 2);
    CHECK(ext.basis == qmat_from_z(ZMat::identity(3)));
    CHECK(ext.weights == qvec({"1", "-1/2", "-1/2"}));
}

TEST_CASE("minimal covolume: frozen examples") {
    // standard lattices: every alpha_l equals 1, top level exactly
    for (int d = 2; d <= 4; ++d) {
        const Lattice z = Lattice::standard(d);
        for (int l = 1; l <= d; ++l) {
            const auto r = alpha_min_covol(z, l);
            REQUIRE(r.value_sq_exact.has_value());
            CHECK(*r.value_sq_exact == Rat(1));
            CHECK(r.witness.l == l);
            CHECK(covol_sq_exact(z, r.witness) == Rat(1));
        }
    }
    // the tie at norm 1 resolves to the lexicographically smallest wedge
    CHECK(alpha_min_covol(Lattice::standard(2), 1).witness ==
          RationalSubspace::coordinate(2, {1}));

    const Lattice x(qmat({{"1/4", "0", "0"}, {"0", "1", "0"}, {"0", "0", "4"}}));
    const auto a1 = alpha_min_covol(x, 1);
    CHECK(*a1.value_sq_exact == Rat(1, 16));
    CHECK(a1.witness == RationalSubspace::coordinate(3, {0}));
    const auto a2 = alpha_min_covol(x, 2);
    CHECK(*a2.value_sq_exact == Rat(1, 16));
    CHECK(a2.witness == RationalSubspace::coordinate(3, {0, 1}));
    const auto a3 = alpha_min_covol(x, 3);
    CHECK(*a3.value_sq_exact == Rat(1));
    CHECK(a3.witness.l == 3);

    const Lattice y(qmat({{"1/2", "0"}, {"0", "2"}}));
    CHECK(*alpha_min_covol(y, 1).value_sq_exact == Rat(1, 4));
    CHECK(alpha_min_covol(y, 1).witness == RationalSubspace::coordinate(2, {0}));
    CHECK(*alpha_min_covol(y, 2).value_sq_exact == Rat(1));

    // shear: lambda_1 = 1 attained only by the first basis column
    const Lattice s(qmat({{"1", "1/2"}, {"0", "1"}}));
    const auto sa = alpha_min_covol(s, 1);
    CHECK(*sa.value_sq_exact == Rat(1));
    CHECK(sa.witness == RationalSubspace::coordinate(2, {0}));

    CHECK_THROWS_AS(alpha_min_covol(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(alpha_min_covol(x, 4), std::invalid_argument);
    CHECK_THROWS_AS(alpha_min_covol(x, 1, 2), CapacityError);

    // snapshot: evolved diag(1/4,1,4) under alpha=(1/2,1/2,-1); at t the
    // minimal line is still e_1 with covolume (1/4)e^{t/2}
    const auto flow = oracle::make_flow({"1/2", "1/2", "-1"});
    const auto snap = LatticeSnapshot::make(x, flow, Real(1));
    const auto s1 = alpha_min_covol(snap, 1);
    CHECK_FALSE(s1.value_sq_exact.has_value());
    CHECK(approx_equal(s1.value, real_exp(Real(1) / 2) / 4, Real(1e-25)));
    CHECK(s1.witness == RationalSubspace::coordinate(3, {0}));
    const auto s3 = alpha_min_covol(snap, 3);
    REQUIRE(s3.value_sq_exact.has_value());  // top level is exact even evolved
    CHECK(*s3.value_sq_exact == Rat(1));
}

TEST_CASE("minimal covolume: brute-force oracle and invariants") {
    std::mt19937 rng(2026);
    std::vector<Lattice> panel;
    panel.push_back(Lattice::standard(2));
    panel.push_back(Lattice(qmat({{"1/2", "0"}, {"0", "2"}})));
    panel.push_back(Lattice(qmat({{"1", "1/2"}, {"0", "1"}})));
    panel.push_back(Lattice(qmat({{"1/4", "0", "0"}, {"0", "1", "0"}, {"0", "0", "4"}})));
    panel.push_back(Lattice(qmat({{"2/3", "0", "0"}, {"0", "1", "0"}, {"0", "0", "3/2"}})));
    panel.push_back(Lattice(qmat({{"1", "0", "1/2"}, {"0", "1", "1/2"}, {"0", "0", "1"}})));

    for (const Lattice& x : panel) {
        const auto minima = successive_minima(x);
        Rat had(1);
        for (int l = 1; l <= x.d; ++l) {
            const auto r = alpha_min_covol(x, l);
            REQUIRE(r.value_sq_exact.has_value());
            // independent box enumeration finds the same exact minimum
            if (l < x.d) CHECK(*r.value_sq_exact == brute_alpha_sq(x, l, 2));
            // Hadamard: alpha_l <= lambda_1 ... lambda_l, exactly
            had *= minima.lambda_sq_exact[l - 1];
            CHECK(*r.value_sq_exact <= had);
            // the witness attains the reported value
            CHECK(covol_sq_exact(x, r.witness) == *r.value_sq_exact);
        }
        CHECK(*alpha_min_covol(x, x.d).value_sq_exact == Rat(1));
    }

    // basis invariance: the same lattice presented through a random
    // unimodular recombination reports identical exact values
    const Lattice plain(qmat({{"1/2", "0", "0"}, {"0", "1", "0"}, {"0", "0", "2"}}));
    for (int trial = 0; trial < 6; ++trial) {
        const QMat U = qmat_from_z(oracle::random_unimodular(rng, 3, 8));
        const Lattice mixed(mat_mul(plain.basis, U));
        for (int l = 1; l <= 3; ++l)
            CHECK(*alpha_min_covol(mixed, l).value_sq_exact ==
                  *alpha_min_covol(plain, l).value_sq_exact);
    }
}

TEST_CASE("unique small subspace") {
    ToleranceConfig cfg;
    cfg.eta0 = Real(1) / 2;

    const Lattice x(qmat({{"1/4", "0", "0"}, {"0", "1", "0"}, {"0", "0", "4"}}));
    const auto still = LatticeSnapshot::still(x);
    const auto u1 = unique_small_subspace(still, 1, cfg);
    CHECK(u1.V == RationalSubspace::coordinate(3, {0}));
    CHECK(u1.gap_verified);
    const auto u2 = unique_small_subspace(still, 2, cfg);
    CHECK(u2.V == RationalSubspace::coordinate(3, {0, 1}));
    CHECK(u2.gap_verified);

    // precondition: eta_l(x) must be below eta0
    const auto z3 = LatticeSnapshot::still(Lattice::standard(3));
    CHECK_THROWS_AS(unique_small_subspace(z3, 1, cfg), std::invalid_argument);

    // evolved lattice: at t = 2 log 2 the flow contracts e_3 below the rest
    const auto flow = oracle::make_flow({"1/2", "1/2", "-1"});
    const auto snap =
        LatticeSnapshot::make(Lattice::standard(3), flow, 2 * real_log(Real(2)));
    cfg.eta0 = Real(1) / 4;
    const auto v1 = unique_small_subspace(snap, 1, cfg);
    CHECK(v1.V == RationalSubspace::coordinate(3, {2}));
    CHECK(v1.gap_verified);
    CHECK_THROWS_AS(unique_small_subspace(snap, 2, cfg), std::invalid_argument);

    // an exact covolume tie cannot be certified unique: this lattice has two
    // planes of covolume exactly 1 (the coordinate planes {1,2} and {0,2})
    // while its vector minima stay distinct, so eta_2 < 1 and the search runs
    const Lattice tied(qmat({{"1", "0", "0"},
                             {"-5/12", "13/12", "0"},
                             {"-3/13", "-1/5", "12/13"}}));
    ToleranceConfig loose;
    loose.eta0 = Real(999) / 1000;
    CHECK(covol_sq_exact(tied, RationalSubspace::coordinate(3, {1, 2})) == Rat(1));
    CHECK(covol_sq_exact(tied, RationalSubspace::coordinate(3, {0, 2})) == Rat(1));
    const auto ut = unique_small_subspace(LatticeSnapshot::still(tied), 2, loose);
    CHECK_FALSE(ut.gap_verified);
    CHECK(ut.V == RationalSubspace::coordinate(3, {1, 2}));  // lex-smaller wedge
    CHECK(covol_sq_exact(tied, ut.V) == Rat(1));

    CHECK_THROWS_AS(unique_small_subspace(still, 0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(unique_small_subspace(still, 3, cfg), std::invalid_argument);
}

TEST_CASE("grassmann distance") {
    auto line = [](double a, double b) {
        RMat m(2, 1);
        m(0, 0) = Real(a);
        m(1, 0) = Real(b);
        return m;
    };
    CHECK(grassmann_distance(line(1, 0), line(0, 1)) == 1);
    CHECK(grassmann_distance(line(1, 0), line(1, 0)) < Real(1e-30));
    // principal angle pi/4 between e_1 and the diagonal
    CHECK(approx_equal(grassmann_distance(line(1, 0), line(1, 1)),
                       real_sqrt(Real(2)) / 2, Real(1e-30)));
    // scaling the basis columns changes nothing
    CHECK(approx_equal(grassmann_distance(line(1, 0), line(7, 7)),
                       real_sqrt(Real(2)) / 2, Real(1e-30)));

    RMat degenerate(2, 1);  // zero column
    CHECK_THROWS_AS(grassmann_distance(line(1, 0), degenerate), std::invalid_argument);
    RMat plane(3, 2);
    CHECK_THROWS_AS(grassmann_distance(line(1, 0), plane), std::invalid_argument);

    // rational-subspace overload through a still snapshot
    const auto z3 = LatticeSnapshot::still(Lattice::standard(3));
    CHECK(grassmann_distance(z3, RationalSubspace::coordinate(3, {0}),
                             RationalSubspace::coordinate(3, {1})) == 1);
    CHECK(grassmann_distance(z3, RationalSubspace::coordinate(3, {0, 1}),
                             RationalSubspace::coordinate(3, {0, 1})) < Real(1e-30));
    // planes sharing a line: distance is the angle between the free directions
    const auto W1 = RationalSubspace::coordinate(3, {0, 1});
    const auto W2 = RationalSubspace(3, zmat({{1, 0}, {0, 0}, {0, 1}}));
    CHECK(approx_equal(grassmann_distance(z3, W1, W2), Real(1), Real(1e-25)));
    CHECK_THROWS_AS(grassmann_distance(z3, RationalSubspace::coordinate(3, {0}), W1),
                    std::invalid_argument);

    // symmetry and the normalized-representative bridge bound on random pairs:
    // d_Gr(V, W) <= sqrt(l) * || v/|v| - w/|w| || for the plucker vectors
    std::mt19937 rng(11);
    int done = 0;
    while (done < 50) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int l = 1 + static_cast<int>(rng() % (d - 1));
        const RationalSubspace V(d, random_generators(rng, d, l));
        const RationalSubspace W(d, random_generators(rng, d, l));
        if (V.l != l || W.l != l) continue;
        const auto snap = LatticeSnapshot::still(Lattice::standard(d));
        const Real dvw = grassmann_distance(snap, V, W);
        const Real dwv = grassmann_distance(snap, W, V);
        CHECK(real_abs(dvw - dwv) < Real(1e-25));
        const ZVec pv = plucker(V), pw = plucker(W);
        RVec rv, rw;
        for (const auto& c : pv) rv.push_back(to_real(Rat(c)));
        for (const auto& c : pw) rw.push_back(to_real(Rat(c)));
        const Real nv = rvec_norm(rv), nw = rvec_norm(rw);
        Real diff2(0);
        for (size_t i = 0; i < rv.size(); ++i) {
            const Real t = rv[i] / nv - rw[i] / nw;
            diff2 += t * t;
        }
        CHECK(dvw <= real_sqrt(Real(l)) * real_sqrt(diff2) + Real(1e-25));
        ++done;
    }
}

TEST_CASE("orientation of subspaces") {
    const auto flow = oracle::make_flow({"1/2", "1/2", "-1"});
    ToleranceConfig cfg;
    cfg.eps0 = Real(1) / 3;

    const auto o1 = orientation_of_subspace(RationalSubspace::coordinate(3, {0}), flow, cfg);
    REQUIRE(o1.has_value());
    CHECK(*o1 == qvec({"1/2"}));

    const auto o2 =
        orientation_of_subspace(RationalSubspace::coordinate(3, {0, 1}), flow, cfg);
    REQUIRE(o2.has_value());
    CHECK(*o2 == qvec({"1/2", "1/2"}));

    // mixed-weight coordinate plane: single group, exponents ascending
    const auto o3 =
        orientation_of_subspace(RationalSubspace::coordinate(3, {0, 2}), flow, cfg);
    REQUIRE(o3.has_value());
    CHECK(*o3 == qvec({"-1", "1/2"}));

    // equal masses on two groups: dominance fails for every eps0 < 1
    const auto diag = RationalSubspace(3, zmat({{1}, {0}, {1}}));
    CHECK_FALSE(orientation_of_subspace(diag, flow, cfg).has_value());
    ToleranceConfig wide;
    wide.eps0 = Real(99) / 100;
    CHECK_FALSE(orientation_of_subspace(diag, flow, wide).has_value());

    // a slightly tilted line: mass ratio 10^-6 against the margin
    const auto tilted = RationalSubspace(3, zmat({{1000}, {0}, {1}}));
    const auto ot = orientation_of_subspace(tilted, flow, cfg);
    REQUIRE(ot.has_value());
    CHECK(*ot == qvec({"1/2"}));
    ToleranceConfig tight;
    tight.eps0 = Real(1) / 2000;  // eps0^2 * 10^6 = 1/4 < 1: dominance fails
    CHECK_FALSE(orientation_of_subspace(tilted, flow, tight).has_value());

    CHECK_THROWS_AS(orientation_of_subspace(RationalSubspace(3, ZMat(3, 1)), flow, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        orientation_of_subspace(RationalSubspace::coordinate(2, {0}), flow, cfg),
        std::invalid_argument);
}

TEST_CASE("grassmann dominance intervals") {
    const auto flow = oracle::make_flow({"1/2", "1/2", "-1"});
    ToleranceConfig cfg;
    cfg.eps0 = real_exp(Real(-3));
    cfg.root_tol = boost::multiprecision::ldexp(Real(1), -40);

    // pure eigendirection: one group fills any window
    const auto whole = grassmann_intervals(RationalSubspace::coordinate(3, {0}), flow, cfg,
                                           Real(-7), Real(3));
    REQUIRE(whole.intervals.size() == 1);
    CHECK(whole.intervals[0].exponents == qvec({"1/2"}));
    CHECK(whole.intervals[0].lo == Real(-7));
    CHECK(whole.intervals[0].hi == Real(3));
    CHECK(whole.gap_total == 0);

    // the diagonal line e_1 + e_3: dominance flips at t = ±2 with gap 4,
    // from solving e^{-2t} = eps0^2 e^{t} with eps0 = e^{-3}
    const auto diag = RationalSubspace(3, zmat({{1}, {0}, {1}}));
    const auto two = grassmann_intervals(diag, flow, cfg, Real(-5), Real(5));
    REQUIRE(two.intervals.size() == 2);
    const Real slack = Real(1e-11);
    CHECK(two.intervals[0].exponents == qvec({"-1"}));  // weight sums ascending
    CHECK(two.intervals[0].lo == Real(-5));
    CHECK(real_abs(two.intervals[0].hi - Real(-2)) < slack);
    CHECK(two.intervals[1].exponents == qvec({"1/2"}));
    CHECK(real_abs(two.intervals[1].lo - Real(2)) < slack);
    CHECK(two.intervals[1].hi == Real(5));
    CHECK(real_abs(two.gap_total - Real(4)) < slack);

    // three distinct weights on a line: the middle group never dominates
    const auto flow3 = oracle::make_flow({"1", "0", "-1"});
    const auto ones = RationalSubspace(3, zmat({{1}, {1}, {1}}));
    const auto mid = grassmann_intervals(ones, flow3, cfg, Real(-5), Real(5));
    REQUIRE(mid.intervals.size() == 2);
    CHECK(mid.intervals[0].exponents == qvec({"-1"}));
    CHECK(mid.intervals[1].exponents == qvec({"1"}));
    CHECK(mid.gap_total > 0);
    // weight sums strictly increase across the output
    for (size_t i = 1; i < mid.intervals.size(); ++i) {
        Rat a(0), b(0);
        for (const auto& q : mid.intervals[i - 1].exponents) a += q;
        for (const auto& q : mid.intervals[i].exponents) b += q;
        CHECK(a < b);
    }

    CHECK_THROWS_AS(grassmann_intervals(diag, flow, cfg, Real(1), Real(-1)),
                    std::invalid_argument);
}

TEST_CASE("tolerance defaults and validation") {
    const auto flow = oracle::make_flow({"1/2", "1/2", "-1"});
    // distinct coordinate subspaces with distinct weights sit at distance 1
    CHECK(approx_equal(default_eps0(flow), Real(1) / 3, Real(1e-25)));
    // a flow with a single weight group falls back to the same margin
    CHECK(approx_equal(default_eps0(oracle::make_flow({"0", "0"})), Real(1) / 3,
                       Real(1e-25)));

    const Real delta = real_exp(Real(-16));
    const Real delta_prime = real_exp(Real(-7));
    const auto cfg = default_tolerances(flow, delta, delta_prime);
    CHECK(cfg.eta0 == Real(1) / 4);
    CHECK(approx_equal(cfg.eps0, Real(1) / 3, Real(1e-25)));
    CHECK(cfg.root_tol == boost::multiprecision::ldexp(Real(1), -40));
    // r sits strictly inside ((log d'/log d)^{1/(d+1)}, 1)
    const Real lo = boost::multiprecision::pow(Real(7) / 16, Real(1) / 4);
    CHECK(cfg.r > lo);
    CHECK(cfg.r < 1);
    CHECK_NOTHROW(cfg.validate(3));

    ToleranceConfig bad = cfg;
    bad.delta_prime = real_exp(Real(-9));  // delta_prime^2 < delta
    CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
    bad = cfg;
    bad.r = Real(1) / 2;  // below the admissible interval
    CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
    bad = cfg;
    bad.eta0 = Real(2);
    CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
    bad = cfg;
    bad.precision = 8;
    CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
    bad = cfg;
    bad.delta = Real(0);
    CHECK_THROWS_AS(bad.validate(3), std::invalid_argument);
}
