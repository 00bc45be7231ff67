#include "cusplab/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace cusplab {

std::vector<ParabolicSubgroup> scope_parabolics(const ParabolicScope& s, int d) {
    std::vector<ParabolicSubgroup> out;
    switch (s.kind) {
        case ParabolicScope::Kind::cusp:
            for (auto& p : enumerate_parabolics(d))
                if (!p.is_full()) out.push_back(p);
            break;
        case ParabolicScope::Kind::all:
            out = enumerate_parabolics(d);
            break;
        case ParabolicScope::Kind::list:
            out = s.list;
            for (const auto& p : out)
                if (p.d != d) throw std::invalid_argument("scope parabolic dimension mismatch");
            break;
    }
    if (out.empty()) throw std::invalid_argument("empty parabolic scope");
    return out;
}

std::vector<BoundRow> bound_rows(const DiagonalFlow& flow, const LinearFunctional& phi,
                                 const ParabolicScope& scope) {
    if (phi.dim() != flow.d) throw std::invalid_argument("phi dimension mismatch");
    std::vector<BoundRow> rows;
    for (const auto& P : scope_parabolics(scope, flow.d))
        for (const auto& o : weyl_double_cosets(flow, P)) {
            BoundRow r;
            r.o = o;
            r.h = entropy(flow, o);
            r.pi = project(flow, o);
            r.hphi = r.h - phi.apply(r.pi);
            rows.push_back(std::move(r));
        }
    return rows;
}

namespace {
Rat max_hphi(const DiagonalFlow& flow, const LinearFunctional& phi,
             const ParabolicScope& scope) {
    auto rows = bound_rows(flow, phi, scope);
    Rat best = rows.front().hphi;
    for (const auto& r : rows) best = std::max(best, r.hphi);
    return best;
}
}  // namespace

Rat bound_cusp(const DiagonalFlow& flow, const LinearFunctional& phi) {
    return max_hphi(flow, phi, ParabolicScope::cusp());
}

Rat bound_at_P(const DiagonalFlow& flow, const ParabolicSubgroup& P,
               const LinearFunctional& phi) {
    return max_hphi(flow, phi, ParabolicScope::of({P}));
}

Rat MeasureVector::total() const {
    Rat s(0);
    for (const auto& [o, m] : entries) s += m;
    return s;
}

void MeasureVector::validate() const {
    if (entries.empty()) throw std::invalid_argument("empty measure vector");
    for (const auto& [o, m] : entries)
        if (m < 0) throw std::invalid_argument("negative mass in measure vector");
    if (total() > Rat(1) + Rat(Int(1), Int("1000000000000")))
        throw std::invalid_argument("measure vector mass exceeds 1");
}

Rat bound_weighted(const DiagonalFlow& flow, const LinearFunctional& phi,
                   const MeasureVector& mu) {
    mu.validate();
    Rat s(0);
    for (const auto& [o, m] : mu.entries) s += m * h_phi(flow, o, phi);
    Rat residual = Rat(1) - mu.total();
    if (residual > 0) {
        Rat worst = max_hphi(flow, phi, ParabolicScope::all());
        s += residual * worst;
    }
    return s;
}

PhiOptimum optimize_phi(const DiagonalFlow& flow, const ParabolicScope& scope) {
    int d = flow.d;
    LPProblem lp;
    lp.nvars = d + 1;  // t, c_1..c_d — all free
    lp.obj.assign(d + 1, Rat(0));
    lp.obj[0] = Rat(1);
    lp.nonneg.assign(d + 1, false);
    for (const auto& P : scope_parabolics(scope, d))
        for (const auto& o : weyl_double_cosets(flow, P)) {
            LPProblem::Row row;
            row.a.assign(d + 1, Rat(0));
            row.a[0] = Rat(1);
            QVec pi = project(flow, o);
            for (int i = 0; i < d; ++i) row.a[i + 1] = pi[i];
            row.rel = +1;
            row.rhs = entropy(flow, o);
            lp.rows.push_back(std::move(row));
        }
    {
        LPProblem::Row zerosum;
        zerosum.a.assign(d + 1, Rat(0));
        for (int i = 0; i < d; ++i) zerosum.a[i + 1] = Rat(1);
        zerosum.rel = 0;
        zerosum.rhs = Rat(0);
        lp.rows.push_back(std::move(zerosum));
    }
    LPSolution sol = solve_lp(lp);
    PhiOptimum out;
    out.status = sol.status;
    if (sol.status != LPStatus::optimal) return out;
    out.value = sol.value;
    QVec c(sol.x.begin() + 1, sol.x.end());
    out.phi = LinearFunctional(std::move(c));
    return out;
}

Rat closed_form_hinf(const DiagonalFlow& flow) {
    Rat hG = entropy(flow, ParabolicSubgroup::full(flow.d),
                     [&] {
                         std::vector<int> id(flow.d);
                         for (int i = 0; i < flow.d; ++i) id[i] = i;
                         return id;
                     }());
    return hG - flow.positive_mass();
}

PkBound closed_form_hinf_Pk(const DiagonalFlow& flow, int k) {
    int d = flow.d;
    if (k < 1 || k > d - 1) throw std::invalid_argument("k out of range [1, d-1]");
    PkBound out;
    out.k_effective = (2 * k > d) ? d - k : k;
    k = out.k_effective;
    QVec a = flow.sorted_desc();
    auto idx = [&](int one_based) -> const Rat& { return a[one_based - 1]; };
    int m_found = -1;
    for (int m = 1; m + 2 * k - 1 <= d; ++m) {
        Rat even(0), odd(0);
        for (int i = 1; i <= k; ++i) {
            even += idx(m + 2 * (i - 1));
            odd += idx(m + 2 * (i - 1) + 1);
        }
        if (even >= 0 && odd <= 0) {
            m_found = m;
            break;
        }
    }
    if (m_found < 0)
        throw std::domain_error("no valid minimal index for the closed form");
    out.m = m_found;
    std::vector<int> id(d);
    for (int i = 0; i < d; ++i) id[i] = i;
    // h(G,a) is permutation-invariant, so the sorted exponents can be used
    // throughout.
    DiagonalFlow sorted_flow(d, a);
    Rat hG = entropy(sorted_flow, ParabolicSubgroup::full(d), id);
    Rat val = hG;
    for (int i = 1; i <= m_found; ++i) val -= Rat(k) * idx(i);
    for (int i = 1; i <= k - 1; ++i)
        val -= Rat(k - i) * (idx(m_found + 2 * i - 1) + idx(m_found + 2 * i));
    out.value = val;
    return out;
}

BorelBound closed_form_B_bound(const DiagonalFlow& flow) {
    std::vector<int> id(flow.d);
    for (int i = 0; i < flow.d; ++i) id[i] = i;
    Rat hG = entropy(flow, ParabolicSubgroup::full(flow.d), id);
    QVec sorted = flow.sorted_desc();
    bool all_simple = true;
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1]) { all_simple = false; break; }
    size_t distinct = sorted.empty() ? 0 : 1;
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] != sorted[i + 1]) ++distinct;
    return BorelBound{hG / 2, all_simple || distinct == 2};
}

RegionLabel argmax_label(const DiagonalFlow& flow, const LinearFunctional& phi,
                         const ParabolicSubgroup& P, const ParabolicSubgroup& Q,
                         const Orientation& wQ) {
    if (!is_subgroup(Q, P)) throw std::invalid_argument("argmax_label: need Q <= P");
    RegionLabel best;
    best.P = P;
    best.Q = Q;
    best.wQ = wQ;
    bool have = false;
    for (const auto& H : parabolic_interval(Q, P)) {
        Orientation oH = coset_of(flow, H, wQ.rep);
        Rat v = h_phi(flow, oH, phi);
        bool better = false;
        if (!have)
            better = true;
        else if (v != best.value)
            better = v > best.value;
        else
            better = H.jumps < best.H.jumps;  // ties: lex-smallest jump sequence
        if (better) {
            best.H = H;
            best.wH = oH;
            best.value = v;
            have = true;
        }
    }
    return best;
}

std::vector<RegionLabel> assemble_partition_labels(const DiagonalFlow& flow,
                                                   const LinearFunctional& phi) {
    std::vector<RegionLabel> out;
    auto all = enumerate_parabolics(flow.d);
    for (const auto& P : all)
        for (const auto& Q : all) {
            if (!is_subgroup(Q, P)) continue;
            for (const auto& wQ : weyl_double_cosets(flow, Q))
                out.push_back(argmax_label(flow, phi, P, Q, wQ));
        }
    return out;
}

}  // namespace cusplab
