#include "cusplab/weyl.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cusplab {

ParabolicSubgroup::ParabolicSubgroup(int dim, std::vector<int> js) : d(dim), jumps(std::move(js)) {
    if (d < 2) throw std::invalid_argument("parabolic dimension must be >= 2");
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
    for (int j : jumps)
        if (j < 1 || j >= d) throw std::invalid_argument("jump out of range [1, d-1]");
}

ParabolicSubgroup ParabolicSubgroup::borel(int d) {
    std::vector<int> js(d - 1);
    for (int i = 0; i < d - 1; ++i) js[i] = i + 1;
    return ParabolicSubgroup(d, std::move(js));
}

std::vector<int> ParabolicSubgroup::boundaries() const {
    std::vector<int> b;
    b.push_back(0);
    for (int j : jumps) b.push_back(j);
    b.push_back(d);
    return b;
}

int ParabolicSubgroup::block_of(int i) const {
    int b = 0;
    for (int j : jumps)
        if (j <= i) ++b;
    return b;
}

std::vector<int> ParabolicSubgroup::block_sizes() const {
    auto bd = boundaries();
    std::vector<int> s;
    for (size_t k = 0; k + 1 < bd.size(); ++k) s.push_back(bd[k + 1] - bd[k]);
    return s;
}

bool is_subgroup(const ParabolicSubgroup& Q, const ParabolicSubgroup& P) {
    if (Q.d != P.d) return false;
    return std::includes(Q.jumps.begin(), Q.jumps.end(), P.jumps.begin(), P.jumps.end());
}

std::vector<ParabolicSubgroup> enumerate_parabolics(int d) {
    std::vector<ParabolicSubgroup> out;
    int n = d - 1;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> js;
        for (int b = 0; b < n; ++b)
            if (mask & (1u << b)) js.push_back(b + 1);
        out.emplace_back(d, std::move(js));
    }
    return out;
}

std::vector<ParabolicSubgroup> parabolic_interval(const ParabolicSubgroup& Q,
                                                  const ParabolicSubgroup& P) {
    if (!is_subgroup(Q, P)) throw std::invalid_argument("parabolic_interval: Q must lie below P");
    std::vector<int> free_jumps;
    for (int j : Q.jumps)
        if (!std::binary_search(P.jumps.begin(), P.jumps.end(), j)) free_jumps.push_back(j);
    std::vector<ParabolicSubgroup> out;
    int n = static_cast<int>(free_jumps.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> js = P.jumps;
        for (int b = 0; b < n; ++b)
            if (mask & (1u << b)) js.push_back(free_jumps[b]);
        out.emplace_back(Q.d, std::move(js));
    }
    std::sort(out.begin(), out.end());
    return out;
}

QVec Orientation::block_multiset(const DiagonalFlow& flow, int b) const {
    auto bd = P.boundaries();
    QVec m;
    for (int i = bd[b]; i < bd[b + 1]; ++i) m.push_back(flow.alpha[rep[i]]);
    std::sort(m.begin(), m.end());
    return m;
}

namespace {

/// Canonical representative from per-block value multisets: per value take
/// the smallest unused alpha-indices, sort each block ascending.
std::optional<std::vector<int>> canonical_rep(const DiagonalFlow& flow,
                                              const std::vector<QVec>& block_multisets) {
    int d = flow.d;
    std::vector<bool> used(d, false);
    std::vector<int> rep;
    rep.reserve(d);
    for (const auto& mset : block_multisets) {
        std::vector<int> chosen;
        size_t i = 0;
        while (i < mset.size()) {
            size_t j = i;
            while (j < mset.size() && mset[j] == mset[i]) ++j;
            size_t need = j - i;
            for (int k = 0; k < d && need > 0; ++k) {
                if (!used[k] && flow.alpha[k] == mset[i]) {
                    used[k] = true;
                    chosen.push_back(k);
                    --need;
                }
            }
            if (need > 0) return std::nullopt;  // multiset not realizable
            i = j;
        }
        std::sort(chosen.begin(), chosen.end());
        rep.insert(rep.end(), chosen.begin(), chosen.end());
    }
    return rep;
}

}  // namespace

Orientation coset_of(const DiagonalFlow& flow, const ParabolicSubgroup& P,
                     const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != flow.d)
        throw std::invalid_argument("permutation size mismatch");
    std::vector<bool> seen(flow.d, false);
    for (int v : perm) {
        if (v < 0 || v >= flow.d || seen[v]) throw std::invalid_argument("not a permutation");
        seen[v] = true;
    }
    auto bd = P.boundaries();
    std::vector<QVec> blocks;
    for (size_t b = 0; b + 1 < bd.size(); ++b) {
        QVec m;
        for (int i = bd[b]; i < bd[b + 1]; ++i) m.push_back(flow.alpha[perm[i]]);
        std::sort(m.begin(), m.end());
        blocks.push_back(std::move(m));
    }
    auto rep = canonical_rep(flow, blocks);
    return Orientation{P, *rep};
}

std::optional<Orientation> coset_from_prefix_multisets(
    const DiagonalFlow& flow, const ParabolicSubgroup& P,
    const std::vector<QVec>& prefix_multisets) {
    auto bd = P.boundaries();
    size_t k = P.jumps.size();
    if (prefix_multisets.size() != k) return std::nullopt;
    // Convert nested prefixes into per-block multisets by multiset difference.
    std::vector<QVec> blocks;
    QVec prev;
    for (size_t b = 0; b <= k; ++b) {
        QVec cur;
        if (b < k) {
            cur = prefix_multisets[b];
            std::sort(cur.begin(), cur.end());
            if (static_cast<int>(cur.size()) != bd[b + 1]) return std::nullopt;
        } else {
            cur = flow.alpha;
            std::sort(cur.begin(), cur.end());
        }
        QVec diff;
        size_t i = 0, j = 0;
        while (j < cur.size()) {
            if (i < prev.size() && prev[i] == cur[j]) {
                ++i;
                ++j;
            } else {
                diff.push_back(cur[j]);
                ++j;
            }
        }
        if (i != prev.size()) return std::nullopt;  // prefixes not nested
        blocks.push_back(std::move(diff));
        prev = std::move(cur);
    }
    auto rep = canonical_rep(flow, blocks);
    if (!rep) return std::nullopt;
    return Orientation{P, *rep};
}

namespace {

void enumerate_block_multisets(const std::vector<Rat>& values, std::vector<int>& remaining,
                               const std::vector<int>& sizes, size_t block,
                               std::vector<QVec>& acc, const DiagonalFlow& flow,
                               const ParabolicSubgroup& P, std::vector<Orientation>& out) {
    if (block == sizes.size()) {
        auto rep = canonical_rep(flow, acc);
        out.push_back(Orientation{P, *rep});
        return;
    }
    int target = sizes[block];
    // Choose counts per distinct value, earliest value varies slowest.
    std::vector<int> counts(values.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t vi, int left) {
        if (left == 0) {
            QVec mset;
            for (size_t v = 0; v < values.size(); ++v)
                for (int c = 0; c < counts[v]; ++c) mset.push_back(values[v]);
            for (size_t v = 0; v < values.size(); ++v) remaining[v] -= counts[v];
            acc.push_back(mset);
            enumerate_block_multisets(values, remaining, sizes, block + 1, acc, flow, P, out);
            acc.pop_back();
            for (size_t v = 0; v < values.size(); ++v) remaining[v] += counts[v];
            return;
        }
        if (vi == values.size()) return;
        int hi = std::min(left, remaining[vi]);
        for (int c = hi; c >= 0; --c) {
            counts[vi] = c;
            rec(vi + 1, left - c);
        }
        counts[vi] = 0;
    };
    rec(0, target);
}

}  // namespace

std::vector<Orientation> weyl_double_cosets(const DiagonalFlow& flow,
                                            const ParabolicSubgroup& P) {
    if (P.d != flow.d) throw std::invalid_argument("flow/parabolic dimension mismatch");
    std::vector<Rat> values;
    std::vector<int> counts;
    QVec sorted = flow.alpha;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& v : sorted) {
        if (!values.empty() && values.back() == v)
            ++counts.back();
        else {
            values.push_back(v);
            counts.push_back(1);
        }
    }
    std::vector<Orientation> out;
    std::vector<QVec> acc;
    enumerate_block_multisets(values, counts, P.block_sizes(), 0, acc, flow, P, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Rat entropy(const DiagonalFlow& flow, const ParabolicSubgroup& P,
            const std::vector<int>& perm) {
    Rat h(0);
    for (int i = 0; i < flow.d; ++i)
        for (int j = 0; j < flow.d; ++j) {
            if (i == j) continue;
            if (P.block_of(i) > P.block_of(j)) continue;
            h += rat_pos(flow.alpha[perm[i]] - flow.alpha[perm[j]]);
        }
    return h;
}

Rat entropy(const DiagonalFlow& flow, const Orientation& o) {
    return entropy(flow, o.P, o.rep);
}

QVec project(const DiagonalFlow& flow, const ParabolicSubgroup& P,
             const std::vector<int>& perm) {
    auto bd = P.boundaries();
    QVec out(flow.d);
    for (size_t b = 0; b + 1 < bd.size(); ++b) {
        Rat s(0);
        for (int i = bd[b]; i < bd[b + 1]; ++i) s += flow.alpha[perm[i]];
        Rat avg = s / Rat(bd[b + 1] - bd[b]);
        for (int i = bd[b]; i < bd[b + 1]; ++i) out[i] = avg;
    }
    return out;
}

QVec project(const DiagonalFlow& flow, const Orientation& o) {
    return project(flow, o.P, o.rep);
}

bool multiset_le(const QVec& E, const QVec& F) {
    if (E.size() != F.size())
        throw std::invalid_argument("multiset_le requires equal cardinality");
    return rat_sum(E) <= rat_sum(F);
}

Rat h_phi(const DiagonalFlow& flow, const Orientation& o, const LinearFunctional& phi) {
    return entropy(flow, o) - phi.apply(project(flow, o));
}

}  // namespace cusplab
