#include "cusplab/coding.hpp"

#include <algorithm>
#include <stdexcept>

#include "cusplab/errors.hpp"

namespace cusplab {
namespace {

// ---------------------------------------------------------------------------
// Trajectory scan.  One pass over [-N, N] samples log eta_l for every l at
// once; the adaptive step keeps every threshold crossing between consecutive
// samples impossible (step <= 3/4 * distance / Lipschitz), with a floor of
// root_tol / (2 max|alpha_i|), so dips deeper than root_tol below a threshold
// are always sampled and crossings are bracketed to width ~root_tol.
// ---------------------------------------------------------------------------

struct Excursion {
    int l = 0;  // 1-based dimension
    Real lo, hi;
    bool lo_clipped = false, hi_clipped = false;
    int depth = 0;  // smallest m in 0..d with a sample below level m; d+1 if none
};

struct ScanResult {
    std::vector<Real> level_logs;  // log(delta^{r^m}) = r^m log delta, m = 0..d (increasing)
    Real log_dp;                   // log delta_prime
    std::vector<Excursion> excursions;  // depth <= d only, sorted by (l, lo)
};

std::vector<Real> log_eta_vector(const Lattice& x, const DiagonalFlow& flow, const Real& t) {
    const MinimaResult m = successive_minima(LatticeSnapshot::make(x, flow, t));
    std::vector<Real> g(static_cast<std::size_t>(x.d - 1));
    for (int l = 1; l < x.d; ++l) g[static_cast<std::size_t>(l - 1)] = real_log(eta(m, l));
    return g;
}

int depth_of_sample(const Real& gl, const std::vector<Real>& level_logs) {
    for (std::size_t m = 0; m < level_logs.size(); ++m)
        if (gl < level_logs[m]) return static_cast<int>(m);
    return static_cast<int>(level_logs.size());
}

ScanResult scan_trajectory(const Lattice& x, const DiagonalFlow& flow, const ToleranceConfig& cfg,
                           long N) {
    const int d = x.d;
    ScanResult out;
    const Real logd = real_log(at_working_precision(cfg.delta));
    out.log_dp = real_log(at_working_precision(cfg.delta_prime));
    const Real r = at_working_precision(cfg.r);
    Real lv = logd;
    for (int m = 0; m <= d; ++m) {
        out.level_logs.push_back(lv);
        lv *= r;
    }
    if (!(out.level_logs.back() < out.log_dp))
        throw std::invalid_argument("coding: delta^{r^d} must stay below delta'");
    if (d == 1) return out;  // no eta dimensions

    const Real tN = Real(N), tmN = Real(-N);
    const int none = static_cast<int>(out.level_logs.size());

    struct Open {
        Real lo;
        bool lo_clipped;
        int depth;
    };
    std::vector<std::optional<Open>> open(static_cast<std::size_t>(d - 1));

    if (flow.is_zero()) {
        // Constant trajectory: one exact sample decides the whole window.
        const auto g = log_eta_vector(x, flow, Real(0));
        for (int l = 1; l < d; ++l) {
            const Real& gl = g[static_cast<std::size_t>(l - 1)];
            if (gl < out.log_dp) {
                const int dep = depth_of_sample(gl, out.level_logs);
                if (dep < none) out.excursions.push_back({l, tmN, tN, true, true, dep});
            }
        }
        return out;
    }

    const Real K = 2 * to_real(flow.max_abs());  // Lipschitz bound on log eta_l
    const Real root_tol = at_working_precision(cfg.root_tol);
    const Real min_step = root_tol / K;

    std::vector<Real> thresholds = out.level_logs;
    thresholds.push_back(out.log_dp);

    // Locate a sign change of (log eta_l < theta) inside [a, b] to root_tol.
    auto bisect = [&](int l, const Real& theta, Real a, Real b, bool below_at_a) {
        while (b - a > root_tol) {
            const Real mid = (a + b) / 2;
            const bool below = log_eta_vector(x, flow, mid)[static_cast<std::size_t>(l - 1)] < theta;
            if (below == below_at_a)
                a = mid;
            else
                b = mid;
        }
        return (a + b) / 2;
    };

    Real t = tmN;
    std::vector<Real> g = log_eta_vector(x, flow, t);
    for (int l = 1; l < d; ++l) {
        const Real& gl = g[static_cast<std::size_t>(l - 1)];
        if (gl < out.log_dp)
            open[static_cast<std::size_t>(l - 1)] =
                Open{tmN, true, depth_of_sample(gl, out.level_logs)};
    }

    while (t < tN) {
        Real dist(-1);
        for (int l = 1; l < d; ++l)
            for (const Real& th : thresholds) {
                const Real dd = real_abs(g[static_cast<std::size_t>(l - 1)] - th);
                if (dist < 0 || dd < dist) dist = dd;
            }
        Real step = dist * 3 / (4 * K);
        if (step < min_step) step = min_step;
        Real tn = t + step;
        if (tn > tN) tn = tN;
        const std::vector<Real> gn = log_eta_vector(x, flow, tn);
        for (int l = 1; l < d; ++l) {
            const std::size_t i = static_cast<std::size_t>(l - 1);
            const bool was = g[i] < out.log_dp, now = gn[i] < out.log_dp;
            if (!was && now) {
                open[i] = Open{bisect(l, out.log_dp, t, tn, false), false, none};
            } else if (was && !now && open[i]) {
                const Real c = bisect(l, out.log_dp, t, tn, true);
                out.excursions.push_back(
                    {l, open[i]->lo, c, open[i]->lo_clipped, false, open[i]->depth});
                open[i].reset();
            }
            if (open[i]) {
                const int dep = depth_of_sample(gn[i], out.level_logs);
                if (dep < open[i]->depth) open[i]->depth = dep;
            }
        }
        g = gn;
        t = tn;
    }
    for (int l = 1; l < d; ++l) {
        const std::size_t i = static_cast<std::size_t>(l - 1);
        if (open[i])
            out.excursions.push_back({l, open[i]->lo, tN, open[i]->lo_clipped, true, open[i]->depth});
    }

    std::sort(out.excursions.begin(), out.excursions.end(),
              [](const Excursion& a, const Excursion& b) {
                  if (a.l != b.l) return a.l < b.l;
                  return a.lo < b.lo;
              });

    // Merge same-l excursions separated by less than 16 root_tol, then drop
    // the ones that never reach the deepest level.  The merge keeps facing
    // same-l endpoints farther apart than the cut clustering below can reach,
    // which the refinement containment argument relies on; dropped excursions
    // belong to no T set, so their endpoints must not cut any partition.
    std::vector<Excursion> merged;
    const Real gap_tol = 16 * root_tol;
    for (const auto& e : out.excursions) {
        if (!merged.empty() && merged.back().l == e.l && e.lo - merged.back().hi < gap_tol) {
            merged.back().hi = e.hi;
            merged.back().hi_clipped = e.hi_clipped;
            if (e.depth < merged.back().depth) merged.back().depth = e.depth;
        } else {
            merged.push_back(e);
        }
    }
    out.excursions.clear();
    for (const auto& e : merged)
        if (e.depth < none) out.excursions.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// Cut structure: cluster excursion endpoints into global cut times; the open
// pieces between consecutive cuts are the elementary intervals every level's
// E-set is constant on.
// ---------------------------------------------------------------------------

struct Span {
    int l;
    std::size_t lo_id, hi_id;  // EP coverage [lo_id, hi_id)
    int depth;
};

struct CutStructure {
    std::vector<Real> cuts;  // strictly increasing; front = -N, back = N
    std::vector<Span> spans;

    std::size_t ep_count() const { return cuts.size() - 1; }
};

CutStructure build_cuts(const ScanResult& scan, long N, const Real& root_tol) {
    std::vector<Real> vals{Real(-N), Real(N)};
    for (const auto& e : scan.excursions) {
        vals.push_back(e.lo);
        vals.push_back(e.hi);
    }
    std::sort(vals.begin(), vals.end());

    CutStructure out;
    const Real ctol = 2 * root_tol;
    std::size_t i = 0;
    while (i < vals.size()) {
        std::size_t j = i + 1;
        while (j < vals.size() && vals[j] - vals[j - 1] <= ctol) ++j;
        out.cuts.push_back((vals[i] + vals[j - 1]) / 2);
        i = j;
    }
    out.cuts.front() = Real(-N);
    out.cuts.back() = Real(N);

    auto cut_id = [&](const Real& v) -> std::size_t {
        const auto it = std::lower_bound(out.cuts.begin(), out.cuts.end(), v);
        std::size_t idx = static_cast<std::size_t>(it - out.cuts.begin());
        if (idx == out.cuts.size()) return idx - 1;
        if (idx > 0 && v - out.cuts[idx - 1] < out.cuts[idx] - v) return idx - 1;
        return idx;
    };
    for (const auto& e : scan.excursions) {
        const Span s{e.l, cut_id(e.lo), cut_id(e.hi), e.depth};
        if (s.lo_id >= s.hi_id)
            throw PrecisionError("coding: cut resolution exhausted by a short excursion");
        out.spans.push_back(s);
    }
    return out;
}

// E-set bitmask (bit l-1 = dimension l) per elementary piece at one level.
std::vector<unsigned> level_masks(const CutStructure& cs, int m) {
    std::vector<unsigned> mask(cs.ep_count(), 0u);
    for (const auto& s : cs.spans)
        if (s.depth <= m)
            for (std::size_t k = s.lo_id; k < s.hi_id; ++k)
                mask[k] |= (1u << (s.l - 1));
    return mask;
}

// ---------------------------------------------------------------------------
// The d-step finalization induction, combinatorial over elementary pieces.
// ---------------------------------------------------------------------------

struct FinalPiece {
    std::size_t s, e;  // EP range [s, e)
    int deg;
    unsigned jumps_mask;
};

std::vector<FinalPiece> run_induction(const CutStructure& cs, int d) {
    struct Temp {
        std::size_t s, e;
        unsigned eset;
    };
    std::vector<Temp> temps;
    std::vector<FinalPiece> finals;
    const std::size_t K = cs.ep_count();

    const auto mask0 = level_masks(cs, 0);
    std::size_t k = 0;
    while (k < K) {
        std::size_t j = k + 1;
        while (j < K && mask0[j] == mask0[k]) ++j;
        temps.push_back({k, j, mask0[k]});
        k = j;
    }

    for (int step = 1; step <= d && !temps.empty(); ++step) {
        const auto mask = level_masks(cs, step);
        std::vector<Temp> next;
        auto split_runs = [&](std::size_t s, std::size_t e) {
            std::size_t a = s;
            while (a < e) {
                std::size_t b = a + 1;
                while (b < e && mask[b] == mask[a]) ++b;
                next.push_back({a, b, mask[a]});
                a = b;
            }
        };
        for (const auto& U : temps) {
            std::size_t first = U.e, last = U.e;
            for (std::size_t q = U.s; q < U.e; ++q)
                if (mask[q] == U.eset) {
                    if (first == U.e) first = q;
                    last = q;
                }
            if (first == U.e) {
                split_runs(U.s, U.e);  // no equality time: stays temporary
            } else {
                finals.push_back({first, last + 1, step, U.eset});
                split_runs(U.s, first);
                split_runs(last + 1, U.e);
            }
        }
        temps = std::move(next);
    }
    if (!temps.empty()) throw std::logic_error("coding: induction left temporary intervals");
    std::sort(finals.begin(), finals.end(),
              [](const FinalPiece& a, const FinalPiece& b) { return a.s < b.s; });
    return finals;
}

std::vector<int> identity_perm(int d) {
    std::vector<int> id(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) id[static_cast<std::size_t>(i)] = i;
    return id;
}

Real abs_log_delta(const ToleranceConfig& cfg) {
    return -real_log(at_working_precision(cfg.delta));
}

}  // namespace

std::vector<ThresholdIntervals> threshold_intervals(const Lattice& x, const DiagonalFlow& flow,
                                                    const ToleranceConfig& cfg, long N) {
    if (x.d != flow.d) throw std::invalid_argument("threshold_intervals: dimension mismatch");
    cfg.validate(x.d);
    if (!(abs_log_delta(cfg) < Real(N)))
        throw std::invalid_argument("threshold_intervals: need |log delta| < N");

    const ScanResult scan = scan_trajectory(x, flow, cfg, N);
    std::vector<ThresholdIntervals> out;
    for (std::size_t m = 0; m < scan.level_logs.size(); ++m) {
        ThresholdIntervals ti;
        ti.level = real_exp(scan.level_logs[m]);
        ti.per_dim.assign(static_cast<std::size_t>(x.d - 1), {});
        for (const auto& e : scan.excursions)
            if (e.depth <= static_cast<int>(m))
                ti.per_dim[static_cast<std::size_t>(e.l - 1)].push_back(
                    {e.lo, e.hi, e.lo_clipped, e.hi_clipped});
        out.push_back(std::move(ti));
    }
    return out;
}

CodedPartition build_partition(const Lattice& x, const DiagonalFlow& flow,
                               const ToleranceConfig& cfg, long N) {
    if (x.d != flow.d) throw std::invalid_argument("build_partition: dimension mismatch");
    cfg.validate(x.d);
    if (!(abs_log_delta(cfg) < Real(N)))
        throw std::invalid_argument("build_partition: need |log delta| < N");

    const ScanResult scan = scan_trajectory(x, flow, cfg, N);
    const CutStructure cs = build_cuts(scan, N, at_working_precision(cfg.root_tol));
    const auto finals = run_induction(cs, x.d);

    CodedPartition out;
    out.delta = at_working_precision(cfg.delta);
    out.delta_prime = at_working_precision(cfg.delta_prime);
    out.r = at_working_precision(cfg.r);
    out.N = N;
    out.d = x.d;
    std::size_t expect = 0;
    for (const auto& f : finals) {
        if (f.s != expect) throw std::logic_error("coding: partition gap");
        expect = f.e;
        std::vector<int> js;
        for (int l = 1; l < x.d; ++l)
            if (f.jumps_mask & (1u << (l - 1))) js.push_back(l);
        out.J.push_back({cs.cuts[f.s], cs.cuts[f.e], f.deg, ParabolicSubgroup(x.d, js),
                         f.s == 0 || f.e == cs.ep_count()});
    }
    if (expect != cs.ep_count()) throw std::logic_error("coding: partition gap at window end");
    return out;
}

CodedPartition refine_orientations(const CodedPartition& partition, const Lattice& x,
                                   const DiagonalFlow& flow, const ToleranceConfig& cfg) {
    if (x.d != flow.d || partition.d != x.d)
        throw std::invalid_argument("refine_orientations: dimension mismatch");
    if (partition.J.empty()) throw std::invalid_argument("refine_orientations: empty partition");

    CodedPartition out = partition;
    out.J_prime.clear();
    const Real root_tol = at_working_precision(cfg.root_tol);

    for (std::size_t ui = 0; ui < out.J.size(); ++ui) {
        const CodedInterval& U = out.J[ui];
        if (U.par.is_full()) {
            out.J_prime.push_back({U.lo, U.hi, ui, coset_of(flow, U.par, identity_perm(x.d))});
            continue;
        }

        // The flag subspaces are constant on U (eta_l stays below delta_prime
        // there), so one midpoint witness serves the whole interval.
        const LatticeSnapshot y = LatticeSnapshot::make(x, flow, (U.lo + U.hi) / 2);
        std::vector<GrassmannIntervals> windows;
        for (int l : U.par.jumps) {
            const UniqueSubspace us = unique_small_subspace(y, l, cfg);
            windows.push_back(grassmann_intervals(ambient_subspace(x, us.V), flow, cfg, U.lo, U.hi));
        }

        std::vector<Real> vals{U.lo, U.hi};
        for (const auto& w : windows)
            for (const auto& iv : w.intervals) {
                vals.push_back(iv.lo);
                vals.push_back(iv.hi);
            }
        std::sort(vals.begin(), vals.end());
        std::vector<Real> bounds;
        const Real ctol = 2 * root_tol;
        std::size_t i = 0;
        while (i < vals.size()) {
            std::size_t j = i + 1;
            while (j < vals.size() && vals[j] - vals[j - 1] <= ctol) ++j;
            bounds.push_back((vals[i] + vals[j - 1]) / 2);
            i = j;
        }
        bounds.front() = U.lo;
        bounds.back() = U.hi;
        if (bounds.size() < 2) bounds = {U.lo, U.hi};

        std::vector<RefinedInterval> pieces;
        for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
            const Real m = (bounds[p] + bounds[p + 1]) / 2;
            std::optional<Orientation> weyl;
            std::vector<QVec> prefixes;
            bool all = true;
            for (const auto& w : windows) {
                const DominanceInterval* hit = nullptr;
                for (const auto& iv : w.intervals)
                    if (iv.lo <= m && m <= iv.hi) {
                        hit = &iv;
                        break;
                    }
                if (!hit) {
                    all = false;
                    break;
                }
                prefixes.push_back(hit->exponents);
            }
            if (all) weyl = coset_from_prefix_multisets(flow, U.par, prefixes);
            if (!pieces.empty() && pieces.back().weyl == weyl)
                pieces.back().hi = bounds[p + 1];
            else
                pieces.push_back({bounds[p], bounds[p + 1], ui, weyl});
        }
        for (auto& pc : pieces) out.J_prime.push_back(pc);
    }
    return out;
}

Coding coding(const Lattice& x, const DiagonalFlow& flow, const ToleranceConfig& cfg, long N) {
    const CodedPartition part = refine_orientations(build_partition(x, flow, cfg, N), x, flow, cfg);
    Coding out;
    out.N = N;
    out.values.reserve(static_cast<std::size_t>(2 * N + 1));
    long n = -N;
    for (std::size_t p = 0; p < part.J_prime.size(); ++p) {
        const RefinedInterval& piece = part.J_prime[p];
        const bool last = (p + 1 == part.J_prime.size());
        while (n <= N && (last || Real(n) < piece.hi)) {
            out.values.emplace_back(part.J[piece.parent].par, piece.weyl);
            ++n;
        }
    }
    if (n != N + 1) throw std::logic_error("coding: integer assignment incomplete");
    return out;
}

RVec height(const LatticeSnapshot& x) {
    const MinimaResult m = successive_minima(x);
    RVec h(static_cast<std::size_t>(x.d()));
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = -real_log(m.lambda[i]);
    return h;
}

Real err(const LatticeSnapshot& x, const ParabolicSubgroup& P) {
    if (P.d != x.d()) throw std::invalid_argument("err: dimension mismatch");
    const RVec h = height(x);
    RVec diff = h;
    const auto bounds = P.boundaries();
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
        const int lo = bounds[b], hi = bounds[b + 1];
        Real avg(0);
        for (int i = lo; i < hi; ++i) avg += h[static_cast<std::size_t>(i)];
        avg /= (hi - lo);
        for (int i = lo; i < hi; ++i) diff[static_cast<std::size_t>(i)] -= avg;
    }
    return rvec_norm(diff);
}

BudgetReport verify_budgets(const CodedPartition& partition, const Coding& coding,
                            const Lattice& x, const DiagonalFlow& flow,
                            const ToleranceConfig& cfg) {
    if (partition.J_prime.empty())
        throw std::invalid_argument("verify_budgets: run refine_orientations first");
    if (partition.N != coding.N) throw std::invalid_argument("verify_budgets: window mismatch");
    if (x.d != flow.d || partition.d != x.d)
        throw std::invalid_argument("verify_budgets: dimension mismatch");

    BudgetReport rep;
    const long N = partition.N;
    const Real absld = abs_log_delta(cfg);
    const Real r = at_working_precision(cfg.r);
    const Real factor = pow(r, x.d - 1) * absld / Real(N);

    rep.j_count = static_cast<long>(partition.J.size());
    rep.j_prime_count = static_cast<long>(partition.J_prime.size());
    rep.ratio_interval_count = Real(rep.j_prime_count) * factor;

    Real errsum(0);
    rep.clipped_intervals = 0;
    for (const auto& U : partition.J) {
        errsum += err(LatticeSnapshot::make(x, flow, U.lo), U.par);
        errsum += err(LatticeSnapshot::make(x, flow, U.hi), U.par);
        if (U.touches_window) ++rep.clipped_intervals;
    }
    rep.ratio_err_endpoints = errsum / (r * Real(N));

    std::map<Orientation, long> counts;
    long unoriented = 0;
    for (const auto& v : coding.values) {
        if (v.second)
            ++counts[*v.second];
        else
            ++unoriented;
    }
    QVec tele(static_cast<std::size_t>(x.d), Rat(0));
    for (const auto& [o, c] : counts) {
        const QVec pi = project(flow, o);
        for (std::size_t i = 0; i < tele.size(); ++i) tele[i] += Rat(c) * pi[i];
    }
    Rat norm2(0);
    for (const auto& q : tele) norm2 += q * q;
    rep.telescope_norm = real_sqrt(to_real(norm2));

    const RVec hN = height(LatticeSnapshot::make(x, flow, Real(N)));
    const RVec hmN = height(LatticeSnapshot::make(x, flow, Real(-N)));
    RVec drift(hN.size());
    for (std::size_t i = 0; i < hN.size(); ++i) drift[i] = hN[i] - hmN[i];
    rep.height_drift_norm = rvec_norm(drift);
    rep.ratio_height_drift = rep.telescope_norm / (r * Real(N) + rep.height_drift_norm);

    rep.unoriented_count = unoriented;
    rep.ratio_unoriented = Real(unoriented) * factor;
    rep.small_n_warning = Real(N) < 2 * absld;
    return rep;
}

long Occupancy::total() const {
    long t = 0;
    for (const auto& [key, c] : counts) t += c;
    return t;
}

long Occupancy::unoriented() const {
    long t = 0;
    for (const auto& [key, c] : counts)
        if (!key.w) t += c;
    return t;
}

Occupancy occupancy(const Lattice& x, const DiagonalFlow& flow, const ToleranceConfig& cfg,
                    long N) {
    if (x.d != flow.d) throw std::invalid_argument("occupancy: dimension mismatch");
    Occupancy out;
    out.flow = flow;
    out.N = N;
    for (long n = -N; n <= N; ++n) {
        const ClassifyResult res = classify(LatticeSnapshot::make(x, flow, Real(n)), flow, cfg);
        ++out.counts[RegionKey{res.P, res.Q, res.orientation}];
    }
    return out;
}

bool chi_aggregate_check(const Coding& coding, const Occupancy& occ,
                         const std::function<Rat(const Orientation&)>& chi) {
    if (coding.N != occ.N) throw std::invalid_argument("chi_aggregate_check: window mismatch");
    const DiagonalFlow& flow = occ.flow;

    std::map<Orientation, Rat> cache;
    auto chi_of = [&](const Orientation& o) -> const Rat& {
        auto it = cache.find(o);
        if (it == cache.end()) it = cache.emplace(o, chi(o)).first;
        return it->second;
    };

    bool any = false;
    Rat gmax(0);
    for (const auto& P : enumerate_parabolics(flow.d))
        for (const auto& o : weyl_double_cosets(flow, P)) {
            const Rat v = chi_of(o);
            if (!any || v > gmax) gmax = v;
            any = true;
        }
    if (!any || gmax < 0)
        throw std::invalid_argument("chi_aggregate_check: chi must have a non-negative maximum");

    Rat lhs(0);
    for (const auto& v : coding.values)
        if (v.second) lhs += chi_of(*v.second);

    Rat rhs(0);
    for (const auto& [key, count] : occ.counts) {
        if (!key.w) {
            rhs += Rat(count) * gmax;
            continue;
        }
        bool first = true;
        Rat best(0);
        for (const auto& H : parabolic_interval(key.Q, key.P)) {
            const Rat v = chi_of(coset_of(flow, H, key.w->rep));
            if (first || v > best) best = v;
            first = false;
        }
        rhs += Rat(count) * best;
    }
    return lhs <= rhs;
}

EmpiricalBound empirical_bound(const Lattice& x, const DiagonalFlow& flow,
                               const ToleranceConfig& cfg, const LinearFunctional& phi, long N) {
    if (phi.dim() != flow.d)
        throw std::invalid_argument("empirical_bound: functional dimension mismatch");
    EmpiricalBound out;
    out.occ = occupancy(x, flow, cfg, N);

    Rat gmax(0);
    bool first = true;
    for (const auto& P : enumerate_parabolics(flow.d))
        for (const auto& o : weyl_double_cosets(flow, P)) {
            const Rat v = h_phi(flow, o, phi);
            if (first || v > gmax) gmax = v;
            first = false;
        }

    Rat total(0), sum(0), unor(0);
    for (const auto& [key, count] : out.occ.counts) {
        total += Rat(count);
        if (!key.w) {
            unor += Rat(count);
            sum += Rat(count) * gmax;
            continue;
        }
        bool f2 = true;
        Rat best(0);
        for (const auto& H : parabolic_interval(key.Q, key.P)) {
            const Rat v = h_phi(flow, coset_of(flow, H, key.w->rep), phi);
            if (f2 || v > best) best = v;
            f2 = false;
        }
        sum += Rat(count) * best;
    }
    out.value = sum / total;
    out.unoriented_fraction = unor / total;
    out.r_term = at_working_precision(cfg.r);
    out.inv_log_delta_prime = Real(1) / (-real_log(at_working_precision(cfg.delta_prime)));
    return out;
}

ToleranceConfig sweep_schedule(const DiagonalFlow& flow, const Real& delta) {
    const Real dl = at_working_precision(delta);
    if (!(dl > 0 && dl < 1)) throw std::invalid_argument("sweep_schedule: delta must be in (0,1)");
    const Real absld = -real_log(dl);
    const Real delta_prime = real_exp(-real_sqrt(absld));
    ToleranceConfig cfg = default_tolerances(flow, dl, delta_prime);
    cfg.r = pow(real_sqrt(absld) / absld, Real(1) / (flow.d + 2));
    cfg.validate(flow.d);
    return cfg;
}

}  // namespace cusplab
