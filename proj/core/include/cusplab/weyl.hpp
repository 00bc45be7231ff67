#pragma once

#include <map>
#include <vector>

#include "cusplab/flow.hpp"

namespace cusplab {

/// Standard parabolic subgroup of SL_d, encoded by its jump set
/// (the places 1 <= j <= d-1 where the block structure breaks).
/// Empty jumps = the full group G; all jumps = the Borel B.
struct ParabolicSubgroup {
    int d = 0;
    std::vector<int> jumps;  // strictly increasing, values in [1, d-1]

    ParabolicSubgroup() = default;
    ParabolicSubgroup(int dim, std::vector<int> js);  // validates + sorts

    static ParabolicSubgroup full(int d) { return ParabolicSubgroup(d, {}); }
    static ParabolicSubgroup borel(int d);

    bool is_full() const { return jumps.empty(); }
    int block_count() const { return static_cast<int>(jumps.size()) + 1; }
    /// Block boundaries 0 = m_0 < m_1 < ... < m_k = d.
    std::vector<int> boundaries() const;
    /// Block index of 0-based slot i.
    int block_of(int i) const;
    std::vector<int> block_sizes() const;

    bool operator==(const ParabolicSubgroup& o) const { return d == o.d && jumps == o.jumps; }
    bool operator<(const ParabolicSubgroup& o) const { return jumps < o.jumps; }
};

/// Q <= P as subgroups, i.e. jumps(Q) contains jumps(P).
bool is_subgroup(const ParabolicSubgroup& Q, const ParabolicSubgroup& P);

/// All 2^(d-1) standard parabolics, deterministic order (by jump bitmask).
std::vector<ParabolicSubgroup> enumerate_parabolics(int d);

/// All parabolics H with Q <= H <= P, deterministic order.
std::vector<ParabolicSubgroup> parabolic_interval(const ParabolicSubgroup& Q,
                                                  const ParabolicSubgroup& P);

/// A Weyl double-coset class [w]_P: two permutations are identified when
/// every block carries the same multiset of exponents. `rep` is the
/// canonical representative — the lexicographically smallest permutation
/// (0-based slots into alpha).
struct Orientation {
    ParabolicSubgroup P;
    std::vector<int> rep;

    bool operator==(const Orientation& o) const { return P == o.P && rep == o.rep; }
    bool operator<(const Orientation& o) const {
        if (P.jumps != o.P.jumps) return P.jumps < o.P.jumps;
        return rep < o.rep;
    }

    /// Multiset of exponents in block b (sorted ascending).
    QVec block_multiset(const DiagonalFlow& flow, int b) const;
};

/// Canonicalize an arbitrary permutation into its coset class for P.
Orientation coset_of(const DiagonalFlow& flow, const ParabolicSubgroup& P,
                     const std::vector<int>& perm);

/// Build the coset whose flag of prefix-multisets at the jumps of P matches
/// `prefix_multisets` (one multiset per jump, each given sorted, strictly
/// increasing in inclusion). Returns nothing when inconsistent with alpha.
std::optional<Orientation> coset_from_prefix_multisets(
    const DiagonalFlow& flow, const ParabolicSubgroup& P,
    const std::vector<QVec>& prefix_multisets);

/// All distinct double cosets W_{P,a}, deterministic (rep-lex) order.
std::vector<Orientation> weyl_double_cosets(const DiagonalFlow& flow,
                                            const ParabolicSubgroup& P);

/// Entropy h(P, a^w): positive parts of exponent differences summed over the
/// block-upper support of P (both orders inside diagonal blocks).
Rat entropy(const DiagonalFlow& flow, const ParabolicSubgroup& P,
            const std::vector<int>& perm);
Rat entropy(const DiagonalFlow& flow, const Orientation& o);

/// Block-averaged exponent vector pi_P(alpha^w) (length d, constant on blocks).
QVec project(const DiagonalFlow& flow, const ParabolicSubgroup& P,
             const std::vector<int>& perm);
QVec project(const DiagonalFlow& flow, const Orientation& o);

/// Multiset order by sums of exponents (products of eigenvalues).
bool multiset_le(const QVec& E, const QVec& F);

/// The corrected entropy (h - phi)([w]_P) = h(P, a^w) - phi(pi_P(alpha^w)).
Rat h_phi(const DiagonalFlow& flow, const Orientation& o, const LinearFunctional& phi);

}  // namespace cusplab
