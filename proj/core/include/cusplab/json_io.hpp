#pragma once
// JSON serialization of the library's value types and reports.
//
// Conventions (documented with schemas under docs/schemas/):
//   - rationals are "p/q" strings ("p" when the denominator is 1), exact;
//   - reals are decimal strings carrying enough digits to reparse to the
//     identical value at the same working precision;
//   - parabolic subgroups are their sorted jump arrays ([] = full group);
//   - permutations are 0-based image arrays.
//
// Emission is deterministic: key order is fixed, no timestamps.  Every parser
// accepts exactly what the matching emitter produces (plus whitespace) and
// throws std::invalid_argument on malformed input.

#include <string>
#include <vector>

#include "cusplab/bounds.hpp"
#include "cusplab/classify.hpp"
#include "cusplab/coding.hpp"
#include "cusplab/flow.hpp"
#include "cusplab/lattice.hpp"
#include "cusplab/tolerance.hpp"
#include "cusplab/weyl.hpp"

namespace cusplab::io {

/// Decimal rendering with round-trip digits for the value's own precision.
std::string real_to_decimal(const Real& x);
/// Parse at the configured working precision.
Real real_from_decimal(const std::string& s);

/// {"d": 2, "alpha": ["1/2", "-1/2"]}
std::string flow_to_json(const DiagonalFlow& flow);
DiagonalFlow flow_from_json(const std::string& text);

/// {"d": 2, "basis": [["1/2048", "1/2048"], ["0", "2048"]]} -- columns.
std::string lattice_to_json(const Lattice& x);
Lattice lattice_from_json(const std::string& text);

/// {"jumps": [1], "rep": [0, 1]}
std::string orientation_to_json(const Orientation& o);
Orientation orientation_from_json(const DiagonalFlow& flow, const std::string& text);

/// {"delta": dec, "delta_prime": dec, "r": dec, "eta0": dec, "eps0": dec,
///  "root_tol": dec, "precision": int}
std::string tolerance_to_json(const ToleranceConfig& cfg);
/// Parses and re-validates for dimension d.
ToleranceConfig tolerance_from_json(const std::string& text, int d);

/// One classification row:
/// {"P": [jumps], "Q": [jumps], "orientation": {"rep": [...]} | null,
///  "minima": [dec], "eta": [dec], "height": [dec], "compact": bool}
std::string classification_to_json(const ClassifyResult& res, const MinimaResult& minima);

struct ClassificationRow {
    ClassifyResult result;
    RVec minima;
    RVec eta;
    RVec height;
};
ClassificationRow classification_from_json(const DiagonalFlow& flow, const std::string& text);

/// Run-length coding: [{"start": n, "end": n, "P": [jumps], "w": [rep] | null}]
/// with inclusive integer bounds, contiguous and sorted.
std::string coding_to_json(const Coding& c);
Coding coding_from_json(const DiagonalFlow& flow, const std::string& text);

/// Pinned budget constants; each emitted ratio carries a pass flag
/// ratio <= pin.  Calibrated once over the fixture corpus.
struct BudgetPins {
    double interval_count = 2.5;
    double err_endpoints = 1.0;
    double height_drift = 0.25;
    double unoriented = 1.2;
};

/// {"counts": {...}, "ratios": {...}, "pins": {...}, "pass": {...},
///  "telescope_norm": dec, "height_drift_norm": dec,
///  "small_n_warning": bool}
std::string budget_to_json(const BudgetReport& rep, const BudgetPins& pins = {});
BudgetReport budget_from_json(const std::string& text);

/// Bound table, one row per coset:
/// [{"P": [jumps], "rep": [...], "h": "p/q", "pi": ["p/q"...],
///   "h_phi": "p/q", "h_dec": double, "h_phi_dec": double}]
std::string bound_rows_to_json(const DiagonalFlow& flow, const std::vector<BoundRow>& rows);
std::vector<BoundRow> bound_rows_from_json(const DiagonalFlow& flow, const std::string& text);

}  // namespace cusplab::io
