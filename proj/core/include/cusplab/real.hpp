#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include "cusplab/rational.hpp"

namespace cusplab {

/// Working real type: MPFR with runtime-selectable precision (default 128 bits).
/// Expression templates are off so values behave like plain scalars.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                            boost::multiprecision::et_off>;

/// Set the working precision for the calling thread. Every thread that does
/// numeric work (e.g. sweep workers) must call this before touching Real.
void set_precision_bits(unsigned bits);

/// Precision currently in force for this thread, in bits.
unsigned precision_bits();

/// Precision configured at process level (what new threads should adopt).
unsigned configured_precision_bits();

Real to_real(const Rat& q);
Real to_real(const Int& n);

/// Copy of x carried at the working precision.  MPFR values remember the
/// precision they were created with and propagate it through arithmetic, so
/// externally supplied inputs (often built before the precision was adopted)
/// are renormalized at every library entry point.
Real at_working_precision(const Real& x);

inline Real real_exp(const Real& x) { return exp(x); }
inline Real real_log(const Real& x) { return log(x); }
inline Real real_sqrt(const Real& x) { return sqrt(x); }
inline Real real_abs(const Real& x) { return abs(x); }

/// Nearest integer as an exact Int (used for size reduction / Babai steps).
Int round_to_int(const Real& x);

double to_double(const Real& x);

/// Relative comparison guard: true when |a-b| <= tol*max(1,|a|,|b|).
bool approx_equal(const Real& a, const Real& b, const Real& tol);

}  // namespace cusplab
