#include "cusplab/real.hpp"

#include <atomic>
#include <cmath>

namespace cusplab {

namespace {
std::atomic<unsigned> g_configured_bits{128};
thread_local unsigned t_bits = 0;

unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 2;
}
}  // namespace

void set_precision_bits(unsigned bits) {
    if (bits < 24) bits = 24;
    if (bits > 8192) bits = 8192;
    g_configured_bits.store(bits);
    Real::default_precision(bits_to_digits10(bits));
    t_bits = bits;
}

unsigned precision_bits() {
    if (t_bits == 0) {
        // First touch on this thread: adopt the configured process-wide value.
        unsigned bits = g_configured_bits.load();
        Real::default_precision(bits_to_digits10(bits));
        t_bits = bits;
    }
    return t_bits;
}

unsigned configured_precision_bits() { return g_configured_bits.load(); }

Real to_real(const Rat& q) {
    precision_bits();
    return Real(q.get_mpq_t());
}

Real at_working_precision(const Real& x) {
    const unsigned digits = bits_to_digits10(precision_bits());
    Real y = x;
    if (y.precision() != digits) y.precision(digits);
    return y;
}

Real to_real(const Int& n) {
    precision_bits();
    return Real(n.get_mpz_t());
}

Int round_to_int(const Real& x) {
    boost::multiprecision::mpfr_float_backend<0> b = x.backend();
    mpfr_rint(b.data(), b.data(), MPFR_RNDN);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), b.data(), MPFR_RNDN);
    return z;
}

double to_double(const Real& x) { return x.convert_to<double>(); }

bool approx_equal(const Real& a, const Real& b, const Real& tol) {
    Real m(1);
    if (real_abs(a) > m) m = real_abs(a);
    if (real_abs(b) > m) m = real_abs(b);
    return real_abs(a - b) <= tol * m;
}

}  // namespace cusplab
