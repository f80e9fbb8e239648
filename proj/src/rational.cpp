#include "firetree/rational.hpp"

namespace firetree {

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // decimal: shift the point out and divide by the matching power of 10
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw std::invalid_argument("bad rational literal: " + s);
        BigInt num;
        if (num.set_str(digits, 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        Rat r(num, den);
        r.canonicalize();
        return r;
    }
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    return r;
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

long long rat_floor(const Rat& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("rat_floor overflow");
    return q.get_si();
}

long long rat_ceil(const Rat& r) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("rat_ceil overflow");
    return q.get_si();
}

Rat rat_pow(const Rat& base, unsigned long e) {
    Rat out;
    mpz_pow_ui(out.get_num().get_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(out.get_den().get_mpz_t(), base.get_den().get_mpz_t(), e);
    out.canonicalize();
    return out;
}

int ilog2_floor(unsigned long m) {
    if (m == 0) throw std::invalid_argument("ilog2_floor(0)");
    int l = 0;
    while (m >>= 1) ++l;
    return l;
}

int ilog_iter_floor(unsigned long m, int k) {
    if (k < 0) throw std::invalid_argument("negative log iteration count");
    long long v = static_cast<long long>(m);
    for (int i = 0; i < k; ++i) {
        if (v < 1) return 0;  // log of something <= 0: clamp
        v = ilog2_floor(static_cast<unsigned long>(v));
    }
    return v < 0 ? 0 : static_cast<int>(v);
}

bool le_log2(const Rat& b, unsigned long m) {
    if (sgn(b) < 0) return m >= 1;
    if (m == 0) return false;
    // b = p/q <= log2(m)  <=>  2^p <= m^q   (both sides exact integers)
    const BigInt& p = b.get_num();
    const BigInt& q = b.get_den();
    if (!p.fits_ulong_p() || !q.fits_ulong_p())
        throw std::overflow_error("le_log2: rational too large");
    BigInt lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), 2, p.get_ui());
    mpz_ui_pow_ui(rhs.get_mpz_t(), m, q.get_ui());
    return lhs <= rhs;
}

bool lt_log2(const Rat& b, unsigned long m) {
    if (sgn(b) < 0) return m >= 1;
    if (m == 0) return false;
    const BigInt& p = b.get_num();
    const BigInt& q = b.get_den();
    if (!p.fits_ulong_p() || !q.fits_ulong_p())
        throw std::overflow_error("lt_log2: rational too large");
    BigInt lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), 2, p.get_ui());
    mpz_ui_pow_ui(rhs.get_mpz_t(), m, q.get_ui());
    return lhs < rhs;
}

}  // namespace firetree
