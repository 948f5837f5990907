#include "xrip/gf2.hpp"

#include <array>
#include <stdexcept>

#include "xrip/errors.hpp"
#include "xrip/rng.hpp"

namespace xrip {

namespace {

int poly_degree(std::uint64_t p) {
    if (p == 0) return -1;
    return 63 - __builtin_clzll(p);
}

// Remainder of a mod b over GF(2)[x].
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
    const int db = poly_degree(b);
    int da = poly_degree(a);
    while (da >= db) {
        a ^= b << (da - db);
        da = poly_degree(a);
    }
    return a;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const std::uint64_t r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

// (a * b) mod f over GF(2)[x], deg f <= 63, operands already reduced.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
    const int m = poly_degree(f);
    const std::uint64_t top = std::uint64_t(1) << m;
    std::uint64_t r = 0;
    while (b != 0) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= f;
    }
    return r;
}

// x^(2^k) mod f by repeated squaring.
std::uint64_t frobenius_power(int k, std::uint64_t f) {
    std::uint64_t r = 2;  // the element x
    for (int i = 0; i < k; ++i) r = mulmod(r, r, f);
    return r;
}

// Rabin's irreducibility test for f of degree m: x^(2^m) == x (mod f) and
// gcd(x^(2^(m/q)) - x, f) = 1 for every prime q dividing m.
bool is_irreducible(std::uint64_t f) {
    const int m = poly_degree(f);
    if (m < 1) return false;
    if (frobenius_power(m, f) != 2) return false;
    int n = m;
    for (int q = 2; q * q <= n; ++q) {
        if (n % q != 0) continue;
        if (poly_gcd(frobenius_power(m / q, f) ^ 2, f) != 1) return false;
        while (n % q == 0) n /= q;
    }
    if (n > 1 && n < m) {
        if (poly_gcd(frobenius_power(m / n, f) ^ 2, f) != 1) return false;
    }
    if (n == m && m > 1) {  // m prime
        if (poly_gcd(frobenius_power(1, f) ^ 2, f) != 1) return false;
    }
    return true;
}

std::uint64_t find_irreducible(int m) {
    if (m == 1) return 0b10;  // x
    const std::uint64_t top = std::uint64_t(1) << m;
    for (std::uint64_t low = 1; low < top; low += 2) {
        if (is_irreducible(top | low)) return top | low;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
}

}  // namespace

BinaryField::BinaryField(int m) : m_(m) {
    if (m < 1 || m > 63) {
        throw std::domain_error("BinaryField: degree must be in [1, 63]");
    }
    poly_ = find_irreducible(m);
}

std::uint64_t BinaryField::mul(std::uint64_t a, std::uint64_t b) const {
    if (m_ == 1) return a & b;
    return mulmod(a, b, poly_);
}

std::uint64_t BinaryField::eval_poly(const std::vector<std::uint64_t>& coeffs,
                                     std::uint64_t x) const {
    std::uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = mul(acc, x) ^ *it;
    }
    return acc;
}

namespace {

// Balanced non-linear sign bit of a field element:
// b0 XOR (b1 AND b2) XOR (b0 AND b2 AND b3). Any linear projection is affine
// in the polynomial coefficients, which would leave even degree-deficient
// families l-wise independent and hide exactly the failures that
// verify_kwise_family must expose; the cubic term breaks the remaining
// three-way cancellations of purely quadratic maps.
std::uint64_t sign_bit(std::uint64_t y) {
    return (y ^ ((y >> 1) & (y >> 2)) ^ (y & (y >> 2) & (y >> 3))) & 1;
}

}  // namespace

std::vector<int> sample_kwise_signs(std::size_t l, std::size_t n, SeedSpec seed) {
    if (l < 1) throw std::domain_error("sample_kwise_signs: l must be >= 1");
    if (n == 0) return {};
    int m = 1;
    while ((std::uint64_t(1) << m) < n && m < 63) ++m;
    if ((std::uint64_t(1) << m) < n) {
        throw std::domain_error("sample_kwise_signs: n exceeds 2^63");
    }
    BinaryField field(m);
    const std::uint64_t mask = field.order() - 1;

    CounterRng rng(seed);
    std::vector<std::uint64_t> coeffs(l);
    for (std::size_t i = 0; i < l; ++i) coeffs[i] = rng.bits(i) & mask;

    std::vector<int> signs(n);
    for (std::size_t i = 0; i < n; ++i) {
        signs[i] = sign_bit(field.eval_poly(coeffs, i)) ? -1 : 1;
    }
    return signs;
}

bool verify_kwise_family(int family_degree, std::size_t l, std::size_t n, int field_bits) {
    if (family_degree < 0 || l < 1 || n < l) {
        throw std::domain_error("verify_kwise_family: invalid parameters");
    }
    if (field_bits < 1 || field_bits > 16) {
        throw std::domain_error("verify_kwise_family: field_bits must be in [1, 16]");
    }
    const std::uint64_t q = std::uint64_t(1) << field_bits;
    if (n > q) {
        throw std::domain_error("verify_kwise_family: n exceeds field size");
    }
    const int ncoef = family_degree + 1;
    if (ncoef * field_bits > 26) {
        throw ResourceError("verify_kwise_family: coefficient enumeration too large");
    }
    const std::uint64_t tuples = std::uint64_t(1) << (ncoef * field_bits);

    // Sign vectors of every member of the family, one bit per position.
    if (n > 63) throw ResourceError("verify_kwise_family: n too large to enumerate");
    BinaryField field(field_bits);
    std::vector<std::uint64_t> sign_masks(tuples);
    std::vector<std::uint64_t> coeffs(ncoef);
    for (std::uint64_t t = 0; t < tuples; ++t) {
        for (int c = 0; c < ncoef; ++c) {
            coeffs[c] = (t >> (c * field_bits)) & (q - 1);
        }
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < n; ++i) {
            mask |= sign_bit(field.eval_poly(coeffs, i)) << i;
        }
        sign_masks[t] = mask;
    }

    // Walk every size-l position subset and demand exactly uniform joint counts.
    std::vector<std::size_t> subset(l);
    for (std::size_t i = 0; i < l; ++i) subset[i] = i;
    const std::uint64_t patterns = std::uint64_t(1) << l;
    if (patterns > tuples) return false;  // cannot be uniform
    const std::uint64_t expected = tuples / patterns;
    std::vector<std::uint64_t> counts(patterns);

    while (true) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint64_t t = 0; t < tuples; ++t) {
            std::uint64_t pat = 0;
            for (std::size_t i = 0; i < l; ++i) {
                pat |= ((sign_masks[t] >> subset[i]) & 1) << i;
            }
            ++counts[pat];
        }
        for (std::uint64_t c : counts) {
            if (c != expected) return false;
        }
        // next lexicographic subset
        std::size_t i = l;
        while (i > 0 && subset[i - 1] == n - l + i - 1) --i;
        if (i == 0) break;
        ++subset[i - 1];
        for (std::size_t j = i; j < l; ++j) subset[j] = subset[j - 1] + 1;
    }
    return true;
}

}  // namespace xrip
