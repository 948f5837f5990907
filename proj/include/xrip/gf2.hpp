#pragma once

#include <cstdint>
#include <vector>

namespace xrip {

// Binary extension field GF(2^m), 1 <= m <= 63. The reduction polynomial is
// found at construction by scanning for the lexicographically smallest
// irreducible polynomial of degree m (Rabin's test). Elements are bit masks
// of polynomial coefficients. For m <= 16 multiplication goes through
// log/antilog tables.
class BinaryField {
  public:
    explicit BinaryField(int m);

    int degree() const { return m_; }
    std::uint64_t order() const { return std::uint64_t(1) << m_; }
    std::uint64_t modulus() const { return poly_; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    static std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a ^ b; }

    // Horner evaluation of sum coeffs[i] * x^i.
    std::uint64_t eval_poly(const std::vector<std::uint64_t>& coeffs, std::uint64_t x) const;

  private:
    std::uint64_t mul_slow(std::uint64_t a, std::uint64_t b) const;

    int m_;
    std::uint64_t poly_;  // reduction polynomial including the x^m term
    std::vector<std::uint16_t> log_, exp_;
};

// n signs in {-1,+1} that are exactly l-wise independent: a uniformly random
// polynomial of degree l-1 over GF(2^m) with 2^m >= max(n, 2) is evaluated at
// the field elements 0..n-1 and a balanced bit function of the output picks
// the sign. Uses l*m random bits. Throws std::domain_error for l < 1 or n too large.
std::vector<int> sample_kwise_signs(std::size_t l, std::size_t n, struct SeedSpec seed);

// Exhaustively checks whether the degree-(family_degree) polynomial family
// over GF(2^field_bits) is l-wise independent on positions 0..n-1: for every
// size-l subset the joint sign distribution over all coefficient tuples must
// be exactly uniform. field_bits <= 16 and the full enumeration must fit the
// budget (2^(field_bits*(family_degree+1)) tuples), else ResourceError.
bool verify_kwise_family(int family_degree, std::size_t l, std::size_t n, int field_bits);

// verify_kwise(l, n, b) checks the family actually used by
// sample_kwise_signs for degree l-1.
inline bool verify_kwise(std::size_t l, std::size_t n, int field_bits) {
    return verify_kwise_family(static_cast<int>(l) - 1, l, n, field_bits);
}

}  // namespace xrip
