#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "xrip/matrix.hpp"

namespace xrip {

// Number of ell-subsets of [d]; saturates at a cap guard rather than
// overflowing. Throws std::domain_error for ell > d.
std::uint64_t binomial(std::uint64_t d, std::uint64_t ell);

// Lexicographic combinadic bijection between strictly increasing 1-based
// member tuples of length ell in [1, d] and ranks in [0, C(d, ell)).
std::uint64_t rank_subset(Eigen::Index d, const std::vector<Eigen::Index>& members);
std::vector<Eigen::Index> unrank_subset(Eigen::Index d, Eigen::Index ell, std::uint64_t rank);

// Entrywise product of the selected (1-based, distinct) columns of M.
Vector hadamard_column(const Matrix& M, const std::vector<Eigen::Index>& members);

// Materialized p x C(d, ell) column Hadamard power; column r is the
// ell-subset of rank r. Throws ResourceError above the column cap.
Matrix hadamard_power(const Matrix& M, Eigen::Index ell,
                      std::uint64_t max_columns = std::uint64_t(1) << 20);

// Sum over supp(u) of u_r times the rank-r Hadamard column; never
// materializes the power matrix.
Vector apply_hadamard(const Matrix& M, Eigen::Index ell,
                      const std::map<std::uint64_t, double>& u);

using IndexPair = std::pair<Eigen::Index, Eigen::Index>;

// Alternating row/column peeling of a pair support contained in I x I^co.
// U sets have one pair per first coordinate, W sets one pair per second
// coordinate; all sets are disjoint and their union is the input support.
struct SupportDecomposition {
    std::vector<std::vector<IndexPair>> U_sets;
    std::vector<std::vector<IndexPair>> W_sets;
    std::size_t steps() const { return U_sets.size(); }
};

// Requires every pair (i, j) to satisfy i in I, j not in I. Fiber choices:
// the largest column (row) fiber, ties broken by the smallest index;
// uncovered coordinates take their smallest available partner.
SupportDecomposition support_decompose(const std::set<IndexPair>& support,
                                       const std::set<Eigen::Index>& I);

}  // namespace xrip
