#include "xrip/hadamard.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "xrip/errors.hpp"

namespace xrip {

std::uint64_t binomial(std::uint64_t d, std::uint64_t ell) {
    if (ell > d) throw std::domain_error("binomial: ell > d");
    ell = std::min(ell, d - ell);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= ell; ++i) {
        const std::uint64_t num = d - ell + i;
        if (result > std::numeric_limits<std::uint64_t>::max() / num) {
            throw ResourceError("binomial: value overflows 64 bits");
        }
        result = result * num / i;  // exact: result*num is divisible by i here
    }
    return result;
}

std::uint64_t rank_subset(Eigen::Index d, const std::vector<Eigen::Index>& members) {
    if (members.empty()) return 0;
    const Eigen::Index ell = static_cast<Eigen::Index>(members.size());
    Eigen::Index prev = 0;
    for (const Eigen::Index m : members) {
        if (m <= prev || m > d) {
            throw std::domain_error("rank_subset: members must be strictly increasing in [1, d]");
        }
        prev = m;
    }
    // Lexicographic rank: count subsets that precede by their first deviation.
    std::uint64_t rank = 0;
    Eigen::Index low = 1;
    for (Eigen::Index pos = 0; pos < ell; ++pos) {
        for (Eigen::Index v = low; v < members[pos]; ++v) {
            rank += binomial(d - v, ell - pos - 1);
        }
        low = members[pos] + 1;
    }
    return rank;
}

std::vector<Eigen::Index> unrank_subset(Eigen::Index d, Eigen::Index ell, std::uint64_t rank) {
    if (ell < 0 || ell > d) throw std::domain_error("unrank_subset: ell not in [0, d]");
    if (rank >= binomial(d, ell)) {
        throw std::domain_error("unrank_subset: rank out of range");
    }
    std::vector<Eigen::Index> members;
    members.reserve(ell);
    Eigen::Index v = 1;
    for (Eigen::Index pos = 0; pos < ell; ++pos) {
        while (true) {
            const std::uint64_t block = binomial(d - v, ell - pos - 1);
            if (rank < block) break;
            rank -= block;
            ++v;
        }
        members.push_back(v++);
    }
    return members;
}

Vector hadamard_column(const Matrix& M, const std::vector<Eigen::Index>& members) {
    if (members.empty()) throw std::domain_error("hadamard_column: empty member list");
    std::vector<Eigen::Index> sorted(members);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::domain_error("hadamard_column: duplicate member");
    }
    Vector col = Vector::Ones(M.rows());
    for (const Eigen::Index m : members) {
        if (m < 1 || m > M.cols()) throw std::domain_error("hadamard_column: member out of range");
        col.array() *= M.col(m - 1).array();
    }
    return col;
}

Matrix hadamard_power(const Matrix& M, Eigen::Index ell, std::uint64_t max_columns) {
    const std::uint64_t ncols = binomial(M.cols(), ell);
    if (ncols > max_columns) {
        throw ResourceError("hadamard_power: " + std::to_string(ncols) +
                            " columns exceed the materialization cap; use apply_hadamard");
    }
    Matrix out(M.rows(), static_cast<Eigen::Index>(ncols));
    for (std::uint64_t r = 0; r < ncols; ++r) {
        out.col(static_cast<Eigen::Index>(r)) = hadamard_column(M, unrank_subset(M.cols(), ell, r));
    }
    return out;
}

Vector apply_hadamard(const Matrix& M, Eigen::Index ell,
                      const std::map<std::uint64_t, double>& u) {
    const std::uint64_t ncols = binomial(M.cols(), ell);
    Vector out = Vector::Zero(M.rows());
    for (const auto& [rank, value] : u) {
        if (rank >= ncols) throw std::domain_error("apply_hadamard: rank out of range");
        if (value == 0.0) continue;
        out += value * hadamard_column(M, unrank_subset(M.cols(), ell, rank));
    }
    return out;
}

namespace {

// Pick the coordinate whose fiber inside `pairs` is largest, ties by the
// smallest coordinate. `coord` selects first or second projection.
template <typename Proj>
Eigen::Index largest_fiber(const std::set<IndexPair>& pairs, Proj proj) {
    std::map<Eigen::Index, std::size_t> sizes;
    for (const auto& pr : pairs) ++sizes[proj(pr)];
    Eigen::Index best = sizes.begin()->first;
    std::size_t best_size = sizes.begin()->second;
    for (const auto& [c, n] : sizes) {
        if (n > best_size) {
            best = c;
            best_size = n;
        }
    }
    return best;
}

}  // namespace

SupportDecomposition support_decompose(const std::set<IndexPair>& support,
                                       const std::set<Eigen::Index>& I) {
    for (const auto& [i, j] : support) {
        if (!I.count(i) || I.count(j)) {
            throw std::domain_error("support_decompose: pair not in I x I^co");
        }
    }

    SupportDecomposition out;
    std::set<IndexPair> F = support;
    while (!F.empty()) {
        // U step: one pair per first coordinate, containing the full column
        // fiber of the chosen j.
        const Eigen::Index j_star = largest_fiber(F, [](const IndexPair& p) { return p.second; });
        std::vector<IndexPair> U;
        std::set<Eigen::Index> covered;
        for (const auto& pr : F) {
            if (pr.second == j_star) {
                U.push_back(pr);
                covered.insert(pr.first);
            }
        }
        for (const auto& pr : F) {  // smallest available j per uncovered i (set order)
            if (!covered.count(pr.first)) {
                U.push_back(pr);
                covered.insert(pr.first);
            }
        }
        out.U_sets.push_back(U);
        for (const auto& pr : U) F.erase(pr);

        if (F.empty()) {
            out.W_sets.emplace_back();
            break;
        }

        // W step: one pair per second coordinate, containing the full row
        // fiber of the chosen i.
        const Eigen::Index i_star = largest_fiber(F, [](const IndexPair& p) { return p.first; });
        std::vector<IndexPair> W;
        std::set<Eigen::Index> covered_j;
        for (const auto& pr : F) {
            if (pr.first == i_star) {
                W.push_back(pr);
                covered_j.insert(pr.second);
            }
        }
        for (const auto& pr : F) {
            if (!covered_j.count(pr.second)) {
                W.push_back(pr);
                covered_j.insert(pr.second);
            }
        }
        out.W_sets.push_back(W);
        for (const auto& pr : W) F.erase(pr);
    }
    return out;
}

}  // namespace xrip
