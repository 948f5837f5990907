#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xrip/matrix.hpp"
#include "xrip/rng.hpp"

namespace xrip {

// Ordered vocabulary with a token <-> 1-based id bijection.
class Vocabulary {
  public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> words);

    Eigen::Index size() const { return static_cast<Eigen::Index>(words_.size()); }
    const std::string& word(Eigen::Index id) const { return words_.at(id - 1); }
    // Throws std::domain_error naming the token if unknown.
    Eigen::Index id(const std::string& token) const;

  private:
    std::vector<std::string> words_;
    std::map<std::string, Eigen::Index> ids_;
};

// Bag-of-L-cooccurrences: per block ell, a sparse map from combinadic rank
// (over C(d, ell)) to count. Windows containing a repeated token are dropped.
struct CoocVector {
    Eigen::Index L = 0;
    Eigen::Index d = 0;
    std::vector<std::map<std::uint64_t, double>> blocks;  // blocks[ell-1]
};

// Per-block embedding vectors v^(1) .. v^(L).
struct DiscEmbedding {
    Eigen::Index L = 0;
    std::vector<Vector> blocks;
    Vector concatenated() const;
};

enum class LossKind { hinge, logistic, squared };

struct LossSpec {
    LossKind kind = LossKind::hinge;
    double lipschitz = 1.0;
    double regularizer = 1.0;  // the 1/(2C) coefficient, i.e. C of the theory
};

LossKind loss_kind_from_name(const std::string& name);

CoocVector bag_of_cooccurrences(const std::vector<std::string>& seq, Eigen::Index L,
                                const Vocabulary& vocab);

// Per-block sums of entrywise products of the constituent word vectors;
// block ell satisfies v^(ell) = V^(ell) c^(ell).
DiscEmbedding disc_embed(const std::vector<std::string>& seq, const Matrix& V, Eigen::Index L,
                         const Vocabulary& vocab);

// Blocks X^(ell) v^(ell) without materializing V^(ell); equals the
// block-diagonal transform applied to the full cooccurrence vector.
DiscEmbedding transformed_disc(const std::vector<std::string>& seq, const Matrix& V,
                               const std::vector<Matrix>& X_list, Eigen::Index L,
                               const Vocabulary& vocab);

struct ErmOptions {
    std::uint64_t steps = 500;
    double rate = 1.0;  // initial step size; backtracked until decrease
};

// Minimizes (1/b) sum f(<x_i, theta>; y_i) + (1/2C) ||theta||^2 by full
// (sub)gradient descent with backtracking; the objective is nonincreasing
// across accepted steps. Labels must be +-1.
Vector erm_train(const std::vector<Vector>& features, const std::vector<int>& labels,
                 const LossSpec& loss, const ErmOptions& opt = {});

double erm_objective(const std::vector<Vector>& features, const std::vector<int>& labels,
                     const LossSpec& loss, const Vector& theta);

// Mean loss without the regularizer (evaluation criterion).
double mean_loss(const std::vector<Vector>& features, const std::vector<int>& labels,
                 const LossSpec& loss, const Vector& theta);

struct LabeledSequence {
    std::vector<std::string> tokens;
    int label = 1;  // +-1
};

struct GapResult {
    double loss_original = 0.0;
    double loss_compressed = 0.0;
    double gap = 0.0;  // compressed - original
    double alpha = 0.0;  // max ||c|| over the dataset
};

// Trains on raw cooccurrence vectors and on transformed DisC embeddings
// (50/50 seeded split), evaluates both on the held-out half.
GapResult compressed_learning_gap(const std::vector<LabeledSequence>& dataset,
                                  const Vocabulary& vocab, const Matrix& V,
                                  const std::vector<Matrix>& X_list, Eigen::Index L,
                                  const LossSpec& loss, SeedSpec seed,
                                  const ErmOptions& opt = {});

// Dense view of a cooccurrence vector (all blocks concatenated).
Vector cooc_dense(const CoocVector& c);

}  // namespace xrip
