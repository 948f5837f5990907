#include "xrip/disclearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "xrip/hadamard.hpp"

namespace xrip {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (!ids_.emplace(words_[i], static_cast<Eigen::Index>(i + 1)).second) {
            throw std::invalid_argument("Vocabulary: duplicate token '" + words_[i] + "'");
        }
    }
}

Eigen::Index Vocabulary::id(const std::string& token) const {
    const auto it = ids_.find(token);
    if (it == ids_.end()) {
        throw std::domain_error("unknown token '" + token + "'");
    }
    return it->second;
}

Vector DiscEmbedding::concatenated() const {
    Eigen::Index total = 0;
    for (const auto& b : blocks) total += b.size();
    Vector out(total);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.segment(at, b.size()) = b;
        at += b.size();
    }
    return out;
}

LossKind loss_kind_from_name(const std::string& name) {
    if (name == "hinge") return LossKind::hinge;
    if (name == "logistic") return LossKind::logistic;
    if (name == "squared") return LossKind::squared;
    throw std::invalid_argument("unknown loss kind '" + name + "'");
}

namespace {

// The sorted word-id set of one window, or empty when a token repeats
// (such windows are dropped).
std::vector<Eigen::Index> window_ids(const std::vector<Eigen::Index>& ids, std::size_t start,
                                     Eigen::Index ell) {
    std::vector<Eigen::Index> w(ids.begin() + start, ids.begin() + start + ell);
    std::sort(w.begin(), w.end());
    if (std::adjacent_find(w.begin(), w.end()) != w.end()) return {};
    return w;
}

std::vector<Eigen::Index> to_ids(const std::vector<std::string>& seq, const Vocabulary& vocab) {
    std::vector<Eigen::Index> ids;
    ids.reserve(seq.size());
    for (const auto& tok : seq) ids.push_back(vocab.id(tok));
    return ids;
}

}  // namespace

CoocVector bag_of_cooccurrences(const std::vector<std::string>& seq, Eigen::Index L,
                                const Vocabulary& vocab) {
    if (L < 1) throw std::domain_error("bag_of_cooccurrences: L must be >= 1");
    const auto ids = to_ids(seq, vocab);
    CoocVector out;
    out.L = L;
    out.d = vocab.size();
    out.blocks.resize(L);
    for (Eigen::Index ell = 1; ell <= L; ++ell) {
        if (static_cast<std::size_t>(ell) > ids.size()) break;
        for (std::size_t t = 0; t + ell <= ids.size(); ++t) {
            const auto w = window_ids(ids, t, ell);
            if (w.empty()) continue;
            out.blocks[ell - 1][rank_subset(out.d, w)] += 1.0;
        }
    }
    return out;
}

DiscEmbedding disc_embed(const std::vector<std::string>& seq, const Matrix& V, Eigen::Index L,
                         const Vocabulary& vocab) {
    if (V.cols() != vocab.size()) throw std::domain_error("disc_embed: V columns != vocab size");
    const auto ids = to_ids(seq, vocab);
    DiscEmbedding out;
    out.L = L;
    out.blocks.assign(L, Vector::Zero(V.rows()));
    for (Eigen::Index ell = 1; ell <= L; ++ell) {
        if (static_cast<std::size_t>(ell) > ids.size()) continue;
        for (std::size_t t = 0; t + ell <= ids.size(); ++t) {
            const auto w = window_ids(ids, t, ell);
            if (w.empty()) continue;
            out.blocks[ell - 1] += hadamard_column(V, w);
        }
    }
    return out;
}

DiscEmbedding transformed_disc(const std::vector<std::string>& seq, const Matrix& V,
                               const std::vector<Matrix>& X_list, Eigen::Index L,
                               const Vocabulary& vocab) {
    if (static_cast<Eigen::Index>(X_list.size()) != L) {
        throw std::domain_error("transformed_disc: X_list length != L");
    }
    for (const auto& X : X_list) {
        if (X.cols() != V.rows()) throw std::domain_error("transformed_disc: X columns != p");
    }
    DiscEmbedding plain = disc_embed(seq, V, L, vocab);
    DiscEmbedding out;
    out.L = L;
    out.blocks.reserve(L);
    for (Eigen::Index ell = 0; ell < L; ++ell) {
        out.blocks.push_back(X_list[ell] * plain.blocks[ell]);
    }
    return out;
}

namespace {

double pointwise_loss(LossKind kind, double margin_or_pred, int label) {
    switch (kind) {
        case LossKind::hinge: {
            const double m = label * margin_or_pred;
            return m <= 1.0 ? 1.0 - m : 0.0;
        }
        case LossKind::logistic:
            return std::log1p(std::exp(-label * margin_or_pred));
        case LossKind::squared: {
            const double r = label - margin_or_pred;
            return r * r;
        }
    }
    return 0.0;
}

// d loss / d prediction
double pointwise_grad(LossKind kind, double pred, int label) {
    switch (kind) {
        case LossKind::hinge:
            return label * pred <= 1.0 ? -static_cast<double>(label) : 0.0;
        case LossKind::logistic: {
            const double e = std::exp(-label * pred);
            return -label * e / (1.0 + e);
        }
        case LossKind::squared:
            return -2.0 * (label - pred);
    }
    return 0.0;
}

}  // namespace

double mean_loss(const std::vector<Vector>& features, const std::vector<int>& labels,
                 const LossSpec& loss, const Vector& theta) {
    double total = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        total += pointwise_loss(loss.kind, features[i].dot(theta), labels[i]);
    }
    return total / static_cast<double>(features.size());
}

double erm_objective(const std::vector<Vector>& features, const std::vector<int>& labels,
                     const LossSpec& loss, const Vector& theta) {
    return mean_loss(features, labels, loss, theta) +
           theta.squaredNorm() / (2.0 * loss.regularizer);
}

Vector erm_train(const std::vector<Vector>& features, const std::vector<int>& labels,
                 const LossSpec& loss, const ErmOptions& opt) {
    if (features.empty() || features.size() != labels.size()) {
        throw std::invalid_argument("erm_train: empty or inconsistent data");
    }
    for (const int y : labels) {
        if (y != 1 && y != -1) throw std::invalid_argument("erm_train: labels must be +-1");
    }
    const Eigen::Index dim = features.front().size();
    Vector theta = Vector::Zero(dim);
    double obj = erm_objective(features, labels, loss, theta);

    const double b = static_cast<double>(features.size());
    double rate = opt.rate;
    std::uint64_t rejected_streak = 0;
    for (std::uint64_t step = 0; step < opt.steps; ++step) {
        Vector grad = theta / loss.regularizer;
        for (std::size_t i = 0; i < features.size(); ++i) {
            grad += (pointwise_grad(loss.kind, features[i].dot(theta), labels[i]) / b) *
                    features[i];
        }
        // backtracking on the objective value; works for the nonsmooth hinge too
        double t = rate;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            const Vector cand = theta - t * grad;
            const double cand_obj = erm_objective(features, labels, loss, cand);
            if (cand_obj <= obj) {
                theta = cand;
                obj = cand_obj;
                accepted = true;
                rate = std::min(opt.rate, t * 2.0);
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (++rejected_streak >= 100) {
                throw std::runtime_error("erm_train: objective stalled for 100 steps");
            }
        } else {
            rejected_streak = 0;
        }
        if (grad.norm() <= 1e-10 * (1.0 + theta.norm())) break;
    }
    return theta;
}

Vector cooc_dense(const CoocVector& c) {
    Eigen::Index total = 0;
    std::vector<std::uint64_t> dims(c.L);
    for (Eigen::Index ell = 1; ell <= c.L; ++ell) {
        dims[ell - 1] = binomial(c.d, ell);
        total += static_cast<Eigen::Index>(dims[ell - 1]);
    }
    Vector out = Vector::Zero(total);
    Eigen::Index at = 0;
    for (Eigen::Index ell = 1; ell <= c.L; ++ell) {
        for (const auto& [rank, count] : c.blocks[ell - 1]) {
            out(at + static_cast<Eigen::Index>(rank)) = count;
        }
        at += static_cast<Eigen::Index>(dims[ell - 1]);
    }
    return out;
}

GapResult compressed_learning_gap(const std::vector<LabeledSequence>& dataset,
                                  const Vocabulary& vocab, const Matrix& V,
                                  const std::vector<Matrix>& X_list, Eigen::Index L,
                                  const LossSpec& loss, SeedSpec seed, const ErmOptions& opt) {
    if (dataset.size() < 2) throw std::invalid_argument("compressed_learning_gap: need >= 2 docs");

    // deterministic 50/50 split by seeded shuffle
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    CounterRng rng(seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        std::swap(order[i], order[rng.bits(i) % (i + 1)]);
    }
    const std::size_t n_train = dataset.size() / 2;

    std::vector<Vector> raw_train, raw_eval, emb_train, emb_eval;
    std::vector<int> y_train, y_eval;
    double alpha = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto& doc = dataset[order[pos]];
        const CoocVector c = bag_of_cooccurrences(doc.tokens, L, vocab);
        const Vector raw = cooc_dense(c);
        alpha = std::max(alpha, raw.norm());
        const Vector emb = transformed_disc(doc.tokens, V, X_list, L, vocab).concatenated();
        if (pos < n_train) {
            raw_train.push_back(raw);
            emb_train.push_back(emb);
            y_train.push_back(doc.label);
        } else {
            raw_eval.push_back(raw);
            emb_eval.push_back(emb);
            y_eval.push_back(doc.label);
        }
    }

    const Vector theta = erm_train(raw_train, y_train, loss, opt);
    const Vector vartheta = erm_train(emb_train, y_train, loss, opt);

    GapResult out;
    out.loss_original = mean_loss(raw_eval, y_eval, loss, theta);
    out.loss_compressed = mean_loss(emb_eval, y_eval, loss, vartheta);
    out.gap = out.loss_compressed - out.loss_original;
    out.alpha = alpha;
    return out;
}

}  // namespace xrip
