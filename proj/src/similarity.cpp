#include "acc/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "acc/norm.hpp"

namespace acc {
namespace {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    // Final avalanche so that nearby n-grams spread across buckets.
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

// Byte offsets of code point boundaries, including the end.
std::vector<std::size_t> code_point_offsets(std::string_view s) {
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
            offsets.push_back(i);
        }
    }
    offsets.push_back(s.size());
    return offsets;
}

}  // namespace

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
    if (dim_ == 0) {
        throw std::invalid_argument("embedding dimension must be positive");
    }
}

Embedding HashedNgramEmbedder::embed_token(std::string_view token) const {
    std::string marked;
    marked.reserve(token.size() + 2);
    marked.push_back('<');
    marked.append(token);
    marked.push_back('>');

    const auto offsets = code_point_offsets(marked);
    const std::size_t n_chars = offsets.size() - 1;
    Embedding v(dim_, 0.0);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (std::size_t start = 0; start + n <= n_chars; ++start) {
            const std::string_view gram(marked.data() + offsets[start], offsets[start + n] - offsets[start]);
            v[fnv1a(gram, seed_ + n) % dim_] += 1.0;
        }
    }
    double norm = 0.0;
    for (const double x : v) {
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : v) {
        x /= norm;
    }
    return v;
}

std::vector<Embedding> HashedNgramEmbedder::embed(std::span<const std::string> tokens) const {
    std::vector<Embedding> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        out.push_back(embed_token(t));
    }
    return out;
}

const EmbeddingProvider& default_embedder() {
    static const HashedNgramEmbedder instance;
    return instance;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine: dimension mismatch");
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

SimilarityMatrix::SimilarityMatrix(std::span<const Embedding> candidate,
                                   std::span<const Embedding> reference)
    : rows_(candidate.size()), cols_(reference.size()), values_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            values_[i * cols_ + j] = cosine(candidate[i], reference[j]);
        }
    }
}

BertScoreParts greedy_match(const SimilarityMatrix& sim) {
    BertScoreParts out;
    if (sim.rows() == 0 || sim.cols() == 0) {
        return out;
    }
    constexpr double kLowest = std::numeric_limits<double>::lowest();
    std::vector<double> col_max(sim.cols(), kLowest);
    double p_sum = 0.0;
    for (std::size_t i = 0; i < sim.rows(); ++i) {
        double row_max = kLowest;
        for (std::size_t j = 0; j < sim.cols(); ++j) {
            const double s = sim.at(i, j);
            row_max = std::max(row_max, s);
            col_max[j] = std::max(col_max[j], s);
        }
        p_sum += row_max;
    }
    double r_sum = 0.0;
    for (const double m : col_max) {
        r_sum += m;
    }
    out.precision = p_sum / static_cast<double>(sim.rows());
    out.recall = r_sum / static_cast<double>(sim.cols());
    // A harmonic mean only makes sense for positive parts. Signed embeddings
    // can push P or R below zero, where 2PR/(P+R) leaves [-1, 1].
    if (out.precision > 0.0 && out.recall > 0.0) {
        out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    }
    return out;
}

double word_overlap(std::string_view pred, std::string_view gold) {
    const auto p = word_tokenize(pred);
    const auto g = word_tokenize(gold);
    if (p.empty() || g.empty()) {
        return 0.0;
    }
    const std::set<std::string> ps(p.begin(), p.end());
    const std::set<std::string> gs(g.begin(), g.end());
    std::size_t shared = 0;
    for (const auto& w : ps) {
        shared += gs.count(w);
    }
    return static_cast<double>(shared) / static_cast<double>(std::max(p.size(), g.size()));
}

BertScoreParts bertscore_parts(std::string_view cand, std::string_view ref,
                               const EmbeddingProvider& provider) {
    const auto x = word_tokenize(cand);
    const auto y = word_tokenize(ref);
    if (x.empty() || y.empty()) {
        return {};
    }
    const auto hx = provider.embed(x);
    const auto hy = provider.embed(y);
    if (hx.size() != x.size() || hy.size() != y.size()) {
        throw std::runtime_error("embedding provider returned the wrong number of vectors");
    }
    return greedy_match(SimilarityMatrix(hx, hy));
}

double bertscore(std::string_view cand, std::string_view ref, const EmbeddingProvider& provider) {
    return bertscore_parts(cand, ref, provider).f1;
}

}  // namespace acc
