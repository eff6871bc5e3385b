#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acc {

using Embedding = std::vector<double>;

/// Maps a token list to one vector per token, all of the same dimension.
/// Implementations must be deterministic; concurrent calls must be safe.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<Embedding> embed(std::span<const std::string> tokens) const = 0;
};

/// Offline provider: each token becomes the L2-normalized bag of its hashed
/// character 2-, 3- and 4-grams (with "<" ">" boundary marks). All entries
/// are nonnegative, so cosines lie in [0, 1].
class HashedNgramEmbedder final : public EmbeddingProvider {
public:
    static constexpr std::size_t kDefaultDim = 128;
    static constexpr std::uint64_t kDefaultSeed = 0x5eed'acc0'0000'0001ULL;

    explicit HashedNgramEmbedder(std::size_t dim = kDefaultDim, std::uint64_t seed = kDefaultSeed);

    std::vector<Embedding> embed(std::span<const std::string> tokens) const override;
    Embedding embed_token(std::string_view token) const;

    std::size_t dim() const { return dim_; }

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

/// Process-wide default provider.
const EmbeddingProvider& default_embedder();

double cosine(std::span<const double> a, std::span<const double> b);

/// Pairwise cosine similarities, candidate tokens by reference tokens.
class SimilarityMatrix {
public:
    SimilarityMatrix(std::span<const Embedding> candidate, std::span<const Embedding> reference);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

struct BertScoreParts {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Greedy-matching precision/recall/F1 over a similarity matrix. No idf
/// weighting, no baseline rescaling. Empty matrices give zeros; F1 is 0
/// unless both P and R are positive.
BertScoreParts greedy_match(const SimilarityMatrix& sim);

/// |distinct shared words| / max(k, l) over normalized words; 0 if either side
/// is empty after normalization.
double word_overlap(std::string_view pred, std::string_view gold);

/// BERTScore F1 of `cand` against `ref` over normalized words.
double bertscore(std::string_view cand, std::string_view ref, const EmbeddingProvider& provider);
BertScoreParts bertscore_parts(std::string_view cand, std::string_view ref,
                               const EmbeddingProvider& provider);

}  // namespace acc
