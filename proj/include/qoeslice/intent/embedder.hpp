#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qoeslice::intent {

using Embedding = std::vector<double>;

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  // Unit-norm embedding. Throws std::invalid_argument for text without tokens.
  virtual Embedding embed(std::string_view text) const = 0;
};

// Whitespace split, ASCII case folding, non-alphanumeric ASCII removed.
std::vector<std::string> tokenize(std::string_view text);

// Feature-hashed bag of words: FNV-1a token hashes into `dim` buckets,
// square-root scaled counts, L2 normalised.
class HashingEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultDim = 256;

  explicit HashingEmbedder(std::size_t dim = kDefaultDim);
  std::size_t dim() const override { return dim_; }
  Embedding embed(std::string_view text) const override;
  std::size_t bucket(std::string_view token) const;

 private:
  std::size_t dim_;
};

double dot(const Embedding& a, const Embedding& b);
double norm(const Embedding& a);
// Cosine similarity; 0 when either vector is zero.
double cosine(const Embedding& a, const Embedding& b);

}  // namespace qoeslice::intent
