//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_LMGEN_H_
#define GEOSEQ_LMGEN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geoseq/codec.h"
#include "geoseq/random.h"

namespace geoseq {

/// Order-k counting language model over vocabulary ids with stupid backoff.
///
/// Training sequences are id lists ending with <eos> (appended when
/// missing); histories are left-padded with <bos>. Level 0 holds unigram
/// counts of all targets, level L the counts following each context of
/// length L.
class NgramModel {
public:
  static constexpr double kDefaultBackoff = 0.4;

  static NgramModel train(std::span<const std::vector<int>> corpus,
                          const Vocabulary &vocab, int order = 6,
                          double backoff = kDefaultBackoff);

  int order() const { return order_; }
  double backoff() const { return backoff_; }
  const Vocabulary &vocab() const { return vocab_; }

  /// Distribution of the next token given everything generated so far
  /// (without the implicit <bos> padding). Uses the longest context suffix
  /// seen in training; unseen tokens at a level get backoff times their
  /// score at the next shorter level. Sums to 1.
  std::vector<double> next_distribution(std::span<const int> history) const;

  /// Length of the longest suffix of the padded history seen in training.
  int matched_length(std::span<const int> history) const;

  /// Empirical distribution of the first atom token of training sequences.
  std::vector<double> first_token_distribution() const;

  /// Mean negative log-likelihood per token (natural log), exponentiated.
  double perplexity(std::span<const std::vector<int>> corpus) const;

  /// Versioned text format, see README.
  std::string serialize() const;
  static NgramModel parse(std::string_view text);
  static NgramModel from_file(const std::filesystem::path &path);

private:
  struct Counts {
    long long total = 0;
    std::vector<std::pair<int, long long>> next;  // sorted by id
  };
  using Level = std::unordered_map<std::string, Counts>;

  NgramModel() = default;
  std::string key(std::span<const int> padded, int length) const;
  std::vector<int> padded_tail(std::span<const int> history) const;

  int order_ = 6;
  double backoff_ = kDefaultBackoff;
  Vocabulary vocab_;
  std::vector<Level> levels_;  // 0..order
  std::vector<std::pair<int, long long>> first_;
};

struct SamplerConfig {
  int top_k = 80;
  double temperature = 0.7;
  int max_len = 512;
};

/// Draws one id: log-probabilities divided by the temperature, restricted to
/// the top_k most probable ids (ties by smaller id), renormalized. top_k == 1
/// and temperature < 1e-6 pick the argmax.
int select_token(std::span<const double> probs, const SamplerConfig &cfg,
                 Rng &rng);

/// Token probabilities actually used by select_token (zeros outside the
/// top-k set). Sums to 1.
std::vector<double> sampling_distribution(std::span<const double> probs,
                                          const SamplerConfig &cfg);

/// Generates one id sequence. With a condition the property token starts
/// the sequence; otherwise the first atom token is drawn from the
/// first-token distribution. Stops after <eos> or max_len tokens. Throws
/// std::invalid_argument when the condition is not in the vocabulary.
std::vector<int> sample(const NgramModel &model, const SamplerConfig &cfg,
                        std::optional<std::string_view> condition, Rng &rng);

/// `prop:<name>=<i>`, i = number of edges <= value (buckets are half-open
/// intervals [e_i-1, e_i)). Throws std::invalid_argument for non-finite
/// values or edges that are not strictly increasing.
std::string property_bucket(double value, std::string_view name,
                            std::span<const double> edges);

/// Interior quantile edges splitting values into `buckets` groups; repeated
/// edges are dropped.
std::vector<double> quantile_edges(std::span<const double> values,
                                   int buckets = 10);

}  // namespace geoseq

#endif  // GEOSEQ_LMGEN_H_
