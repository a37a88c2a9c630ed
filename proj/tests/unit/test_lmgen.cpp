//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "geoseq/lmgen.h"

#include "fixture.h"

namespace geoseq {
namespace {

Vocabulary small_vocab() {
  return Vocabulary::from_texts({ "H", "C", "N", "O" });
}

// Recursive stupid-backoff score computed by scanning the raw corpus.
double oracle_score(const std::vector<std::vector<int>> &corpus, int order,
                    double lambda, const std::vector<int> &padded_ctx,
                    int length, int w) {
  long long hit = 0, total = 0;
  for (const auto &s: corpus) {
    std::vector<int> seq(order, Vocabulary::kBos);
    seq.insert(seq.end(), s.begin(), s.end());
    for (std::size_t p = order; p < seq.size(); ++p) {
      bool match = true;
      for (int j = 1; j <= length; ++j)
        match = match && seq[p - j] == padded_ctx[padded_ctx.size() - j];
      if (match) {
        ++total;
        hit += seq[p] == w;
      }
    }
  }
  if (length == 0)
    return total ? static_cast<double>(hit) / total : 0;
  const double shorter =
      oracle_score(corpus, order, lambda, padded_ctx, length - 1, w);
  if (total == 0)
    return shorter;
  return hit ? static_cast<double>(hit) / total : lambda * shorter;
}

std::vector<double> oracle_distribution(
    const std::vector<std::vector<int>> &corpus, int order, double lambda,
    const std::vector<int> &history, std::size_t vsize) {
  std::vector<int> ctx(order, Vocabulary::kBos);
  ctx.insert(ctx.end(), history.begin(), history.end());
  std::vector<double> p(vsize);
  for (std::size_t w = 0; w < vsize; ++w)
    p[w] = oracle_score(corpus, order, lambda, ctx, order, w);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double &x: p)
    x /= s;
  return p;
}

TEST(NgramTest, TwoTokenCorpus) {
  const Vocabulary v = small_vocab();
  const int h = v.id("H"), c = v.id("C");
  const std::vector<std::vector<int>> corpus = { { h, c, Vocabulary::kEos } };
  const auto m = NgramModel::train(corpus, v, 2);
  // After <bos><bos>: H seen with certainty, C and <eos> backed off twice
  // from the uniform unigram.
  const double off = 0.4 * 0.4 / 3;
  const auto p = m.next_distribution({});
  EXPECT_NEAR(p[h], 1 / (1 + 2 * off), 1e-15);
  EXPECT_NEAR(p[c], off / (1 + 2 * off), 1e-15);
  EXPECT_EQ(p[Vocabulary::kBos], 0);

  const std::vector<int> hist = { h };
  EXPECT_NEAR(m.next_distribution(hist)[c], 1 / (1 + 2 * off), 1e-15);
  EXPECT_EQ(m.matched_length(hist), 2);
  EXPECT_EQ(m.first_token_distribution()[h], 1.0);
}

TEST(NgramTest, UnseenContextBacksOffOneLevel) {
  const Vocabulary v = small_vocab();
  const int h = v.id("H"), c = v.id("C"), n = v.id("N");
  const std::vector<std::vector<int>> corpus = { { h, c }, { h, h } };
  const auto m = NgramModel::train(corpus, v, 2);
  // Context (C, H) never occurs; H alone is followed by C and H.
  const std::vector<int> hist = { c, h };
  EXPECT_EQ(m.matched_length(hist), 1);
  const auto p = m.next_distribution(hist);
  // Unigram: H 3/6, C 1/6, <eos> 2/6. Level 1 after H: C 1/3, H 1/3, eos 1/3.
  const double eos = 1.0 / 3;
  const double sum = 1.0 / 3 + 1.0 / 3 + eos;
  EXPECT_NEAR(p[c], (1.0 / 3) / sum, 1e-15);
  EXPECT_EQ(p[n], 0);
}

TEST(NgramTest, MatchesBruteForceBackoff) {
  const Vocabulary v = small_vocab();
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 1 + trial % 4;
    std::vector<std::vector<int>> corpus;
    for (int s = 0; s < 8; ++s) {
      std::vector<int> seq;
      const int len = 1 + rng.below(6);
      for (int i = 0; i < len; ++i)
        seq.push_back(4 + rng.below(3));
      seq.push_back(Vocabulary::kEos);
      corpus.push_back(seq);
    }
    const auto m = NgramModel::train(corpus, v, order);
    for (int q = 0; q < 20; ++q) {
      std::vector<int> hist;
      const int len = rng.below(7);
      for (int i = 0; i < len; ++i)
        hist.push_back(4 + rng.below(4));
      const auto got = m.next_distribution(hist);
      const auto want = oracle_distribution(corpus, order, 0.4, hist, v.size());
      for (std::size_t w = 0; w < v.size(); ++w)
        EXPECT_NEAR(got[w], want[w], 1e-12);
    }
  }
}

TEST(NgramTest, SerializeParseRoundTrip) {
  const auto &mols = testing::fixture_molecules();
  std::vector<std::vector<Token>> toks;
  for (std::size_t i = 0; i < 100; ++i)
    toks.push_back(encode(mols[i], {}));
  const Vocabulary v = Vocabulary::build(toks);
  std::vector<std::vector<int>> ids;
  for (const auto &t: toks) {
    std::vector<int> s;
    for (const auto &x: t)
      s.push_back(v.id(x.text));
    ids.push_back(s);
  }
  const auto m = NgramModel::train(ids, v, 3, 0.25);
  const std::string text = m.serialize();
  const auto back = NgramModel::parse(text);
  EXPECT_EQ(back.serialize(), text);
  EXPECT_EQ(back.order(), 3);
  EXPECT_EQ(back.backoff(), 0.25);
  EXPECT_EQ(back.vocab(), v);
  const std::span<const int> hist(ids[7].data(), 9);
  EXPECT_EQ(back.next_distribution(hist), m.next_distribution(hist));

  EXPECT_THROW(NgramModel::parse("geoseq-ngram 2\n"), ParseError);
  EXPECT_THROW(NgramModel::parse(text.substr(0, text.size() / 2)),
               ParseError);
}

TEST(NgramTest, TrainingErrors) {
  const Vocabulary v = small_vocab();
  const std::vector<std::vector<int>> ok = { { 4 } }, bad = { { 99 } };
  EXPECT_THROW(NgramModel::train({}, v), std::invalid_argument);
  EXPECT_THROW(NgramModel::train(ok, v, 0), std::invalid_argument);
  EXPECT_THROW(NgramModel::train(ok, v, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(NgramModel::train(bad, v), std::invalid_argument);
}

int argmax(const std::vector<double> &p) {
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

TEST(SamplerTest, GreedyIdentities) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(30);
    for (double &x: p)
      x = rng.uniform();
    SamplerConfig top1 { 1, 0.7, 512 };
    SamplerConfig cold { 80, 1e-7, 512 };
    EXPECT_EQ(select_token(p, top1, rng), argmax(p));
    EXPECT_EQ(select_token(p, cold, rng), argmax(p));
  }
}

TEST(SamplerTest, TopKAndTemperature) {
  const std::vector<double> p = { 0.1, 0.4, 0.2, 0.2, 0.1 };
  const auto q = sampling_distribution(p, { 3, 1.0, 512 });
  // Ties between ids 2 and 3 keep both; 0 and 4 are cut.
  EXPECT_NEAR(q[1], 0.5, 1e-15);
  EXPECT_NEAR(q[2], 0.25, 1e-15);
  EXPECT_EQ(q[0], 0);
  EXPECT_EQ(q[4], 0);
  const auto r = sampling_distribution(p, { 2, 1.0, 512 });
  EXPECT_GT(r[2], 0);
  EXPECT_EQ(r[3], 0);  // smaller id wins the tie

  const auto t = sampling_distribution(p, { 80, 0.5, 512 });
  // Temperature 1/2 squares the probabilities before renormalizing.
  const double z = 0.01 + 0.16 + 0.04 + 0.04 + 0.01;
  EXPECT_NEAR(t[1], 0.16 / z, 1e-12);
  EXPECT_NEAR(std::accumulate(t.begin(), t.end(), 0.0), 1, 1e-12);
}

TEST(SamplerTest, EmpiricalFrequencies) {
  const std::vector<double> p = { 0.5, 0.3, 0.2 };
  Rng rng(10);
  std::vector<int> hits(3);
  const int n = 200000;
  for (int i = 0; i < n; ++i)
    ++hits[select_token(p, { 80, 1.0, 512 }, rng)];
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(static_cast<double>(hits[i]) / n, p[i], 0.005);
}

class TrainedModel: public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    const auto &mols = testing::fixture_molecules();
    std::vector<double> alpha;
    for (const auto &m: mols)
      alpha.push_back(m.properties.at("alpha"));
    edges_ = quantile_edges(alpha, 10);
    std::vector<std::vector<Token>> toks;
    for (const auto &m: mols) {
      auto t = encode(m, {});
      t.insert(t.begin(), Token { TokenKind::kProperty,
                                  property_bucket(m.properties.at("alpha"),
                                                  "alpha", edges_) });
      toks.push_back(std::move(t));
    }
    vocab_ = new Vocabulary(Vocabulary::build(toks));
    ids_ = new std::vector<std::vector<int>>;
    for (const auto &t: toks) {
      std::vector<int> s;
      for (const auto &x: t)
        s.push_back(vocab_->id(x.text));
      ids_->push_back(std::move(s));
    }
  }
  static void TearDownTestSuite() {
    delete vocab_;
    delete ids_;
  }

  static inline std::vector<double> edges_;
  static inline Vocabulary *vocab_ = nullptr;
  static inline std::vector<std::vector<int>> *ids_ = nullptr;
};

TEST_F(TrainedModel, SamplingIsDeterministicAndWellFormed) {
  const auto m = NgramModel::train(*ids_, *vocab_, 6);
  for (int i = 0; i < 20; ++i) {
    Rng a(stream_seed(42, i)), b(stream_seed(42, i));
    const auto s = sample(m, {}, std::nullopt, a);
    EXPECT_EQ(s, sample(m, {}, std::nullopt, b));
    ASSERT_FALSE(s.empty());
    EXPECT_FALSE(is_property_token(vocab_->text(s[0])));
    EXPECT_LE(s.size(), 512u);
  }
  SamplerConfig short_cfg;
  short_cfg.max_len = 5;
  Rng r(1);
  EXPECT_LE(sample(m, short_cfg, std::nullopt, r).size(), 5u);
  EXPECT_THROW(sample(m, {}, "prop:alpha=99", r), std::invalid_argument);
}

TEST_F(TrainedModel, DistributionsSumToOne) {
  const auto m = NgramModel::train(*ids_, *vocab_, 6);
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto &seq = (*ids_)[rng.below(ids_->size())];
    const std::span<const int> hist(seq.data(), rng.below(seq.size()));
    const auto p = m.next_distribution(hist);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1, 1e-9);
  }
}

TEST_F(TrainedModel, HigherOrderFitsHeldOutDataBetter) {
  const std::span<const std::vector<int>> all(*ids_);
  const auto train = all.subspan(0, 1200), held = all.subspan(1200);
  const auto m1 = NgramModel::train(train, *vocab_, 1);
  const auto m6 = NgramModel::train(train, *vocab_, 6);
  EXPECT_LE(m6.perplexity(held), m1.perplexity(held));
}

TEST_F(TrainedModel, ConditioningShiftsMoleculeSize) {
  const auto m = NgramModel::train(*ids_, *vocab_, 6);
  const auto mean_atoms = [&](const std::string &cond) {
    double atoms = 0;
    for (int i = 0; i < 200; ++i) {
      Rng rng(stream_seed(7, i));
      for (int id: sample(m, {}, cond, rng)) {
        atoms += vocab_->text(id).size() <= 2 &&
                 atomic_number(vocab_->text(id)).has_value();
      }
    }
    return atoms / 200;
  };
  EXPECT_LT(mean_atoms("prop:alpha=0"), mean_atoms("prop:alpha=9"));
}

TEST(PropertyBucketTest, EdgeCases) {
  const std::vector<double> edges = { 1.0, 2.0, 3.0 };
  EXPECT_EQ(property_bucket(0.5, "alpha", edges), "prop:alpha=0");
  EXPECT_EQ(property_bucket(1.0, "alpha", edges), "prop:alpha=1");
  EXPECT_EQ(property_bucket(2.5, "alpha", edges), "prop:alpha=2");
  EXPECT_EQ(property_bucket(3.0, "alpha", edges), "prop:alpha=3");
  EXPECT_EQ(property_bucket(1e9, "alpha", edges), "prop:alpha=3");
  EXPECT_THROW(property_bucket(NAN, "alpha", edges), std::invalid_argument);
  const std::vector<double> bad = { 1.0, 1.0 };
  EXPECT_THROW(property_bucket(0, "alpha", bad), std::invalid_argument);
}

TEST(PropertyBucketTest, DecilesAreBalanced) {
  Rng rng(4);
  std::vector<double> values(5000);
  for (double &x: values)
    x = std::exp(3 * rng.uniform());
  const auto edges = quantile_edges(values, 10);
  ASSERT_EQ(edges.size(), 9u);
  std::map<std::string, int> counts;
  for (double x: values)
    ++counts[property_bucket(x, "alpha", edges)];
  ASSERT_EQ(counts.size(), 10u);
  for (const auto &[k, n]: counts)
    EXPECT_NEAR(n / 5000.0, 0.1, 0.02) << k;

  const std::vector<double> flat(50, 2.0);
  EXPECT_LE(quantile_edges(flat, 10).size(), 1u);
}

}  // namespace
}  // namespace geoseq
