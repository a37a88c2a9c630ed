//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "geoseq/lmgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "text_util.h"

namespace geoseq {
namespace {

constexpr std::string_view kMagic = "geoseq-ngram 1";

// Probability floor used only by perplexity, so that held-out tokens never
// seen in training give a finite value.
constexpr double kPerplexityFloor = 1e-12;

std::vector<int> with_eos(const std::vector<int> &seq) {
  std::vector<int> s = seq;
  if (s.empty() || s.back() != Vocabulary::kEos)
    s.push_back(Vocabulary::kEos);
  return s;
}

class LineReader {
public:
  explicit LineReader(std::string_view text)
      : lines_(internal::split_lines(text)) { }

  std::vector<std::string_view> next(const char *what) {
    if (pos_ >= lines_.size())
      throw ParseError(std::string("model file truncated before ") + what,
                       static_cast<int>(pos_) + 1);
    return internal::split_ws(lines_[pos_++]);
  }

  std::string_view raw(const char *what) {
    if (pos_ >= lines_.size())
      throw ParseError(std::string("model file truncated before ") + what,
                       static_cast<int>(pos_) + 1);
    return internal::trim(lines_[pos_++]);
  }

  long long integer(std::string_view s) const {
    auto v = internal::parse_int(s);
    if (!v)
      throw ParseError("expected an integer, got '" + std::string(s) + "'",
                       line());
    return *v;
  }

  int line() const { return static_cast<int>(pos_); }

private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string NgramModel::key(std::span<const int> padded, int length) const {
  std::string k(sizeof(int) * length, '\0');
  std::memcpy(k.data(), padded.data() + (padded.size() - length),
              sizeof(int) * length);
  return k;
}

std::vector<int> NgramModel::padded_tail(std::span<const int> history) const {
  std::vector<int> tail(order_, Vocabulary::kBos);
  const std::size_t take = std::min<std::size_t>(history.size(), order_);
  std::copy(history.end() - take, history.end(), tail.end() - take);
  return tail;
}

NgramModel NgramModel::train(std::span<const std::vector<int>> corpus,
                             const Vocabulary &vocab, int order,
                             double backoff) {
  if (order < 1)
    throw std::invalid_argument("model order must be at least 1");
  if (!(backoff > 0 && backoff < 1))
    throw std::invalid_argument("backoff must be in (0, 1)");
  if (corpus.empty())
    throw std::invalid_argument("empty training corpus");

  const int vsize = static_cast<int>(vocab.size());
  NgramModel m;
  m.order_ = order;
  m.backoff_ = backoff;
  m.vocab_ = vocab;

  std::vector<std::unordered_map<std::string, std::map<int, long long>>> raw(
      order + 1);
  std::map<int, long long> first;
  for (const auto &seq_in: corpus) {
    const std::vector<int> seq = with_eos(seq_in);
    std::vector<int> padded(order, Vocabulary::kBos);
    padded.insert(padded.end(), seq.begin(), seq.end());
    for (int id: seq) {
      if (id < 0 || id >= vsize)
        throw std::invalid_argument("token id out of vocabulary range");
    }
    for (std::size_t p = 0; p < seq.size(); ++p) {
      const std::span<const int> ctx(padded.data(), order + p);
      for (int l = 0; l <= order; ++l)
        ++raw[l][m.key(ctx, l)][seq[p]];
    }
    for (int id: seq) {
      if (!is_property_token(vocab.text(id))) {
        ++first[id];
        break;
      }
    }
  }

  m.levels_.resize(order + 1);
  for (int l = 0; l <= order; ++l) {
    for (auto &[k, next]: raw[l]) {
      Counts c;
      for (auto [id, n]: next) {
        c.total += n;
        c.next.emplace_back(id, n);
      }
      m.levels_[l].emplace(k, std::move(c));
    }
  }
  m.first_.assign(first.begin(), first.end());
  return m;
}

int NgramModel::matched_length(std::span<const int> history) const {
  const auto tail = padded_tail(history);
  int l = 0;
  while (l < order_ && levels_[l + 1].count(key(tail, l + 1)))
    ++l;
  return l;
}

std::vector<double> NgramModel::next_distribution(
    std::span<const int> history) const {
  const auto tail = padded_tail(history);
  const int matched = matched_length(history);
  std::vector<double> p(vocab_.size(), 0.0);
  for (int l = 0; l <= matched; ++l) {
    if (l > 0) {
      for (double &x: p)
        x *= backoff_;
    }
    const Counts &c = levels_[l].at(key(tail, l));
    for (auto [id, n]: c.next)
      p[id] = static_cast<double>(n) / c.total;
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double &x: p)
    x /= sum;
  return p;
}

std::vector<double> NgramModel::first_token_distribution() const {
  std::vector<double> p(vocab_.size(), 0.0);
  long long total = 0;
  for (auto [id, n]: first_)
    total += n;
  for (auto [id, n]: first_)
    p[id] = static_cast<double>(n) / total;
  return p;
}

double NgramModel::perplexity(std::span<const std::vector<int>> corpus) const {
  double nll = 0;
  std::size_t count = 0;
  for (const auto &seq_in: corpus) {
    const std::vector<int> seq = with_eos(seq_in);
    for (std::size_t p = 0; p < seq.size(); ++p) {
      const auto dist =
          next_distribution(std::span<const int>(seq.data(), p));
      nll -= std::log(std::max(dist[seq[p]], kPerplexityFloor));
      ++count;
    }
  }
  return count == 0 ? 1.0 : std::exp(nll / count);
}

std::string NgramModel::serialize() const {
  std::ostringstream out;
  char buf[64];
  out << kMagic << '\n';
  out << "order " << order_ << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", backoff_);
  out << "backoff " << buf << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto &t: vocab_.texts())
    out << t << '\n';
  out << "first " << first_.size() << '\n';
  for (auto [id, n]: first_)
    out << id << ' ' << n << '\n';
  for (int l = 0; l <= order_; ++l) {
    std::vector<const std::pair<const std::string, Counts> *> entries;
    for (const auto &e: levels_[l])
      entries.push_back(&e);
    std::sort(entries.begin(), entries.end(),
              [](auto *a, auto *b) { return a->first < b->first; });
    out << "level " << l << ' ' << entries.size() << '\n';
    for (const auto *e: entries) {
      std::vector<int> ctx(l);
      std::memcpy(ctx.data(), e->first.data(), sizeof(int) * l);
      for (int id: ctx)
        out << id << ' ';
      out << e->second.next.size();
      for (auto [id, n]: e->second.next)
        out << ' ' << id << ' ' << n;
      out << '\n';
    }
  }
  return out.str();
}

NgramModel NgramModel::parse(std::string_view text) {
  LineReader in(text);
  if (in.raw("header") != kMagic)
    throw ParseError("not a geoseq n-gram model file", 1);

  auto expect = [&](const char *name, std::size_t fields) {
    auto f = in.next(name);
    if (f.size() != fields || f[0] != name)
      throw ParseError(std::string("expected '") + name + "' line",
                       in.line());
    return f;
  };

  NgramModel m;
  m.order_ = static_cast<int>(in.integer(expect("order", 2)[1]));
  if (m.order_ < 1)
    throw ParseError("model order must be at least 1", in.line());
  auto bf = internal::parse_double(expect("backoff", 2)[1]);
  if (!bf || !(*bf > 0 && *bf < 1))
    throw ParseError("backoff must be in (0, 1)", in.line());
  m.backoff_ = *bf;

  const long long vsize = in.integer(expect("vocab", 2)[1]);
  std::string vtext;
  for (long long i = 0; i < vsize; ++i) {
    vtext += in.raw("vocabulary entry");
    vtext += '\n';
  }
  m.vocab_ = Vocabulary::parse(vtext);

  auto check_id = [&](long long id) {
    if (id < 0 || id >= vsize)
      throw ParseError("token id out of range", in.line());
    return static_cast<int>(id);
  };

  const long long nfirst = in.integer(expect("first", 2)[1]);
  for (long long i = 0; i < nfirst; ++i) {
    auto f = in.next("first-token counts");
    if (f.size() != 2)
      throw ParseError("malformed first-token line", in.line());
    m.first_.emplace_back(check_id(in.integer(f[0])), in.integer(f[1]));
  }

  m.levels_.resize(m.order_ + 1);
  for (int l = 0; l <= m.order_; ++l) {
    auto h = expect("level", 3);
    if (in.integer(h[1]) != l)
      throw ParseError("levels out of order", in.line());
    const long long entries = in.integer(h[2]);
    for (long long e = 0; e < entries; ++e) {
      auto f = in.next("context line");
      if (f.size() < static_cast<std::size_t>(l) + 1)
        throw ParseError("malformed context line", in.line());
      std::vector<int> ctx(l);
      for (int i = 0; i < l; ++i)
        ctx[i] = check_id(in.integer(f[i]));
      const long long nnext = in.integer(f[l]);
      if (f.size() != static_cast<std::size_t>(l + 1 + 2 * nnext))
        throw ParseError("malformed context line", in.line());
      Counts c;
      for (long long j = 0; j < nnext; ++j) {
        const int id = check_id(in.integer(f[l + 1 + 2 * j]));
        const long long n = in.integer(f[l + 2 + 2 * j]);
        if (n < 1)
          throw ParseError("counts must be positive", in.line());
        c.next.emplace_back(id, n);
        c.total += n;
      }
      m.levels_[l].emplace(m.key(ctx, l), std::move(c));
    }
  }
  if (m.levels_[0].empty())
    throw ParseError("model has no unigram counts", in.line());
  return m;
}

NgramModel NgramModel::from_file(const std::filesystem::path &path) {
  return parse(internal::read_file(path.string()));
}

// Sampling -------------------------------------------------------------------

std::vector<double> sampling_distribution(std::span<const double> probs,
                                          const SamplerConfig &cfg) {
  if (cfg.top_k < 1)
    throw std::invalid_argument("top_k must be at least 1");
  if (!(cfg.temperature > 0))
    throw std::invalid_argument("temperature must be positive");

  std::vector<int> ids;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0)
      ids.push_back(static_cast<int>(i));
  }
  if (ids.empty())
    throw std::invalid_argument("distribution has no positive entry");
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (probs[a] != probs[b])
      return probs[a] > probs[b];
    return a < b;
  });

  std::vector<double> out(probs.size(), 0.0);
  if (cfg.top_k == 1 || cfg.temperature < 1e-6) {
    out[ids[0]] = 1;
    return out;
  }
  if (ids.size() > static_cast<std::size_t>(cfg.top_k))
    ids.resize(cfg.top_k);
  const double top = std::log(probs[ids[0]]);
  double sum = 0;
  for (int id: ids) {
    out[id] = std::exp((std::log(probs[id]) - top) / cfg.temperature);
    sum += out[id];
  }
  for (int id: ids)
    out[id] /= sum;
  return out;
}

namespace {

int draw(std::span<const double> p, Rng &rng) {
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  const double r = rng.uniform() * total;
  double acc = 0;
  int last = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0)
      continue;
    acc += p[i];
    last = static_cast<int>(i);
    if (r < acc)
      return last;
  }
  if (last < 0)
    throw std::invalid_argument("distribution has no positive entry");
  return last;
}

}  // namespace

int select_token(std::span<const double> probs, const SamplerConfig &cfg,
                 Rng &rng) {
  const auto p = sampling_distribution(probs, cfg);
  if (cfg.top_k == 1 || cfg.temperature < 1e-6)
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  return draw(p, rng);
}

std::vector<int> sample(const NgramModel &model, const SamplerConfig &cfg,
                        std::optional<std::string_view> condition, Rng &rng) {
  if (cfg.max_len < 1)
    throw std::invalid_argument("max_len must be at least 1");
  std::vector<int> ids;
  if (condition) {
    auto id = model.vocab().find(*condition);
    if (!id)
      throw std::invalid_argument("condition token '" + std::string(*condition)
                                  + "' is not in the vocabulary");
    ids.push_back(*id);
  } else {
    ids.push_back(draw(model.first_token_distribution(), rng));
  }
  while (static_cast<int>(ids.size()) < cfg.max_len
         && ids.back() != Vocabulary::kEos) {
    const auto p = model.next_distribution(ids);
    ids.push_back(select_token(p, cfg, rng));
  }
  return ids;
}

// Property buckets -----------------------------------------------------------

std::string property_bucket(double value, std::string_view name,
                            std::span<const double> edges) {
  if (!std::isfinite(value))
    throw std::invalid_argument("property value is not finite");
  if (name.empty() || name.find_first_of("= \t") != std::string_view::npos)
    throw std::invalid_argument("bad property name");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1]))
      throw std::invalid_argument("bucket edges must be strictly increasing");
  }
  const auto i = std::upper_bound(edges.begin(), edges.end(), value)
                 - edges.begin();
  return "prop:" + std::string(name) + "=" + std::to_string(i);
}

std::vector<double> quantile_edges(std::span<const double> values,
                                   int buckets) {
  if (buckets < 1)
    throw std::invalid_argument("bucket count must be at least 1");
  std::vector<double> v(values.begin(), values.end());
  for (double x: v) {
    if (!std::isfinite(x))
      throw std::invalid_argument("property value is not finite");
  }
  std::sort(v.begin(), v.end());
  std::vector<double> edges;
  if (v.empty())
    return edges;
  for (int j = 1; j < buckets; ++j) {
    const double e = v[std::min(v.size() - 1, j * v.size() / buckets)];
    if (edges.empty() || e > edges.back())
      edges.push_back(e);
  }
  return edges;
}

}  // namespace geoseq
