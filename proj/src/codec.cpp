//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "geoseq/codec.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>

#include "text_util.h"

namespace geoseq {
namespace {
using internal::parse_double;
using internal::split_ws;

// Slack on the angle range accepted by decode (radians).
constexpr double kAngleSlack = 0.01;

void check_decimals(int decimals) {
  if (decimals < 1 || decimals > 9)
    throw std::invalid_argument("decimals must be in [1, 9]");
}

bool ends_with_degree(std::string_view s) {
  return s.size() >= kDegree.size()
         && s.substr(s.size() - kDegree.size()) == kDegree;
}

std::string_view strip_degree(std::string_view s) {
  return ends_with_degree(s) ? s.substr(0, s.size() - kDegree.size()) : s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

bool is_integer_part(std::string_view s) {
  if (!s.empty() && s.front() == '-')
    s.remove_prefix(1);
  return all_digits(s);
}

// -?digits.digits
bool is_fixed_number(std::string_view s) {
  const auto dot = s.find('.');
  if (dot == std::string_view::npos)
    return false;
  return is_integer_part(s.substr(0, dot)) && all_digits(s.substr(dot + 1));
}

bool is_special(std::string_view s) {
  return s == kBosText || s == kEosText || s == kPadText || s == kUnkText;
}

bool is_element(std::string_view s) {
  auto z = atomic_number(s);
  return z && element_symbol(*z) == s;
}

class Walker {
public:
  Walker(std::span<const std::string> texts, TokenizeMode mode)
      : texts_(texts), mode_(mode) { }

  std::vector<Token> run(bool allow_missing_eos) {
    if (!texts_.empty() && is_property_token(texts_[0]))
      emit(TokenKind::kProperty);

    int atoms = 0;
    while (true) {
      if (pos_ == texts_.size()) {
        if (!allow_missing_eos)
          throw GrammarError("missing <eos>", pos_);
        if (atoms == 0)
          throw GrammarError("sequence has no atoms", pos_);
        out_.push_back({ TokenKind::kSpecial, std::string(kEosText) });
        break;
      }
      if (texts_[pos_] == kEosText) {
        if (atoms == 0)
          throw GrammarError("sequence has no atoms", pos_);
        if (pos_ + 1 != texts_.size())
          throw GrammarError("tokens after <eos>", pos_ + 1);
        emit(TokenKind::kSpecial);
        break;
      }
      if (!is_element(texts_[pos_]))
        throw GrammarError("expected element, got '" + texts_[pos_] + "'",
                           pos_);
      emit(TokenKind::kElement);
      number(TokenKind::kDistance, false);
      number(TokenKind::kTheta, true);
      number(TokenKind::kPhi, true);
      ++atoms;
    }
    return std::move(out_);
  }

private:
  void emit(TokenKind kind) {
    out_.push_back({ kind, texts_[pos_] });
    ++pos_;
  }

  std::string_view need(const char *what) {
    if (pos_ >= texts_.size())
      throw GrammarError(std::string("truncated sequence, expected ") + what,
                         pos_);
    return texts_[pos_];
  }

  void number(TokenKind kind, bool angle) {
    const char *what = angle ? "angle" : "distance";
    if (mode_ == TokenizeMode::kWhole) {
      std::string_view t = need(what);
      if (ends_with_degree(t) != angle || !is_fixed_number(strip_degree(t)))
        throw GrammarError(std::string("expected ") + what + ", got '"
                               + std::string(t) + "'",
                           pos_);
      emit(kind);
      return;
    }
    std::string_view t = need(what);
    if (!is_integer_part(t))
      throw GrammarError(std::string("expected integer part of ") + what,
                         pos_);
    emit(kind);
    if (need(what) != ".")
      throw GrammarError("expected '.'", pos_);
    emit(kind);
    t = need(what);
    if (ends_with_degree(t) != angle || !all_digits(strip_degree(t)))
      throw GrammarError(std::string("expected fraction part of ") + what,
                         pos_);
    emit(kind);
  }

  std::span<const std::string> texts_;
  TokenizeMode mode_;
  std::size_t pos_ = 0;
  std::vector<Token> out_;
};

std::vector<std::string> texts_of(std::span<const Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token &t: tokens)
    out.push_back(t.text);
  return out;
}

void append_number(std::vector<Token> &out, TokenKind kind,
                   const std::string &text, TokenizeMode mode) {
  for (auto &piece: tokenize_mode(text, mode))
    out.push_back({ kind, std::move(piece) });
}

// Reads one number starting at tokens[pos]; advances pos.
double read_number(std::span<const Token> tokens, std::size_t &pos,
                   TokenizeMode mode) {
  std::string text = tokens[pos++].text;
  if (mode == TokenizeMode::kSplit) {
    text += tokens[pos++].text;
    text += tokens[pos++].text;
  }
  auto v = parse_double(strip_degree(text));
  if (!v)
    throw GrammarError("bad number '" + text + "'", pos - 1);
  return *v;
}

// Sort key of a non-special vocabulary entry.
std::tuple<int, double, std::string> vocab_key(const std::string &t) {
  if (is_property_token(t))
    return { 0, 0, t };
  if (auto z = atomic_number(t); z && is_element(t))
    return { 1, *z, t };
  if (t == ".")
    return { 2, 0, t };
  const bool angle = ends_with_degree(t);
  if (auto v = parse_double(strip_degree(t)))
    return { angle ? 4 : 3, *v, t };
  return { 5, 0, t };
}

}  // namespace

TokenizeMode parse_tokenize_mode(std::string_view name) {
  if (name == "whole")
    return TokenizeMode::kWhole;
  if (name == "split")
    return TokenizeMode::kSplit;
  throw std::invalid_argument("unknown tokenize mode '" + std::string(name)
                              + "'");
}

std::string_view to_string(TokenizeMode mode) {
  return mode == TokenizeMode::kWhole ? "whole" : "split";
}

std::string format_fixed(std::int64_t q, int decimals) {
  check_decimals(decimals);
  std::uint64_t scale = 1;
  for (int i = 0; i < decimals; ++i)
    scale *= 10;
  const std::uint64_t a = q < 0 ? 0 - static_cast<std::uint64_t>(q)
                                 : static_cast<std::uint64_t>(q);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%llu.%0*llu", q < 0 ? "-" : "",
                static_cast<unsigned long long>(a / scale), decimals,
                static_cast<unsigned long long>(a % scale));
  return buf;
}

std::vector<std::string> tokenize_mode(std::string_view value,
                                       TokenizeMode mode) {
  const std::string_view number = strip_degree(value);
  if (!is_fixed_number(number))
    throw std::invalid_argument("not a formatted number: '"
                                + std::string(value) + "'");
  if (mode == TokenizeMode::kWhole)
    return { std::string(value) };
  const auto dot = value.find('.');
  return { std::string(value.substr(0, dot)), ".",
           std::string(value.substr(dot + 1)) };
}

bool is_property_token(std::string_view text) {
  constexpr std::string_view prefix = "prop:";
  if (text.substr(0, prefix.size()) != prefix)
    return false;
  text.remove_prefix(prefix.size());
  const auto eq = text.find('=');
  return eq != std::string_view::npos && eq > 0
         && all_digits(text.substr(eq + 1));
}

std::vector<Token> parse_tokens(std::span<const std::string> texts,
                                TokenizeMode mode, bool allow_missing_eos) {
  return Walker(texts, mode).run(allow_missing_eos);
}

std::vector<Token> parse_sequence(std::string_view line, TokenizeMode mode) {
  std::vector<std::string> texts;
  for (auto t: split_ws(line))
    texts.emplace_back(t);
  return parse_tokens(texts, mode, true);
}

std::optional<std::string> validate_sequence(std::span<const Token> tokens,
                                             TokenizeMode mode) {
  try {
    auto parsed = parse_tokens(texts_of(tokens), mode, false);
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      if (parsed[i].kind != tokens[i].kind)
        return "token " + std::to_string(i) + " has the wrong kind";
    }
  } catch (const GrammarError &e) {
    return std::string(e.what()) + " at token " + std::to_string(e.position());
  }
  return std::nullopt;
}

std::string format_sequence(std::span<const Token> tokens) {
  std::string out;
  for (const Token &t: tokens) {
    if (t.text == kEosText)
      break;
    if (!out.empty())
      out.push_back(' ');
    out += t.text;
  }
  return out;
}

EncodeDetail encode_detailed(const Molecule3D &mol, const CodecOptions &opts,
                             const BondTable &table) {
  validate(mol);
  check_decimals(opts.decimals_distance);
  check_decimals(opts.decimals_angle);
  for (int z: mol.atoms) {
    if (element_symbol(z).empty())
      throw std::invalid_argument("no element symbol for atomic number "
                                  + std::to_string(z));
  }

  EncodeDetail out;
  const ColoredGraph g = infer_bonds(mol, table);
  OrderOptions order_opts;
  order_opts.strategy = opts.strategy;
  order_opts.seed = opts.seed;
  order_opts.decimals_distance = opts.decimals_distance;
  order_opts.decimals_angle = opts.decimals_angle;
  out.order = order_strategy(g, mol.coords, order_opts);
  out.frame = build_frame(mol.coords, out.order);
  out.records = to_spherical(mol.coords, out.order, out.frame);

  const std::string deg(kDegree);
  out.tokens.reserve(out.records.size() * 10 + 1);
  for (std::size_t i = 0; i < out.order.size(); ++i) {
    const SphericalRecord &r = out.records[i];
    out.tokens.push_back(
        { TokenKind::kElement,
          std::string(element_symbol(mol.atoms[out.order[i]])) });
    append_number(out.tokens, TokenKind::kDistance,
                  format_fixed(quantize(r.d, opts.decimals_distance),
                               opts.decimals_distance),
                  opts.tokenize);
    append_number(out.tokens, TokenKind::kTheta,
                  format_fixed(quantize(r.theta, opts.decimals_angle),
                               opts.decimals_angle)
                      + deg,
                  opts.tokenize);
    append_number(out.tokens, TokenKind::kPhi,
                  format_fixed(quantize(r.phi, opts.decimals_angle),
                               opts.decimals_angle)
                      + deg,
                  opts.tokenize);
  }
  out.tokens.push_back({ TokenKind::kSpecial, std::string(kEosText) });
  return out;
}

std::vector<Token> encode(const Molecule3D &mol, const CodecOptions &opts,
                          const BondTable &table) {
  return encode_detailed(mol, opts, table).tokens;
}

Molecule3D decode(std::span<const Token> tokens, TokenizeMode mode) {
  const std::vector<Token> parsed = parse_tokens(texts_of(tokens), mode, false);

  Molecule3D mol;
  std::size_t pos = 0;
  if (parsed[0].kind == TokenKind::kProperty) {
    std::string_view t = parsed[0].text;
    t.remove_prefix(5);
    const auto eq = t.find('=');
    mol.properties[std::string(t.substr(0, eq)) + "_bucket"] =
        *parse_double(t.substr(eq + 1));
    ++pos;
  }
  const double max_angle = std::numbers::pi + kAngleSlack;
  while (parsed[pos].kind != TokenKind::kSpecial) {
    const std::size_t at = pos;
    const int z = *atomic_number(parsed[pos++].text);
    SphericalRecord r;
    r.d = read_number(parsed, pos, mode);
    r.theta = read_number(parsed, pos, mode);
    r.phi = read_number(parsed, pos, mode);
    if (r.d < 0)
      throw std::invalid_argument("negative distance in atom at token "
                                  + std::to_string(at));
    if (r.theta < 0 || r.theta > max_angle)
      throw std::invalid_argument("theta out of range in atom at token "
                                  + std::to_string(at));
    if (std::abs(r.phi) > max_angle)
      throw std::invalid_argument("phi out of range in atom at token "
                                  + std::to_string(at));
    mol.atoms.push_back(z);
    mol.coords.push_back(from_spherical(r));
  }
  return mol;
}

RoundtripResult roundtrip_check(const Molecule3D &mol, const CodecOptions &opts,
                                const BondTable &table) {
  const EncodeDetail enc = encode_detailed(mol, opts, table);
  const Molecule3D dec = decode(enc.tokens, opts.tokenize);
  const double dd = 0.5 * std::pow(10.0, -opts.decimals_distance);
  const double da = 0.5 * std::pow(10.0, -opts.decimals_angle);

  RoundtripResult out;
  double sum = 0;
  for (std::size_t i = 0; i < enc.order.size(); ++i) {
    const Vec3 truth = enc.frame.local(mol.coords[enc.order[i]]);
    const Vec3 &got = dec.coords[i];
    const double d = got.norm();
    const double theta = d > 0 ? std::acos(std::clamp(got.z() / d, -1.0, 1.0))
                               : 0.0;
    const double bound = dd + d * (da + std::sin(theta) * da) + 1e-12;
    const double err = (got - truth).norm();
    out.errors.push_back(err);
    out.bounds.push_back(bound);
    if (err > bound)
      ++out.violations;
    out.max_error = std::max(out.max_error, err);
    sum += err;
  }
  out.mean_error = out.errors.empty() ? 0 : sum / out.errors.size();
  return out;
}

// Vocabulary -----------------------------------------------------------------

VocabularyOverflow::VocabularyOverflow(std::size_t size, std::size_t cap)
    : std::runtime_error("vocabulary of " + std::to_string(size)
                         + " tokens exceeds the cap of " + std::to_string(cap)
                         + " by " + std::to_string(size - cap)
                         + "; use fewer decimals"),
      overflow_(size - cap) { }

Vocabulary::Vocabulary()
    : Vocabulary(std::vector<std::string> {}) { }

Vocabulary::Vocabulary(std::vector<std::string> texts) {
  texts_ = { std::string(kBosText), std::string(kEosText),
             std::string(kPadText), std::string(kUnkText) };
  texts_.insert(texts_.end(), std::make_move_iterator(texts.begin()),
                std::make_move_iterator(texts.end()));
  for (std::size_t i = 0; i < texts_.size(); ++i) {
    if (!ids_.emplace(texts_[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate vocabulary entry '" + texts_[i]
                                  + "'");
  }
}

Vocabulary Vocabulary::from_texts(
    const std::set<std::string, std::less<>> &texts, std::size_t cap) {
  std::vector<std::pair<std::tuple<int, double, std::string>, std::string>>
      keyed;
  for (const auto &t: texts) {
    if (!is_special(t))
      keyed.emplace_back(vocab_key(t), t);
  }
  const std::size_t size = keyed.size() + 4;
  if (size > cap)
    throw VocabularyOverflow(size, cap);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> sorted;
  sorted.reserve(keyed.size());
  for (auto &kv: keyed)
    sorted.push_back(std::move(kv.second));
  return Vocabulary(std::move(sorted));
}

Vocabulary Vocabulary::build(std::span<const std::vector<Token>> corpus,
                             std::size_t cap) {
  if (corpus.empty())
    throw std::invalid_argument("empty corpus");
  std::set<std::string, std::less<>> texts;
  for (const auto &seq: corpus) {
    for (const Token &t: seq)
      texts.insert(t.text);
  }
  return from_texts(texts, cap);
}

Vocabulary Vocabulary::parse(std::string_view text) {
  auto lines = internal::split_lines(text);
  while (!lines.empty() && internal::trim(lines.back()).empty())
    lines.pop_back();
  const std::string_view specials[] = { kBosText, kEosText, kPadText,
                                        kUnkText };
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view t = internal::trim(lines[i]);
    const int line_no = static_cast<int>(i) + 1;
    if (i < 4) {
      if (t != specials[i])
        throw ParseError("vocabulary line " + std::to_string(line_no)
                             + " must be " + std::string(specials[i]),
                         line_no);
      continue;
    }
    if (t.empty())
      throw ParseError("empty vocabulary entry at line "
                           + std::to_string(line_no),
                       line_no);
    rest.emplace_back(t);
  }
  if (lines.size() < 4)
    throw ParseError("vocabulary is missing the special tokens", 0);
  try {
    return Vocabulary(std::move(rest));
  } catch (const std::invalid_argument &e) {
    throw ParseError(e.what(), 0);
  }
}

Vocabulary Vocabulary::from_file(const std::filesystem::path &path) {
  return parse(internal::read_file(path.string()));
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (const auto &t: texts_) {
    out += t;
    out.push_back('\n');
  }
  return out;
}

std::optional<int> Vocabulary::find(std::string_view text) const {
  auto it = ids_.find(text);
  if (it == ids_.end())
    return std::nullopt;
  return it->second;
}

int Vocabulary::id(std::string_view text) const {
  return find(text).value_or(kUnk);
}

}  // namespace geoseq
