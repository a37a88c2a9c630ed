//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_CODEC_H_
#define GEOSEQ_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "geoseq/canon.h"
#include "geoseq/geom.h"
#include "geoseq/molgraph.h"

namespace geoseq {

enum class TokenKind {
  kElement,
  kDistance,
  kTheta,
  kPhi,
  kProperty,
  kSpecial,
};

/// In split mode a number is emitted as integer part, ".", fraction part;
/// all three pieces carry the kind of the number.
struct Token {
  TokenKind kind;
  std::string text;

  bool operator==(const Token &) const = default;
};

enum class TokenizeMode {
  kWhole,
  kSplit,
};

TokenizeMode parse_tokenize_mode(std::string_view name);
std::string_view to_string(TokenizeMode mode);

inline constexpr std::string_view kBosText = "<bos>";
inline constexpr std::string_view kEosText = "<eos>";
inline constexpr std::string_view kPadText = "<pad>";
inline constexpr std::string_view kUnkText = "<unk>";
inline constexpr std::string_view kDegree = "°";

struct CodecOptions {
  int decimals_distance = 2;
  int decimals_angle = 2;
  OrderStrategy strategy = OrderStrategy::kCanonicalLocality;
  std::uint64_t seed = 0;
  TokenizeMode tokenize = TokenizeMode::kWhole;
};

/// Fixed-point text of q * 10^-decimals, e.g. (-2, 2) -> "-0.02".
std::string format_fixed(std::int64_t q, int decimals);

/// Splits a formatted number into its tokens ("1.09" -> "1" "." "09" in
/// split mode). Throws std::invalid_argument if value is not a number.
std::vector<std::string> tokenize_mode(std::string_view value,
                                       TokenizeMode mode);

/// Grammar violation. position is the 0-based token index.
class GrammarError: public std::runtime_error {
public:
  GrammarError(const std::string &msg, std::size_t position)
      : std::runtime_error(msg), position_(position) { }
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// `prop:<name>=<bucket>`
bool is_property_token(std::string_view text);

/// Assigns kinds by grammar position:
///   [property] (element distance theta phi)+ <eos>
/// A missing trailing <eos> is appended when allow_missing_eos is set.
/// Throws GrammarError.
std::vector<Token> parse_tokens(std::span<const std::string> texts,
                                TokenizeMode mode,
                                bool allow_missing_eos = true);

/// Whitespace-separated sequence line.
std::vector<Token> parse_sequence(std::string_view line, TokenizeMode mode);

/// Empty optional if the sequence is grammatical (including the <eos>).
std::optional<std::string> validate_sequence(std::span<const Token> tokens,
                                             TokenizeMode mode);

/// Space-joined texts without the trailing <eos>.
std::string format_sequence(std::span<const Token> tokens);

struct EncodeDetail {
  std::vector<Token> tokens;
  std::vector<int> order;
  FrameBasis frame;
  std::vector<SphericalRecord> records;
};

EncodeDetail encode_detailed(const Molecule3D &mol, const CodecOptions &opts,
                             const BondTable &table = BondTable::default_table());

/// Token sequence of a molecule, ending with <eos>. Throws
/// std::invalid_argument on invalid molecules or unknown elements.
std::vector<Token> encode(const Molecule3D &mol, const CodecOptions &opts,
                          const BondTable &table = BondTable::default_table());

/// Inverse of encode up to rounding. Coordinates are in the frame of the
/// encoded molecule. A property token, if any, is stored as
/// properties["<name>_bucket"]. Throws GrammarError on malformed input and
/// std::invalid_argument on out-of-range values.
Molecule3D decode(std::span<const Token> tokens, TokenizeMode mode);

/// Per-atom reconstruction error against the worst-case rounding bound.
struct RoundtripResult {
  std::vector<double> errors;
  std::vector<double> bounds;
  int violations = 0;
  double max_error = 0;
  double mean_error = 0;
};

/// Encodes, decodes and compares every atom with the original expressed in
/// the encoding frame. The bound for an atom decoded at (d, theta, phi) is
/// dd + d * (da + sin(theta) * da) with dd, da half a unit in the last
/// decimal of distances and angles.
RoundtripResult roundtrip_check(const Molecule3D &mol, const CodecOptions &opts,
                                const BondTable &table = BondTable::default_table());

/// Thrown when a vocabulary would exceed its size cap.
class VocabularyOverflow: public std::runtime_error {
public:
  VocabularyOverflow(std::size_t size, std::size_t cap);
  std::size_t overflow() const noexcept { return overflow_; }

private:
  std::size_t overflow_;
};

/// Bijection between token texts and ids. Ids 0..3 are <bos>, <eos>, <pad>
/// and <unk>; the remaining tokens are sorted by category and value.
class Vocabulary {
public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kPad = 2;
  static constexpr int kUnk = 3;
  static constexpr std::size_t kDefaultCap = 16000;

  Vocabulary();

  /// cap bounds the total size including the special tokens.
  static Vocabulary from_texts(const std::set<std::string, std::less<>> &texts,
                               std::size_t cap = kDefaultCap);
  static Vocabulary build(std::span<const std::vector<Token>> corpus,
                          std::size_t cap = kDefaultCap);

  /// One text per line, the first four lines being the special tokens.
  static Vocabulary parse(std::string_view text);
  static Vocabulary from_file(const std::filesystem::path &path);
  std::string serialize() const;

  std::size_t size() const { return texts_.size(); }
  std::optional<int> find(std::string_view text) const;
  /// kUnk for unknown texts.
  int id(std::string_view text) const;
  const std::string &text(int id) const { return texts_.at(id); }
  const std::vector<std::string> &texts() const { return texts_; }

  bool operator==(const Vocabulary &other) const {
    return texts_ == other.texts_;
  }

private:
  explicit Vocabulary(std::vector<std::string> texts);

  std::vector<std::string> texts_;
  std::map<std::string, int, std::less<>> ids_;
};

}  // namespace geoseq

#endif  // GEOSEQ_CODEC_H_
