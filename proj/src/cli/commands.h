//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_CLI_COMMANDS_H_
#define GEOSEQ_CLI_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoseq/codec.h"
#include "geoseq/lmgen.h"

namespace geoseq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Invalid command configuration; maps to kExitUsage.
class UsageError: public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::string output = "-";  // "-" is stdout
  int workers = 1;
  std::uint64_t seed = 0;
  CodecOptions codec;

  // encode
  std::optional<std::string> property;
  int buckets = 10;
  std::string edges_in;
  std::string edges_out;

  // build-vocab / train / sample
  std::string vocab;
  std::size_t vocab_cap = Vocabulary::kDefaultCap;
  std::string model;
  int ngram_order = 6;
  double backoff = NgramModel::kDefaultBackoff;
  SamplerConfig sampler;
  int num_samples = 1000;
  std::optional<std::string> condition;
  double max_invalid_fraction = 0.05;

  // eval / roundtrip-check
  std::string reference;
  std::string training;
  std::string report;  // JSON destination, "-" for stdout
};

int cmd_encode(const RunConfig &cfg, std::ostream &log);
int cmd_decode(const RunConfig &cfg, std::ostream &log);
int cmd_roundtrip_check(const RunConfig &cfg, std::ostream &log);
int cmd_build_vocab(const RunConfig &cfg, std::ostream &log);
int cmd_train(const RunConfig &cfg, std::ostream &log);
int cmd_sample(const RunConfig &cfg, std::ostream &log);
int cmd_eval(const RunConfig &cfg, std::ostream &log);

}  // namespace geoseq::cli

#endif  // GEOSEQ_CLI_COMMANDS_H_
