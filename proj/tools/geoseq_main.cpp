//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.h"

using namespace geoseq;
using namespace geoseq::cli;

namespace {

void add_common(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_option("inputs", cfg.inputs, "Input files")->required();
  cmd->add_option("-o,--output", cfg.output, "Output file ('-' for stdout)");
  cmd->add_option("--workers", cfg.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Random seed");
}

void add_codec(CLI::App *cmd, RunConfig &cfg, std::string &order,
               std::string &tokenize, bool with_order) {
  cmd->add_option("--decimals-dist", cfg.codec.decimals_distance,
                  "Decimals of distance tokens")
      ->check(CLI::Range(1, 9));
  cmd->add_option("--decimals-angle", cfg.codec.decimals_angle,
                  "Decimals of angle tokens")
      ->check(CLI::Range(1, 9));
  if (with_order)
    cmd->add_option("--order", order, "Atom order strategy")
        ->check(CLI::IsMember({ "canonical-locality", "canonical-nonlocality",
                                "bfs", "dfs", "random" }));
  cmd->add_option("--tokenize", tokenize, "Number tokenization")
      ->check(CLI::IsMember({ "whole", "split" }));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "Molecule <-> token sequence toolkit" };
  app.require_subcommand(1);

  RunConfig cfg;
  std::string order = "canonical-locality";
  std::string tokenize = "whole";

  auto *encode = app.add_subcommand("encode", "XYZ files to sequences");
  add_common(encode, cfg);
  add_codec(encode, cfg, order, tokenize, true);
  encode->add_option("--property", cfg.property,
                     "Prefix each sequence with a bucketed property token");
  encode->add_option("--buckets", cfg.buckets, "Number of property buckets")
      ->check(CLI::PositiveNumber);
  encode->add_option("--edges", cfg.edges_in, "Read bucket edges from file");
  encode->add_option("--edges-out", cfg.edges_out, "Write bucket edges");

  auto *decode = app.add_subcommand("decode", "Sequences to XYZ");
  add_common(decode, cfg);
  add_codec(decode, cfg, order, tokenize, false);

  auto *roundtrip = app.add_subcommand(
      "roundtrip-check", "Encode, decode and compare against the error bound");
  add_common(roundtrip, cfg);
  add_codec(roundtrip, cfg, order, tokenize, true);
  roundtrip->add_option("--report", cfg.report, "JSON report destination");

  auto *vocab = app.add_subcommand("build-vocab", "Vocabulary of sequences");
  add_common(vocab, cfg);
  add_codec(vocab, cfg, order, tokenize, false);
  vocab->add_option("--cap", cfg.vocab_cap, "Maximum vocabulary size");

  auto *train = app.add_subcommand("train", "Train the n-gram model");
  add_common(train, cfg);
  add_codec(train, cfg, order, tokenize, false);
  train->add_option("--vocab", cfg.vocab, "Vocabulary file")->required();
  train->add_option("--order", cfg.ngram_order, "Context length")
      ->check(CLI::PositiveNumber);
  train->add_option("--backoff", cfg.backoff, "Backoff factor")
      ->check(CLI::Range(0.0, 1.0));

  auto *sample = app.add_subcommand("sample", "Sample sequences");
  sample->add_option("-o,--output", cfg.output, "Output file");
  sample->add_option("--workers", cfg.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", cfg.seed, "Random seed");
  sample->add_option("--model", cfg.model, "Model file")->required();
  sample->add_option("-n,--num-samples", cfg.num_samples, "Sample count");
  sample->add_option("--top-k", cfg.sampler.top_k, "Top-k cutoff")
      ->check(CLI::PositiveNumber);
  sample->add_option("--temperature", cfg.sampler.temperature,
                     "Softmax temperature")
      ->check(CLI::PositiveNumber);
  sample->add_option("--max-len", cfg.sampler.max_len, "Maximum tokens")
      ->check(CLI::PositiveNumber);
  sample->add_option("--condition", cfg.condition,
                     "Property token prop:<name>=<i>");
  sample->add_option("--max-invalid", cfg.max_invalid_fraction,
                     "Tolerated fraction of grammar-invalid samples");
  sample->add_option("--tokenize", tokenize, "Number tokenization")
      ->check(CLI::IsMember({ "whole", "split" }));

  auto *eval = app.add_subcommand("eval", "Metrics of generated molecules");
  add_common(eval, cfg);
  add_codec(eval, cfg, order, tokenize, false);
  eval->add_option("--reference", cfg.reference, "Reference XYZ for MMD");
  eval->add_option("--training", cfg.training, "Training XYZ for novelty");
  eval->add_option("--report", cfg.report, "JSON report destination");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.codec.strategy = parse_order_strategy(order);
    cfg.codec.tokenize = parse_tokenize_mode(tokenize);
    const std::map<CLI::App *, int (*)(const RunConfig &, std::ostream &)>
        commands = {
          { encode, cmd_encode },       { decode, cmd_decode },
          { roundtrip, cmd_roundtrip_check },
          { vocab, cmd_build_vocab },   { train, cmd_train },
          { sample, cmd_sample },       { eval, cmd_eval },
        };
    for (auto [cmd, fn]: commands) {
      if (cmd->parsed())
        return fn(cfg, std::cerr);
    }
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
