//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "commands.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "geoseq/metrics.h"
#include "geoseq/parallel.h"
#include "geoseq/random.h"
#include "../text_util.h"

namespace geoseq::cli {
namespace {
using nlohmann::json;

std::string read_input(const std::string &path) {
  try {
    return internal::read_file(path);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
}

void write_output(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw UsageError("cannot write " + path);
  out << content;
}

void require_inputs(const RunConfig &cfg) {
  if (cfg.inputs.empty())
    throw UsageError("no input files given");
  if (cfg.workers < 1)
    throw UsageError("--workers must be at least 1");
}

void require(const std::string &value, const char *flag) {
  if (value.empty())
    throw UsageError(std::string(flag) + " is required");
}

// A parsed molecule with its 1-based block number across all inputs.
struct InputMolecule {
  std::size_t block;
  Molecule3D mol;
};

// Reads all XYZ inputs; unreadable blocks are logged and counted.
std::vector<InputMolecule> read_molecules(const std::vector<std::string> &paths,
                                          std::ostream &log, int &failures) {
  std::vector<InputMolecule> out;
  std::size_t block = 0;
  for (const auto &path: paths) {
    for (auto &b: parse_xyz_blocks(read_input(path))) {
      ++block;
      if (b.molecule) {
        out.push_back({ block, std::move(*b.molecule) });
      } else {
        log << "error: block " << block << " (" << path << ":"
            << b.error_line << "): " << b.error << '\n';
        ++failures;
      }
    }
  }
  return out;
}

std::vector<Molecule3D> read_molecules_strict(const std::string &path) {
  try {
    return parse_xyz(read_input(path));
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

// Non-blank lines of the sequence inputs with their 1-based line numbers.
struct InputLine {
  std::string source;
  int line;
  std::string text;
};

std::vector<InputLine> read_lines(const std::vector<std::string> &paths) {
  std::vector<InputLine> out;
  for (const auto &path: paths) {
    const std::string text = read_input(path);
    const auto lines = internal::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      auto t = internal::trim(lines[i]);
      if (!t.empty())
        out.push_back({ path, static_cast<int>(i) + 1, std::string(t) });
    }
  }
  return out;
}

std::string join_texts(const std::vector<std::string> &texts) {
  std::string out;
  for (const auto &t: texts) {
    if (t == kEosText)
      break;
    if (!out.empty())
      out.push_back(' ');
    out += t;
  }
  return out;
}

json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

std::vector<double> read_edges(const std::string &path) {
  std::vector<double> edges;
  for (auto f: internal::split_ws(read_input(path))) {
    auto v = internal::parse_double(f);
    if (!v)
      throw UsageError("bad bucket edge '" + std::string(f) + "' in " + path);
    edges.push_back(*v);
  }
  return edges;
}

using Outcome = std::variant<std::string, std::string>;  // ok line | error

bool ok(const Outcome &o) { return o.index() == 0; }

}  // namespace

int cmd_encode(const RunConfig &cfg, std::ostream &log) {
  require_inputs(cfg);
  int failures = 0;
  auto mols = read_molecules(cfg.inputs, log, failures);

  std::vector<double> edges;
  if (cfg.property) {
    if (!cfg.edges_in.empty()) {
      edges = read_edges(cfg.edges_in);
    } else {
      std::vector<double> values;
      for (const auto &m: mols) {
        if (auto it = m.mol.properties.find(*cfg.property);
            it != m.mol.properties.end())
          values.push_back(it->second);
      }
      edges = quantile_edges(values, cfg.buckets);
    }
    if (!cfg.edges_out.empty()) {
      std::ostringstream os;
      os << std::setprecision(17);
      for (double e: edges)
        os << e << '\n';
      write_output(cfg.edges_out, os.str());
    }
  }

  auto results = parallel_map(mols.size(), cfg.workers, [&](std::size_t i) {
    const Molecule3D &mol = mols[i].mol;
    CodecOptions opts = cfg.codec;
    opts.seed = stream_seed(cfg.seed, mols[i].block - 1);
    try {
      std::string line;
      if (cfg.property) {
        auto it = mol.properties.find(*cfg.property);
        if (it == mol.properties.end())
          return Outcome(std::in_place_index<1>,
                         "missing property " + *cfg.property);
        line = property_bucket(it->second, *cfg.property, edges) + " ";
      }
      line += format_sequence(encode(mol, opts));
      return Outcome(std::in_place_index<0>, std::move(line));
    } catch (const std::exception &e) {
      return Outcome(std::in_place_index<1>, e.what());
    }
  });

  std::string out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (ok(results[i])) {
      out += std::get<0>(results[i]);
      out.push_back('\n');
    } else {
      log << "error: block " << mols[i].block << ": "
          << std::get<1>(results[i]) << '\n';
      ++failures;
    }
  }
  write_output(cfg.output, out);
  return failures == 0 ? kExitOk : kExitData;
}

int cmd_decode(const RunConfig &cfg, std::ostream &log) {
  require_inputs(cfg);
  const auto lines = read_lines(cfg.inputs);
  auto results = parallel_map(lines.size(), cfg.workers, [&](std::size_t i) {
    try {
      Molecule3D mol = decode(parse_sequence(lines[i].text, cfg.codec.tokenize),
                              cfg.codec.tokenize);
      mol.properties["index"] = static_cast<double>(i);
      return Outcome(std::in_place_index<0>, write_xyz(mol));
    } catch (const GrammarError &e) {
      return Outcome(std::in_place_index<1>,
                     std::string(e.what()) + " (token "
                         + std::to_string(e.position() + 1) + ")");
    } catch (const std::exception &e) {
      return Outcome(std::in_place_index<1>, e.what());
    }
  });

  int failures = 0;
  std::string out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (ok(results[i])) {
      out += std::get<0>(results[i]);
    } else {
      log << "error: " << lines[i].source << ":" << lines[i].line << ": "
          << std::get<1>(results[i]) << '\n';
      ++failures;
    }
  }
  write_output(cfg.output, out);
  return failures == 0 ? kExitOk : kExitData;
}

int cmd_roundtrip_check(const RunConfig &cfg, std::ostream &log) {
  require_inputs(cfg);
  int failures = 0;
  auto mols = read_molecules(cfg.inputs, log, failures);

  using Result = std::variant<RoundtripResult, std::string>;
  auto results = parallel_map(mols.size(), cfg.workers, [&](std::size_t i) {
    CodecOptions opts = cfg.codec;
    opts.seed = stream_seed(cfg.seed, mols[i].block - 1);
    try {
      return Result(roundtrip_check(mols[i].mol, opts));
    } catch (const std::exception &e) {
      return Result(std::string(e.what()));
    }
  });

  std::size_t atoms = 0, violations = 0, checked = 0;
  double sum = 0, max_error = 0;
  json violating = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (auto *err = std::get_if<std::string>(&results[i])) {
      log << "error: block " << mols[i].block << ": " << *err << '\n';
      ++failures;
      continue;
    }
    const auto &r = std::get<RoundtripResult>(results[i]);
    ++checked;
    atoms += r.errors.size();
    violations += r.violations;
    for (double e: r.errors)
      sum += e;
    max_error = std::max(max_error, r.max_error);
    if (r.violations > 0)
      violating.push_back(mols[i].block);
  }

  json report = {
    { "molecules", checked },
    { "failures", failures },
    { "atoms", atoms },
    { "decimals_distance", cfg.codec.decimals_distance },
    { "decimals_angle", cfg.codec.decimals_angle },
    { "order", std::string(to_string(cfg.codec.strategy)) },
    { "max_error", max_error },
    { "mean_error", atoms ? sum / atoms : 0.0 },
    { "violations", violations },
    { "violating_blocks", violating },
  };
  write_output(cfg.report.empty() ? cfg.output : cfg.report,
               report.dump(2) + "\n");
  log << "roundtrip: " << checked << " molecules, " << atoms
      << " atoms, mean error " << (atoms ? sum / atoms : 0.0)
      << " A, max error " << max_error << " A, " << violations
      << " bound violations\n";
  return failures == 0 && violations == 0 ? kExitOk : kExitData;
}

int cmd_build_vocab(const RunConfig &cfg, std::ostream &log) {
  require_inputs(cfg);
  const auto lines = read_lines(cfg.inputs);
  if (lines.empty()) {
    log << "error: empty corpus\n";
    return kExitData;
  }
  using Result = std::variant<std::vector<std::string>, std::string>;
  auto results = parallel_map(lines.size(), cfg.workers, [&](std::size_t i) {
    try {
      std::vector<std::string> texts;
      for (auto &t: parse_sequence(lines[i].text, cfg.codec.tokenize))
        texts.push_back(std::move(t.text));
      return Result(std::move(texts));
    } catch (const std::exception &e) {
      return Result(std::string(e.what()));
    }
  });

  int failures = 0;
  std::set<std::string, std::less<>> texts;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (auto *err = std::get_if<std::string>(&results[i])) {
      log << "error: " << lines[i].source << ":" << lines[i].line << ": "
          << *err << '\n';
      ++failures;
      continue;
    }
    for (auto &t: std::get<0>(results[i]))
      texts.insert(std::move(t));
  }
  if (failures > 0)
    return kExitData;
  try {
    const Vocabulary vocab = Vocabulary::from_texts(texts, cfg.vocab_cap);
    write_output(cfg.output, vocab.serialize());
    log << "vocabulary: " << vocab.size() << " tokens\n";
  } catch (const VocabularyOverflow &e) {
    log << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int cmd_train(const RunConfig &cfg, std::ostream &log) {
  require_inputs(cfg);
  require(cfg.vocab, "--vocab");
  if (cfg.ngram_order < 1)
    throw UsageError("--order must be at least 1");
  const Vocabulary vocab = Vocabulary::from_file(cfg.vocab);
  const auto lines = read_lines(cfg.inputs);

  std::vector<std::vector<int>> corpus;
  int failures = 0;
  std::size_t unknown = 0;
  for (const auto &l: lines) {
    try {
      std::vector<int> ids;
      for (const auto &t: parse_sequence(l.text, cfg.codec.tokenize)) {
        ids.push_back(vocab.id(t.text));
        unknown += ids.back() == Vocabulary::kUnk;
      }
      corpus.push_back(std::move(ids));
    } catch (const std::exception &e) {
      log << "error: " << l.source << ":" << l.line << ": " << e.what()
          << '\n';
      ++failures;
    }
  }
  if (failures > 0)
    return kExitData;
  if (corpus.empty()) {
    log << "error: empty corpus\n";
    return kExitData;
  }
  if (unknown > 0)
    log << "warning: " << unknown << " tokens not in the vocabulary\n";

  const auto model = NgramModel::train(corpus, vocab, cfg.ngram_order,
                                       cfg.backoff);
  write_output(cfg.output, model.serialize());
  log << "trained order-" << cfg.ngram_order << " model on " << corpus.size()
      << " sequences\n";
  return kExitOk;
}

int cmd_sample(const RunConfig &cfg, std::ostream &log) {
  require(cfg.model, "--model");
  if (cfg.num_samples < 0)
    throw UsageError("--num-samples must be non-negative");
  if (cfg.workers < 1)
    throw UsageError("--workers must be at least 1");
  const NgramModel model = NgramModel::from_file(cfg.model);
  if (cfg.condition && !model.vocab().find(*cfg.condition))
    throw UsageError("condition token '" + *cfg.condition
                     + "' is not in the model vocabulary");

  auto lines = parallel_map(
      static_cast<std::size_t>(cfg.num_samples), cfg.workers,
      [&](std::size_t i) {
        Rng rng(stream_seed(cfg.seed, i));
        std::vector<std::string> texts;
        for (int id: sample(model, cfg.sampler, cfg.condition, rng))
          texts.push_back(model.vocab().text(id));
        std::string error;
        try {
          parse_tokens(texts, cfg.codec.tokenize, false);
        } catch (const GrammarError &e) {
          error = e.what();
        }
        return std::pair<std::string, std::string>(join_texts(texts), error);
      });

  std::size_t invalid = 0;
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += lines[i].first;
    out.push_back('\n');
    if (!lines[i].second.empty()) {
      log << "invalid: line " << i + 1 << ": " << lines[i].second << '\n';
      ++invalid;
    }
  }
  write_output(cfg.output, out);
  const double fraction =
      lines.empty() ? 0.0 : static_cast<double>(invalid) / lines.size();
  log << "sampled " << lines.size() << " sequences, " << invalid
      << " grammar-invalid\n";
  return fraction <= cfg.max_invalid_fraction ? kExitOk : kExitData;
}

namespace {

bool looks_like_xyz(const std::string &text) {
  for (auto line: internal::split_lines(text)) {
    auto t = internal::trim(line);
    if (!t.empty())
      return internal::parse_int(t).has_value();
  }
  return true;
}

std::string table_row(const std::string &name, double value, bool percent) {
  char buf[96];
  if (!std::isfinite(value))
    std::snprintf(buf, sizeof buf, "%-22s %10s\n", name.c_str(), "n/a");
  else if (percent)
    std::snprintf(buf, sizeof buf, "%-22s %9.2f%%\n", name.c_str(),
                  100 * value);
  else
    std::snprintf(buf, sizeof buf, "%-22s %10.5f\n", name.c_str(), value);
  return buf;
}

}  // namespace

int cmd_eval(const RunConfig &cfg, std::ostream &log) {
  require_inputs(cfg);
  std::vector<Molecule3D> generated;
  std::size_t undecodable = 0;
  for (const auto &path: cfg.inputs) {
    const std::string text = read_input(path);
    if (looks_like_xyz(text)) {
      for (auto &m: read_molecules_strict(path))
        generated.push_back(std::move(m));
      continue;
    }
    const auto lines = read_lines({ path });
    for (const auto &l: lines) {
      try {
        generated.push_back(
            decode(parse_sequence(l.text, cfg.codec.tokenize),
                   cfg.codec.tokenize));
      } catch (const std::exception &) {
        ++undecodable;
      }
    }
  }

  std::vector<Molecule3D> reference, training;
  if (!cfg.reference.empty())
    reference = read_molecules_strict(cfg.reference);
  if (!cfg.training.empty())
    training = read_molecules_strict(cfg.training);

  const MetricsReport rep = evaluate(generated, reference, training);
  json j = {
    { "molecules", rep.molecules },
    { "undecodable", undecodable },
    { "atom_stability", rep.atom_stability },
    { "mol_stability", rep.mol_stability },
    { "valid", rep.valid },
    { "valid_unique", rep.valid_unique },
    { "valid_unique_novel", rep.valid_unique_novel },
    { "complete", rep.complete },
  };
  if (rep.mmd) {
    j["bond_length_mmd"] = number_or_null(rep.mmd->bond_length);
    j["bond_angle_mmd"] = number_or_null(rep.mmd->bond_angle);
    j["dihedral_mmd"] = number_or_null(rep.mmd->dihedral);
  } else {
    j["bond_length_mmd"] = nullptr;
    j["bond_angle_mmd"] = nullptr;
    j["dihedral_mmd"] = nullptr;
  }
  write_output(cfg.report.empty() ? cfg.output : cfg.report,
               j.dump(2) + "\n");

  std::string table;
  table += table_row("atom stability", rep.atom_stability, true);
  table += table_row("molecule stability", rep.mol_stability, true);
  table += table_row("valid", rep.valid, true);
  table += table_row("valid & unique", rep.valid_unique, true);
  table += table_row("valid & unique & novel", rep.valid_unique_novel, true);
  table += table_row("complete", rep.complete, true);
  if (rep.mmd) {
    table += table_row("bond length MMD", rep.mmd->bond_length, false);
    table += table_row("bond angle MMD", rep.mmd->bond_angle, false);
    table += table_row("dihedral MMD", rep.mmd->dihedral, false);
  }
  log << table;
  return kExitOk;
}

}  // namespace geoseq::cli
