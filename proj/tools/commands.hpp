#pragma once

#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "tokencore/tokencore.hpp"

namespace tokencore::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFile = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDegenerate = 3;

struct InjectOptions {
  std::string in_path;
  bool generate = false;
  std::string out_path;
  std::size_t docs = 500;
  VocabConfig vocab;
  CorruptionConfig corruption;
  std::uint64_t seed = 0;
};

struct SplitOptions {
  std::string corpus_path;
  std::string train_out;
  std::string test_out;
  double train_frac = 0.5;
  std::uint64_t seed = 0;
};

struct EmbedOptions {
  std::string corpus_path;
  std::string out_dir;
  std::string provider = "hash";
  HashEmbedConfig hash;
};

struct BankOptions {
  std::string archive_dir;
  std::string out_path;
  std::string pooling = "max";
  std::string subsample = "none";
  double keep_fraction = 1.0;
  std::uint64_t seed = 0;
};

struct ScoreOptions {
  std::string bank_path;
  std::string archive_dir;
  std::string out_path;
  std::string aggregator = "mean";
  std::size_t topk = 3;
  std::string detector = "tokencore";
  DetectorParams detector_params;
  bool ann = false;
  AnnParams ann_params;
  std::uint64_t seed = 0;
};

struct EvalOptions {
  std::string scores_path;
  std::string corpus_path;
  double train_frac = 0.0;  // 0: the corpus is already the test set
  std::uint64_t seed = 0;
  std::string out_path;
  std::string table_path;
  std::string csv_dir;
};

void add_inject(CLI::App& app, InjectOptions& opt);
void add_split(CLI::App& app, SplitOptions& opt);
void add_embed(CLI::App& app, EmbedOptions& opt);
void add_bank(CLI::App& app, BankOptions& opt);
void add_score(CLI::App& app, ScoreOptions& opt);
void add_eval(CLI::App& app, EvalOptions& opt);

int run_inject(const InjectOptions& opt);
int run_split(const SplitOptions& opt);
int run_embed(const EmbedOptions& opt);
int run_bank(const BankOptions& opt);
int run_score(const ScoreOptions& opt);
int run_eval(const EvalOptions& opt);

/// Path of the run-config sidecar written next to a score file.
std::string run_config_path(const std::string& scores_path);

}  // namespace tokencore::cli
