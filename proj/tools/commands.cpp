#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <unordered_set>

#include "json.hpp"

namespace tokencore::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

PoolingMode require_pooling(const std::string& name) {
  const auto mode = parse_pooling_mode(name);
  if (!mode) throw ParamError("unknown pooling mode '" + name + "'");
  return *mode;
}

}  // namespace

std::string run_config_path(const std::string& scores_path) { return scores_path + ".run.json"; }

// ---------------------------------------------------------------------------
// inject

void add_inject(CLI::App& app, InjectOptions& opt) {
  auto* cmd = app.add_subcommand("inject", "Inject gibberish words into a normal corpus");
  auto* in = cmd->add_option("--in", opt.in_path, "Input corpus (JSONL)");
  auto* gen = cmd->add_flag("--generate", opt.generate, "Generate a synthetic normal corpus");
  in->excludes(gen);
  cmd->add_option("--out", opt.out_path, "Output labeled corpus (JSONL)")->required();
  cmd->add_option("--docs", opt.docs, "Documents to generate")->capture_default_str();
  cmd->add_option("--vocab-size", opt.vocab.vocab_size, "Vocabulary size")->capture_default_str();
  cmd->add_option("--word-len-min", opt.vocab.word_len_min)->capture_default_str();
  cmd->add_option("--word-len-max", opt.vocab.word_len_max)->capture_default_str();
  cmd->add_option("--doc-len-min", opt.vocab.doc_len_min)->capture_default_str();
  cmd->add_option("--doc-len-max", opt.vocab.doc_len_max)->capture_default_str();
  cmd->add_option("--zipf", opt.vocab.zipf_exponent, "Zipf exponent")->capture_default_str();
  cmd->add_option("--rate", opt.corruption.doc_anomaly_rate, "Fraction of documents to corrupt")
      ->capture_default_str();
  cmd->add_option("--tokens-min", opt.corruption.tokens_min)->capture_default_str();
  cmd->add_option("--tokens-max", opt.corruption.tokens_max)->capture_default_str();
  cmd->add_option("--gib-len-min", opt.corruption.gibberish_len_min)->capture_default_str();
  cmd->add_option("--gib-len-max", opt.corruption.gibberish_len_max)->capture_default_str();
  cmd->add_option("--seed", opt.seed)->capture_default_str();
}

int run_inject(const InjectOptions& opt) {
  if (opt.generate == !opt.in_path.empty()) {
    throw ParamError("inject needs exactly one of --in or --generate");
  }
  Corpus corpus = opt.generate ? gen_normal_corpus(opt.vocab, opt.docs, opt.seed)
                               : read_corpus_jsonl(opt.in_path);
  CorruptionConfig cfg = opt.corruption;
  cfg.seed = derive_seed(opt.seed, 0x696e6a656374ULL);
  const Corpus labeled = inject_gibberish(corpus, cfg);
  write_corpus_jsonl(labeled, opt.out_path);

  std::size_t anomalous_docs = 0;
  std::size_t anomalous_words = 0;
  for (const auto& doc : labeled.documents) {
    anomalous_docs += doc.label == Label::kAnomalous;
    for (const auto& w : doc.words) anomalous_words += w.label == Label::kAnomalous;
  }
  std::cerr << "wrote " << labeled.documents.size() << " documents (" << anomalous_docs
            << " anomalous, " << anomalous_words << " injected words) to " << opt.out_path
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// split

void add_split(CLI::App& app, SplitOptions& opt) {
  auto* cmd = app.add_subcommand("split", "Split a labeled corpus into normal-only train and test");
  cmd->add_option("--corpus", opt.corpus_path, "Labeled corpus (JSONL)")->required();
  cmd->add_option("--train-out", opt.train_out, "Training corpus output")->required();
  cmd->add_option("--test-out", opt.test_out, "Test corpus output")->required();
  cmd->add_option("--train-frac", opt.train_frac, "Share of normal documents used for training")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed)->capture_default_str();
}

int run_split(const SplitOptions& opt) {
  const auto split = split_corpus(read_corpus_jsonl(opt.corpus_path), opt.train_frac, opt.seed);
  write_corpus_jsonl(split.train, opt.train_out);
  write_corpus_jsonl(split.test, opt.test_out);
  std::cerr << "train " << split.train.documents.size() << " documents, test "
            << split.test.documents.size() << " documents\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// embed

void add_embed(CLI::App& app, EmbedOptions& opt) {
  auto* cmd = app.add_subcommand("embed", "Embed a corpus into an archive directory");
  cmd->add_option("--corpus", opt.corpus_path, "Corpus (JSONL)")->required();
  cmd->add_option("--out", opt.out_dir, "Archive directory")->required();
  cmd->add_option("--provider", opt.provider, "Embedding provider")->capture_default_str();
  cmd->add_option("--dim", opt.hash.dim, "Hash embedding dimension")->capture_default_str();
  cmd->add_option("--ngram-min", opt.hash.ngram_min)->capture_default_str();
  cmd->add_option("--ngram-max", opt.hash.ngram_max)->capture_default_str();
  cmd->add_option("--hash-seed", opt.hash.seed)->capture_default_str();
}

int run_embed(const EmbedOptions& opt) {
  if (opt.provider != "hash") {
    throw ParamError("provider '" + opt.provider +
                     "' is not built in; transformer archives come from the extraction sidecar");
  }
  // Surface config errors before touching the input.
  (void)hash_embed_word("probe", opt.hash);
  const Corpus corpus = read_corpus_jsonl(opt.corpus_path);
  write_archive(embed_corpus(corpus, opt.hash), opt.out_dir);
  std::cerr << "embedded " << corpus.word_count() << " words into " << opt.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bank

void add_bank(CLI::App& app, BankOptions& opt) {
  auto* cmd = app.add_subcommand("bank", "Build a memory bank from a normal-only archive");
  cmd->add_option("--archive", opt.archive_dir, "Training archive directory")->required();
  cmd->add_option("--out", opt.out_path, "Bank file")->required();
  cmd->add_option("--pooling", opt.pooling, "max | mean | first")->capture_default_str();
  cmd->add_option("--subsample", opt.subsample, "none | uniform")->capture_default_str();
  cmd->add_option("--keep", opt.keep_fraction, "Fraction kept by uniform subsampling")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed)->capture_default_str();
}

int run_bank(const BankOptions& opt) {
  const PoolingMode mode = require_pooling(opt.pooling);
  SubsampleConfig sub;
  if (opt.subsample == "none") {
    sub.mode = SubsampleConfig::Mode::kNone;
  } else if (opt.subsample == "uniform") {
    sub.mode = SubsampleConfig::Mode::kUniform;
  } else {
    throw ParamError("unknown subsample mode '" + opt.subsample + "'");
  }
  sub.keep_fraction = opt.keep_fraction;
  sub.seed = opt.seed;
  if (sub.mode == SubsampleConfig::Mode::kNone && sub.keep_fraction != 1.0) {
    throw ParamError("--keep requires --subsample uniform");
  }
  if (!(sub.keep_fraction > 0.0 && sub.keep_fraction <= 1.0)) {
    throw ParamError("--keep must lie in (0, 1]");
  }

  const auto bank = build_bank(read_archive(opt.archive_dir), mode, sub);
  bank.save(opt.out_path);
  std::cerr << "bank of " << bank.size() << " vectors (dim " << bank.dim() << ") written to "
            << opt.out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// score

void add_score(CLI::App& app, ScoreOptions& opt) {
  auto* cmd = app.add_subcommand("score", "Score the words and documents of a test archive");
  cmd->add_option("--bank", opt.bank_path, "Bank file")->required();
  cmd->add_option("--archive", opt.archive_dir, "Test archive directory")->required();
  cmd->add_option("--out", opt.out_path, "Score file (JSONL)")->required();
  cmd->add_option("--aggregator", opt.aggregator, "mean | max | topk")->capture_default_str();
  cmd->add_option("--topk", opt.topk, "k for --aggregator topk")->capture_default_str();
  cmd->add_option("--detector", opt.detector, "tokencore | lof | iforest | ecod")
      ->capture_default_str();
  cmd->add_option("--lof-k", opt.detector_params.lof_k)->capture_default_str();
  cmd->add_option("--if-trees", opt.detector_params.iforest.n_trees)->capture_default_str();
  cmd->add_option("--if-psi", opt.detector_params.iforest.psi, "0 selects min(256, N)")
      ->capture_default_str();
  cmd->add_flag("--ann", opt.ann, "Use the approximate nearest-neighbor index");
  cmd->add_option("--ann-recall", opt.ann_params.target_recall_at_1)->capture_default_str();
  cmd->add_option("--ann-degree", opt.ann_params.max_degree)->capture_default_str();
  cmd->add_option("--ann-ef-construction", opt.ann_params.ef_construction)->capture_default_str();
  cmd->add_option("--ann-ef-search", opt.ann_params.ef_search)->capture_default_str();
  cmd->add_option("--ann-probes", opt.ann_params.probe_count)->capture_default_str();
  cmd->add_option("--seed", opt.seed)->capture_default_str();
}

int run_score(const ScoreOptions& opt) {
  const auto kind = parse_detector_kind(opt.detector);
  if (!kind) throw ParamError("unknown detector '" + opt.detector + "'");
  const auto agg_kind = parse_aggregator_kind(opt.aggregator);
  if (!agg_kind) throw ParamError("unknown aggregator '" + opt.aggregator + "'");
  if (opt.topk == 0) throw ParamError("--topk must be >= 1");
  if (opt.ann && *kind != DetectorKind::kTokenCore) {
    throw ParamError("--ann applies to the tokencore detector only");
  }
  const Aggregator aggregator{*agg_kind, opt.topk};

  MemoryBank bank = MemoryBank::load(opt.bank_path);
  const auto archive = read_archive(opt.archive_dir);
  if (archive.matrix.dim() != bank.dim()) {
    throw SchemaError("archive dim " + std::to_string(archive.matrix.dim()) +
                      " does not match bank dim " + std::to_string(bank.dim()));
  }
  const auto words = pool_archive(archive, bank.provenance().pooling);

  std::unique_ptr<TokenScorer> baseline;
  const TokenScorer* scorer = &bank;
  if (*kind == DetectorKind::kTokenCore) {
    if (opt.ann) {
      AnnParams params = opt.ann_params;
      params.enabled = true;
      params.seed = opt.seed;
      bank.build_ann_index(params);
    }
  } else {
    DetectorParams params = opt.detector_params;
    params.iforest.seed = opt.seed;
    baseline = fit_detector(*kind, bank.vectors(), params);
    scorer = baseline.get();
  }

  const auto scored =
      score_documents(*scorer, archive.corpus, words, aggregator, default_thread_count());
  write_scores_jsonl(scored, opt.out_path);

  const json run = {{"detector", std::string(to_string(*kind))},
                    {"pooling", std::string(to_string(bank.provenance().pooling))},
                    {"aggregator", aggregator.describe()},
                    {"seed", opt.seed},
                    {"ann", opt.ann}};
  write_text(run_config_path(opt.out_path), run.dump(2) + "\n");
  std::cerr << "scored " << scored.size() << " documents with " << to_string(*kind) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

void add_eval(CLI::App& app, EvalOptions& opt) {
  auto* cmd = app.add_subcommand("eval", "Compute AUROC/AUPRC at token and document level");
  cmd->add_option("--scores", opt.scores_path, "Score file (JSONL)")->required();
  cmd->add_option("--corpus", opt.corpus_path, "Labeled corpus (JSONL)")->required();
  cmd->add_option("--train-frac", opt.train_frac,
                  "Treat --corpus as the full corpus and evaluate its test split");
  cmd->add_option("--seed", opt.seed, "Split seed for --train-frac")->capture_default_str();
  cmd->add_option("--out", opt.out_path, "Report JSON output");
  cmd->add_option("--table", opt.table_path, "Report text table output");
  cmd->add_option("--csv-dir", opt.csv_dir, "Directory for raw label,score CSV dumps");
}

int run_eval(const EvalOptions& opt) {
  const auto scored = read_scores_jsonl(opt.scores_path);
  Corpus corpus = read_corpus_jsonl(opt.corpus_path);
  if (opt.train_frac != 0.0) {
    corpus = split_corpus(corpus, opt.train_frac, opt.seed).test;
    std::unordered_set<std::string> scored_ids;
    for (const auto& s : scored) scored_ids.insert(s.doc_id);
    for (const auto& doc : corpus.documents) {
      if (!scored_ids.contains(doc.doc_id)) {
        throw SchemaError("test document '" + doc.doc_id + "' has no scores");
      }
    }
  }

  RunConfig config;
  if (const auto sidecar = run_config_path(opt.scores_path); fs::exists(sidecar)) {
    std::ifstream in(sidecar);
    try {
      const json j = json::parse(in);
      config.detector = j.value("detector", config.detector);
      config.pooling = j.value("pooling", config.pooling);
      config.aggregator = j.value("aggregator", config.aggregator);
      config.seed = j.value("seed", config.seed);
      config.ann = j.value("ann", config.ann);
    } catch (const json::exception& e) {
      throw FormatError(sidecar + ": " + e.what());
    }
  }

  const auto inputs = collect_eval_inputs(scored, corpus);
  const EvalReport report = evaluate_run(scored, corpus, config);
  const std::string table = report_to_table(report);
  std::cout << table;
  if (!opt.out_path.empty()) write_text(opt.out_path, report_to_json(report));
  if (!opt.table_path.empty()) write_text(opt.table_path, table);
  if (!opt.csv_dir.empty()) {
    fs::create_directories(opt.csv_dir);
    write_text(fs::path(opt.csv_dir) / "token_scores.csv", labeled_scores_to_csv(inputs.token));
    write_text(fs::path(opt.csv_dir) / "doc_scores.csv", labeled_scores_to_csv(inputs.document));
  }
  return kExitOk;
}

}  // namespace tokencore::cli
