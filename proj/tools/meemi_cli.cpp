// Command-line front end for the alignment pipeline: orthogonal alignment,
// meet-in-the-middle fine-tuning, evaluation, translation lookup, and the
// synthetic benchmark / ablation harness.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numeric failure.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "meemi/alignment.hpp"
#include "meemi/dictionaries.hpp"
#include "meemi/embeddings.hpp"
#include "meemi/evaluation.hpp"
#include "meemi/harness.hpp"
#include "meemi/meemi.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path))
    throw meemi::data_error("input file does not exist: " + path);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw meemi::data_error("cannot create output directory: " + dir);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Reports repeat the full configuration; only "metadata" varies across
// identically-configured runs.
void write_report(const std::string& path, const std::string& command,
                  const json& config, const json& results) {
  json doc{{"command", command},
           {"config", config},
           {"results", results},
           {"metadata", {{"timestamp", timestamp_utc()}}}};
  std::ofstream out(path);
  if (!out) throw meemi::data_error("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw meemi::data_error("write failed: " + path);
}

std::pair<std::string, std::string> parse_lang_path(const std::string& spec,
                                                    const char* flag) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw usage_error(std::string(flag) + " expects LANG=PATH, got '" + spec + "'");
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

std::vector<meemi::Index> parse_index_list(const std::string& csv, const char* flag) {
  std::vector<meemi::Index> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const std::string tok =
        csv.substr(start, comma == std::string::npos ? csv.size() - start : comma - start);
    try {
      const long v = std::stol(tok);
      if (v < 1) throw std::invalid_argument("non-positive");
      out.push_back(static_cast<meemi::Index>(v));
    } catch (const std::exception&) {
      throw usage_error(std::string(flag) + ": bad value '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw usage_error(std::string(flag) + ": empty list");
  return out;
}

meemi::LoadOptions make_load_options(long limit, bool lowercase) {
  meemi::LoadOptions opts;
  if (limit > 0) opts.limit = static_cast<meemi::Index>(limit);
  opts.lowercase = lowercase;
  return opts;
}

// ---------------------------------------------------------------- align

struct AlignArgs {
  std::string src, tgt, dict, out;
  std::string src_lang = "src", tgt_lang = "tgt";
  std::string recipe = "unit,center,unit";
  long limit = 0;
  bool lowercase = false;
  long train_size = 0;
  std::uint64_t seed = 0;
};

int run_align(const AlignArgs& args) {
  require_file(args.src);
  require_file(args.tgt);
  require_file(args.dict);
  ensure_dir(args.out);

  const auto opts = make_load_options(args.limit, args.lowercase);
  const auto steps = meemi::parse_norm_recipe(args.recipe);
  auto src = meemi::normalize(meemi::load_embeddings(args.src, args.src_lang, opts), steps);
  auto tgt = meemi::normalize(meemi::load_embeddings(args.tgt, args.tgt_lang, opts), steps);

  auto dict = meemi::load_dictionary(args.dict, {args.src_lang, args.tgt_lang});
  if (args.train_size > 0)
    dict = meemi::subsample(dict, static_cast<std::size_t>(args.train_size), args.seed);

  const auto result = meemi::align_bilingual(src, tgt, dict);

  const fs::path out(args.out);
  const std::string src_vec = (out / (args.src_lang + ".vec")).string();
  const std::string tgt_vec = (out / (args.tgt_lang + ".vec")).string();
  const std::string map_file =
      (out / (args.src_lang + "-" + args.tgt_lang + ".map")).string();
  meemi::save_embeddings(result.aligned_src, src_vec);
  meemi::save_embeddings(tgt, tgt_vec);
  meemi::save_linear_map(result.map, map_file);

  write_report((out / "report.json").string(), "align",
               {{"src", args.src},
                {"tgt", args.tgt},
                {"dict", args.dict},
                {"src_lang", args.src_lang},
                {"tgt_lang", args.tgt_lang},
                {"normalize", args.recipe},
                {"limit", args.limit},
                {"lowercase", args.lowercase},
                {"train_size", args.train_size},
                {"seed", args.seed}},
               {{"pairs_kept", result.pairs_kept},
                {"skipped_oov", result.skipped_oov},
                {"rank_deficient", result.rank_deficient},
                {"dim", src.dim()},
                {"outputs", {src_vec, tgt_vec, map_file}}});

  std::cout << "aligned " << args.src_lang << " -> " << args.tgt_lang << " on "
            << result.pairs_kept << " pairs (" << result.skipped_oov
            << " skipped); map written to " << map_file << "\n";
  return 0;
}

// ---------------------------------------------------------------- meemi

struct MeemiArgs {
  std::vector<std::string> embs;   // LANG=PATH
  std::vector<std::string> freqs;  // LANG=PATH
  std::string dict, out;
  std::string hub;
  bool weighted = false;
  double ridge = 0.0;
  std::string freq_mode = "raw";
  long train_size = 0;
  std::uint64_t seed = 0;
  long limit = 0;
  bool lowercase = false;
};

int run_meemi(const MeemiArgs& args) {
  if (args.embs.size() < 2) throw usage_error("need at least two --emb LANG=PATH inputs");
  std::vector<std::pair<std::string, std::string>> embs;
  for (const auto& spec : args.embs) embs.push_back(parse_lang_path(spec, "--emb"));
  std::unordered_map<std::string, std::string> freq_paths;
  for (const auto& spec : args.freqs) {
    auto [lang, path] = parse_lang_path(spec, "--freq");
    freq_paths[lang] = path;
  }

  const std::size_t n = embs.size();
  if (args.weighted && n > 2)
    throw usage_error("--weighted applies to the bilingual case only");
  meemi::FrequencyMode mode;
  if (args.freq_mode == "raw") {
    mode = meemi::FrequencyMode::raw;
  } else if (args.freq_mode == "per-million") {
    mode = meemi::FrequencyMode::per_million;
  } else {
    throw usage_error("--freq-mode must be raw or per-million");
  }

  std::string hub = args.hub.empty() ? embs.back().first : args.hub;
  bool hub_found = false;
  std::vector<std::string> langs;
  for (const auto& [lang, path] : embs) {
    langs.push_back(lang);
    hub_found |= lang == hub;
  }
  if (!hub_found) throw usage_error("--hub '" + hub + "' is not among the --emb languages");
  if (args.weighted)
    for (const auto& lang : langs)
      if (!freq_paths.count(lang))
        throw usage_error("--weighted requires --freq " + lang + "=PATH");

  for (const auto& [lang, path] : embs) require_file(path);
  for (const auto& [lang, path] : freq_paths) require_file(path);
  require_file(args.dict);
  ensure_dir(args.out);

  const auto opts = make_load_options(args.limit, args.lowercase);
  std::vector<meemi::EmbeddingSpace<double>> spaces;
  for (const auto& [lang, path] : embs) {
    auto space = meemi::load_embeddings(path, lang, opts);
    if (auto it = freq_paths.find(lang); it != freq_paths.end())
      space = meemi::load_frequencies(space, it->second);
    spaces.push_back(std::move(space));
  }

  auto dict = meemi::load_dictionary(args.dict, langs);
  if (args.train_size > 0)
    dict = meemi::subsample(dict, static_cast<std::size_t>(args.train_size), args.seed);

  const fs::path out(args.out);
  json outputs = json::object();
  meemi::Index kept = 0, skipped = 0;

  if (n == 2) {
    meemi::MeemiOptions mo;
    mo.weighted = args.weighted;
    mo.ridge = args.ridge;
    mo.freq_mode = mode;
    const auto result = meemi::meemi_bilingual(spaces[0], spaces[1], dict, mo);
    kept = result.pairs_kept;
    skipped = result.skipped_oov;
    const std::string v0 = (out / (langs[0] + ".vec")).string();
    const std::string v1 = (out / (langs[1] + ".vec")).string();
    const std::string m0 = (out / (langs[0] + ".map")).string();
    const std::string m1 = (out / (langs[1] + ".map")).string();
    meemi::save_embeddings(result.src, v0);
    meemi::save_embeddings(result.tgt, v1);
    meemi::save_linear_map(result.map_src, m0);
    meemi::save_linear_map(result.map_tgt, m1);
    outputs[langs[0]] = {{"vec", v0}, {"map", m0}};
    outputs[langs[1]] = {{"vec", v1}, {"map", m1}};
  } else {
    std::map<std::string, meemi::EmbeddingSpace<double>> members;
    for (std::size_t i = 0; i < n; ++i) members.emplace(langs[i], std::move(spaces[i]));
    const meemi::MultiSpace<double> multi(hub, std::move(members));
    const auto result = meemi::meemi_multilingual(multi, dict, args.ridge);
    kept = result.tuples_kept;
    skipped = result.skipped_oov;
    for (const auto& lang : langs) {
      const std::string vec = (out / (lang + ".vec")).string();
      const std::string map = (out / (lang + ".map")).string();
      meemi::save_embeddings(result.spaces.at(lang), vec);
      meemi::save_linear_map(result.maps.at(lang), map);
      outputs[lang] = {{"vec", vec}, {"map", map}};
    }
  }

  write_report((out / "report.json").string(), "meemi",
               {{"embs", args.embs},
                {"freqs", args.freqs},
                {"dict", args.dict},
                {"hub", hub},
                {"weighted", args.weighted},
                {"ridge", args.ridge},
                {"freq_mode", args.freq_mode},
                {"train_size", args.train_size},
                {"limit", args.limit},
                {"lowercase", args.lowercase},
                {"seed", args.seed}},
               {{"tuples_kept", kept}, {"skipped_oov", skipped}, {"outputs", outputs}});

  std::cout << "fine-tuned " << n << " spaces on " << kept << " tuples (" << skipped
            << " skipped); outputs in " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string task;
  std::string out;
  // dict induction
  std::string src_emb, tgt_emb, test;
  std::string src_lang = "src", tgt_lang = "tgt";
  std::string ks = "1,5,10";
  // similarity
  std::string emb_a, emb_b, dataset;
  // hypernym discovery
  std::string query_emb, cand_emb;
  std::vector<std::string> train_embs, train_pairs;
  long k = 15;
  double ridge = 0.0;
  long limit = 0;
  bool lowercase = false;
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& args) {
  const auto opts = make_load_options(args.limit, args.lowercase);
  meemi::EvalReport report;
  json config{{"task", args.task}, {"seed", args.seed},
              {"limit", args.limit}, {"lowercase", args.lowercase}};

  if (args.task == "dict") {
    if (args.src_emb.empty() || args.tgt_emb.empty() || args.test.empty())
      throw usage_error("task dict needs --src-emb, --tgt-emb and --test");
    require_file(args.src_emb);
    require_file(args.tgt_emb);
    require_file(args.test);
    const auto src = meemi::load_embeddings(args.src_emb, args.src_lang, opts);
    const auto tgt = meemi::load_embeddings(args.tgt_emb, args.tgt_lang, opts);
    const auto test =
        meemi::load_dictionary(args.test, {args.src_lang, args.tgt_lang});
    report = meemi::eval_dict_induction(test, src, tgt,
                                        parse_index_list(args.ks, "--ks"));
    config["src_emb"] = args.src_emb;
    config["tgt_emb"] = args.tgt_emb;
    config["test"] = args.test;
    config["ks"] = args.ks;
  } else if (args.task == "sim") {
    if (args.emb_a.empty() || args.dataset.empty())
      throw usage_error("task sim needs --emb-a and --dataset");
    const std::string emb_b = args.emb_b.empty() ? args.emb_a : args.emb_b;
    require_file(args.emb_a);
    require_file(emb_b);
    require_file(args.dataset);
    const auto space_a = meemi::load_embeddings(args.emb_a, "a", opts);
    const auto space_b = meemi::load_embeddings(emb_b, "b", opts);
    report = meemi::eval_word_similarity(meemi::load_similarity_dataset(args.dataset),
                                         space_a, space_b);
    config["emb_a"] = args.emb_a;
    config["emb_b"] = emb_b;
    config["dataset"] = args.dataset;
  } else if (args.task == "hyper") {
    if (args.query_emb.empty() || args.cand_emb.empty() || args.test.empty())
      throw usage_error("task hyper needs --query-emb, --cand-emb and --test");
    if (args.train_embs.empty() || args.train_embs.size() != args.train_pairs.size())
      throw usage_error("task hyper needs matching --train-emb/--train-pairs lists");
    require_file(args.query_emb);
    require_file(args.cand_emb);
    require_file(args.test);
    for (const auto& p : args.train_embs) require_file(p);
    for (const auto& p : args.train_pairs) require_file(p);

    const auto query = meemi::load_embeddings(args.query_emb, "query", opts);
    const auto cand = meemi::load_embeddings(args.cand_emb, "cand", opts);

    meemi::Mat<double> a(0, query.dim()), t(0, query.dim());
    meemi::Index skipped_train = 0;
    for (std::size_t i = 0; i < args.train_embs.size(); ++i) {
      const auto space = meemi::load_embeddings(args.train_embs[i], "train", opts);
      const auto rows =
          meemi::gather_pair_rows(meemi::load_word_pairs(args.train_pairs[i]), space);
      a = meemi::vstack(a, rows.A);
      t = meemi::vstack(t, rows.T);
      skipped_train += rows.skipped_oov;
    }
    if (a.rows() == 0)
      throw meemi::data_error("no hypernym training pair survives vocabulary lookup");
    const auto map = meemi::least_squares_map(a, t, args.ridge);
    report = meemi::eval_hypernym(meemi::load_hypernym_dataset(args.test), map, query,
                                  cand, static_cast<meemi::Index>(args.k));
    config["query_emb"] = args.query_emb;
    config["cand_emb"] = args.cand_emb;
    config["test"] = args.test;
    config["train_embs"] = args.train_embs;
    config["train_pairs"] = args.train_pairs;
    config["k"] = args.k;
    config["ridge"] = args.ridge;
    config["train_rows"] = a.rows();
    config["train_skipped_oov"] = skipped_train;
  } else {
    throw usage_error("unknown --task '" + args.task + "' (expected dict, sim or hyper)");
  }

  std::cout << meemi::format_report(report);
  if (!args.out.empty())
    write_report(args.out, "eval", config, meemi::to_json(report));
  return 0;
}

// ---------------------------------------------------------------- translate

struct TranslateArgs {
  std::string word;
  std::string src_emb, tgt_emb;
  long k = 10;
  long limit = 0;
  bool lowercase = false;
};

int run_translate(const TranslateArgs& args) {
  require_file(args.src_emb);
  require_file(args.tgt_emb);
  if (args.k < 1) throw usage_error("--k must be positive");
  const auto opts = make_load_options(args.limit, args.lowercase);
  const auto src = meemi::load_embeddings(args.src_emb, "", opts);
  const auto tgt = meemi::load_embeddings(args.tgt_emb, "", opts);
  const auto id = src.find(args.word);
  if (!id) throw meemi::data_error("word '" + args.word + "' is out of vocabulary");
  const auto top = meemi::knn(meemi::Vec<double>(src.row(*id).transpose()), tgt,
                              static_cast<meemi::Index>(args.k));
  char buf[64];
  for (std::size_t i = 0; i < top.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu %s %.6f\n", i + 1, top[i].word.c_str(),
                  top[i].score);
    std::cout << buf;
  }
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  long vocab = 1000;
  long dim = 50;
  double noise = 0.0;
  std::string distortion = "orthogonal";
  std::uint64_t seed = 0;
  std::string out;
  std::string src_lang = "src", tgt_lang = "tgt";
};

meemi::SynthConfig make_synth_config(long vocab, long dim, double noise,
                                     const std::string& distortion, std::uint64_t seed) {
  meemi::SynthConfig cfg;
  cfg.vocab_size = static_cast<meemi::Index>(vocab);
  cfg.d = static_cast<meemi::Index>(dim);
  cfg.noise_sigma = noise;
  cfg.distortion = meemi::distortion_from_string(distortion);
  cfg.seed = seed;
  return cfg;
}

int run_synth(const SynthArgs& args) {
  ensure_dir(args.out);
  const auto cfg =
      make_synth_config(args.vocab, args.dim, args.noise, args.distortion, args.seed);
  const auto pair = meemi::generate_pair<double>(cfg, args.src_lang, args.tgt_lang);

  const fs::path out(args.out);
  const std::string src_vec = (out / (args.src_lang + ".vec")).string();
  const std::string tgt_vec = (out / (args.tgt_lang + ".vec")).string();
  const std::string gold = (out / "gold.tsv").string();
  meemi::save_embeddings(pair.src, src_vec);
  meemi::save_embeddings(pair.tgt, tgt_vec);
  meemi::save_dictionary(pair.gold, gold);

  write_report((out / "report.json").string(), "synth",
               {{"vocab", args.vocab},
                {"dim", args.dim},
                {"noise", args.noise},
                {"distortion", args.distortion},
                {"seed", args.seed},
                {"src_lang", args.src_lang},
                {"tgt_lang", args.tgt_lang}},
               {{"outputs", {src_vec, tgt_vec, gold}}, {"tuples", pair.gold.size()}});
  std::cout << "wrote " << src_vec << ", " << tgt_vec << ", " << gold << "\n";
  return 0;
}

// ---------------------------------------------------------------- ablate

struct AblateArgs {
  std::string sizes;
  long trials = 5;
  long vocab = 2000;
  long dim = 50;
  double noise = 0.02;
  std::string distortion = "diag-scaling";
  std::uint64_t seed = 0;
  double ridge = 0.0;
  std::string out;
};

int run_ablate(const AblateArgs& args) {
  if (args.trials < 1) throw usage_error("--trials must be positive");
  ensure_dir(args.out);
  const auto cfg =
      make_synth_config(args.vocab, args.dim, args.noise, args.distortion, args.seed);
  std::vector<std::size_t> sizes;
  for (const auto k : parse_index_list(args.sizes, "--sizes"))
    sizes.push_back(static_cast<std::size_t>(k));

  std::cerr << "ablation over " << sizes.size() << " sizes x " << args.trials
            << " trials\n";
  const auto rows = meemi::run_ablation<double>(cfg, sizes, static_cast<std::size_t>(args.trials),
                                                args.ridge);

  const fs::path out(args.out);
  const std::string csv = (out / "ablation.csv").string();
  meemi::write_ablation_csv(rows, csv);

  json summary_doc{{"command", "ablate"},
                   {"config",
                    {{"sizes", args.sizes},
                     {"trials", args.trials},
                     {"vocab", args.vocab},
                     {"dim", args.dim},
                     {"noise", args.noise},
                     {"distortion", args.distortion},
                     {"ridge", args.ridge},
                     {"seed", args.seed}}},
                   {"results", meemi::ablation_summary(rows)},
                   {"metadata", {{"timestamp", timestamp_utc()}}}};
  const std::string summary_path = (out / "summary.json").string();
  std::ofstream sum(summary_path);
  if (!sum) throw meemi::data_error("cannot open for writing: " + summary_path);
  sum << summary_doc.dump(2) << '\n';

  std::cout << "wrote " << csv << " and " << summary_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual word embedding alignment and fine-tuning"};
  app.require_subcommand(1);

  AlignArgs align_args;
  auto* align = app.add_subcommand(
      "align", "Orthogonally align a source space onto a target space");
  align->add_option("--src", align_args.src, "source embeddings (word2vec text)")
      ->required();
  align->add_option("--tgt", align_args.tgt, "target embeddings (word2vec text)")
      ->required();
  align->add_option("--dict", align_args.dict, "training dictionary TSV")->required();
  align->add_option("--out", align_args.out, "output directory")->required();
  align->add_option("--src-lang", align_args.src_lang, "source language label");
  align->add_option("--tgt-lang", align_args.tgt_lang, "target language label");
  align->add_option("--normalize", align_args.recipe,
                    "normalization recipe, e.g. unit,center,unit or none");
  align->add_option("--limit", align_args.limit, "max vocabulary per space");
  align->add_flag("--lowercase", align_args.lowercase, "lowercase tokens on load");
  align->add_option("--train-size", align_args.train_size,
                    "subsample the dictionary to this many pairs");
  align->add_option("--seed", align_args.seed, "random seed (subsampling)");

  MeemiArgs meemi_args;
  auto* tune = app.add_subcommand(
      "meemi", "Fine-tune aligned spaces toward translation averages");
  tune->add_option("--emb", meemi_args.embs, "LANG=PATH, repeat per language")
      ->required()
      ->expected(-2);
  tune->add_option("--dict", meemi_args.dict, "training dictionary TSV (columns follow --emb order)")
      ->required();
  tune->add_option("--out", meemi_args.out, "output directory")->required();
  tune->add_option("--freq", meemi_args.freqs, "LANG=PATH frequency TSV, repeatable");
  tune->add_option("--hub", meemi_args.hub, "hub language (default: last --emb)");
  tune->add_flag("--weighted", meemi_args.weighted,
                 "frequency-weighted averages (bilingual only)");
  tune->add_option("--ridge", meemi_args.ridge, "ridge regularization strength");
  tune->add_option("--freq-mode", meemi_args.freq_mode,
                   "raw or per-million frequency weighting");
  tune->add_option("--train-size", meemi_args.train_size,
                   "subsample the dictionary to this many tuples");
  tune->add_option("--seed", meemi_args.seed, "random seed (subsampling)");
  tune->add_option("--limit", meemi_args.limit, "max vocabulary per space");
  tune->add_flag("--lowercase", meemi_args.lowercase, "lowercase tokens on load");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate aligned spaces");
  eval->add_option("--task", eval_args.task, "dict, sim or hyper")->required();
  eval->add_option("--out", eval_args.out, "write the report JSON here");
  eval->add_option("--src-emb", eval_args.src_emb, "source embeddings (dict task)");
  eval->add_option("--tgt-emb", eval_args.tgt_emb, "target embeddings (dict task)");
  eval->add_option("--test", eval_args.test, "test dictionary / hypernym test set");
  eval->add_option("--src-lang", eval_args.src_lang, "source language label");
  eval->add_option("--tgt-lang", eval_args.tgt_lang, "target language label");
  eval->add_option("--ks", eval_args.ks, "precision cutoffs (dict task)");
  eval->add_option("--emb-a", eval_args.emb_a, "first space (sim task)");
  eval->add_option("--emb-b", eval_args.emb_b,
                   "second space (sim task; defaults to --emb-a)");
  eval->add_option("--dataset", eval_args.dataset, "similarity dataset TSV");
  eval->add_option("--query-emb", eval_args.query_emb, "term space (hyper task)");
  eval->add_option("--cand-emb", eval_args.cand_emb, "candidate space (hyper task)");
  eval->add_option("--train-emb", eval_args.train_embs,
                   "training space for hypernym pairs, repeatable");
  eval->add_option("--train-pairs", eval_args.train_pairs,
                   "hyponym-hypernym pair TSV, repeatable");
  eval->add_option("--k", eval_args.k, "retrieval depth (hyper task)");
  eval->add_option("--ridge", eval_args.ridge, "ridge for the hypernym map");
  eval->add_option("--limit", eval_args.limit, "max vocabulary per space");
  eval->add_flag("--lowercase", eval_args.lowercase, "lowercase tokens on load");
  eval->add_option("--seed", eval_args.seed, "recorded in the report");

  TranslateArgs tr_args;
  auto* translate = app.add_subcommand(
      "translate", "Print the nearest cross-lingual neighbors of a word");
  translate->add_option("word", tr_args.word, "query word")->required();
  translate->add_option("--src-emb", tr_args.src_emb, "aligned source embeddings")
      ->required();
  translate->add_option("--tgt-emb", tr_args.tgt_emb, "target embeddings")->required();
  translate->add_option("--k", tr_args.k, "number of neighbors");
  translate->add_option("--limit", tr_args.limit, "max vocabulary per space");
  translate->add_flag("--lowercase", tr_args.lowercase, "lowercase tokens on load");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic space pair");
  synth->add_option("--vocab", synth_args.vocab, "vocabulary size");
  synth->add_option("--dim", synth_args.dim, "dimensionality");
  synth->add_option("--noise", synth_args.noise, "Gaussian noise sigma");
  synth->add_option("--distortion", synth_args.distortion,
                    "orthogonal or diag-scaling");
  synth->add_option("--seed", synth_args.seed, "random seed");
  synth->add_option("--out", synth_args.out, "output directory")->required();
  synth->add_option("--src-lang", synth_args.src_lang, "source language label");
  synth->add_option("--tgt-lang", synth_args.tgt_lang, "target language label");

  AblateArgs ablate_args;
  auto* ablate = app.add_subcommand(
      "ablate", "Dictionary-size ablation on synthetic data");
  ablate->add_option("--sizes", ablate_args.sizes, "training sizes, e.g. 100,1000")
      ->required();
  ablate->add_option("--trials", ablate_args.trials, "trials per size");
  ablate->add_option("--vocab", ablate_args.vocab, "vocabulary size");
  ablate->add_option("--dim", ablate_args.dim, "dimensionality");
  ablate->add_option("--noise", ablate_args.noise, "Gaussian noise sigma");
  ablate->add_option("--distortion", ablate_args.distortion,
                     "orthogonal or diag-scaling");
  ablate->add_option("--seed", ablate_args.seed, "base random seed");
  ablate->add_option("--ridge", ablate_args.ridge, "ridge regularization strength");
  ablate->add_option("--out", ablate_args.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(align)) return run_align(align_args);
    if (app.got_subcommand(tune)) return run_meemi(meemi_args);
    if (app.got_subcommand(eval)) return run_eval(eval_args);
    if (app.got_subcommand(translate)) return run_translate(tr_args);
    if (app.got_subcommand(synth)) return run_synth(synth_args);
    if (app.got_subcommand(ablate)) return run_ablate(ablate_args);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const meemi::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const meemi::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
