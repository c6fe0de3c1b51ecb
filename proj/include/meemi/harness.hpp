// Synthetic benchmark generation and the dictionary-size ablation. A pair of
// spaces shares one latent vocabulary: the target is the source under a
// random orthogonal map, optionally composed with a random diagonal scaling
// (a minimal violation of the isometry assumption) plus Gaussian noise.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "meemi/alignment.hpp"
#include "meemi/dictionaries.hpp"
#include "meemi/evaluation.hpp"
#include "meemi/meemi.hpp"
#include "meemi/rng.hpp"
#include "meemi/types.hpp"

namespace meemi {

enum class Distortion { orthogonal, diag_scaling };

inline const char* to_string(Distortion d) {
  return d == Distortion::orthogonal ? "orthogonal" : "diag-scaling";
}

inline Distortion distortion_from_string(std::string_view s) {
  if (s == "orthogonal") return Distortion::orthogonal;
  if (s == "diag-scaling" || s == "diag") return Distortion::diag_scaling;
  throw data_error("unknown distortion: '" + std::string(s) + "'");
}

struct SynthConfig {
  Index vocab_size = 1000;
  Index d = 50;
  double noise_sigma = 0.0;
  Distortion distortion = Distortion::orthogonal;
  std::uint64_t seed = 0;
};

inline void validate(const SynthConfig& cfg) {
  if (cfg.d < 2) throw data_error("dimensionality must be at least 2");
  if (cfg.vocab_size < cfg.d) throw data_error("vocabulary must be at least as large as d");
  if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma))
    throw data_error("noise sigma must be finite and non-negative");
}

// Haar-distributed random orthogonal matrix (QR of a Gaussian matrix with the
// R-diagonal sign fix). Determinant may be +1 or -1.
template <class Scalar = double>
Mat<Scalar> random_orthogonal(Index d, rng::Generator& gen) {
  Mat<Scalar> g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = static_cast<Scalar>(gen.normal());
  Eigen::HouseholderQR<Mat<Scalar>> qr(g);
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(d, d);
  const Mat<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < Scalar(0)) q.col(j) = -q.col(j);
  return q;
}

template <class Scalar = double>
struct SynthPair {
  EmbeddingSpace<Scalar> src;
  EmbeddingSpace<Scalar> tgt;
  TranslationDictionary gold;  // identity pairing word_i <-> word_i
};

// Deterministic per seed. Source rows are unit-normalized Gaussians; the
// target applies the configured distortion and noise, then re-normalizes.
template <class Scalar = double>
SynthPair<Scalar> generate_pair(const SynthConfig& cfg, std::string src_lang = "src",
                                std::string tgt_lang = "tgt") {
  validate(cfg);
  rng::Generator gen(cfg.seed);
  const Index v = cfg.vocab_size;
  const Index d = cfg.d;

  Mat<Scalar> src(v, d);
  for (Index i = 0; i < v; ++i)
    for (Index j = 0; j < d; ++j) src(i, j) = static_cast<Scalar>(gen.normal());
  for (Index i = 0; i < v; ++i) {
    while (!(src.row(i).norm() > Scalar(0)))  // astronomically unlikely
      for (Index j = 0; j < d; ++j) src(i, j) = static_cast<Scalar>(gen.normal());
    src.row(i) /= src.row(i).norm();
  }

  const Mat<Scalar> rotation = random_orthogonal<Scalar>(d, gen);
  Mat<Scalar> tgt = src * rotation;
  if (cfg.distortion == Distortion::diag_scaling) {
    Vec<Scalar> scale(d);
    for (Index j = 0; j < d; ++j) scale(j) = static_cast<Scalar>(gen.uniform(0.5, 2.0));
    tgt = tgt * scale.asDiagonal();
  }
  if (cfg.noise_sigma > 0.0) {
    for (Index i = 0; i < v; ++i)
      for (Index j = 0; j < d; ++j)
        tgt(i, j) += static_cast<Scalar>(cfg.noise_sigma * gen.normal());
  }
  for (Index i = 0; i < v; ++i) {
    const Scalar norm = tgt.row(i).norm();
    if (!(norm > Scalar(0))) throw numeric_error("generated a zero target row");
    tgt.row(i) /= norm;
  }

  char buf[32];
  std::vector<std::string> words(static_cast<std::size_t>(v));
  std::vector<std::vector<std::string>> tuples(static_cast<std::size_t>(v));
  for (Index i = 0; i < v; ++i) {
    std::snprintf(buf, sizeof(buf), "w%06lld", static_cast<long long>(i));
    words[static_cast<std::size_t>(i)] = buf;
    tuples[static_cast<std::size_t>(i)] = {buf, buf};
  }

  SynthPair<Scalar> out;
  out.src = EmbeddingSpace<Scalar>(src_lang, words, std::move(src), std::nullopt,
                                   {NormStep::unit});
  out.tgt = EmbeddingSpace<Scalar>(tgt_lang, words, std::move(tgt), std::nullopt,
                                   {NormStep::unit});
  out.gold = TranslationDictionary({std::move(src_lang), std::move(tgt_lang)},
                                   std::move(tuples));
  return out;
}

struct TrialOutcome {
  double base_p1 = 0;   // held-out P@1 after the orthogonal alignment
  double meemi_p1 = 0;  // held-out P@1 after the fine-tuning pass
  Index train_pairs = 0;
};

// One end-to-end synthetic run: generate, split the gold pairing 80/20,
// optionally subsample the training half, align, fine-tune, and score
// held-out dictionary induction P@1 after each stage.
template <class Scalar = double>
TrialOutcome run_trial(const SynthConfig& cfg,
                       std::optional<std::size_t> train_size = std::nullopt,
                       double ridge = 0.0) {
  const SynthPair<Scalar> pair = generate_pair<Scalar>(cfg);
  auto [train, test] = split_dictionary(pair.gold, 0.2, rng::sub_seed(cfg.seed, 1));
  if (train_size) train = subsample(train, *train_size, rng::sub_seed(cfg.seed, 2));

  const AlignResult<Scalar> aligned = align_bilingual(pair.src, pair.tgt, train);
  const EvalReport base =
      eval_dict_induction(test, aligned.aligned_src, pair.tgt, {Index(1)});

  MeemiOptions opts;
  opts.ridge = ridge;
  const MeemiBilingualResult<Scalar> tuned =
      meemi_bilingual(aligned.aligned_src, pair.tgt, train, opts);
  const EvalReport after = eval_dict_induction(test, tuned.src, tuned.tgt, {Index(1)});

  TrialOutcome out;
  out.base_p1 = base.metrics.at("P@1");
  out.meemi_p1 = after.metrics.at("P@1");
  out.train_pairs = static_cast<Index>(train.size());
  return out;
}

struct AblationRow {
  std::size_t size = 0;
  std::uint64_t seed = 0;
  std::string metric = "P@1";
  double base = 0;
  double meemi = 0;
  double delta = 0;
};

// Dictionary-size ablation: for every size and trial seed, subsample the
// training dictionary, run align -> fine-tune -> evaluate, and report the
// held-out metric before and after fine-tuning. Trial t uses seed + t.
template <class Scalar = double>
std::vector<AblationRow> run_ablation(const SynthConfig& cfg,
                                      const std::vector<std::size_t>& sizes,
                                      std::size_t trials, double ridge = 0.0) {
  if (sizes.empty()) throw data_error("no dictionary sizes given");
  if (trials == 0) throw data_error("at least one trial required");
  std::vector<AblationRow> rows;
  for (const std::size_t size : sizes) {
    for (std::size_t t = 0; t < trials; ++t) {
      SynthConfig trial_cfg = cfg;
      trial_cfg.seed = cfg.seed + t;
      const TrialOutcome outcome = run_trial<Scalar>(trial_cfg, size, ridge);
      AblationRow row;
      row.size = size;
      row.seed = trial_cfg.seed;
      row.base = outcome.base_p1;
      row.meemi = outcome.meemi_p1;
      row.delta = outcome.meemi_p1 - outcome.base_p1;
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_ablation_csv(const std::vector<AblationRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path);
  out << "size,seed,metric,base,meemi,delta\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%llu,%s,%.9g,%.9g,%.9g\n", row.size,
                  static_cast<unsigned long long>(row.seed), row.metric.c_str(), row.base,
                  row.meemi, row.delta);
    out << buf;
  }
  if (!out) throw data_error("write failed: " + path);
}

// Per-size means over trials, ordered by size.
inline nlohmann::json ablation_summary(const std::vector<AblationRow>& rows) {
  std::map<std::size_t, std::vector<const AblationRow*>> by_size;
  for (const auto& row : rows) by_size[row.size].push_back(&row);
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& [size, group] : by_size) {
    double base = 0, meemi = 0, delta = 0;
    for (const auto* row : group) {
      base += row->base;
      meemi += row->meemi;
      delta += row->delta;
    }
    const double n = static_cast<double>(group.size());
    sizes.push_back({{"size", size},
                     {"trials", group.size()},
                     {"mean_base", base / n},
                     {"mean_meemi", meemi / n},
                     {"mean_delta", delta / n}});
  }
  return {{"metric", "P@1"}, {"sizes", sizes}};
}

}  // namespace meemi
