// Evaluation of aligned spaces: exact cosine nearest-neighbor retrieval,
// dictionary induction P@k, word-similarity correlations (Pearson, Spearman
// with average-rank ties) and hypernym discovery MRR / MAP / P@5.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "meemi/meemi.hpp"
#include "meemi/types.hpp"

namespace meemi {

template <class Scalar = double>
struct ScoredWord {
  std::string word;
  Scalar score;
  Index id;
};

// Exact top-k by cosine similarity over the full vocabulary, descending
// score, ties broken by ascending word id. Excluded words are filtered
// before ranking. Zero-norm candidate rows can never be retrieved.
template <class Scalar, class Derived>
std::vector<ScoredWord<Scalar>> knn(const Eigen::MatrixBase<Derived>& query,
                                    const EmbeddingSpace<Scalar>& space, Index k,
                                    const std::unordered_set<std::string>* exclude = nullptr) {
  if (k < 1) throw data_error("k must be at least 1");
  if (space.size() == 0) throw data_error("cannot search an empty space");
  if (query.rows() != space.dim() || query.cols() != 1)
    throw data_error("query must be a column vector matching the space dimensionality");
  const Scalar qnorm = query.norm();
  if (qnorm == Scalar(0)) throw numeric_error("zero query vector; cosine undefined");

  const Vec<Scalar> dots = space.matrix() * query / qnorm;
  const Vec<Scalar> norms = space.matrix().rowwise().norm();

  std::vector<ScoredWord<Scalar>> candidates;
  candidates.reserve(static_cast<std::size_t>(space.size()));
  for (Index i = 0; i < space.size(); ++i) {
    if (exclude && exclude->count(space.word(i))) continue;
    const Scalar score = norms(i) > Scalar(0) ? dots(i) / norms(i) : Scalar(-2);
    candidates.push_back({space.word(i), score, i});
  }
  const auto better = [](const ScoredWord<Scalar>& a, const ScoredWord<Scalar>& b) {
    return a.score > b.score || (a.score == b.score && a.id < b.id);
  };
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(kk),
                    candidates.end(), better);
  candidates.resize(kk);
  return candidates;
}

// Structured metric results of one evaluation run.
struct EvalReport {
  std::string task;
  std::map<std::string, double> metrics;
  std::size_t evaluated = 0;
  std::size_t skipped_oov = 0;
  std::map<std::string, std::string> config;
};

inline nlohmann::json to_json(const EvalReport& r) {
  return nlohmann::json{
      {"task", r.task},
      {"metrics", r.metrics},
      {"coverage", {{"evaluated", r.evaluated}, {"skipped_oov", r.skipped_oov}}},
      {"config", r.config}};
}

namespace detail {

// Orders P@1 < P@5 < P@10 numerically; everything else lexicographically.
inline bool metric_name_less(const std::string& a, const std::string& b) {
  const bool pa = a.rfind("P@", 0) == 0;
  const bool pb = b.rfind("P@", 0) == 0;
  if (pa && pb) return std::atol(a.c_str() + 2) < std::atol(b.c_str() + 2);
  if (pa != pb) return !pa;
  return a < b;
}

}  // namespace detail

inline std::string format_report(const EvalReport& r) {
  std::string out = "task: " + r.task + "\n";
  out += "coverage: evaluated=" + std::to_string(r.evaluated) +
         " skipped_oov=" + std::to_string(r.skipped_oov) + "\n";
  std::vector<std::string> names;
  for (const auto& [name, value] : r.metrics) names.push_back(name);
  std::sort(names.begin(), names.end(), detail::metric_name_less);
  char buf[64];
  for (const auto& name : names) {
    std::snprintf(buf, sizeof(buf), "  %-14s %.6f\n", name.c_str(), r.metrics.at(name));
    out += buf;
  }
  if (!r.config.empty()) {
    out += "config:\n";
    for (const auto& [key, value] : r.config) out += "  " + key + ": " + value + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dictionary induction

// P@k over test source words: a source word counts once no matter how many
// gold translations it lists, and succeeds at k if any of them appears in the
// top-k cosine neighbors. Source words missing from the source vocabulary are
// skipped and counted; gold words missing from the target vocabulary stay in
// the gold set but can never match.
template <class Scalar>
EvalReport eval_dict_induction(const TranslationDictionary& test_dict,
                               const EmbeddingSpace<Scalar>& src,
                               const EmbeddingSpace<Scalar>& tgt,
                               std::vector<Index> ks = {1, 5, 10}) {
  if (ks.empty()) throw data_error("no k values given");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() < 1) throw data_error("k values must be positive");
  const Index kmax = ks.back();

  // Group gold translations by source word, first-occurrence order.
  std::vector<std::pair<std::string, std::unordered_set<std::string>>> groups;
  std::unordered_map<std::string, std::size_t> group_of;
  for (const auto& tuple : test_dict.tuples()) {
    auto [it, fresh] = group_of.emplace(tuple[0], groups.size());
    if (fresh) groups.push_back({tuple[0], {}});
    groups[it->second].second.insert(tuple[1]);
  }

  EvalReport report;
  report.task = "dict_induction";
  std::map<Index, std::size_t> successes;
  for (const Index k : ks) successes[k] = 0;

  for (const auto& [word, gold] : groups) {
    const auto id = src.find(word);
    if (!id) {
      ++report.skipped_oov;
      continue;
    }
    ++report.evaluated;
    const auto ranked = knn(Vec<Scalar>(src.row(*id).transpose()), tgt, kmax);
    Index hit_rank = 0;  // 1-based; 0 = not found within kmax
    for (std::size_t p = 0; p < ranked.size(); ++p) {
      if (gold.count(ranked[p].word)) {
        hit_rank = static_cast<Index>(p) + 1;
        break;
      }
    }
    if (hit_rank > 0)
      for (const Index k : ks)
        if (hit_rank <= k) ++successes[k];
  }
  if (report.evaluated == 0)
    throw data_error("no evaluable source words (all " +
                     std::to_string(report.skipped_oov) + " out of vocabulary)");

  for (const Index k : ks)
    report.metrics["P@" + std::to_string(k)] =
        static_cast<double>(successes[k]) / static_cast<double>(report.evaluated);

  std::string ks_str;
  for (const Index k : ks) ks_str += (ks_str.empty() ? "" : ",") + std::to_string(k);
  report.config = {{"retrieval", "cosine"},
                   {"ks", ks_str},
                   {"src_lang", src.lang()},
                   {"tgt_lang", tgt.lang()}};
  return report;
}

// ---------------------------------------------------------------------------
// Word similarity

struct SimilarityEntry {
  std::string word_a;
  std::string word_b;
  double gold;
};

inline std::vector<SimilarityEntry> load_similarity_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open similarity dataset: " + path);
  std::vector<SimilarityEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_ws(line);
    if (fields.size() != 3)
      throw data_error(path + ": line " + std::to_string(lineno) +
                       " has " + std::to_string(fields.size()) + " fields, expected 3");
    char* end = nullptr;
    const double gold = std::strtod(fields[2].c_str(), &end);
    if (end != fields[2].c_str() + fields[2].size() || !std::isfinite(gold))
      throw data_error(path + ": line " + std::to_string(lineno) +
                       ": bad score '" + fields[2] + "'");
    entries.push_back({fields[0], fields[1], gold});
  }
  return entries;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw data_error("correlation needs two same-length series of at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw numeric_error("zero variance; correlation undefined");
  return sxy / std::sqrt(sxx * syy);
}

// 1-based ranks with ties assigned the average of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

// Scores every pair by cosine and correlates with the gold ratings. The
// monolingual task is the special case space_a == space_b. Pairs with either
// word out of vocabulary are skipped and counted.
template <class Scalar>
EvalReport eval_word_similarity(const std::vector<SimilarityEntry>& dataset,
                                const EmbeddingSpace<Scalar>& space_a,
                                const EmbeddingSpace<Scalar>& space_b) {
  EvalReport report;
  report.task = "word_similarity";
  std::vector<double> gold, predicted;
  for (const auto& entry : dataset) {
    const auto ia = space_a.find(entry.word_a);
    const auto ib = space_b.find(entry.word_b);
    if (!ia || !ib) {
      ++report.skipped_oov;
      continue;
    }
    gold.push_back(entry.gold);
    predicted.push_back(static_cast<double>(cosine(space_a.row(*ia), space_b.row(*ib))));
  }
  report.evaluated = gold.size();
  if (report.evaluated < 2)
    throw data_error("fewer than 2 evaluable pairs (" + std::to_string(report.skipped_oov) +
                     " skipped as out of vocabulary); correlation undefined");
  const auto variance_zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (variance_zero(gold) || variance_zero(predicted))
    throw data_error("degenerate dataset: zero variance in gold or predicted scores");

  report.metrics["pearson_r"] = pearson(gold, predicted);
  report.metrics["spearman_rho"] = spearman(gold, predicted);
  report.config = {{"predictor", "cosine"},
                   {"lang_a", space_a.lang()},
                   {"lang_b", space_b.lang()}};
  return report;
}

// ---------------------------------------------------------------------------
// Hypernym discovery

struct HypernymEntry {
  std::string term;
  std::vector<std::string> golds;
};

// TSV: term, then one or more gold hypernyms.
inline std::vector<HypernymEntry> load_hypernym_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open hypernym dataset: " + path);
  std::vector<HypernymEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto fields = detail::split_ws(line);
    if (fields.size() < 2)
      throw data_error(path + ": line " + std::to_string(lineno) +
                       " needs a term and at least one hypernym");
    HypernymEntry e;
    e.term = std::move(fields[0]);
    e.golds.assign(std::make_move_iterator(fields.begin() + 1),
                   std::make_move_iterator(fields.end()));
    entries.push_back(std::move(e));
  }
  return entries;
}

// TSV word pairs, two fields per line.
inline std::vector<std::pair<std::string, std::string>> load_word_pairs(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open pair file: " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto fields = detail::split_ws(line);
    if (fields.size() != 2)
      throw data_error(path + ": line " + std::to_string(lineno) + " has " +
                       std::to_string(fields.size()) + " fields, expected 2");
    pairs.emplace_back(std::move(fields[0]), std::move(fields[1]));
  }
  return pairs;
}

template <class Scalar = double>
struct GatheredRows {
  Mat<Scalar> A;  // left-hand words
  Mat<Scalar> T;  // right-hand words
  Index kept = 0;
  Index skipped_oov = 0;
};

// Looks both sides of every pair up in the given space; pairs with either
// word missing are skipped and counted.
template <class Scalar>
GatheredRows<Scalar> gather_pair_rows(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const EmbeddingSpace<Scalar>& space) {
  GatheredRows<Scalar> out;
  std::vector<std::pair<Index, Index>> ids;
  for (const auto& [left, right] : pairs) {
    const auto il = space.find(left);
    const auto ir = space.find(right);
    if (il && ir)
      ids.emplace_back(*il, *ir);
    else
      ++out.skipped_oov;
  }
  out.kept = static_cast<Index>(ids.size());
  out.A.resize(out.kept, space.dim());
  out.T.resize(out.kept, space.dim());
  for (Index i = 0; i < out.kept; ++i) {
    out.A.row(i) = space.row(ids[static_cast<std::size_t>(i)].first);
    out.T.row(i) = space.row(ids[static_cast<std::size_t>(i)].second);
  }
  return out;
}

template <class Scalar>
Mat<Scalar> vstack(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw data_error("cannot stack matrices of different widths");
  Mat<Scalar> out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a;
  out.bottomRows(b.rows()) = b;
  return out;
}

// Linear map from hyponym vectors to hypernym vectors. Training pairs from
// several languages of one shared space can simply be concatenated upstream.
template <class Scalar>
LinearMap<Scalar> train_hypernym_map(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const EmbeddingSpace<Scalar>& space, Scalar ridge = Scalar(0)) {
  const GatheredRows<Scalar> rows = gather_pair_rows(pairs, space);
  if (rows.kept == 0)
    throw data_error("no training pair survives vocabulary lookup (" +
                     std::to_string(rows.skipped_oov) + " skipped)");
  return least_squares_map(rows.A, rows.T, ridge);
}

inline constexpr std::size_t kHypernymGoldCap = 15;

// Ranks candidate hypernyms of each term by cosine between term * M and the
// candidate vectors (the term itself excluded). Gold sets are truncated to
// their first 15 entries. MRR uses the rank of the first gold hit within the
// top-k list; AP averages P@pos over the positions of all gold hits (0 when
// none is retrieved); P@5 divides gold hits in the top 5 by min(5, |gold|).
template <class Scalar>
EvalReport eval_hypernym(const std::vector<HypernymEntry>& test, const LinearMap<Scalar>& map,
                         const EmbeddingSpace<Scalar>& query_space,
                         const EmbeddingSpace<Scalar>& candidate_space, Index k = 15) {
  if (k < 1) throw data_error("k must be at least 1");
  if (candidate_space.size() == 0) throw data_error("empty candidate space");
  if (query_space.dim() != map.M.rows() || candidate_space.dim() != map.M.cols())
    throw data_error("map dimensionality does not match the spaces");

  EvalReport report;
  report.task = "hypernym";
  double mrr_sum = 0, map_sum = 0, p5_sum = 0;

  for (const auto& entry : test) {
    const auto id = query_space.find(entry.term);
    if (!id) {
      ++report.skipped_oov;
      continue;
    }
    ++report.evaluated;

    std::unordered_set<std::string> gold;
    for (const auto& g : entry.golds) {
      gold.insert(g);
      if (gold.size() >= kHypernymGoldCap) break;
    }

    const std::unordered_set<std::string> exclude{entry.term};
    const Vec<Scalar> projected = (query_space.row(*id) * map.M).transpose();
    const auto ranked = knn(projected, candidate_space, k, &exclude);

    std::size_t hits = 0, first_hit = 0, hits_top5 = 0;
    double ap_sum = 0;
    for (std::size_t p = 0; p < ranked.size(); ++p) {
      if (!gold.count(ranked[p].word)) continue;
      ++hits;
      if (first_hit == 0) first_hit = p + 1;
      ap_sum += static_cast<double>(hits) / static_cast<double>(p + 1);
      if (p < 5) ++hits_top5;
    }
    mrr_sum += first_hit > 0 ? 1.0 / static_cast<double>(first_hit) : 0.0;
    map_sum += hits > 0 ? ap_sum / static_cast<double>(hits) : 0.0;
    p5_sum += static_cast<double>(hits_top5) /
              static_cast<double>(std::min<std::size_t>(5, gold.size()));
  }
  if (report.evaluated == 0)
    throw data_error("no evaluable terms (all " + std::to_string(report.skipped_oov) +
                     " out of vocabulary)");

  const double n = static_cast<double>(report.evaluated);
  report.metrics["MRR"] = mrr_sum / n;
  report.metrics["MAP"] = map_sum / n;
  report.metrics["P@5"] = p5_sum / n;
  report.config = {{"retrieval", "cosine"},
                   {"k", std::to_string(k)},
                   {"gold_cap", std::to_string(kHypernymGoldCap)},
                   {"query_lang", query_space.lang()},
                   {"candidate_lang", candidate_space.lang()}};
  return report;
}

}  // namespace meemi
