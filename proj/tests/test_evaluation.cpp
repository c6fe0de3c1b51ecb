#include "doctest.h"

#include <cmath>

#include "meemi/evaluation.hpp"
#include "meemi/harness.hpp"
#include "test_util.hpp"

using namespace meemi;
using testutil::TempDir;
using testutil::write_file;

namespace {

// A space whose word j is the j-th basis vector.
EmbeddingSpace<double> basis_space(const std::string& lang, Index n,
                                   const std::string& prefix = "t") {
  Mat<double> m = Mat<double>::Identity(n, n);
  std::vector<std::string> words;
  for (Index i = 0; i < n; ++i) words.push_back(prefix + std::to_string(i));
  return {lang, std::move(words), std::move(m)};
}

// A query vector whose cosine ranking over a basis space is t0, t1, t2, ...
Vec<double> descending_query(Index n) {
  Vec<double> q(n);
  for (Index i = 0; i < n; ++i) q(i) = 1.0 / static_cast<double>(i + 1);
  return q;
}

}  // namespace

TEST_CASE("knn: a word is its own nearest neighbor with score 1") {
  SynthConfig cfg;
  cfg.vocab_size = 30;
  cfg.d = 6;
  cfg.seed = 1;
  const auto space = generate_pair<double>(cfg).src;
  const auto id = space.find("w000004");
  REQUIRE(id.has_value());
  const auto top = knn(Vec<double>(space.row(*id).transpose()), space, 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].word == "w000004");
  CHECK(top[0].score == doctest::Approx(1.0));
}

TEST_CASE("knn on the three-word toy space") {
  Mat<double> m(3, 2);
  m << 1, 0, 0.9, 0.1, 0, 1;
  EmbeddingSpace<double> space("xx", {"cat", "dog", "car"}, m);
  Vec<double> q(2);
  q << 1, 0;
  const auto top = knn(q, space, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].word == "cat");
  CHECK(top[0].score == doctest::Approx(1.0));
  CHECK(top[1].word == "dog");
  CHECK(top[1].score == doctest::Approx(0.9 / std::sqrt(0.82)).epsilon(1e-9));
}

TEST_CASE("knn breaks exact ties by word id") {
  Mat<double> m(3, 2);
  m << 0, 1, 1, 0, 1, 0;  // words b and c identical
  EmbeddingSpace<double> space("xx", {"a", "b", "c"}, m);
  Vec<double> q(2);
  q << 1, 0;
  const auto top = knn(q, space, 3);
  CHECK(top[0].word == "b");
  CHECK(top[1].word == "c");
  CHECK(top[2].word == "a");
}

TEST_CASE("knn applies the exclusion set before ranking") {
  Mat<double> m(2, 2);
  m << 1, 0, 0.5, 0.5;
  EmbeddingSpace<double> space("xx", {"self", "other"}, m);
  Vec<double> q(2);
  q << 1, 0;
  const std::unordered_set<std::string> exclude{"self"};
  const auto top = knn(q, space, 5, &exclude);
  REQUIRE(top.size() == 1);
  CHECK(top[0].word == "other");
}

TEST_CASE("knn error paths") {
  Mat<double> m(1, 2);
  m << 1, 0;
  EmbeddingSpace<double> space("xx", {"a"}, m);
  Vec<double> zero = Vec<double>::Zero(2);
  CHECK_THROWS_AS(knn(zero, space, 1), numeric_error);
  Vec<double> q(2);
  q << 1, 0;
  CHECK_THROWS_AS(knn(q, space, 0), data_error);
  EmbeddingSpace<double> empty;
  CHECK_THROWS_AS(knn(q, empty, 1), data_error);
}

TEST_CASE("knn matches a brute-force full sort") {
  SynthConfig cfg;
  cfg.vocab_size = 500;
  cfg.d = 16;
  cfg.seed = 2;
  auto space = generate_pair<double>(cfg).src;
  rng::Generator gen(3);
  for (int round = 0; round < 25; ++round) {
    Vec<double> q(16);
    for (Index j = 0; j < 16; ++j) q(j) = gen.normal();

    // independent oracle: plain loops and a full stable sort
    std::vector<std::pair<double, Index>> scored;
    const double qn = std::sqrt(q.dot(q));
    for (Index i = 0; i < space.size(); ++i) {
      double dot = 0, nn = 0;
      for (Index j = 0; j < 16; ++j) {
        dot += space.matrix()(i, j) * q(j);
        nn += space.matrix()(i, j) * space.matrix()(i, j);
      }
      scored.push_back({dot / (qn * std::sqrt(nn)), i});
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });

    const auto top = knn(q, space, 10);
    REQUIRE(top.size() == 10);
    for (std::size_t p = 0; p < 10; ++p) CHECK(top[p].id == scored[p].second);
  }
}

TEST_CASE("dictionary induction: perfect neighbors give P@k = 1") {
  const auto space = basis_space("a", 12, "w");
  const auto tgt = basis_space("b", 12, "w");
  std::vector<std::vector<std::string>> tuples;
  for (Index i = 0; i < 12; ++i)
    tuples.push_back({"w" + std::to_string(i), "w" + std::to_string(i)});
  const auto report =
      eval_dict_induction(TranslationDictionary({"a", "b"}, tuples), space, tgt);
  CHECK(report.metrics.at("P@1") == doctest::Approx(1.0));
  CHECK(report.metrics.at("P@5") == doctest::Approx(1.0));
  CHECK(report.metrics.at("P@10") == doctest::Approx(1.0));
  CHECK(report.evaluated == 12);
}

TEST_CASE("dictionary induction: a gold ranked third passes only k >= 3") {
  const auto tgt = basis_space("b", 12);
  Mat<double> src_m(1, 12);
  src_m = descending_query(12).transpose();
  EmbeddingSpace<double> src("a", {"s"}, src_m);
  TranslationDictionary dict({"a", "b"}, {{"s", "t2"}});  // rank 3 under the query
  const auto report = eval_dict_induction(dict, src, tgt);
  CHECK(report.metrics.at("P@1") == doctest::Approx(0.0));
  CHECK(report.metrics.at("P@5") == doctest::Approx(1.0));
  CHECK(report.metrics.at("P@10") == doctest::Approx(1.0));
}

TEST_CASE("dictionary induction on gold ranks 1, 2, 7, 20") {
  const auto tgt = basis_space("b", 25);
  Mat<double> src_m(4, 25);
  for (Index i = 0; i < 4; ++i) src_m.row(i) = descending_query(25).transpose();
  EmbeddingSpace<double> src("a", {"s1", "s2", "s3", "s4"}, src_m);
  TranslationDictionary dict(
      {"a", "b"}, {{"s1", "t0"}, {"s2", "t1"}, {"s3", "t6"}, {"s4", "t19"}});
  const auto report = eval_dict_induction(dict, src, tgt);
  CHECK(report.metrics.at("P@1") == doctest::Approx(0.25));
  CHECK(report.metrics.at("P@5") == doctest::Approx(0.5));
  CHECK(report.metrics.at("P@10") == doctest::Approx(0.75));
}

TEST_CASE("dictionary induction groups gold translations by source word") {
  const auto tgt = basis_space("b", 12);
  Mat<double> src_m(1, 12);
  src_m = descending_query(12).transpose();
  EmbeddingSpace<double> src("a", {"s"}, src_m);
  // two golds; the better one ranks 2nd -> the source word succeeds at k=5
  // and counts once
  TranslationDictionary dict({"a", "b"}, {{"s", "t7"}, {"s", "t1"}});
  const auto report = eval_dict_induction(dict, src, tgt);
  CHECK(report.evaluated == 1);
  CHECK(report.metrics.at("P@5") == doctest::Approx(1.0));
}

TEST_CASE("dictionary induction skips out-of-vocabulary source words") {
  const auto space = basis_space("a", 5, "w");
  const auto tgt = basis_space("b", 5, "w");
  TranslationDictionary dict({"a", "b"}, {{"w0", "w0"}, {"missing", "w1"}});
  const auto report = eval_dict_induction(dict, space, tgt);
  CHECK(report.evaluated == 1);
  CHECK(report.skipped_oov == 1);
}

TEST_CASE("out-of-vocabulary gold stays in the gold set but never matches") {
  const auto space = basis_space("a", 5, "w");
  const auto tgt = basis_space("b", 5, "w");
  TranslationDictionary dict({"a", "b"}, {{"w0", "not_in_target"}});
  const auto report = eval_dict_induction(dict, space, tgt);
  CHECK(report.evaluated == 1);
  CHECK(report.metrics.at("P@10") == doctest::Approx(0.0));
}

TEST_CASE("dictionary induction with nothing evaluable is an error") {
  const auto space = basis_space("a", 5, "w");
  const auto tgt = basis_space("b", 5, "w");
  TranslationDictionary dict({"a", "b"}, {{"missing", "w1"}});
  CHECK_THROWS_AS(eval_dict_induction(dict, space, tgt), data_error);
}

TEST_CASE("P@k is monotone in k on random data") {
  SynthConfig cfg;
  cfg.vocab_size = 200;
  cfg.d = 8;
  cfg.noise_sigma = 0.3;
  cfg.distortion = Distortion::diag_scaling;
  for (std::uint64_t seed : {4u, 5u, 6u}) {
    cfg.seed = seed;
    const auto pair = generate_pair<double>(cfg);
    const auto report = eval_dict_induction(pair.gold, pair.src, pair.tgt);
    CHECK(report.metrics.at("P@1") <= report.metrics.at("P@5"));
    CHECK(report.metrics.at("P@5") <= report.metrics.at("P@10"));
    for (const auto& [name, value] : report.metrics) {
      CHECK(value >= 0.0);
      CHECK(value <= 1.0);
    }
  }
}

TEST_CASE("word similarity: gold affine in the cosines gives r = rho = 1") {
  Mat<double> ma(4, 2), mb(4, 2);
  const double cosines[4] = {0.1, 0.4, 0.7, 0.9};
  for (Index i = 0; i < 4; ++i) {
    ma.row(i) << 1, 0;
    mb.row(i) << cosines[i], std::sqrt(1 - cosines[i] * cosines[i]);
  }
  std::vector<std::string> wa{"a0", "a1", "a2", "a3"}, wb{"b0", "b1", "b2", "b3"};
  EmbeddingSpace<double> sa("a", wa, ma), sb("b", wb, mb);
  std::vector<SimilarityEntry> data;
  for (int i = 0; i < 4; ++i)
    data.push_back({wa[static_cast<std::size_t>(i)], wb[static_cast<std::size_t>(i)],
                    3.0 * cosines[i] + 1.0});
  const auto report = eval_word_similarity(data, sa, sb);
  CHECK(report.metrics.at("pearson_r") == doctest::Approx(1.0));
  CHECK(report.metrics.at("spearman_rho") == doctest::Approx(1.0));
}

TEST_CASE("word similarity: reversed gold ranking gives rho = -1") {
  Mat<double> ma(4, 2), mb(4, 2);
  const double cosines[4] = {0.1, 0.4, 0.7, 0.9};
  for (Index i = 0; i < 4; ++i) {
    ma.row(i) << 1, 0;
    mb.row(i) << cosines[i], std::sqrt(1 - cosines[i] * cosines[i]);
  }
  std::vector<std::string> wa{"a0", "a1", "a2", "a3"}, wb{"b0", "b1", "b2", "b3"};
  EmbeddingSpace<double> sa("a", wa, ma), sb("b", wb, mb);
  std::vector<SimilarityEntry> data;
  for (int i = 0; i < 4; ++i)
    data.push_back({wa[static_cast<std::size_t>(i)], wb[static_cast<std::size_t>(i)],
                    -cosines[i]});
  const auto report = eval_word_similarity(data, sa, sb);
  CHECK(report.metrics.at("spearman_rho") == doctest::Approx(-1.0));
}

TEST_CASE("spearman on the (2,1,3,4,5) fixture is 0.9") {
  CHECK(spearman({1, 2, 3, 4, 5}, {2, 1, 3, 4, 5}) == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("word similarity via spaces reproduces the 0.9 fixture") {
  // predicted cosines rank as (2,1,3,4,5) against gold 1..5
  const double cosines[5] = {0.2, 0.1, 0.3, 0.4, 0.5};
  Mat<double> ma(5, 2), mb(5, 2);
  std::vector<std::string> wa, wb;
  std::vector<SimilarityEntry> data;
  for (Index i = 0; i < 5; ++i) {
    ma.row(i) << 1, 0;
    mb.row(i) << cosines[i], std::sqrt(1 - cosines[i] * cosines[i]);
    wa.push_back("a" + std::to_string(i));
    wb.push_back("b" + std::to_string(i));
    data.push_back({wa.back(), wb.back(), static_cast<double>(i + 1)});
  }
  const EmbeddingSpace<double> sa("a", wa, ma);
  const EmbeddingSpace<double> sb("b", wb, mb);
  const auto report = eval_word_similarity(data, sa, sb);
  CHECK(report.metrics.at("spearman_rho") == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
  rng::Generator gen(7);
  std::vector<double> x(30), y(30);
  for (auto& v : x) v = gen.normal();
  for (auto& v : y) v = gen.normal();
  const double base = spearman(x, y);
  std::vector<double> cubed = y, exponential = y;
  for (auto& v : cubed) v = v * v * v;
  for (auto& v : exponential) v = std::exp(v);
  CHECK(std::abs(spearman(x, cubed) - base) <= 1e-9);
  CHECK(std::abs(spearman(x, exponential) - base) <= 1e-9);
}

TEST_CASE("word similarity counts and errors") {
  Mat<double> m(3, 2);
  m << 1, 0, 0.6, 0.8, 0, 1;
  EmbeddingSpace<double> sa("a", {"w0", "w1", "w2"}, m);
  std::vector<SimilarityEntry> data{{"w0", "w1", 1.0}, {"w0", "nope", 2.0},
                                    {"w1", "w2", 3.0}};
  const auto report = eval_word_similarity(data, sa, sa);
  CHECK(report.evaluated == 2);
  CHECK(report.skipped_oov == 1);

  std::vector<SimilarityEntry> tiny{{"w0", "w1", 1.0}};
  CHECK_THROWS_AS(eval_word_similarity(tiny, sa, sa), data_error);

  // orthogonal pairs all score 0 -> degenerate predicted series
  const auto basis = basis_space("b", 4, "w");
  std::vector<SimilarityEntry> flat{{"w0", "w1", 1.0}, {"w1", "w2", 2.0}};
  CHECK_THROWS_AS(eval_word_similarity(flat, basis, basis), data_error);
}

TEST_CASE("hypernym map: identical sides give the identity") {
  SynthConfig cfg;
  cfg.vocab_size = 20;
  cfg.d = 4;
  cfg.seed = 8;
  const auto space = generate_pair<double>(cfg).src;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& w : space.words()) pairs.emplace_back(w, w);
  const auto map = train_hypernym_map(pairs, space);
  CHECK((map.M - Mat<double>::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("hypernym map: a single pair takes the minimum-norm solution") {
  Mat<double> m(2, 2);
  m << 1, 0, 0, 1;
  EmbeddingSpace<double> space("xx", {"hypo", "hyper"}, m);
  const auto map = train_hypernym_map({{"hypo", "hyper"}}, space);
  Mat<double> want(2, 2);
  want << 0, 1, 0, 0;
  CHECK((map.M - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("mixed-language training rows concatenate") {
  SynthConfig cfg;
  cfg.vocab_size = 20;
  cfg.d = 4;
  cfg.seed = 9;
  const auto pair = generate_pair<double>(cfg);
  std::vector<std::pair<std::string, std::string>> pairs{{"w000000", "w000001"},
                                                         {"w000002", "w000003"}};
  const auto a = gather_pair_rows(pairs, pair.src);
  const auto b = gather_pair_rows(pairs, pair.tgt);
  const auto map = least_squares_map(vstack(a.A, b.A), vstack(a.T, b.T));
  CHECK(map.trained_on == 4);
  CHECK(map.M.allFinite());
  CHECK_THROWS_AS(train_hypernym_map({{"nope", "nada"}}, pair.src), data_error);
}

TEST_CASE("hypernym evaluation: gold always first gives MRR = MAP = 1") {
  const auto cand = basis_space("b", 8);
  Mat<double> qm(2, 8);
  qm.row(0) = descending_query(8).transpose();
  qm.row(1) = descending_query(8).transpose();
  EmbeddingSpace<double> queries("a", {"q0", "q1"}, qm);
  LinearMap<double> id{Mat<double>::Identity(8, 8), MapFlavor::unconstrained, "", "", 0};
  std::vector<HypernymEntry> test{{"q0", {"t0"}}, {"q1", {"t0"}}};
  const auto report = eval_hypernym(test, id, queries, cand);
  CHECK(report.metrics.at("MRR") == doctest::Approx(1.0));
  CHECK(report.metrics.at("MAP") == doctest::Approx(1.0));
  CHECK(report.metrics.at("P@5") == doctest::Approx(1.0));
}

TEST_CASE("hypernym evaluation: first-hit ranks 1, 2 and 4 give MRR = 7/12") {
  const auto cand = basis_space("b", 10);
  Mat<double> qm(3, 10);
  for (Index i = 0; i < 3; ++i) qm.row(i) = descending_query(10).transpose();
  EmbeddingSpace<double> queries("a", {"q0", "q1", "q2"}, qm);
  LinearMap<double> id{Mat<double>::Identity(10, 10), MapFlavor::unconstrained, "", "", 0};
  std::vector<HypernymEntry> test{{"q0", {"t0"}}, {"q1", {"t1"}}, {"q2", {"t3"}}};
  const auto report = eval_hypernym(test, id, queries, cand);
  CHECK(std::abs(report.metrics.at("MRR") - 7.0 / 12.0) <= 1e-12);
}

TEST_CASE("hypernym evaluation: the 0.45 average-precision fixture") {
  // one term, gold {t1, t4} retrieved at ranks 2 and 5 in a 10-candidate space
  const auto cand = basis_space("b", 10);
  Mat<double> qm(1, 10);
  qm.row(0) = descending_query(10).transpose();
  EmbeddingSpace<double> queries("a", {"q"}, qm);
  LinearMap<double> id{Mat<double>::Identity(10, 10), MapFlavor::unconstrained, "", "", 0};
  std::vector<HypernymEntry> test{{"q", {"t1", "t4"}}};
  const auto report = eval_hypernym(test, id, queries, cand);
  CHECK(std::abs(report.metrics.at("MAP") - 0.45) <= 1e-12);
  CHECK(report.metrics.at("MRR") == doctest::Approx(0.5));
  CHECK(report.metrics.at("P@5") == doctest::Approx(1.0));  // both golds in top 5
}

TEST_CASE("hypernym evaluation caps the gold set at 15") {
  const auto cand = basis_space("b", 20);
  Mat<double> qm(1, 20);
  qm.row(0) = descending_query(20).transpose();
  EmbeddingSpace<double> queries("a", {"q"}, qm);
  LinearMap<double> id{Mat<double>::Identity(20, 20), MapFlavor::unconstrained, "", "", 0};
  // 16 golds listed as t15, t14, ..., t0. The 16th (t0, ranked 1st) falls
  // beyond the cap, so the first counted hit is t1 at rank 2.
  std::vector<std::string> golds;
  for (int i = 15; i >= 0; --i) golds.push_back("t" + std::to_string(i));
  std::vector<HypernymEntry> test{{"q", golds}};
  const auto report = eval_hypernym(test, id, queries, cand);
  CHECK(report.metrics.at("MRR") == doctest::Approx(0.5));
}

TEST_CASE("hypernym evaluation excludes the term itself from candidates") {
  Mat<double> cm(2, 2);
  cm << 1, 0, 0.8, 0.6;
  EmbeddingSpace<double> cand("b", {"q", "other"}, cm);
  Mat<double> qm(1, 2);
  qm << 1, 0;
  EmbeddingSpace<double> queries("a", {"q"}, qm);
  LinearMap<double> id{Mat<double>::Identity(2, 2), MapFlavor::unconstrained, "", "", 0};
  std::vector<HypernymEntry> test{{"q", {"other"}}};
  const auto report = eval_hypernym(test, id, queries, cand);
  CHECK(report.metrics.at("MRR") == doctest::Approx(1.0));  // "q" filtered out
}

TEST_CASE("hypernym evaluation skips and counts out-of-vocabulary terms") {
  const auto cand = basis_space("b", 5);
  Mat<double> qm(1, 5);
  qm.row(0) = descending_query(5).transpose();
  EmbeddingSpace<double> queries("a", {"q"}, qm);
  LinearMap<double> id{Mat<double>::Identity(5, 5), MapFlavor::unconstrained, "", "", 0};
  std::vector<HypernymEntry> test{{"q", {"t0"}}, {"ghost", {"t1"}}};
  const auto report = eval_hypernym(test, id, queries, cand);
  CHECK(report.evaluated == 1);
  CHECK(report.skipped_oov == 1);
  std::vector<HypernymEntry> all_oov{{"ghost", {"t1"}}};
  CHECK_THROWS_AS(eval_hypernym(all_oov, id, queries, cand), data_error);
}

TEST_CASE("dataset loaders parse and validate") {
  TempDir dir;
  const auto sim = load_similarity_dataset(
      write_file(dir, "sim.tsv", "cat\tdog\t7.5\nup down 1\n"));
  REQUIRE(sim.size() == 2);
  CHECK(sim[0].gold == doctest::Approx(7.5));
  CHECK_THROWS_AS(
      load_similarity_dataset(write_file(dir, "bad.tsv", "cat\tdog\tlots\n")),
      data_error);
  CHECK_THROWS_AS(load_similarity_dataset(write_file(dir, "ar.tsv", "cat\t1\n")),
                  data_error);

  const auto hyp = load_hypernym_dataset(
      write_file(dir, "hyp.tsv", "dog\tanimal\tmammal\ncat\tanimal\n"));
  REQUIRE(hyp.size() == 2);
  CHECK(hyp[0].golds == std::vector<std::string>{"animal", "mammal"});
  CHECK_THROWS_AS(load_hypernym_dataset(write_file(dir, "hb.tsv", "dog\n")), data_error);

  const auto pairs = load_word_pairs(write_file(dir, "p.tsv", "a\tb\nc d\n"));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[1] == std::pair<std::string, std::string>{"c", "d"});
}

TEST_CASE("report serialization carries the full schema") {
  SynthConfig cfg;
  cfg.vocab_size = 50;
  cfg.d = 8;
  cfg.seed = 10;
  const auto pair = generate_pair<double>(cfg);
  const auto report = eval_dict_induction(pair.gold, pair.src, pair.tgt);
  const auto j = to_json(report);
  CHECK(j["task"] == "dict_induction");
  CHECK(j["metrics"].contains("P@1"));
  CHECK(j["metrics"].contains("P@5"));
  CHECK(j["metrics"].contains("P@10"));
  CHECK(j["coverage"]["evaluated"] == 50);
  CHECK(j["config"]["retrieval"] == "cosine");
  const std::string text = format_report(report);
  CHECK(text.find("task: dict_induction") != std::string::npos);
  CHECK(text.find("P@1") != std::string::npos);
}
