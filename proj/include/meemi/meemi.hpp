// Fine-tuning of already-aligned spaces: unconstrained least-squares maps
// that send every dictionary word toward the average of its translation
// group. Bilingual averages may be frequency-weighted; the multilingual
// variant maps every member space (hub included) toward tuple centroids.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "meemi/alignment.hpp"
#include "meemi/dictionaries.hpp"
#include "meemi/types.hpp"

namespace meemi {

// Exact least squares min_M ||A M - T||_F^2 via a rank-revealing complete
// orthogonal decomposition; singular A^T A yields the minimum-norm solution.
// ridge > 0 switches to the regularized normal equations
// (A^T A + ridge I) M = A^T T.
template <class Scalar>
LinearMap<Scalar> least_squares_map(const Mat<Scalar>& A, const Mat<Scalar>& T,
                                    Scalar ridge = Scalar(0)) {
  if (A.rows() != T.rows())
    throw data_error("row counts differ between inputs and targets");
  if (A.rows() == 0) throw data_error("no rows to fit");
  if (!A.allFinite() || !T.allFinite())
    throw numeric_error("least-squares input contains non-finite values");

  Mat<Scalar> M;
  if (ridge > Scalar(0)) {
    Mat<Scalar> gram = A.transpose() * A;
    gram.diagonal().array() += ridge;
    M = gram.ldlt().solve(A.transpose() * T);
  } else {
    M = A.completeOrthogonalDecomposition().solve(T);
  }
  if (!M.allFinite()) throw numeric_error("least-squares solve produced non-finite values");
  return LinearMap<Scalar>{std::move(M), MapFlavor::unconstrained, "", "", A.rows()};
}

enum class FrequencyMode {
  raw,          // use occurrence counts as-is
  per_million,  // rescale each side by its corpus total (rate-based weights)
};

struct MeemiOptions {
  bool weighted = false;
  double ridge = 0.0;
  FrequencyMode freq_mode = FrequencyMode::raw;
};

namespace detail {

// Weighted per-pair averages (fs*a + ft*b) / (fs + ft). A pair whose weights
// are both zero falls back to the plain average.
template <class Scalar>
Mat<Scalar> weighted_targets(const Mat<Scalar>& A, const Mat<Scalar>& B,
                             const std::vector<Scalar>& ws, const std::vector<Scalar>& wt) {
  Mat<Scalar> T(A.rows(), A.cols());
  for (Index i = 0; i < A.rows(); ++i) {
    const Scalar fs = ws[static_cast<std::size_t>(i)];
    const Scalar ft = wt[static_cast<std::size_t>(i)];
    const Scalar total = fs + ft;
    if (total > Scalar(0)) {
      T.row(i) = (fs * A.row(i) + ft * B.row(i)) / total;
    } else {
      T.row(i) = (A.row(i) + B.row(i)) / Scalar(2);
    }
  }
  return T;
}

template <class Scalar>
std::vector<Scalar> pair_weights(const EmbeddingSpace<Scalar>& space,
                                 const std::vector<Index>& ids, FrequencyMode mode) {
  std::vector<Scalar> w(ids.size());
  Scalar scale = Scalar(1);
  if (mode == FrequencyMode::per_million) {
    const std::uint64_t total = space.total_frequency();
    scale = total > 0 ? Scalar(1e6) / static_cast<Scalar>(total) : Scalar(0);
  }
  for (std::size_t i = 0; i < ids.size(); ++i)
    w[i] = scale * static_cast<Scalar>(space.frequency(ids[i]));
  return w;
}

}  // namespace detail

template <class Scalar = double>
struct MeemiBilingualResult {
  EmbeddingSpace<Scalar> src;
  EmbeddingSpace<Scalar> tgt;
  LinearMap<Scalar> map_src;
  LinearMap<Scalar> map_tgt;
  Index pairs_kept = 0;
  Index skipped_oov = 0;
};

// Fits two independent regressions onto the per-pair averages -- one from the
// source rows, one from the target rows -- and applies each map to its full
// space. Requires spaces already in one coordinate system.
template <class Scalar>
MeemiBilingualResult<Scalar> meemi_bilingual(const EmbeddingSpace<Scalar>& src,
                                             const EmbeddingSpace<Scalar>& tgt,
                                             const TranslationDictionary& dict,
                                             const MeemiOptions& opts = {}) {
  if (src.dim() != tgt.dim())
    throw data_error("source and target spaces have different dimensionalities");
  if (opts.weighted && (!src.has_frequencies() || !tgt.has_frequencies()))
    throw data_error("weighted averaging requires frequencies on both spaces");

  const PairedMatrices<Scalar> pairs = build_pairs(dict, src, tgt, 0, 1);

  Mat<Scalar> targets;
  if (opts.weighted) {
    const auto ws = detail::pair_weights(src, pairs.src_ids, opts.freq_mode);
    const auto wt = detail::pair_weights(tgt, pairs.tgt_ids, opts.freq_mode);
    targets = detail::weighted_targets(pairs.A, pairs.B, ws, wt);
  } else {
    targets = (pairs.A + pairs.B) / Scalar(2);
  }

  LinearMap<Scalar> ms = least_squares_map(pairs.A, targets, Scalar(opts.ridge));
  LinearMap<Scalar> mt = least_squares_map(pairs.B, targets, Scalar(opts.ridge));
  ms.src_lang = src.lang();
  ms.tgt_lang = tgt.lang();
  mt.src_lang = tgt.lang();
  mt.tgt_lang = src.lang();

  MeemiBilingualResult<Scalar> out;
  out.src = apply_map(src, ms);
  out.tgt = apply_map(tgt, mt);
  out.map_src = std::move(ms);
  out.map_tgt = std::move(mt);
  out.pairs_kept = pairs.kept;
  out.skipped_oov = pairs.skipped_oov;
  return out;
}

template <class Scalar = double>
struct MeemiMultiResult {
  MultiSpace<Scalar> spaces;
  std::map<std::string, LinearMap<Scalar>> maps;
  Index tuples_kept = 0;
  Index skipped_oov = 0;
};

// Multilingual variant: tuple centroids over all n member vectors are the
// shared regression targets, and one unconstrained map is fitted and applied
// per language -- the hub too. Tuples with any word out of vocabulary are
// skipped and counted. There is no weighted multilingual variant.
template <class Scalar>
MeemiMultiResult<Scalar> meemi_multilingual(const MultiSpace<Scalar>& ms,
                                            const TranslationDictionary& dict,
                                            Scalar ridge = Scalar(0)) {
  if (dict.arity() != ms.size())
    throw data_error("dictionary arity " + std::to_string(dict.arity()) +
                     " does not match " + std::to_string(ms.size()) + " spaces");
  for (const auto& lang : dict.langs())
    if (ms.spaces().find(lang) == ms.spaces().end())
      throw data_error("dictionary language '" + lang + "' has no member space");

  const std::size_t n = dict.arity();
  std::vector<const EmbeddingSpace<Scalar>*> col_space(n);
  for (std::size_t c = 0; c < n; ++c) col_space[c] = &ms.at(dict.langs()[c]);

  // Tuples whose words are present in every member vocabulary.
  std::vector<std::vector<Index>> kept_ids;  // per tuple: word id per column
  Index skipped = 0;
  for (const auto& tuple : dict.tuples()) {
    std::vector<Index> ids(n);
    bool complete = true;
    for (std::size_t c = 0; c < n; ++c) {
      const auto id = col_space[c]->find(tuple[c]);
      if (!id) {
        complete = false;
        break;
      }
      ids[c] = *id;
    }
    if (complete)
      kept_ids.push_back(std::move(ids));
    else
      ++skipped;
  }
  if (kept_ids.empty())
    throw data_error("no dictionary tuple survives vocabulary lookup (" +
                     std::to_string(skipped) + " skipped)");

  const Index k = static_cast<Index>(kept_ids.size());
  const Index d = ms.dim();
  std::vector<Mat<Scalar>> rows(n);
  for (std::size_t c = 0; c < n; ++c) {
    rows[c].resize(k, d);
    for (Index i = 0; i < k; ++i)
      rows[c].row(i) = col_space[c]->row(kept_ids[static_cast<std::size_t>(i)][c]);
  }
  Mat<Scalar> targets = Mat<Scalar>::Zero(k, d);
  for (std::size_t c = 0; c < n; ++c) targets += rows[c];
  targets /= static_cast<Scalar>(n);

  MeemiMultiResult<Scalar> out;
  std::map<std::string, EmbeddingSpace<Scalar>> mapped;
  for (std::size_t c = 0; c < n; ++c) {
    const std::string& lang = dict.langs()[c];
    LinearMap<Scalar> map = least_squares_map(rows[c], targets, ridge);
    map.src_lang = lang;
    map.tgt_lang = ms.hub();
    mapped.emplace(lang, apply_map(*col_space[c], map));
    out.maps.emplace(lang, std::move(map));
  }
  out.spaces = MultiSpace<Scalar>(ms.hub(), std::move(mapped));
  out.tuples_kept = k;
  out.skipped_oov = skipped;
  return out;
}

}  // namespace meemi
