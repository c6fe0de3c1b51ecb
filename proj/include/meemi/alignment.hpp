// Orthogonal alignment of two embedding spaces. The optimal orthogonal map
// for rows (a_i -> b_i) minimizing sum ||a_i W - b_i||^2 is W = U V^T where
// U S V^T is the SVD of A^T B. Also holds the linear-map text serialization.
#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "meemi/dictionaries.hpp"
#include "meemi/types.hpp"

namespace meemi {

template <class Scalar = double>
struct ProcrustesResult {
  LinearMap<Scalar> map;
  bool rank_deficient = false;       // numerical rank of A^T B below d
  Scalar smallest_singular_value = 0;
};

// Solves the orthogonal Procrustes problem for the paired rows. Deterministic
// across backends: paired singular-vector signs are fixed so that the
// largest-magnitude entry of each left singular vector is positive. k < d is
// allowed but underdetermined; a warning goes to stderr.
template <class Scalar>
ProcrustesResult<Scalar> procrustes(const PairedMatrices<Scalar>& pairs,
                                    std::string src_lang = "", std::string tgt_lang = "") {
  const Mat<Scalar>& A = pairs.A;
  const Mat<Scalar>& B = pairs.B;
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw data_error("paired matrices have mismatched shapes");
  if (A.rows() == 0) throw data_error("no training pairs");
  if (!A.allFinite() || !B.allFinite())
    throw numeric_error("training pairs contain non-finite values");

  const Index d = A.cols();
  if (A.rows() < d)
    std::cerr << "warning: " << A.rows() << " training pairs for dimensionality " << d
              << "; the orthogonal map is underdetermined\n";

  const Mat<Scalar> cross = A.transpose() * B;
  Eigen::JacobiSVD<Mat<Scalar>> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat<Scalar> U = svd.matrixU();
  Mat<Scalar> V = svd.matrixV();

  // Sign convention; flips are paired so U S V^T is unchanged.
  for (Index j = 0; j < d; ++j) {
    Index imax = 0;
    U.col(j).cwiseAbs().maxCoeff(&imax);
    if (U(imax, j) < Scalar(0)) {
      U.col(j) = -U.col(j);
      V.col(j) = -V.col(j);
    }
  }

  const Vec<Scalar>& sv = svd.singularValues();
  const Scalar smax = sv.size() > 0 ? sv(0) : Scalar(0);
  const Scalar threshold =
      smax * static_cast<Scalar>(d) * Eigen::NumTraits<Scalar>::epsilon();
  const Scalar smin = sv.size() > 0 ? sv(sv.size() - 1) : Scalar(0);

  ProcrustesResult<Scalar> result;
  result.map = LinearMap<Scalar>{U * V.transpose(), MapFlavor::orthogonal,
                                 std::move(src_lang), std::move(tgt_lang), A.rows()};
  result.rank_deficient = !(smin > threshold);
  result.smallest_singular_value = smin;
  validate(result.map);
  return result;
}

// Right-multiplies every row by the map. Words and frequencies carry over;
// the normalization state is cleared since a general map may break it.
template <class Scalar>
EmbeddingSpace<Scalar> apply_map(const EmbeddingSpace<Scalar>& space,
                                 const LinearMap<Scalar>& map) {
  if (space.dim() != map.M.rows())
    throw data_error("space dimensionality " + std::to_string(space.dim()) +
                     " does not match map dimensionality " + std::to_string(map.M.rows()));
  return EmbeddingSpace<Scalar>(space.lang(), space.words(), space.matrix() * map.M,
                                space.frequencies(), {});
}

template <class Scalar = double>
struct AlignResult {
  EmbeddingSpace<Scalar> aligned_src;
  LinearMap<Scalar> map;
  Index pairs_kept = 0;
  Index skipped_oov = 0;
  bool rank_deficient = false;
};

// Orthogonally maps the source space onto the target space using a bilingual
// dictionary whose columns are (source, target). The target space is not
// modified.
template <class Scalar>
AlignResult<Scalar> align_bilingual(const EmbeddingSpace<Scalar>& src,
                                    const EmbeddingSpace<Scalar>& tgt,
                                    const TranslationDictionary& dict) {
  if (src.dim() != tgt.dim())
    throw data_error("source and target spaces have different dimensionalities");
  const PairedMatrices<Scalar> pairs = build_pairs(dict, src, tgt, 0, 1);
  ProcrustesResult<Scalar> pro = procrustes(pairs, src.lang(), tgt.lang());
  AlignResult<Scalar> out;
  out.aligned_src = apply_map(src, pro.map);
  out.map = std::move(pro.map);
  out.pairs_kept = pairs.kept;
  out.skipped_oov = pairs.skipped_oov;
  out.rank_deficient = pro.rank_deficient;
  return out;
}

// ---------------------------------------------------------------------------
// Linear-map text format: header "d d flavor", then d rows of d values at
// 9 significant digits (round-trips bit-for-bit through save/load/save).

template <class Scalar>
void save_linear_map(const LinearMap<Scalar>& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path);
  const Index d = map.M.rows();
  out << d << ' ' << map.M.cols() << ' ' << to_string(map.flavor) << '\n';
  char buf[64];
  std::string row;
  for (Index i = 0; i < d; ++i) {
    row.clear();
    for (Index j = 0; j < map.M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), j ? " %.9g" : "%.9g",
                    static_cast<double>(map.M(i, j)));
      row += buf;
    }
    row += '\n';
    out << row;
  }
  if (!out) throw data_error("write failed: " + path);
}

template <class Scalar = double>
LinearMap<Scalar> load_linear_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open map file: " + path);
  Index rows = 0, cols = 0;
  std::string flavor_str;
  if (!(in >> rows >> cols >> flavor_str) || rows <= 0 || cols <= 0)
    throw data_error(path + ": malformed map header");
  LinearMap<Scalar> map;
  map.flavor = map_flavor_from_string(flavor_str);
  map.M.resize(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      double v = 0;
      if (!(in >> v)) throw data_error(path + ": truncated map data");
      map.M(i, j) = static_cast<Scalar>(v);
    }
  validate(map);
  return map;
}

}  // namespace meemi
