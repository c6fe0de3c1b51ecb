// Core value types shared by every module: embedding spaces, translation
// dictionaries, linear maps and the multilingual space container. All types
// are immutable after construction; operations return new values.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace meemi {

using Eigen::Index;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Bad or inconsistent user-supplied data (files, dictionaries, vocabularies).
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failures of the numeric routines themselves (non-finite values and the like).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class NormStep { unit, center };

inline const char* to_string(NormStep s) {
  return s == NormStep::unit ? "unit" : "center";
}

// Parses a comma-separated recipe such as "unit,center,unit".
// "none" or the empty string yield an empty recipe.
inline std::vector<NormStep> parse_norm_recipe(std::string_view csv) {
  std::vector<NormStep> steps;
  if (csv.empty() || csv == "none") return steps;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string_view tok = csv.substr(
        start, comma == std::string_view::npos ? csv.size() - start : comma - start);
    if (tok == "unit") {
      steps.push_back(NormStep::unit);
    } else if (tok == "center") {
      steps.push_back(NormStep::center);
    } else {
      throw data_error("unknown normalization step: '" + std::string(tok) + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return steps;
}

inline std::string to_string(const std::vector<NormStep>& steps) {
  std::string out;
  for (const NormStep s : steps) {
    if (!out.empty()) out += ',';
    out += to_string(s);
  }
  return out.empty() ? "none" : out;
}

// A vocabulary-indexed dense matrix of word vectors for one language.
// Row i of matrix() is the vector of words()[i]. Construction validates the
// type's invariants: unique tokens, finite entries, one row per word, unit
// rows when the normalization state ends with a unit step, and a frequency
// entry per word when frequencies are attached.
template <class Scalar = double>
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;

  EmbeddingSpace(std::string lang, std::vector<std::string> words, Mat<Scalar> matrix,
                 std::optional<std::vector<std::uint64_t>> frequencies = std::nullopt,
                 std::vector<NormStep> norm_state = {})
      : lang_(std::move(lang)),
        words_(std::move(words)),
        matrix_(std::move(matrix)),
        frequencies_(std::move(frequencies)),
        norm_state_(std::move(norm_state)) {
    if (matrix_.rows() != static_cast<Index>(words_.size()))
      throw data_error("embedding matrix has " + std::to_string(matrix_.rows()) +
                       " rows for " + std::to_string(words_.size()) + " words");
    if (!matrix_.allFinite())
      throw data_error("embedding matrix contains non-finite values");
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (!index_.emplace(words_[i], static_cast<Index>(i)).second)
        throw data_error("duplicate token in vocabulary: '" + words_[i] + "'");
    }
    if (frequencies_ && frequencies_->size() != words_.size())
      throw data_error("frequency table does not cover the vocabulary");
    if (!norm_state_.empty() && norm_state_.back() == NormStep::unit && size() > 0) {
      const auto norms = matrix_.rowwise().norm().eval();
      for (Index i = 0; i < norms.size(); ++i) {
        if (std::abs(norms(i) - Scalar(1)) > Scalar(1e-6))
          throw data_error("row " + std::to_string(i) +
                           " is not unit-norm despite a trailing unit step");
      }
    }
  }

  const std::string& lang() const { return lang_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(Index i) const { return words_[static_cast<std::size_t>(i)]; }
  const Mat<Scalar>& matrix() const { return matrix_; }
  Index size() const { return matrix_.rows(); }
  Index dim() const { return matrix_.cols(); }
  auto row(Index i) const { return matrix_.row(i); }

  std::optional<Index> find(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool has_frequencies() const { return frequencies_.has_value(); }
  const std::optional<std::vector<std::uint64_t>>& frequencies() const { return frequencies_; }
  std::uint64_t frequency(Index i) const { return (*frequencies_)[static_cast<std::size_t>(i)]; }
  std::uint64_t total_frequency() const {
    std::uint64_t total = 0;
    for (const std::uint64_t f : *frequencies_) total += f;
    return total;
  }

  const std::vector<NormStep>& norm_state() const { return norm_state_; }

 private:
  std::string lang_;
  std::vector<std::string> words_;
  Mat<Scalar> matrix_;
  std::optional<std::vector<std::uint64_t>> frequencies_;
  std::vector<NormStep> norm_state_;
  std::unordered_map<std::string, Index> index_;
};

// An ordered list of n-language word tuples. A source word may recur across
// tuples (several translations), but fully duplicated tuples are dropped,
// keeping the first occurrence.
class TranslationDictionary {
 public:
  TranslationDictionary() = default;

  TranslationDictionary(std::vector<std::string> langs,
                        std::vector<std::vector<std::string>> tuples)
      : langs_(std::move(langs)) {
    if (langs_.size() < 2) throw data_error("a dictionary needs at least two languages");
    std::unordered_set<std::string> lang_seen;
    for (const auto& l : langs_) {
      if (l.empty()) throw data_error("empty language label");
      if (!lang_seen.insert(l).second)
        throw data_error("duplicate language label: '" + l + "'");
    }
    std::unordered_set<std::string> seen;
    tuples_.reserve(tuples.size());
    for (auto& tuple : tuples) {
      if (tuple.size() != langs_.size())
        throw data_error("tuple arity " + std::to_string(tuple.size()) +
                         " does not match " + std::to_string(langs_.size()) + " languages");
      std::string key;
      for (const auto& w : tuple) {
        if (w.empty()) throw data_error("empty token in dictionary tuple");
        key += w;
        key += '\t';
      }
      if (seen.insert(std::move(key)).second) tuples_.push_back(std::move(tuple));
    }
  }

  const std::vector<std::string>& langs() const { return langs_; }
  const std::vector<std::vector<std::string>>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  std::size_t arity() const { return langs_.size(); }

  std::optional<std::size_t> lang_index(const std::string& lang) const {
    for (std::size_t i = 0; i < langs_.size(); ++i)
      if (langs_[i] == lang) return i;
    return std::nullopt;
  }

 private:
  std::vector<std::string> langs_;
  std::vector<std::vector<std::string>> tuples_;
};

// Numeric training matrices extracted from a dictionary: row i of A and B are
// the source- and target-side vectors of the i-th surviving tuple.
template <class Scalar = double>
struct PairedMatrices {
  Mat<Scalar> A;
  Mat<Scalar> B;
  Index kept = 0;
  Index skipped_oov = 0;
  std::vector<Index> src_ids;  // word ids of surviving rows, in tuple order
  std::vector<Index> tgt_ids;
};

enum class MapFlavor { orthogonal, unconstrained };

inline const char* to_string(MapFlavor f) {
  return f == MapFlavor::orthogonal ? "orthogonal" : "unconstrained";
}

inline MapFlavor map_flavor_from_string(std::string_view s) {
  if (s == "orthogonal") return MapFlavor::orthogonal;
  if (s == "unconstrained") return MapFlavor::unconstrained;
  throw data_error("unknown map flavor: '" + std::string(s) + "'");
}

// A d x d linear map applied on the right of row vectors: y = x * M.
template <class Scalar = double>
struct LinearMap {
  Mat<Scalar> M;
  MapFlavor flavor = MapFlavor::unconstrained;
  std::string src_lang;
  std::string tgt_lang;
  Index trained_on = 0;
};

// Throws unless the map is finite and, for orthogonal flavor, satisfies
// ||M Mt - I||_max <= 1e-6.
template <class Scalar>
inline void validate(const LinearMap<Scalar>& map) {
  if (!map.M.allFinite()) throw numeric_error("linear map contains non-finite values");
  if (map.flavor == MapFlavor::orthogonal) {
    const Mat<Scalar> gram = map.M * map.M.transpose();
    const Scalar dev =
        (gram - Mat<Scalar>::Identity(map.M.rows(), map.M.cols())).cwiseAbs().maxCoeff();
    if (dev > Scalar(1e-6))
      throw numeric_error("orthogonal map deviates from orthogonality by " +
                          std::to_string(static_cast<double>(dev)));
  }
}

// A set of spaces sharing one hub language and one dimensionality, all in the
// hub's coordinate system. Keyed by language, ordered for determinism.
template <class Scalar = double>
class MultiSpace {
 public:
  MultiSpace() = default;

  MultiSpace(std::string hub, std::map<std::string, EmbeddingSpace<Scalar>> spaces)
      : hub_(std::move(hub)), spaces_(std::move(spaces)) {
    if (spaces_.size() < 2) throw data_error("a multilingual space needs at least two languages");
    if (spaces_.find(hub_) == spaces_.end())
      throw data_error("hub language '" + hub_ + "' is not among the member spaces");
    const Index d = spaces_.begin()->second.dim();
    for (const auto& [lang, space] : spaces_) {
      if (space.dim() != d)
        throw data_error("space '" + lang + "' has dimensionality " +
                         std::to_string(space.dim()) + ", expected " + std::to_string(d));
    }
  }

  const std::string& hub() const { return hub_; }
  const std::map<std::string, EmbeddingSpace<Scalar>>& spaces() const { return spaces_; }
  const EmbeddingSpace<Scalar>& at(const std::string& lang) const {
    auto it = spaces_.find(lang);
    if (it == spaces_.end()) throw data_error("no space for language '" + lang + "'");
    return it->second;
  }
  std::size_t size() const { return spaces_.size(); }
  Index dim() const { return spaces_.begin()->second.dim(); }

 private:
  std::string hub_;
  std::map<std::string, EmbeddingSpace<Scalar>> spaces_;
};

// Cosine similarity between two vectors (any Eigen expressions).
template <class DerivedA, class DerivedB>
auto cosine(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0))
    throw numeric_error("cosine of a zero vector is undefined");
  return Scalar(a.dot(b)) / (na * nb);
}

}  // namespace meemi
