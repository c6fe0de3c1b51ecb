// Loading, saving and normalizing monolingual embedding spaces.
//
// File formats:
//   word2vec text  -- header "V D", then one "token v1 ... vD" line per word
//   frequency TSV  -- "word<TAB>count", words absent from the file count 0
#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "meemi/types.hpp"

namespace meemi {

namespace detail {

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.emplace_back(line.substr(start, i - start));
  }
  return fields;
}

inline std::string ascii_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

struct LoadOptions {
  std::optional<Index> limit;  // keep at most this many (unique) words
  bool lowercase = false;
};

// Reads a word2vec text file. Duplicate tokens (after optional lowercasing)
// keep the first occurrence; reading stops once `limit` unique words are kept.
template <class Scalar = double>
EmbeddingSpace<Scalar> load_embeddings(const std::string& path, std::string lang,
                                       const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open embedding file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw data_error(path + ": missing header line");
  detail::strip_cr(line);
  const auto header = detail::split_ws(line);
  long long declared = -1, dims = -1;
  if (header.size() == 2) {
    auto r1 = std::from_chars(header[0].data(), header[0].data() + header[0].size(), declared);
    auto r2 = std::from_chars(header[1].data(), header[1].data() + header[1].size(), dims);
    if (r1.ec != std::errc{} || r1.ptr != header[0].data() + header[0].size() ||
        r2.ec != std::errc{} || r2.ptr != header[1].data() + header[1].size())
      declared = dims = -1;
  }
  if (declared < 0 || dims <= 0)
    throw data_error(path + ": malformed header '" + line + "' (expected 'V D')");
  if (declared == 0) throw data_error(path + ": empty vocabulary");

  const Index d = static_cast<Index>(dims);
  std::vector<std::string> words;
  std::vector<Scalar> values;
  std::unordered_map<std::string, Index> seen;
  long long consumed = 0;
  std::size_t lineno = 1;  // header

  while (consumed < declared) {
    if (!std::getline(in, line))
      throw data_error(path + ": header declares " + std::to_string(declared) +
                       " words but the file ends after " + std::to_string(consumed));
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    ++consumed;

    const char* p = line.c_str();
    while (*p == ' ' || *p == '\t') ++p;
    const char* word_start = p;
    while (*p && *p != ' ' && *p != '\t') ++p;
    std::string word(word_start, p);
    if (word.empty())
      throw data_error(path + ": blank token on line " + std::to_string(lineno));
    if (opts.lowercase) word = detail::ascii_lower(word);

    if (seen.count(word)) {
      continue;  // first occurrence wins
    }

    Index parsed = 0;
    const std::size_t base = values.size();
    values.resize(base + static_cast<std::size_t>(d));
    while (true) {
      while (*p == ' ' || *p == '\t') ++p;
      if (!*p) break;
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p)
        throw data_error(path + ": unparsable value on line " + std::to_string(lineno));
      if (parsed >= d) {
        parsed = d + 1;  // too many values
        break;
      }
      values[base + static_cast<std::size_t>(parsed)] = static_cast<Scalar>(v);
      ++parsed;
      p = end;
    }
    if (parsed != d)
      throw data_error(path + ": line " + std::to_string(lineno) + " has " +
                       (parsed > d ? std::string("more than ") + std::to_string(d)
                                   : std::to_string(parsed)) +
                       " values, expected " + std::to_string(d));
    for (Index j = 0; j < d; ++j) {
      if (!std::isfinite(static_cast<double>(values[base + static_cast<std::size_t>(j)])))
        throw data_error(path + ": non-finite value on line " + std::to_string(lineno));
    }

    seen.emplace(word, static_cast<Index>(words.size()));
    words.push_back(std::move(word));
    if (opts.limit && static_cast<Index>(words.size()) >= *opts.limit) break;
  }

  if (words.empty()) throw data_error(path + ": empty vocabulary");

  Mat<Scalar> matrix(static_cast<Index>(words.size()), d);
  for (Index i = 0; i < matrix.rows(); ++i)
    for (Index j = 0; j < d; ++j)
      matrix(i, j) = values[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) +
                            static_cast<std::size_t>(j)];

  return EmbeddingSpace<Scalar>(std::move(lang), std::move(words), std::move(matrix));
}

// Writes word2vec text format with 6 decimal digits per component.
template <class Scalar>
void save_embeddings(const EmbeddingSpace<Scalar>& space, const std::string& path) {
  if (space.dim() <= 0) throw data_error("refusing to save a zero-dimensional space");
  std::ofstream out(path);
  if (!out) throw data_error("cannot open for writing: " + path);
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[64];
  std::string row;
  for (Index i = 0; i < space.size(); ++i) {
    row = space.word(i);
    for (Index j = 0; j < space.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.6f", static_cast<double>(space.matrix()(i, j)));
      row += buf;
    }
    row += '\n';
    out << row;
  }
  if (!out) throw data_error("write failed: " + path);
}

// Applies normalization steps in order. `unit` rescales every row to length
// one (zero rows are an error); `center` subtracts the column-wise mean.
template <class Scalar>
EmbeddingSpace<Scalar> normalize(const EmbeddingSpace<Scalar>& space,
                                 const std::vector<NormStep>& steps) {
  Mat<Scalar> m = space.matrix();
  for (const NormStep step : steps) {
    if (m.rows() == 0) continue;
    if (step == NormStep::unit) {
      const Vec<Scalar> norms = m.rowwise().norm();
      for (Index i = 0; i < norms.size(); ++i)
        if (!(norms(i) > Scalar(0)))
          throw data_error("zero vector at row " + std::to_string(i) +
                           "; cannot unit-normalize");
      m.array().colwise() /= norms.array();
    } else {
      m.rowwise() -= m.colwise().mean();
    }
  }
  std::vector<NormStep> state = space.norm_state();
  state.insert(state.end(), steps.begin(), steps.end());
  return EmbeddingSpace<Scalar>(space.lang(), space.words(), std::move(m),
                                space.frequencies(), std::move(state));
}

// Attaches word occurrence counts from a "word<TAB>count" file. Words of the
// space missing from the file receive count 0; file words outside the
// vocabulary are ignored.
template <class Scalar>
EmbeddingSpace<Scalar> load_frequencies(const EmbeddingSpace<Scalar>& space,
                                        const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open frequency file: " + path);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(space.size()), 0);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_ws(line);
    if (fields.size() != 2)
      throw data_error(path + ": line " + std::to_string(lineno) +
                       " has " + std::to_string(fields.size()) + " fields, expected 2");
    const std::string& count_str = fields[1];
    std::uint64_t count = 0;
    auto res = std::from_chars(count_str.data(), count_str.data() + count_str.size(), count);
    if (res.ec != std::errc{} || res.ptr != count_str.data() + count_str.size())
      throw data_error(path + ": line " + std::to_string(lineno) +
                       ": count '" + count_str + "' is not a non-negative integer");
    if (auto id = space.find(fields[0])) counts[static_cast<std::size_t>(*id)] = count;
  }
  return EmbeddingSpace<Scalar>(space.lang(), space.words(), space.matrix(),
                                std::move(counts), space.norm_state());
}

}  // namespace meemi
