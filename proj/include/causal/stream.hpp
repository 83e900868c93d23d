#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace causal {

/// A point of R^n.
using Vec = std::vector<double>;

/// A finite word of vectors (a stream prefix).
using Word = std::vector<Vec>;

/// Lazy, memoized, conceptually infinite sequence of real vectors.
///
/// Entries are produced on demand by a generator and cached. The generator for
/// index k is only ever invoked after entries 0..k-1 are cached, and receives
/// that prefix, so recurrences can read their own earlier outputs without
/// recomputation. Forcing entry k never asks the generator for an index past k.
///
/// Copies share the cache. Cache growth is serialized by an internal mutex, so
/// a stream may be forced from several threads.
class Stream {
 public:
  using Generator = std::function<Vec(std::uint64_t k, std::span<const Vec> prefix)>;
  using IndexFn = std::function<Vec(std::uint64_t k)>;

  Stream(std::size_t dim, Generator gen);

  /// Stream whose entry k depends only on k (and on other streams).
  static Stream from_index(std::size_t dim, IndexFn fn);

  std::size_t dim() const noexcept { return state_->dim; }

  /// Entry k. Deterministic: repeated calls return bit-identical vectors.
  Vec at(std::uint64_t k) const;
  Vec operator[](std::uint64_t k) const { return at(k); }

  /// Component 0 of entry k; convenience for scalar streams.
  double scalar(std::uint64_t k) const { return at(k)[0]; }

  /// Number of entries currently cached.
  std::uint64_t forced() const;

 private:
  struct State {
    std::size_t dim;
    Generator gen;
    mutable std::mutex mu;
    std::vector<Vec> cache;
  };
  std::shared_ptr<State> state_;
};

// Structural operations.

Vec head(const Stream& s);
Stream tail(const Stream& s);

/// (w:s): the entries of w followed by s.
Stream prepend(const Word& w, const Stream& s);

/// (s_j, ..., s_k). Throws std::invalid_argument when j > k.
Word slice(const Stream& s, std::uint64_t j, std::uint64_t k);

/// Entrywise concatenation: zip(s,t)_k = s_k ++ t_k.
Stream zip(const Stream& s, const Stream& t);

/// Splits each entry at `split`; inverse of zip. The split must lie in 1..dim-1.
std::pair<Stream, Stream> unzip(const Stream& s, std::size_t split);

/// Components [lo, hi) of each entry.
Stream project(const Stream& s, std::size_t lo, std::size_t hi);

/// Applies `fn` to each entry, producing vectors of dimension `out_dim`.
Stream map_entries(const Stream& s, std::size_t out_dim, std::function<Vec(const Vec&)> fn);

// Vector-space structure, componentwise.

Stream zero_stream(std::size_t dim);
Stream pointwise_add(const Stream& s, const Stream& t);
Stream scalar_mul(double r, const Stream& s);

// Eventually-constant streams.

/// prefix followed by `tail` forever.
Stream eventually(const Word& prefix, const Vec& tail);

/// `v` repeated forever.
Stream repeat(const Vec& v);

/// The finite word w followed by zeros.
Stream from_word(const Word& w, std::size_t dim);

}  // namespace causal
