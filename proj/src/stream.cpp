#include "causal/stream.hpp"

#include <stdexcept>
#include <string>

#include "causal/errors.hpp"

namespace causal {

Stream::Stream(std::size_t dim, Generator gen) : state_(std::make_shared<State>()) {
  if (dim == 0) {
    throw DimensionError("stream dimension must be positive");
  }
  state_->dim = dim;
  state_->gen = std::move(gen);
}

Stream Stream::from_index(std::size_t dim, IndexFn fn) {
  return Stream(dim, [fn = std::move(fn)](std::uint64_t k, std::span<const Vec>) { return fn(k); });
}

Vec Stream::at(std::uint64_t k) const {
  State& st = *state_;
  std::lock_guard lock(st.mu);
  while (st.cache.size() <= k) {
    const std::uint64_t next = st.cache.size();
    Vec v = st.gen(next, std::span<const Vec>(st.cache));
    if (v.size() != st.dim) {
      throw DimensionError("generator produced entry " + std::to_string(next) + " of dimension " +
                           std::to_string(v.size()) + ", expected " + std::to_string(st.dim));
    }
    st.cache.push_back(std::move(v));
  }
  return st.cache[k];
}

std::uint64_t Stream::forced() const {
  std::lock_guard lock(state_->mu);
  return state_->cache.size();
}

Vec head(const Stream& s) { return s.at(0); }

Stream tail(const Stream& s) {
  return Stream::from_index(s.dim(), [s](std::uint64_t k) { return s.at(k + 1); });
}

Stream prepend(const Word& w, const Stream& s) {
  for (const Vec& v : w) {
    if (v.size() != s.dim()) {
      throw DimensionError("prepend: word entry has dimension " + std::to_string(v.size()) +
                           ", stream has " + std::to_string(s.dim()));
    }
  }
  if (w.empty()) {
    return s;
  }
  return Stream::from_index(s.dim(), [w, s](std::uint64_t k) {
    return k < w.size() ? w[k] : s.at(k - w.size());
  });
}

Word slice(const Stream& s, std::uint64_t j, std::uint64_t k) {
  if (j > k) {
    throw std::invalid_argument("slice: start " + std::to_string(j) + " exceeds end " + std::to_string(k));
  }
  Word out;
  out.reserve(k - j + 1);
  for (std::uint64_t i = j; i <= k; ++i) {
    out.push_back(s.at(i));
  }
  return out;
}

Stream zip(const Stream& s, const Stream& t) {
  return Stream::from_index(s.dim() + t.dim(), [s, t](std::uint64_t k) {
    Vec v = s.at(k);
    Vec w = t.at(k);
    v.insert(v.end(), w.begin(), w.end());
    return v;
  });
}

std::pair<Stream, Stream> unzip(const Stream& s, std::size_t split) {
  if (split == 0 || split >= s.dim()) {
    throw DimensionError("unzip: split point " + std::to_string(split) + " outside 1.." +
                         std::to_string(s.dim() - 1));
  }
  return {project(s, 0, split), project(s, split, s.dim())};
}

Stream project(const Stream& s, std::size_t lo, std::size_t hi) {
  if (lo >= hi || hi > s.dim()) {
    throw DimensionError("project: range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         ") invalid for dimension " + std::to_string(s.dim()));
  }
  if (lo == 0 && hi == s.dim()) {
    return s;
  }
  return Stream::from_index(hi - lo, [s, lo, hi](std::uint64_t k) {
    Vec v = s.at(k);
    return Vec(v.begin() + static_cast<std::ptrdiff_t>(lo), v.begin() + static_cast<std::ptrdiff_t>(hi));
  });
}

Stream map_entries(const Stream& s, std::size_t out_dim, std::function<Vec(const Vec&)> fn) {
  return Stream::from_index(out_dim, [s, fn = std::move(fn)](std::uint64_t k) { return fn(s.at(k)); });
}

Stream zero_stream(std::size_t dim) {
  return Stream::from_index(dim, [dim](std::uint64_t) { return Vec(dim, 0.0); });
}

Stream pointwise_add(const Stream& s, const Stream& t) {
  if (s.dim() != t.dim()) {
    throw DimensionError("pointwise_add: dimensions " + std::to_string(s.dim()) + " and " +
                         std::to_string(t.dim()) + " differ");
  }
  return Stream::from_index(s.dim(), [s, t](std::uint64_t k) {
    Vec v = s.at(k);
    const Vec w = t.at(k);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] += w[i];
    }
    return v;
  });
}

Stream scalar_mul(double r, const Stream& s) {
  return Stream::from_index(s.dim(), [r, s](std::uint64_t k) {
    Vec v = s.at(k);
    for (double& x : v) {
      x *= r;
    }
    return v;
  });
}

Stream eventually(const Word& prefix, const Vec& tail_value) {
  for (const Vec& v : prefix) {
    if (v.size() != tail_value.size()) {
      throw DimensionError("eventually: prefix entry dimension differs from tail");
    }
  }
  return Stream::from_index(tail_value.size(), [prefix, tail_value](std::uint64_t k) {
    return k < prefix.size() ? prefix[k] : tail_value;
  });
}

Stream repeat(const Vec& v) { return eventually({}, v); }

Stream from_word(const Word& w, std::size_t dim) { return eventually(w, Vec(dim, 0.0)); }

}  // namespace causal
