#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <map>
#include <utility>

#include "qtmlab/errors.hpp"

namespace qtmlab::hilbert {

using Amplitude = std::complex<double>;

// magnitude below which an entry is dropped once an addition has run over it
inline constexpr double kCancelEps = 1e-15;

inline bool is_finite(const Amplitude& a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

// finite complex vector over an ordered basis key; entries with amplitude
// exactly zero are never kept, and iteration order is the key order
template <class K>
class SparseVector {
 public:
  using map_type = std::map<K, Amplitude>;

  SparseVector() = default;
  SparseVector(std::initializer_list<std::pair<K, Amplitude>> terms) {
    for (const auto& [k, a] : terms) insert_term(k, a);
  }

  static SparseVector single(K key, const Amplitude& a = 1.0) {
    SparseVector v;
    v.insert_term(std::move(key), a);
    return v;
  }

  const map_type& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  Amplitude at(const K& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? Amplitude{0.0} : it->second;
  }
  bool contains(const K& key) const { return entries_.count(key) != 0; }

  void insert_term(K key, const Amplitude& a) {
    check_finite(a);
    auto [it, fresh] = entries_.try_emplace(std::move(key), a);
    if (!fresh) it->second += a;
    if (it->second == Amplitude{0.0}) entries_.erase(it);
  }

  // builder interface for linear maps: accumulate all contributions, then
  // finish once to clear what cancelled away
  void accumulate(const K& key, const Amplitude& a) {
    check_finite(a);
    auto [it, fresh] = entries_.try_emplace(key, a);
    if (!fresh) it->second += a;
  }
  void finish(double cancel_eps = kCancelEps) {
    for (auto it = entries_.begin(); it != entries_.end();)
      it = std::abs(it->second) < cancel_eps ? entries_.erase(it)
                                             : std::next(it);
  }

  bool operator==(const SparseVector&) const = default;

 private:
  static void check_finite(const Amplitude& a) {
    if (!is_finite(a)) throw semantic_error("non-finite amplitude");
  }
  map_type entries_;
};

template <class K>
Amplitude inner_product(const SparseVector<K>& x, const SparseVector<K>& y) {
  Amplitude s{0.0};
  auto i = x.entries().begin();
  const auto ie = x.entries().end();
  auto j = y.entries().begin();
  const auto je = y.entries().end();
  while (i != ie && j != je) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      s += std::conj(i->second) * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

template <class K>
double norm_sq(const SparseVector<K>& x) {
  double s = 0.0;
  for (const auto& [k, a] : x.entries()) s += std::norm(a);
  return s;
}

template <class K>
double norm(const SparseVector<K>& x) {
  return std::sqrt(norm_sq(x));
}

template <class K>
SparseVector<K> add(const SparseVector<K>& x, const SparseVector<K>& y) {
  SparseVector<K> r = x;
  for (const auto& [k, a] : y.entries()) r.accumulate(k, a);
  r.finish();
  return r;
}

template <class K>
SparseVector<K> scale(const Amplitude& a, const SparseVector<K>& x) {
  SparseVector<K> r;
  if (a == Amplitude{0.0}) return r;
  for (const auto& [k, v] : x.entries()) r.insert_term(k, a * v);
  return r;
}

template <class K>
SparseVector<K> sub(const SparseVector<K>& x, const SparseVector<K>& y) {
  return add(x, scale(-1.0, y));
}

template <class K>
SparseVector<K> normalize(const SparseVector<K>& x) {
  double n = norm(x);
  if (n == 0.0) throw semantic_error("normalize: zero vector");
  return scale(1.0 / n, x);
}

// optional thinning; evolution never calls this
template <class K>
SparseVector<K> prune(const SparseVector<K>& x, double eps) {
  SparseVector<K> r = x;
  r.finish(eps);
  return r;
}

template <class K>
double distance(const SparseVector<K>& x, const SparseVector<K>& y) {
  return norm(sub(x, y));
}

}  // namespace qtmlab::hilbert
