#pragma once

// Truncated multivariate Taylor series.  A jet in `nvars` variables of order r
// stores the coefficients c_a of t^a for every multi-index |a| <= r.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hodgewp {

using cplx = std::complex<double>;

inline constexpr int kMaxJetVars = 8;
using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

inline int total_degree(const MultiIndex& a, int nvars) {
  int s = 0;
  for (int v = 0; v < nvars; ++v) s += a[v];
  return s;
}

class JetLayout {
 public:
  struct Product {
    int a, b, c;
  };

  static std::shared_ptr<const JetLayout> get(int nvars, int order) {
    if (nvars < 1 || nvars > kMaxJetVars || order < 0 || order > 12)
      throw std::invalid_argument("jet layout out of range");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(nvars, order));
    return slot;
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(index_.size()); }
  const MultiIndex& index(int k) const { return index_[k]; }
  int degree(int k) const { return degree_[k]; }

  // -1 when the multi-index is above the truncation order.
  int find(const MultiIndex& a) const {
    auto it = lookup_.find(key(a));
    return it == lookup_.end() ? -1 : it->second;
  }

  const std::vector<Product>& products() const {
    std::call_once(products_once_, [this] {
      for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j) {
          if (degree_[i] + degree_[j] > order_) continue;
          MultiIndex s{};
          for (int v = 0; v < nvars_; ++v) s[v] = static_cast<std::uint8_t>(index_[i][v] + index_[j][v]);
          products_.push_back({i, j, find(s)});
        }
    });
    return products_;
  }

 private:
  JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
    for (int d = 0; d <= order; ++d) {
      MultiIndex a{};
      enumerate(a, 0, d);
    }
    for (int k = 0; k < size(); ++k) lookup_[key(index_[k])] = k;
  }

  void enumerate(MultiIndex& a, int v, int remaining) {
    if (v == nvars_ - 1) {
      a[v] = static_cast<std::uint8_t>(remaining);
      index_.push_back(a);
      degree_.push_back(total_degree(a, nvars_));
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      a[v] = static_cast<std::uint8_t>(k);
      enumerate(a, v + 1, remaining - k);
    }
    a[v] = 0;
  }

  std::uint64_t key(const MultiIndex& a) const {
    std::uint64_t k = 0;
    for (int v = 0; v < nvars_; ++v) k = (k << 5) | a[v];
    return k;
  }

  int nvars_;
  int order_;
  std::vector<MultiIndex> index_;
  std::vector<int> degree_;
  std::unordered_map<std::uint64_t, int> lookup_;
  mutable std::once_flag products_once_;
  mutable std::vector<Product> products_;
};

template <typename T>
class BasicJet {
 public:
  BasicJet() = default;
  BasicJet(int nvars, int order)
      : layout_(JetLayout::get(nvars, order)), c_(layout_->size(), T{}) {}

  static BasicJet constant(int nvars, int order, T value) {
    BasicJet j(nvars, order);
    j.c_[0] = value;
    return j;
  }
  // center + scale * t_v
  static BasicJet variable(int nvars, int order, int v, T center, T scale = T{1}) {
    BasicJet j(nvars, order);
    j.c_[0] = center;
    if (order >= 1) {
      MultiIndex a{};
      a[v] = 1;
      j.c_[j.layout_->find(a)] = scale;
    }
    return j;
  }

  bool empty() const { return !layout_; }
  int nvars() const { return layout_->nvars(); }
  int order() const { return layout_->order(); }
  int size() const { return layout_->size(); }
  const JetLayout& layout() const { return *layout_; }

  T value() const { return c_[0]; }
  T& operator[](int k) { return c_[k]; }
  const T& operator[](int k) const { return c_[k]; }
  const std::vector<T>& coefficients() const { return c_; }

  T coeff(const MultiIndex& a) const {
    int k = layout_->find(a);
    return k < 0 ? T{} : c_[k];
  }
  void set(const MultiIndex& a, T value) {
    int k = layout_->find(a);
    if (k < 0) throw std::out_of_range("jet coefficient above truncation order");
    c_[k] = value;
  }

  BasicJet truncated(int order) const {
    if (order >= this->order()) return *this;
    BasicJet r(nvars(), order);
    for (int k = 0; k < r.size(); ++k) r.c_[k] = c_[k];  // degree-graded ordering
    return r;
  }

  BasicJet derivative(int v) const {
    if (order() == 0) throw std::domain_error("derivative of an order-0 jet");
    BasicJet r(nvars(), order() - 1);
    for (int k = 0; k < r.size(); ++k) {
      MultiIndex a = r.layout_->index(k);
      int n = a[v] + 1;
      a[v] = static_cast<std::uint8_t>(n);
      r.c_[k] = static_cast<double>(n) * c_[layout_->find(a)];
    }
    return r;
  }

  // Re-embeds this jet's variables at positions offset.. of a jet with more variables.
  BasicJet embedded(int nvars_target, int offset) const {
    BasicJet r(nvars_target, order());
    for (int k = 0; k < size(); ++k) {
      MultiIndex a{};
      const MultiIndex& s = layout_->index(k);
      for (int v = 0; v < nvars(); ++v) a[offset + v] = s[v];
      r.c_[r.layout_->find(a)] = c_[k];
    }
    return r;
  }

  BasicJet& operator+=(const BasicJet& o) { return combine(o, 1.0); }
  BasicJet& operator-=(const BasicJet& o) { return combine(o, -1.0); }
  BasicJet& operator*=(T s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  BasicJet& operator+=(T s) {
    c_[0] += s;
    return *this;
  }

  friend BasicJet operator+(BasicJet a, const BasicJet& b) { return a += b; }
  friend BasicJet operator-(BasicJet a, const BasicJet& b) { return a -= b; }
  friend BasicJet operator-(BasicJet a) { return a *= T{-1}; }
  friend BasicJet operator*(BasicJet a, T s) { return a *= s; }
  friend BasicJet operator*(T s, BasicJet a) { return a *= s; }
  friend BasicJet operator+(BasicJet a, T s) { return a += s; }
  friend BasicJet operator-(BasicJet a, T s) { return a += -s; }

  friend BasicJet operator*(const BasicJet& a, const BasicJet& b) {
    check_vars(a, b);
    const int ord = std::min(a.order(), b.order());
    BasicJet r(a.nvars(), ord);
    const BasicJet& x = a.order() == ord ? a : a.truncated(ord);
    const BasicJet& y = b.order() == ord ? b : b.truncated(ord);
    for (const auto& p : r.layout_->products()) r.c_[p.c] += x.c_[p.a] * y.c_[p.b];
    return r;
  }

 private:
  static void check_vars(const BasicJet& a, const BasicJet& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("jet variable count mismatch");
  }

  BasicJet& combine(const BasicJet& o, double sign) {
    check_vars(*this, o);
    if (o.order() < order()) *this = truncated(o.order());
    for (int k = 0; k < size(); ++k) c_[k] += sign * o.c_[k];
    return *this;
  }

  std::shared_ptr<const JetLayout> layout_;
  std::vector<T> c_;
};

using Jet = BasicJet<cplx>;

// Power series of g around g(0) composed with the non-constant part of f.
template <typename T, typename Coef>
BasicJet<T> compose_series(const BasicJet<T>& f, Coef&& coef) {
  BasicJet<T> h = f;
  h[0] = T{};
  BasicJet<T> term = BasicJet<T>::constant(f.nvars(), f.order(), T{1});
  BasicJet<T> out = BasicJet<T>::constant(f.nvars(), f.order(), coef(0));
  for (int k = 1; k <= f.order(); ++k) {
    term = term * h;
    out += term * coef(k);
  }
  return out;
}

template <typename T>
BasicJet<T> reciprocal(const BasicJet<T>& f) {
  const T f0 = f.value();
  if (f0 == T{}) throw std::domain_error("reciprocal of a jet with zero constant term");
  // 1/(f0 + h) = sum (-1)^k h^k / f0^(k+1)
  return compose_series(f, [f0](int k) {
    T c = T{1} / f0;
    for (int i = 0; i < k; ++i) c *= -T{1} / f0;
    return c;
  });
}

template <typename T>
BasicJet<T> log(const BasicJet<T>& f) {
  const T f0 = f.value();
  if (f0 == T{}) throw std::domain_error("log of a jet with zero constant term");
  return compose_series(f, [f0](int k) {
    if (k == 0) return std::log(f0);
    T c = T{1} / (static_cast<double>(k) * f0);
    for (int i = 1; i < k; ++i) c *= -T{1} / f0;
    return c;
  });
}

template <typename T>
BasicJet<T> exp(const BasicJet<T>& f) {
  const T e0 = std::exp(f.value());
  return compose_series(f, [e0](int k) {
    double fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    return e0 / fact;
  });
}

template <typename T>
BasicJet<T> operator/(const BasicJet<T>& a, const BasicJet<T>& b) {
  return a * reciprocal(b);
}

// For jets in 2m variables (t_1..t_m, s_1..s_m) representing f(z, w) with w standing
// for conj(z): returns the jet of conj(f), i.e. swaps the two groups and conjugates.
inline Jet conj_swap(const Jet& f) {
  const int nv = f.nvars();
  if (nv % 2 != 0) throw std::invalid_argument("conj_swap needs an even number of variables");
  const int m = nv / 2;
  Jet r(nv, f.order());
  for (int k = 0; k < f.size(); ++k) {
    const MultiIndex& a = f.layout().index(k);
    MultiIndex b{};
    for (int v = 0; v < m; ++v) {
      b[v] = a[m + v];
      b[m + v] = a[v];
    }
    r.set(b, std::conj(f[k]));
  }
  return r;
}

inline MultiIndex unit_index(int v) {
  MultiIndex a{};
  a[v] = 1;
  return a;
}

}  // namespace hodgewp
