#include "billiards/ring.hpp"

#include <algorithm>
#include <set>

namespace billiards {

namespace {

long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error("ring arithmetic overflow (structure constants exceed 64 bits)");
  return r;
}

// Exact binomial coefficient, overflow-checked.
long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (long long i = 1; i <= k; ++i) {
    r = checked_mul(r, n - k + i);
    r /= i;
  }
  return r;
}

}  // namespace

std::string coeffs_name(Coeffs c) {
  switch (c) {
    case Coeffs::Z: return "Z";
    case Coeffs::Q: return "Q";
    case Coeffs::Z2: return "Z2";
  }
  return "?";
}

Coeffs coeffs_from_name(const std::string& name) {
  if (name == "Z") return Coeffs::Z;
  if (name == "Q") return Coeffs::Q;
  if (name == "Z2") return Coeffs::Z2;
  throw BadInputError("unknown coefficient domain: " + name);
}

int GradedRing::find(const std::string& name) const {
  for (int i = 0; i < basis_size(); ++i)
    if (basis[static_cast<std::size_t>(i)].name == name) return i;
  return -1;
}

int GradedRing::top_degree() const {
  int d = 0;
  for (const auto& b : basis) d = std::max(d, b.degree);
  return d;
}

int GradedRing::rank_in_degree(int d) const {
  int c = 0;
  for (const auto& b : basis)
    if (b.degree == d && b.order == 0) ++c;
  return c;
}

int GradedRing::torsion_in_degree(int d) const {
  int c = 0;
  for (const auto& b : basis)
    if (b.degree == d && b.order == 2) ++c;
  return c;
}

int GradedRing::z2_dim(int d) const {
  if (coeffs == Coeffs::Z2) {
    int c = 0;
    for (const auto& b : basis)
      if (b.degree == d) ++c;
    return c;
  }
  return rank_in_degree(d) + torsion_in_degree(d) + torsion_in_degree(d + 1);
}

int GradedRing::q_dim(int d) const {
  if (coeffs == Coeffs::Q) {
    int c = 0;
    for (const auto& b : basis)
      if (b.degree == d) ++c;
    return c;
  }
  return rank_in_degree(d);
}

long long GradedRing::reduce(int basis_index, long long coeff) const {
  const auto& b = basis[static_cast<std::size_t>(basis_index)];
  if (coeffs == Coeffs::Z2) {
    coeff %= 2;
    if (coeff < 0) coeff += 2;
    return coeff;
  }
  if (b.order > 0) {
    coeff %= b.order;
    if (coeff < 0) coeff += b.order;
  }
  return coeff;
}

RingElement RingElement::basis(const GradedRing& ring, int index, long long coeff) {
  RingElement e(&ring);
  e.set(index, ring.reduce(index, coeff));
  return e;
}

RingElement RingElement::basis(const GradedRing& ring, const std::string& name,
                               long long coeff) {
  const int idx = ring.find(name);
  if (idx < 0) throw BadInputError("no basis element named " + name);
  return basis(ring, idx, coeff);
}

long long RingElement::coeff(int basis_index) const {
  auto it = coeffs_.find(basis_index);
  return it == coeffs_.end() ? 0 : it->second;
}

void RingElement::set(int index, long long c) {
  if (c == 0)
    coeffs_.erase(index);
  else
    coeffs_[index] = c;
}

RingElement RingElement::operator+(const RingElement& other) const {
  if (!ring_ || ring_ != other.ring_) throw BadInputError("ring mismatch in +");
  RingElement out(ring_);
  for (const auto& [k, v] : coeffs_) out.set(k, ring_->reduce(k, v));
  for (const auto& [k, v] : other.coeffs_)
    out.set(k, ring_->reduce(k, out.coeff(k) + v));
  return out;
}

RingElement RingElement::operator-(const RingElement& other) const {
  return *this + other.scaled(-1);
}

RingElement RingElement::scaled(long long s) const {
  RingElement out(ring_);
  for (const auto& [k, v] : coeffs_)
    out.set(k, ring_->reduce(k, checked_mul(v, s)));
  return out;
}

RingElement RingElement::operator*(const RingElement& other) const {
  if (!ring_ || ring_ != other.ring_) throw BadInputError("ring mismatch in *");
  RingElement out(ring_);
  for (const auto& [i, a] : coeffs_) {
    for (const auto& [j, b] : other.coeffs_) {
      const auto& t = ring_->table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (t.k < 0) continue;
      const long long add = checked_mul(checked_mul(a, b), t.c);
      out.set(t.k, ring_->reduce(t.k, out.coeff(t.k) + add));
    }
  }
  return out;
}

bool RingElement::operator==(const RingElement& other) const {
  return ring_ == other.ring_ && coeffs_ == other.coeffs_;
}

std::string RingElement::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (const auto& [k, v] : coeffs_) {
    if (!s.empty()) s += " + ";
    if (v != 1) s += std::to_string(v) + "*";
    s += ring_->basis[static_cast<std::size_t>(k)].name;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Closed-string ring

GradedRing closed_string_ring(int m, int n, Coeffs coeffs) {
  if (m <= 1)
    throw BadInputError("closed_string_ring: m must be >= 2 (the m=1 space is "
                        "a disjoint union of contractible components)");
  if (n < 1) throw BadInputError("closed_string_ring: n must be >= 1");

  GradedRing ring;
  ring.coeffs = coeffs;
  ring.space = "closed-string";
  ring.m = m;
  ring.n = n;
  for (int i = 0; i < n; ++i)
    ring.basis.push_back({"s" + std::to_string(i), i * (m - 1), 0});
  for (int i = 1; i < n; ++i) ring.generators.push_back(i);

  ring.table.assign(static_cast<std::size_t>(n), std::vector<GradedRing::Term>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      GradedRing::Term t;
      if (i + j <= n - 1) {
        long long c;
        if (m % 2 == 1) {
          c = binomial(i + j, i);
        } else if (i % 2 == 1 && j % 2 == 1) {
          c = 0;  // both odd
        } else {
          c = binomial((i + j) / 2, i / 2);
        }
        if (coeffs == Coeffs::Z2) c %= 2;
        if (c != 0) {
          t.k = i + j;
          t.c = c;
        }
      }
      ring.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t;
    }
  }
  return ring;
}

ReflectionAction reflection_action(const GradedRing& ring) {
  if (ring.space != "closed-string")
    throw BadInputError("reflection_action: needs a closed-string ring");
  ReflectionAction act;
  act.sign.resize(static_cast<std::size_t>(ring.basis_size()), 1);
  for (int i = 0; i < ring.basis_size(); ++i) {
    int exponent;
    if (ring.m % 2 == 1)
      exponent = i;
    else
      exponent = i / 2 + ring.n * i;
    act.sign[static_cast<std::size_t>(i)] = (exponent % 2 == 0) ? 1 : -1;
  }
  return act;
}

RingElement ReflectionAction::apply(const RingElement& x) const {
  if (!x.ring()) throw BadInputError("reflection_action: element without ring");
  RingElement out(x.ring());
  for (const auto& [k, v] : x.coeffs()) {
    out = out + RingElement::basis(*x.ring(), k, checked_mul(v, sign[static_cast<std::size_t>(k)]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quotient ring (n even)

namespace {

// Quotient basis bookkeeping: a monomial is delta_i times a torsion tail.
struct QuotientMonomial {
  int i = 0;        // delta index
  bool a = false;   // even m only
  bool b = false;   // even m only
  int e = 0;        // e exponent
};

std::string quotient_name(const QuotientMonomial& q) {
  std::string s;
  const auto append = [&s](const std::string& f) {
    if (!s.empty()) s += "*";
    s += f;
  };
  if (q.i > 0) append("d" + std::to_string(q.i));
  if (q.a) append("a");
  if (q.b) append("b");
  if (q.e == 1) append("e");
  if (q.e > 1) append("e^" + std::to_string(q.e));
  if (s.empty()) s = "1";
  return s;
}

}  // namespace

GradedRing quotient_ring(int m, int n) {
  if (m < 2) throw BadInputError("quotient_ring: m must be >= 2");
  if (n < 2 || n % 2 != 0) throw BadInputError("quotient_ring: n must be even and >= 2");

  GradedRing ring;
  ring.coeffs = Coeffs::Z;
  ring.space = "quotient";
  ring.m = m;
  ring.n = n;

  std::vector<QuotientMonomial> monos;

  if (m % 2 == 1) {
    // Generators delta_i (degree 2i(m-1), free) with delta_{n/2} = 0, and e
    // (degree 2, order 2) with e^{(m+1)/2} = 0.
    const int imax = n / 2 - 1;
    const int emax = (m - 1) / 2;
    for (int i = 0; i <= imax; ++i)
      for (int e = 0; e <= emax; ++e)
        monos.push_back({i, false, false, e});
    for (const auto& q : monos) {
      ring.basis.push_back({quotient_name(q), 2 * q.i * (m - 1) + 2 * q.e,
                            q.e > 0 ? 2LL : 0LL});
    }
    const auto find_mono = [&](int i, int e) -> int {
      if (i > imax || e > emax) return -1;
      for (std::size_t t = 0; t < monos.size(); ++t)
        if (monos[t].i == i && monos[t].e == e) return static_cast<int>(t);
      return -1;
    };
    const int nb = static_cast<int>(monos.size());
    ring.table.assign(static_cast<std::size_t>(nb), std::vector<GradedRing::Term>(static_cast<std::size_t>(nb)));
    for (int x = 0; x < nb; ++x) {
      for (int y = 0; y < nb; ++y) {
        const auto& p = monos[static_cast<std::size_t>(x)];
        const auto& q = monos[static_cast<std::size_t>(y)];
        GradedRing::Term t;
        const int k = find_mono(p.i + q.i, p.e + q.e);
        if (k >= 0) {
          long long c = binomial(2LL * (p.i + q.i), 2LL * p.i);
          if (monos[static_cast<std::size_t>(k)].e > 0) c %= 2;  // torsion target
          if (c != 0) {
            t.k = k;
            t.c = c;
          }
        }
        ring.table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = t;
      }
    }
    for (std::size_t t = 0; t < monos.size(); ++t) {
      const auto& q = monos[t];
      const bool is_gen = (q.i >= 1 && !q.a && !q.b && q.e == 0) ||
                          (q.i == 0 && q.e == 1);
      if (is_gen) ring.generators.push_back(static_cast<int>(t));
    }
    return ring;
  }

  // m even: generators delta_i (degree 4i(m-1)), e (degree 2, e^{m/2} = 0,
  // which removes e entirely at m = 2), a (degree m-1, a^2 = ab = ae = 0),
  // b (degree 2m-1, order 2, b^2 = 0), and delta_k b = 0 when n = 4k+2.
  const int imax = (n + 2) / 4 - 1;
  const int bmax = (n - 4) >= 0 ? (n - 4) / 4 : -1;  // largest i with delta_i b != 0
  const int emax = m / 2 - 1;
  for (int i = 0; i <= imax; ++i) {
    monos.push_back({i, false, false, 0});
    monos.push_back({i, true, false, 0});
    for (int e = 1; e <= emax; ++e) monos.push_back({i, false, false, e});
    if (i <= bmax)
      for (int e = 0; e <= emax; ++e) monos.push_back({i, false, true, e});
  }
  for (const auto& q : monos) {
    int deg = 4 * q.i * (m - 1) + 2 * q.e;
    if (q.a) deg += m - 1;
    if (q.b) deg += 2 * m - 1;
    const bool torsion = q.b || q.e > 0;
    ring.basis.push_back({quotient_name(q), deg, torsion ? 2LL : 0LL});
  }
  const auto find_mono = [&](const QuotientMonomial& w) -> int {
    if (w.i > imax) return -1;
    if (w.b && w.i > bmax) return -1;
    if (w.e > emax) return -1;
    for (std::size_t t = 0; t < monos.size(); ++t) {
      const auto& c = monos[t];
      if (c.i == w.i && c.a == w.a && c.b == w.b && c.e == w.e)
        return static_cast<int>(t);
    }
    return -1;
  };
  const int nb = static_cast<int>(monos.size());
  ring.table.assign(static_cast<std::size_t>(nb), std::vector<GradedRing::Term>(static_cast<std::size_t>(nb)));
  for (int x = 0; x < nb; ++x) {
    for (int y = 0; y < nb; ++y) {
      const auto& p = monos[static_cast<std::size_t>(x)];
      const auto& q = monos[static_cast<std::size_t>(y)];
      GradedRing::Term t;
      // Tail relations: a^2 = ab = ae = 0 and b^2 = 0.
      const bool dead = (p.a && (q.a || q.b || q.e > 0)) ||
                        (q.a && (p.a || p.b || p.e > 0)) || (p.b && q.b);
      if (!dead) {
        QuotientMonomial w{p.i + q.i, p.a || q.a, p.b || q.b, p.e + q.e};
        const int k = find_mono(w);
        if (k >= 0) {
          long long c = binomial(2LL * (p.i + q.i), 2LL * p.i);
          if (ring.basis[static_cast<std::size_t>(k)].order > 0) c %= 2;
          if (c != 0) {
            t.k = k;
            t.c = c;
          }
        }
      }
      ring.table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = t;
    }
  }
  for (std::size_t t = 0; t < monos.size(); ++t) {
    const auto& q = monos[t];
    const bool is_gen = (q.i >= 1 && !q.a && !q.b && q.e == 0) ||
                        (q.i == 0 && q.a && q.e == 0) ||
                        (q.i == 0 && q.b && q.e == 0) ||
                        (q.i == 0 && !q.a && !q.b && q.e == 1);
    if (is_gen) ring.generators.push_back(static_cast<int>(t));
  }
  return ring;
}

std::vector<long long> poincare_polynomial_quotient(int m, int n) {
  if (m < 2) throw BadInputError("poincare_polynomial_quotient: m must be >= 2");
  if (n < 2 || n % 2 != 0)
    throw BadInputError("poincare_polynomial_quotient: n must be even and >= 2");
  // (1 + t + ... + t^{m-1}) * (1 + t^{2(m-1)} + ... + t^{(n-2)(m-1)})
  std::vector<long long> first(static_cast<std::size_t>(m), 1);
  std::vector<long long> out(static_cast<std::size_t>(m + (n - 2) * (m - 1)), 0);
  for (int i = 0; i < n / 2; ++i) {
    const int shift = 2 * i * (m - 1);
    for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(shift + j)] += first[static_cast<std::size_t>(j)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cyclic ring

GradedRing cyclic_ring(int m, int n, Coeffs coeffs) {
  if (m < 2) throw BadInputError("cyclic_ring: m must be >= 2");
  if (n < 2) throw BadInputError("cyclic_ring: n must be >= 2");

  GradedRing ring;
  ring.space = "cyclic";
  ring.m = m;
  ring.n = n;
  ring.coeffs = coeffs;

  if (m % 2 == 1) {
    // Generators u (degree m, u^2 = 0) and sigma_1..sigma_{n-2}. Stated over
    // Q; other coefficient choices are allowed but flagged.
    if (coeffs != Coeffs::Q) ring.field_unverified = true;
    const int smax = n - 2;
    for (int i = 0; i <= smax; ++i)
      ring.basis.push_back({"s" + std::to_string(i), i * (m - 1), 0});
    for (int i = 0; i <= smax; ++i)
      ring.basis.push_back({i == 0 ? std::string("u") : "s" + std::to_string(i) + "*u",
                            i * (m - 1) + m, 0});
    const int nb = 2 * (smax + 1);
    const auto uflag = [&](int idx) { return idx > smax; };
    const auto sidx = [&](int idx) { return idx > smax ? idx - smax - 1 : idx; };
    ring.table.assign(static_cast<std::size_t>(nb), std::vector<GradedRing::Term>(static_cast<std::size_t>(nb)));
    for (int x = 0; x < nb; ++x) {
      for (int y = 0; y < nb; ++y) {
        GradedRing::Term t;
        const bool u = uflag(x) || uflag(y);
        if (!(uflag(x) && uflag(y))) {  // u^2 = 0
          const int si = sidx(x), sj = sidx(y);
          if (si + sj <= smax) {
            long long c = binomial(si + sj, si);
            if (coeffs == Coeffs::Z2) c %= 2;
            if (c != 0) {
              t.k = si + sj + (u ? smax + 1 : 0);
              t.c = c;
            }
          }
        }
        ring.table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = t;
      }
    }
    for (int i = 1; i <= smax; ++i) ring.generators.push_back(i);
    ring.generators.push_back(smax + 1);  // u
    return ring;
  }

  // m even: stated for odd n over a field of characteristic != 2.
  if (n % 2 == 0)
    throw UnsupportedError("cyclic_ring: even m with even n is not available");
  if (coeffs == Coeffs::Z2)
    throw UnsupportedError("cyclic_ring: even m requires characteristic != 2");
  if (coeffs == Coeffs::Z)
    throw BadInputError("cyclic_ring: even m requires a field (use Q)");

  const int smax = (n - 3) / 2;  // sigma_{2i}, i = 1..smax
  for (int i = 0; i <= smax; ++i)
    ring.basis.push_back({i == 0 ? std::string("s0") : "s" + std::to_string(2 * i),
                          2 * i * (m - 1), 0});
  for (int i = 0; i <= smax; ++i)
    ring.basis.push_back({i == 0 ? std::string("w") : "s" + std::to_string(2 * i) + "*w",
                          2 * i * (m - 1) + 2 * m - 1, 0});
  const int nb = 2 * (smax + 1);
  const auto wflag = [&](int idx) { return idx > smax; };
  const auto sidx = [&](int idx) { return idx > smax ? idx - smax - 1 : idx; };
  ring.table.assign(static_cast<std::size_t>(nb), std::vector<GradedRing::Term>(static_cast<std::size_t>(nb)));
  for (int x = 0; x < nb; ++x) {
    for (int y = 0; y < nb; ++y) {
      GradedRing::Term t;
      const bool w = wflag(x) || wflag(y);
      if (!(wflag(x) && wflag(y))) {  // w^2 = 0
        const int si = sidx(x), sj = sidx(y);
        if (si + sj <= smax) {
          const long long c = binomial(si + sj, si);
          if (c != 0) {
            t.k = si + sj + (w ? smax + 1 : 0);
            t.c = c;
          }
        }
      }
      ring.table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = t;
    }
  }
  for (int i = 1; i <= smax; ++i) ring.generators.push_back(i);
  ring.generators.push_back(smax + 1);  // w
  return ring;
}

// ---------------------------------------------------------------------------
// Cup length

namespace {

struct ElementKey {
  std::vector<std::pair<int, long long>> terms;
  bool operator<(const ElementKey& other) const { return terms < other.terms; }
};

ElementKey key_of(const RingElement& e) {
  ElementKey k;
  for (const auto& [i, c] : e.coeffs()) k.terms.emplace_back(i, c);
  return k;
}

}  // namespace

int cup_length(const GradedRing& ring) {
  return static_cast<int>(cup_length_witness(ring).size());
}

std::vector<std::string> cup_length_witness(const GradedRing& ring) {
  // Breadth-first products of generators, deduplicated by value; the degree
  // grading bounds the depth.
  struct Node {
    RingElement value;
    std::vector<std::string> factors;
  };
  std::vector<Node> level;
  for (int g : ring.generators) {
    RingElement e = RingElement::basis(ring, g);
    if (!e.is_zero()) level.push_back({e, {ring.basis[static_cast<std::size_t>(g)].name}});
  }
  std::vector<std::string> best;
  while (!level.empty()) {
    best = level.front().factors;
    std::vector<Node> next;
    // Dedup by value within a level only: the same value reached with more
    // factors must stay live, it may extend to a longer nonzero product.
    std::set<ElementKey> seen;
    for (const auto& node : level) {
      for (int g : ring.generators) {
        RingElement prod = node.value * RingElement::basis(ring, g);
        if (prod.is_zero()) continue;
        auto k = key_of(prod);
        if (seen.insert(std::move(k)).second) {
          auto factors = node.factors;
          factors.push_back(ring.basis[static_cast<std::size_t>(g)].name);
          next.push_back({std::move(prod), std::move(factors)});
        }
      }
    }
    level = std::move(next);
  }
  return best;
}

}  // namespace billiards
