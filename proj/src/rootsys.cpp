#include "classprod/rootsys.hpp"

#include <algorithm>
#include <cmath>

namespace classprod {

const char* lie_type_name(LieType t) {
  switch (t) {
    case LieType::A: return "A";
    case LieType::B: return "B";
    case LieType::C: return "C";
    case LieType::D: return "D";
    case LieType::BC: return "BC";
  }
  return "?";
}

Root Root::operator+(const Root& o) const {
  Root r;
  r.c.resize(c.size());
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] + o.c[i];
  return r;
}

Root Root::operator-() const {
  Root r;
  r.c.resize(c.size());
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = -c[i];
  return r;
}

Root Root::scaled(int s) const {
  Root r;
  r.c.resize(c.size());
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = s * c[i];
  return r;
}

bool Root::is_zero() const {
  for (int v : c)
    if (v) return false;
  return true;
}

long Root::dot(const Root& o) const {
  long s = 0;
  for (size_t i = 0; i < c.size(); ++i) s += static_cast<long>(c[i]) * o.c[i];
  return s;
}

std::string Root::str() const {
  std::string s;
  for (size_t i = 0; i < c.size(); ++i) {
    int v = c[i];
    if (!v) continue;
    if (!s.empty()) s += v > 0 ? "+" : "-";
    else if (v < 0) s += "-";
    int a = v > 0 ? v : -v;
    if (a != 1) s += std::to_string(a);
    s += "e" + std::to_string(i + 1);
  }
  return s.empty() ? "0" : s;
}

Root RootSystem::e(int i) const {
  Root r;
  r.c.assign(ncoord, 0);
  r.c[i - 1] = 1;
  return r;
}

bool RootSystem::is_positive(const Root& r) const {
  return std::find(positive.begin(), positive.end(), r) != positive.end();
}

namespace {
// height-then-lex comparator used for the canonical positive-root order
struct HtLex {
  const std::map<Root, int>* h;
  bool operator()(const Root& a, const Root& b) const {
    int ha = h->at(a), hb = h->at(b);
    if (ha != hb) return ha < hb;
    return a < b;
  }
};
}  // namespace

RootSystem build_root_system(LieType type, int rank) {
  require(rank >= 2, Errc::unsupported_rank, "rank must be >= 2");
  if (type == LieType::D)
    require(rank >= 4, Errc::unsupported_rank,
            "type D needs rank >= 4 (D2, D3 degenerate)");

  RootSystem s;
  s.type = type;
  s.rank = rank;
  s.ncoord = (type == LieType::A) ? rank + 1 : rank;
  const int m = s.ncoord;

  auto E = [&](int i) { return s.e(i); };

  std::vector<Root> pos;
  if (type == LieType::A) {
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) pos.push_back(E(j) + (-E(i)));
  } else {
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) {
        pos.push_back(E(j) + (-E(i)));
        pos.push_back(E(i) + E(j));
      }
    if (type == LieType::B || type == LieType::BC)
      for (int i = 1; i <= m; ++i) { pos.push_back(E(i)); s.theta.push_back(E(i)); }
    if (type == LieType::C || type == LieType::BC)
      for (int i = 1; i <= m; ++i) { pos.push_back(E(i).scaled(2)); s.theta.push_back(E(i).scaled(2)); }
  }

  // Fundamental roots: e_{i+1} - e_i plus r0 per type. For A we take the full
  // chain and use its least member as the distinguished root so that Pi_1,
  // Sigma_1 and Delta stay well defined (the product decomposition itself
  // rejects type A).
  switch (type) {
    case LieType::A: s.r0 = E(2) + (-E(1)); break;
    case LieType::B:
    case LieType::BC: s.r0 = E(1); break;
    case LieType::C: s.r0 = E(1).scaled(2); break;
    case LieType::D: s.r0 = E(1) + E(2); break;
  }
  if (type == LieType::A) {
    for (int i = 1; i <= m - 1; ++i) s.fundamental.push_back(E(i + 1) + (-E(i)));
  } else {
    s.fundamental.push_back(s.r0);
    for (int i = 1; i <= m - 1; ++i) s.fundamental.push_back(E(i + 1) + (-E(i)));
  }
  for (const Root& f : s.fundamental)
    if (!(f == s.r0)) s.pi1.push_back(f);

  // Heights: unique expansion over Pi (Pi is a basis of span(Sigma)).
  // Solve with integer Gaussian elimination over the rationals; all systems
  // here are unimodular enough that exact integer arithmetic suffices.
  const int nf = static_cast<int>(s.fundamental.size());
  for (const Root& r : pos) {
    // Solve sum x_j * fund_j = r with floating Gaussian elimination, round,
    // and verify exactly; coefficients are tiny integers.
    std::vector<double> a(static_cast<size_t>(m) * nf), rhs(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < nf; ++j)
        a[static_cast<size_t>(i) * nf + j] = static_cast<double>(s.fundamental[j].c[i]);
      rhs[i] = static_cast<double>(r.c[i]);
    }
    // plain Gaussian elimination with partial pivoting
    std::vector<double> x(nf, 0.0);
    {
      int row = 0;
      std::vector<int> pcol(m, -1);
      for (int col = 0; col < nf && row < m; ++col) {
        int piv = -1;
        double best = 1e-9;
        for (int rr = row; rr < m; ++rr)
          if (std::abs(a[static_cast<size_t>(rr) * nf + col]) > best) {
            best = std::abs(a[static_cast<size_t>(rr) * nf + col]);
            piv = rr;
          }
        if (piv < 0) continue;
        for (int cc = 0; cc < nf; ++cc)
          std::swap(a[static_cast<size_t>(row) * nf + cc], a[static_cast<size_t>(piv) * nf + cc]);
        std::swap(rhs[row], rhs[piv]);
        double lead = a[static_cast<size_t>(row) * nf + col];
        for (int cc = 0; cc < nf; ++cc) a[static_cast<size_t>(row) * nf + cc] /= lead;
        rhs[row] /= lead;
        for (int rr = 0; rr < m; ++rr) {
          if (rr == row) continue;
          double f = a[static_cast<size_t>(rr) * nf + col];
          if (f == 0.0) continue;
          for (int cc = 0; cc < nf; ++cc)
            a[static_cast<size_t>(rr) * nf + cc] -= f * a[static_cast<size_t>(row) * nf + cc];
          rhs[rr] -= f * rhs[row];
        }
        pcol[row] = col;
        ++row;
      }
      for (int rr = 0; rr < row; ++rr)
        if (pcol[rr] >= 0) x[pcol[rr]] = rhs[rr];
    }
    long htsum = 0;
    bool nonneg = true;
    Root check;
    check.c.assign(m, 0);
    for (int j = 0; j < nf; ++j) {
      long xj = std::lround(x[j]);
      if (xj < 0) nonneg = false;
      htsum += xj;
      for (int i = 0; i < m; ++i) check.c[i] += static_cast<int>(xj) * s.fundamental[j].c[i];
    }
    require(check == r && htsum > 0 && nonneg, Errc::internal,
            "height expansion failed for " + r.str());
    s.height[r] = static_cast<int>(htsum);
  }

  std::sort(pos.begin(), pos.end(), HtLex{&s.height});
  s.positive = pos;

  // Sigma_1 = Sigma cap ZPi_1: exactly the roots with zero "r0 direction".
  // For all supported types these are the +-(e_j - e_i) with the right index
  // windows: coordinates summing to zero (and, in type A, not involving e_1).
  for (const Root& r : s.positive) {
    long coordsum = 0;
    for (int v : r.c) coordsum += v;
    bool diff_shape = coordsum == 0;
    bool avoid_first = true;
    if (type == LieType::A) avoid_first = r.c[0] == 0;
    if (diff_shape && avoid_first) s.sigma1_plus.push_back(r);
  }

  Root r0d = s.r0.scaled(2);
  for (const Root& r : s.positive) {
    if (r == s.r0 || r == r0d) continue;
    if (std::find(s.sigma1_plus.begin(), s.sigma1_plus.end(), r) != s.sigma1_plus.end())
      continue;
    s.delta.push_back(r);
  }

  if (type == LieType::BC)
    for (int i = 1; i <= m; ++i) s.doubled.push_back(E(i));

  return s;
}

bool RootSystem::is_root(const Root& r) const {
  for (const Root& p : positive)
    if (p == r || -p == r) return true;
  return false;
}

bool RootSystem::in_sigma1(const Root& r) const {
  for (const Root& p : sigma1_plus)
    if (p == r || -p == r) return true;
  return false;
}

int RootSystem::ht(const Root& r) const {
  auto it = height.find(r);
  require(it != height.end(), Errc::root_not_in_system, "no height for " + r.str());
  return it->second;
}

int RootSystem::ht_abs(const Root& r) const {
  auto it = height.find(r);
  if (it != height.end()) return it->second;
  return ht(-r);
}

bool RootSystem::is_short(const Root& r) const {
  long len = r.dot(r);
  long maxlen = 0;
  for (const Root& p : positive) maxlen = std::max(maxlen, p.dot(p));
  return len < maxlen;
}

bool RootSystem::is_long(const Root& r) const { return !is_short(r); }

int RootSystem::max_height() const {
  int h = 0;
  for (const auto& [r, v] : height) h = std::max(h, v);
  return h;
}

RootSum root_sum(const RootSystem& sys, const Root& u, const Root& v) {
  require(sys.is_root(u), Errc::root_not_in_system, u.str());
  require(sys.is_root(v), Errc::root_not_in_system, v.str());
  RootSum out;
  Root w = u + v;
  if (!w.is_zero() && sys.is_root(w)) {
    out.sum = w;
    out.doubled_sum = sys.is_root(w.scaled(2));
  }
  return out;
}

std::map<int, std::vector<Root>> delta_and_filtration(const RootSystem& sys) {
  std::map<int, std::vector<Root>> levels;
  for (const Root& r : sys.delta) levels[sys.ht(r)].push_back(r);
  return levels;
}

Root reflect(const Root& w, const Root& x) {
  long ww = w.dot(w);
  long xw = x.dot(w);
  // s_w(x) = x - 2(x,w)/(w,w) w ; always integral for crystallographic data
  long num = 2 * xw;
  Root r = x;
  for (size_t i = 0; i < r.c.size(); ++i)
    r.c[i] -= static_cast<int>(num * w.c[i] / ww);
  return r;
}

}  // namespace classprod
