#include "dq/kontsevich.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "dq/error.hpp"

namespace dq {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::pair<int, int>> edge_list(const KGraph& g) {
  std::vector<std::pair<int, int>> e;
  for (int k = 0; k < g.n; ++k)
    for (int t : g.star[k]) e.push_back({k, t});
  return e;
}

}  // namespace

int KGraph::edge_count() const {
  int c = 0;
  for (const auto& s : star) c += static_cast<int>(s.size());
  return c;
}

void KGraph::validate() const {
  require(n >= 0 && m >= 0, "vertex counts must be nonnegative");
  require(static_cast<int>(star.size()) == n, "one target list per aerial vertex");
  require(edge_count() == 2 * n + m - 2, "graph must carry 2n+m-2 edges");
  for (int k = 0; k < n; ++k) {
    for (int t : star[k]) {
      require(t >= 0 && t < n + m, "edge target out of range");
      require(t != k, "loops are not admissible");
    }
    auto s = star[k];
    std::sort(s.begin(), s.end());
    require(std::adjacent_find(s.begin(), s.end()) == s.end(),
            "parallel edges are not admissible");
    if (m == 2) require(sharp(k) == 2, "two-ground graphs emit two edges per vertex");
  }
}

bool operator==(const KGraph& a, const KGraph& b) {
  return a.n == b.n && a.m == b.m && a.star == b.star;
}

std::vector<KGraph> enumerate_graphs(int n, int m) {
  require(n >= 0 && m >= 0, "vertex counts must be nonnegative");
  require(2 * n + m - 2 >= 0, "no admissible graphs below one edge endpoint");
  const int total = 2 * n + m - 2;

  // candidate ordered target tuples for one vertex, lexicographic
  auto tuples_for = [&](int k, int size) {
    std::vector<int> targets;
    for (int t = 0; t < n + m; ++t)
      if (t != k) targets.push_back(t);
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<char> used(targets.size(), 0);
    std::function<void()> rec = [&]() {
      if (static_cast<int>(cur.size()) == size) {
        out.push_back(cur);
        return;
      }
      for (size_t i = 0; i < targets.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        cur.push_back(targets[i]);
        rec();
        cur.pop_back();
        used[i] = 0;
      }
    };
    rec();
    return out;
  };

  std::vector<KGraph> out;
  KGraph g;
  g.n = n;
  g.m = m;
  g.star.assign(n, {});
  std::function<void(int, int)> place = [&](int k, int left) {
    if (k == n) {
      if (left == 0) out.push_back(g);
      return;
    }
    const int lo = (m == 2) ? 2 : 0;
    const int hi = (m == 2) ? 2 : std::min(left, n + m - 1);
    for (int s = lo; s <= hi && s <= left; ++s) {
      for (auto& tup : tuples_for(k, s)) {
        g.star[k] = tup;
        place(k + 1, left - s);
      }
    }
    g.star[k].clear();
  };
  place(0, total);
  return out;
}

Poly graph_operator_general(const KGraph& g, const std::vector<PolyVector>& tensors,
                            const std::vector<Poly>& args) {
  g.validate();
  require(static_cast<int>(tensors.size()) == g.n, "one tensor per aerial vertex");
  require(static_cast<int>(args.size()) == g.m, "one argument per ground vertex");
  int d = -1;
  for (const auto& t : tensors) {
    if (d < 0) d = t.dim();
    require(t.dim() == d, "tensor dimensions must agree");
  }
  for (const auto& a : args) {
    if (d < 0) d = a.dim();
    require(a.dim() == d, "argument dimensions must agree");
  }
  require(d >= 1, "need at least one coordinate");
  for (int k = 0; k < g.n; ++k)
    require(tensors[k].degree() == g.sharp(k), "tensor rank must match the out-degree");

  const auto edges = edge_list(g);
  const int ne = static_cast<int>(edges.size());

  // first edge position of each vertex in the flattened list
  std::vector<int> base(g.n, 0);
  for (int k = 1; k < g.n; ++k) base[k] = base[k - 1] + g.sharp(k - 1);

  Poly acc(d);
  std::vector<int> idx(ne, 0);
  while (true) {
    Poly term = Poly::constant(d, Scalar(1));
    for (int k = 0; k < g.n && !term.is_zero(); ++k) {
      std::vector<int> comp_idx(idx.begin() + base[k], idx.begin() + base[k] + g.sharp(k));
      Poly factor = tensors[k].component(comp_idx);
      if (factor.is_zero()) {
        term = Poly(d);
        break;
      }
      Expo der(d, 0);
      for (int e = 0; e < ne; ++e)
        if (edges[e].second == k) ++der[idx[e]];
      factor = factor.derivative(der);
      term = term * factor;
    }
    for (int r = 0; r < g.m && !term.is_zero(); ++r) {
      Expo der(d, 0);
      for (int e = 0; e < ne; ++e)
        if (edges[e].second == g.n + r) ++der[idx[e]];
      term = term * args[r].derivative(der);
    }
    acc += term;

    int pos = ne - 1;
    while (pos >= 0 && idx[pos] == d - 1) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return acc;
}

Poly graph_operator(const KGraph& g, const PoissonStructure& alpha, const Poly& f,
                    const Poly& h) {
  g.validate();
  require(g.m == 2, "graph operator contracts against two ground arguments");
  const int d = alpha.dim();
  require(f.dim() == d && h.dim() == d, "dimension mismatch");

  const auto edges = edge_list(g);
  const int ne = static_cast<int>(edges.size());
  std::vector<int> base(g.n, 0);
  for (int k = 1; k < g.n; ++k) base[k] = base[k - 1] + g.sharp(k - 1);

  Poly acc(d);
  std::vector<int> idx(ne, 0);
  while (true) {
    Poly term = Poly::constant(d, Scalar(1));
    for (int k = 0; k < g.n && !term.is_zero(); ++k) {
      Poly factor = alpha.matrix(idx[base[k]], idx[base[k] + 1]);
      if (factor.is_zero()) {
        term = Poly(d);
        break;
      }
      Expo der(d, 0);
      for (int e = 0; e < ne; ++e)
        if (edges[e].second == k) ++der[idx[e]];
      factor = factor.derivative(der);
      term = term * factor;
    }
    if (!term.is_zero()) {
      Expo derf(d, 0), derh(d, 0);
      for (int e = 0; e < ne; ++e) {
        if (edges[e].second == g.n) ++derf[idx[e]];
        if (edges[e].second == g.n + 1) ++derh[idx[e]];
      }
      term = term * f.derivative(derf);
      term = term * h.derivative(derh);
    }
    acc += term;

    int pos = ne - 1;
    while (pos >= 0 && idx[pos] == d - 1) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return acc;
}

double angle(std::complex<double> z1, std::complex<double> z2) {
  require(z1.imag() >= 0.0 && z2.imag() >= 0.0,
          "points must lie in the closed upper half plane");
  require(std::abs(z1 - z2) > 0.0, "angle needs distinct points");
  const std::complex<double> w1 = z2 - z1;
  const std::complex<double> w2 = z2 - std::conj(z1);
  double phi = std::arg(w1) - std::arg(w2);
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0) phi += 2.0 * kPi;
  return phi;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t graph_index,
                          std::uint64_t shard_index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(master);
  h = mix(h ^ graph_index);
  h = mix(h ^ shard_index);
  return h;
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// determinant with partial pivoting; sizes here are 2 or 4
double det_small(double m[4][4], int size) {
  double sign = 1.0;
  for (int c = 0; c < size; ++c) {
    int piv = c;
    for (int r = c + 1; r < size; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < size; ++j) std::swap(m[piv][j], m[c][j]);
      sign = -sign;
    }
    for (int r = c + 1; r < size; ++r) {
      const double fac = m[r][c] / m[c][c];
      for (int j = c; j < size; ++j) m[r][j] -= fac * m[c][j];
    }
  }
  double det = sign;
  for (int c = 0; c < size; ++c) det *= m[c][c];
  return det;
}

// one importance-sampled draw of the wedge integrand over aerial positions
double mc_integrand(const KGraph& g, const std::vector<std::pair<int, int>>& edges,
                    std::mt19937_64& rng) {
  const int n = g.n;
  double xs[2], ys[2];
  double wgt = 1.0;
  for (int k = 0; k < n; ++k) {
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    xs[k] = std::tan(kPi * (u - 0.5));
    ys[k] = v / (1.0 - v);
    wgt *= kPi * (1.0 + xs[k] * xs[k]) * (1.0 + ys[k]) * (1.0 + ys[k]);
  }

  double rows[4][4] = {{0.0}};
  int row = 0;
  for (const auto& [src, tgt] : edges) {
    const std::complex<double> za(xs[src], ys[src]);
    const std::complex<double> zb =
        tgt < n ? std::complex<double>(xs[tgt], ys[tgt])
                : std::complex<double>(tgt == n ? 0.0 : 1.0, 0.0);
    const std::complex<double> v1 = zb - za;
    const std::complex<double> v2 = zb - std::conj(za);
    if (std::norm(v1) < 1e-280 || std::norm(v2) < 1e-280) return 0.0;
    const std::complex<double> iv1 = 1.0 / v1;
    const std::complex<double> iv2 = 1.0 / v2;
    rows[row][2 * src] += iv2.imag() - iv1.imag();
    rows[row][2 * src + 1] += -iv1.real() - iv2.real();
    if (tgt < n) {
      rows[row][2 * tgt] += iv1.imag() - iv2.imag();
      rows[row][2 * tgt + 1] += iv1.real() - iv2.real();
    }
    ++row;
  }
  return det_small(rows, 2 * n) * wgt;
}

struct BlockStat {
  double sum = 0.0;
  double sumsq = 0.0;
};

constexpr long kBlock = 4096;

BlockStat run_block(const KGraph& g, const std::vector<std::pair<int, int>>& edges,
                    long count, std::uint64_t block_seed) {
  std::mt19937_64 rng(block_seed);
  BlockStat st;
  for (long i = 0; i < count; ++i) {
    const double s = mc_integrand(g, edges, rng);
    st.sum += s;
    st.sumsq += s * s;
  }
  return st;
}

}  // namespace

WeightEstimate weight_estimate(const KGraph& g, long samples, std::uint64_t seed,
                               int threads) {
  g.validate();
  require(g.m == 2, "weights are defined for two-ground graphs");
  require(g.n <= 2, "weight estimation supported through two aerial vertices",
          errc::resource_bound);
  require(samples >= 1, "need at least one sample");
  require(threads >= 1, "need at least one worker");

  if (g.n == 0) return {1.0, 0.0, samples, seed};  // empty wedge over a point

  const auto edges = edge_list(g);
  const long nblocks = (samples + kBlock - 1) / kBlock;
  std::vector<BlockStat> stats(nblocks);
  auto work = [&](long first, long stride) {
    for (long j = first; j < nblocks; j += stride) {
      const long count = std::min(kBlock, samples - j * kBlock);
      stats[j] = run_block(g, edges, count, derive_seed(seed, 0, j));
    }
  };
  if (threads == 1 || nblocks == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto& t : pool) t.join();
  }

  double sum = 0.0, sumsq = 0.0;
  for (const auto& st : stats) {  // fixed block order
    sum += st.sum;
    sumsq += st.sumsq;
  }
  const double npts = static_cast<double>(samples);
  const double pref =
      1.0 / (std::tgamma(g.n + 1.0) * std::pow(2.0 * kPi, 2.0 * g.n));
  WeightEstimate est;
  est.mean = pref * sum / npts;
  est.samples = samples;
  est.seed = seed;
  if (samples > 1) {
    const double var = std::max(0.0, (sumsq - sum * sum / npts) / (npts - 1.0));
    est.std_error = pref * std::sqrt(var / npts);
  }
  return est;
}

Scalar exact_weight_order2(const KGraph& g) {
  g.validate();
  require(g.m == 2, "weights are defined for two-ground graphs");
  require(g.n <= 2, "closed-form weights stop at two aerial vertices",
          errc::resource_bound);
  if (g.n == 0) return Scalar(1);
  if (g.n == 1)
    return g.star[0][0] == 1 ? Scalar::ratio(1, 2) : -Scalar::ratio(1, 2);

  // n == 2: aerial vertices 0,1 and grounds encoded 2,3.  Reorder each pair
  // ascending; every swap flips both the wedge and the tensor sign, so the
  // weight carries the parity.
  Scalar sign(1);
  std::vector<int> a = g.star[0], b = g.star[1];
  if (a[0] > a[1]) {
    std::swap(a[0], a[1]);
    sign = -sign;
  }
  if (b[0] > b[1]) {
    std::swap(b[0], b[1]);
    sign = -sign;
  }
  const bool a_ground = a[0] >= 2;  // vertex 0 hits grounds only
  const bool b_ground = b[0] >= 2;
  if (a_ground && b_ground) return sign * Scalar::ratio(1, 8);
  if (!a_ground && b_ground)
    return sign * (a[1] == 2 ? -Scalar::ratio(1, 24) : Scalar::ratio(1, 24));
  if (a_ground && !b_ground)
    return sign * (b[1] == 2 ? -Scalar::ratio(1, 24) : Scalar::ratio(1, 24));
  // mutual cycle: opposite grounds carry weight, equal grounds cancel
  return a[1] != b[1] ? sign * (-Scalar::ratio(1, 48)) : Scalar(0);
}

PolyDiffOp c2_operator(const PoissonStructure& alpha) {
  const int d = alpha.dim();
  PolyDiffOp op(2, d);
  const Scalar half = Scalar::ratio(1, 2);
  const Scalar third = Scalar::ratio(1, 3);
  const Scalar sixth = Scalar::ratio(1, 6);
  for (int i1 = 0; i1 < d; ++i1)
    for (int j1 = 0; j1 < d; ++j1) {
      const Poly& a1 = alpha.matrix(i1, j1);
      if (a1.is_zero()) continue;
      for (int i2 = 0; i2 < d; ++i2)
        for (int j2 = 0; j2 < d; ++j2) {
          const Poly& a2 = alpha.matrix(i2, j2);
          if (a2.is_zero()) continue;

          Expo ei(d, 0), ej(d, 0);
          ++ei[i1], ++ei[i2];
          ++ej[j1], ++ej[j2];
          op.add_term({ei, ej}, half * (a1 * a2));

          const Poly da2 = a2.derivative(i1);
          if (!da2.is_zero()) {
            const Poly c = third * (a1 * da2);
            Expo ejj(d, 0), ee(d, 0);
            ++ejj[j1], ++ejj[j2];
            ++ee[i2];
            op.add_term({ejj, ee}, c);
            op.add_term({ee, ejj}, c);
          }

          const Poly t3 = a1.derivative(j2) * a2.derivative(j1);
          if (!t3.is_zero()) {
            Expo el(d, 0), er(d, 0);
            ++el[i1], ++er[i2];
            op.add_term({el, er}, -(sixth * t3));
          }
        }
    }
  return op;
}

Poly c2_formula(const PoissonStructure& alpha, const Poly& f, const Poly& g) {
  require(f.dim() == alpha.dim() && g.dim() == alpha.dim(), "dimension mismatch");
  return c2_operator(alpha).apply({f, g});
}

StarProduct kontsevich_star_order2(const PoissonStructure& alpha) {
  require(alpha.is_poisson(), "structure must satisfy the Jacobi identity");
  StarProduct s(alpha.dim(), 2);
  s.set_cochain(1, alpha.as_operator());
  s.set_cochain(2, c2_operator(alpha));
  return s;
}

}  // namespace dq
