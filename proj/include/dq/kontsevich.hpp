#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "dq/deformation.hpp"
#include "dq/polydiff.hpp"

namespace dq {

/**
 * Labeled directed graph with n aerial vertices and m ground vertices.
 * Targets are encoded as ints: 0..n-1 aerial, n..n+m-1 ground.  star[k]
 * holds the ordered list of targets of the edges leaving aerial vertex k;
 * ground vertices never emit edges.  Admissible graphs carry 2n+m-2 edges
 * total, no loops, no repeated target within one star, and for m == 2
 * exactly two edges per aerial vertex.
 */
struct KGraph {
  int n = 0;
  int m = 0;
  std::vector<std::vector<int>> star;

  int edge_count() const;
  int sharp(int k) const { return static_cast<int>(star[k].size()); }
  bool is_ground(int target) const { return target >= n; }
  void validate() const;  // throws errc::invalid_input on any violation
};

bool operator==(const KGraph& a, const KGraph& b);
inline bool operator!=(const KGraph& a, const KGraph& b) { return !(a == b); }

// all admissible graphs in deterministic lexicographic order (per-vertex
// target tuples compared entrywise, aerial targets sorting before grounds);
// for m == 2 the census is (n(n+1))^n
std::vector<KGraph> enumerate_graphs(int n, int m);

// bidifferential operator of a two-ground graph applied to (f, g): one index
// per edge, summed over; each aerial vertex contributes its alpha entry
// differentiated by the indices of its incoming edges, f collects the
// derivatives of the edges into ground 0 and g those into ground 1
Poly graph_operator(const KGraph& g, const PoissonStructure& alpha, const Poly& f,
                    const Poly& h);

// same contraction with an arbitrary antisymmetric tensor per aerial vertex
// (tensors[k].degree() must equal sharp(k)) and m argument polynomials
Poly graph_operator_general(const KGraph& g, const std::vector<PolyVector>& tensors,
                            const std::vector<Poly>& args);

// hyperbolic angle at z1 between the vertical and the geodesic to z2, i.e.
// arg(z2 - z1) - arg(z2 - conj(z1)) reduced to [0, 2pi); both points must
// be in the closed upper half plane and distinct, z1 off the real axis
double angle(std::complex<double> z1, std::complex<double> z2);

struct WeightEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

// deterministic sub-seed scheme for sharded runs (splitmix64 chaining);
// fixed-order reduction of shards reproduces a sequential run bit for bit
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t graph_index,
                          std::uint64_t shard_index);

// Monte Carlo estimate of the graph weight: the integral over aerial
// positions in the upper half plane of the wedge of d(angle) pulled back
// along the edges, normalized by 1/(n! (2 pi)^{2n}).  Supported for m == 2
// and n <= 2 (larger n throws errc::resource_bound).  Deterministic per
// seed; `threads` only distributes fixed sample blocks and never changes
// the result.
WeightEstimate weight_estimate(const KGraph& g, long samples, std::uint64_t seed,
                               int threads = 1);

// closed-form weight for m == 2, n <= 2 graphs (the inputs of the order-2
// product); larger n throws errc::resource_bound
Scalar exact_weight_order2(const KGraph& g);

// the order-2 cochain of the graph expansion for a Poisson structure:
//   1/2 a^{i1j1} a^{i2j2} d_{i1i2}f d_{j1j2}g
// + 1/3 a^{i1j1} d_{i1}a^{i2j2} (d_{j1j2}f d_{i2}g + d_{i2}f d_{j1j2}g)
// - 1/6 d_{j2}a^{i1j1} d_{j1}a^{i2j2} d_{i1}f d_{i2}g
PolyDiffOp c2_operator(const PoissonStructure& alpha);
Poly c2_formula(const PoissonStructure& alpha, const Poly& f, const Poly& g);

// star product truncated at order 2 with C_1 the Poisson operator and C_2
// the cochain above; requires alpha to satisfy Jacobi
StarProduct kontsevich_star_order2(const PoissonStructure& alpha);

}  // namespace dq
