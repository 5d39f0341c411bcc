#pragma once
#include <string>
#include <utility>
#include <vector>

#include "dq/deformation.hpp"
#include "dq/kontsevich.hpp"
#include "dq/polydiff.hpp"
#include "dq/series.hpp"
#include "dq/star_exp.hpp"

namespace dq {

/*
 * Interchange documents.  Every emitter produces a JSON object with
 * {"schema": "dq/1", "kind": <name>} and every reader rejects anything
 * else, so emit/read round-trips exactly.  Polynomial entries travel as
 * text in the x1..xd names and reparse to the identical Poly because
 * printing is canonical.  Readers throw errc::invalid_input on malformed
 * documents with a message naming the offending field.
 */

// kind "operator": arity/dim headers plus one record per term,
// {coeff: poly-text, derivs: [[int,..],..]} with one multi-index per slot
std::string operator_json(const PolyDiffOp& op);
PolyDiffOp read_operator(const std::string& text);

// kind "series": {dim, trunc, sym: "lambda"|"hbar",
//                 coeffs: [{power, poly}, ..]}, ascending powers
std::string series_json(const LambdaSeries& s);
LambdaSeries read_series(const std::string& text);

// kind "star_product": {dim, order, cochains: [operator-record, ..]} with
// cochains[r-1] = C_r; C_0 is always the pointwise product
std::string star_product_json(const StarProduct& sp);
StarProduct read_star_product(const std::string& text);

// kind "graph": {n, m, edges: [["1","2"],["1","g1"], ..]} with aerial
// vertices "1".."n" and grounds "g1".."gm"; edge order per source vertex
// is the slot order of the operator
std::string graph_json(const KGraph& g);
KGraph read_graph(const std::string& text);

// kind "weight_estimate": {mean, std_error, samples, seed}
std::string weight_json(const WeightEstimate& w);
WeightEstimate read_weight(const std::string& text);

// kind "poly_matrix": {dim, entries: dim x dim poly-text}
std::string poly_matrix_json(const std::vector<std::vector<Poly>>& entries);
std::vector<std::vector<Poly>> read_poly_matrix(const std::string& text);

// kind "christoffel": {dim, entries: dim^3 poly-text, indexed [l][i][j]}
std::string christoffel_json(
    const std::vector<std::vector<std::vector<Poly>>>& entries);
std::vector<std::vector<std::vector<Poly>>> read_christoffel(
    const std::string& text);

// kind "time_series": {dim, order, coeffs: [series-record n=0..order]}
std::string time_series_json(const TimeSeries& ts);
TimeSeries read_time_series(const std::string& text);

// kind "spectrum": {dof, eigenvalues: [scalar-text, ..] in units of h,
//                   projectors: [{rate, poly in u}, ..]} (projectors may be
// shorter than the eigenvalue list; they exist on one degree of freedom)
std::string spectrum_json(const SpectralData& sd);
SpectralData read_spectrum(const std::string& text);

// kind "operator_table": {entries: [{label, op: operator-record}, ..]},
// the generic shape of defect and check reports
std::string operator_table_json(
    const std::vector<std::pair<std::string, PolyDiffOp>>& entries);
std::vector<std::pair<std::string, PolyDiffOp>> read_operator_table(
    const std::string& text);

// kind "census": {n, m, count}
std::string census_json(int n, int m, long count);
long read_census(const std::string& text);

// kind "graph_list": {n, m, graphs: [edge-array, ..]}, shared n and m
std::string graph_list_json(const std::vector<KGraph>& graphs, int n, int m);
std::vector<KGraph> read_graph_list(const std::string& text);

}  // namespace dq
