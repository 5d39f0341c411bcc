#include "dq/io.hpp"

#include <json.hpp>

#include "dq/error.hpp"
#include "dq/parse.hpp"

namespace dq {

using nlohmann::json;

namespace {

json envelope(const std::string& kind) {
  return json{{"schema", "dq/1"}, {"kind", kind}};
}

// parse + envelope check; all structural exceptions become invalid_input
json open_doc(const std::string& text, const std::string& kind) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw error(errc::invalid_input, std::string("json: ") + e.what());
  }
  require(doc.is_object(), "document is not a json object");
  require(doc.value("schema", "") == "dq/1", "missing or unknown schema");
  require(doc.value("kind", "") == kind, "expected a \"" + kind + "\" document");
  return doc;
}

int get_int(const json& j, const char* field) {
  require(j.contains(field) && j[field].is_number_integer(),
          std::string("missing integer field \"") + field + "\"");
  return j[field].get<int>();
}

json get_array(const json& j, const char* field) {
  require(j.contains(field) && j[field].is_array(),
          std::string("missing array field \"") + field + "\"");
  return j[field];
}

std::string get_string(const json& j, const char* field) {
  require(j.contains(field) && j[field].is_string(),
          std::string("missing string field \"") + field + "\"");
  return j[field].get<std::string>();
}

json operator_record(const PolyDiffOp& op) {
  const auto names = default_names(op.dim());
  json terms = json::array();
  for (const auto& [key, coeff] : op.terms())
    terms.push_back(json{{"coeff", coeff.str(names)}, {"derivs", key}});
  return json{{"arity", op.arity()}, {"dim", op.dim()}, {"terms", terms}};
}

Scalar scalar_from_text(const std::string& s) {
  Poly p = parse_poly(s, xvars(1));
  require(p == Poly::constant(1, p.constant_term()), "expected a constant");
  return p.constant_term();
}

PolyDiffOp operator_from_record(const json& rec) {
  const int arity = get_int(rec, "arity");
  const int dim = get_int(rec, "dim");
  require(arity >= 1 && dim >= 1, "operator needs arity >= 1 and dim >= 1");
  PolyDiffOp op(arity, dim);
  const VarTable vt = xvars(dim);
  for (const json& t : get_array(rec, "terms")) {
    require(t.is_object(), "operator term is not an object");
    json derivs = get_array(t, "derivs");
    require(static_cast<int>(derivs.size()) == arity,
            "term needs one multi-index per argument slot");
    PolyDiffOp::Key key;
    for (const json& d : derivs) {
      require(d.is_array() && static_cast<int>(d.size()) == dim,
              "multi-index length must equal dim");
      Expo e;
      for (const json& v : d) {
        require(v.is_number_integer() && v.get<int>() >= 0,
                "derivative orders must be nonnegative integers");
        e.push_back(v.get<int>());
      }
      key.push_back(std::move(e));
    }
    op.add_term(key, parse_poly(get_string(t, "coeff"), vt));
  }
  return op;
}

}  // namespace

std::string operator_json(const PolyDiffOp& op) {
  json doc = envelope("operator");
  doc.update(operator_record(op));
  return doc.dump(2);
}

PolyDiffOp read_operator(const std::string& text) {
  return operator_from_record(open_doc(text, "operator"));
}

namespace {

json series_record(const LambdaSeries& s) {
  const auto names = default_names(s.dim());
  json coeffs = json::array();
  for (int k = -s.neg_size(); k <= s.trunc(); ++k)
    if (!s.coeff(k).is_zero())
      coeffs.push_back(json{{"power", k}, {"poly", s.coeff(k).str(names)}});
  return json{{"dim", s.dim()},
              {"trunc", s.trunc()},
              {"sym", (s.sym() == Sym::lambda) ? "lambda" : "hbar"},
              {"coeffs", coeffs}};
}

LambdaSeries series_from_record(const json& rec) {
  const int dim = get_int(rec, "dim");
  const int trunc = get_int(rec, "trunc");
  require(dim >= 1 && trunc >= 0, "series needs dim >= 1 and trunc >= 0");
  const std::string sym = get_string(rec, "sym");
  require(sym == "lambda" || sym == "hbar", "sym must be lambda or hbar");
  LambdaSeries s(dim, trunc, sym == "lambda" ? Sym::lambda : Sym::hbar);
  const VarTable vt = xvars(dim);
  for (const json& c : get_array(rec, "coeffs")) {
    require(c.is_object(), "series coefficient is not an object");
    const int k = get_int(c, "power");
    require(k <= trunc, "coefficient power beyond the truncation");
    s.set_coeff(k, parse_poly(get_string(c, "poly"), vt));
  }
  return s;
}

}  // namespace

std::string series_json(const LambdaSeries& s) {
  json doc = envelope("series");
  doc.update(series_record(s));
  return doc.dump(2);
}

LambdaSeries read_series(const std::string& text) {
  return series_from_record(open_doc(text, "series"));
}

std::string star_product_json(const StarProduct& sp) {
  json cochains = json::array();
  for (int r = 1; r <= sp.order(); ++r)
    cochains.push_back(operator_record(sp.cochain(r)));
  json doc = envelope("star_product");
  doc["dim"] = sp.dim();
  doc["order"] = sp.order();
  doc["cochains"] = cochains;
  return doc.dump(2);
}

StarProduct read_star_product(const std::string& text) {
  json doc = open_doc(text, "star_product");
  const int dim = get_int(doc, "dim");
  const int order = get_int(doc, "order");
  require(dim >= 1 && order >= 0, "star product needs dim >= 1 and order >= 0");
  json cochains = get_array(doc, "cochains");
  require(static_cast<int>(cochains.size()) == order,
          "expected one cochain record per order 1..order");
  StarProduct sp(dim, order);
  for (int r = 1; r <= order; ++r) {
    PolyDiffOp c = operator_from_record(cochains[r - 1]);
    require(c.arity() == 2 && c.dim() == dim,
            "cochains must be arity-2 operators on the document's dim");
    sp.set_cochain(r, c);
  }
  return sp;
}

namespace {

json edges_record(const KGraph& g) {
  auto label = [&](int t) {
    return g.is_ground(t) ? "g" + std::to_string(t - g.n + 1)
                          : std::to_string(t + 1);
  };
  json edges = json::array();
  for (int k = 0; k < g.n; ++k)
    for (int t : g.star[k])
      edges.push_back(json::array({std::to_string(k + 1), label(t)}));
  return edges;
}

// fills g.star from an edge list and validates admissibility
void star_from_edges(KGraph& g, const json& edges) {
  require(g.n >= 1 && g.m >= 0, "graph needs n >= 1 and m >= 0");
  g.star.assign(g.n, {});
  auto vertex = [&](const std::string& s, bool source) -> int {
    if (!s.empty() && s[0] == 'g') {
      require(!source, "ground vertices cannot emit edges");
      for (int j = 1; j <= g.m; ++j)
        if (s == "g" + std::to_string(j)) return g.n + j - 1;
    } else {
      for (int k = 1; k <= g.n; ++k)
        if (s == std::to_string(k)) return k - 1;
    }
    throw error(errc::invalid_input, "unknown vertex label \"" + s + "\"");
  };
  require(edges.is_array(), "edges must be an array");
  for (const json& e : edges) {
    require(e.is_array() && e.size() == 2 && e[0].is_string() && e[1].is_string(),
            "each edge is a [source, target] pair of labels");
    int src = vertex(e[0].get<std::string>(), true);
    g.star[src].push_back(vertex(e[1].get<std::string>(), false));
  }
  g.validate();
}

}  // namespace

std::string graph_json(const KGraph& g) {
  json doc = envelope("graph");
  doc["n"] = g.n;
  doc["m"] = g.m;
  doc["edges"] = edges_record(g);
  return doc.dump(2);
}

KGraph read_graph(const std::string& text) {
  json doc = open_doc(text, "graph");
  KGraph g;
  g.n = get_int(doc, "n");
  g.m = get_int(doc, "m");
  star_from_edges(g, get_array(doc, "edges"));
  return g;
}

std::string weight_json(const WeightEstimate& w) {
  json doc = envelope("weight_estimate");
  doc["mean"] = w.mean;
  doc["std_error"] = w.std_error;
  doc["samples"] = w.samples;
  doc["seed"] = w.seed;
  return doc.dump(2);
}

WeightEstimate read_weight(const std::string& text) {
  json doc = open_doc(text, "weight_estimate");
  WeightEstimate w;
  require(doc.contains("mean") && doc["mean"].is_number(), "missing mean");
  require(doc.contains("std_error") && doc["std_error"].is_number(),
          "missing std_error");
  require(doc.contains("samples") && doc["samples"].is_number_integer(),
          "missing samples");
  require(doc.contains("seed") && doc["seed"].is_number_unsigned(),
          "missing seed");
  w.mean = doc["mean"].get<double>();
  w.std_error = doc["std_error"].get<double>();
  w.samples = doc["samples"].get<long>();
  w.seed = doc["seed"].get<std::uint64_t>();
  return w;
}

std::string poly_matrix_json(const std::vector<std::vector<Poly>>& entries) {
  const int dim = static_cast<int>(entries.size());
  require(dim >= 1, "empty matrix");
  const auto names = default_names(dim);
  json rows = json::array();
  for (const auto& row : entries) {
    require(static_cast<int>(row.size()) == dim, "matrix must be square");
    json r = json::array();
    for (const Poly& p : row) r.push_back(p.str(names));
    rows.push_back(r);
  }
  json doc = envelope("poly_matrix");
  doc["dim"] = dim;
  doc["entries"] = rows;
  return doc.dump(2);
}

std::vector<std::vector<Poly>> read_poly_matrix(const std::string& text) {
  json doc = open_doc(text, "poly_matrix");
  const int dim = get_int(doc, "dim");
  require(dim >= 1, "matrix needs dim >= 1");
  const VarTable vt = xvars(dim);
  json rows = get_array(doc, "entries");
  require(static_cast<int>(rows.size()) == dim, "expected dim rows");
  std::vector<std::vector<Poly>> out;
  for (const json& row : rows) {
    require(row.is_array() && static_cast<int>(row.size()) == dim,
            "expected dim entries per row");
    std::vector<Poly> r;
    for (const json& p : row) {
      require(p.is_string(), "matrix entry is not poly text");
      r.push_back(parse_poly(p.get<std::string>(), vt));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string christoffel_json(
    const std::vector<std::vector<std::vector<Poly>>>& entries) {
  const int dim = static_cast<int>(entries.size());
  require(dim >= 1, "empty symbol array");
  const auto names = default_names(dim);
  json cube = json::array();
  for (const auto& plane : entries) {
    require(static_cast<int>(plane.size()) == dim, "symbol array must be cubic");
    json pl = json::array();
    for (const auto& row : plane) {
      require(static_cast<int>(row.size()) == dim, "symbol array must be cubic");
      json r = json::array();
      for (const Poly& p : row) r.push_back(p.str(names));
      pl.push_back(r);
    }
    cube.push_back(pl);
  }
  json doc = envelope("christoffel");
  doc["dim"] = dim;
  doc["entries"] = cube;
  return doc.dump(2);
}

std::vector<std::vector<std::vector<Poly>>> read_christoffel(
    const std::string& text) {
  json doc = open_doc(text, "christoffel");
  const int dim = get_int(doc, "dim");
  require(dim >= 1, "symbols need dim >= 1");
  const VarTable vt = xvars(dim);
  json cube = get_array(doc, "entries");
  require(static_cast<int>(cube.size()) == dim, "expected dim planes");
  std::vector<std::vector<std::vector<Poly>>> out;
  for (const json& plane : cube) {
    require(plane.is_array() && static_cast<int>(plane.size()) == dim,
            "expected dim rows per plane");
    std::vector<std::vector<Poly>> pl;
    for (const json& row : plane) {
      require(row.is_array() && static_cast<int>(row.size()) == dim,
              "expected dim entries per row");
      std::vector<Poly> r;
      for (const json& p : row) {
        require(p.is_string(), "symbol entry is not poly text");
        r.push_back(parse_poly(p.get<std::string>(), vt));
      }
      pl.push_back(std::move(r));
    }
    out.push_back(std::move(pl));
  }
  return out;
}

std::string time_series_json(const TimeSeries& ts) {
  json coeffs = json::array();
  for (int n = 0; n <= ts.order(); ++n) coeffs.push_back(series_record(ts.coeff(n)));
  json doc = envelope("time_series");
  doc["dim"] = ts.dim();
  doc["order"] = ts.order();
  doc["coeffs"] = coeffs;
  return doc.dump(2);
}

TimeSeries read_time_series(const std::string& text) {
  json doc = open_doc(text, "time_series");
  const int dim = get_int(doc, "dim");
  const int order = get_int(doc, "order");
  require(dim >= 1 && order >= 0, "time series needs dim >= 1 and order >= 0");
  json coeffs = get_array(doc, "coeffs");
  require(static_cast<int>(coeffs.size()) == order + 1,
          "expected one series per t-power 0..order");
  TimeSeries ts(dim, order);
  for (int n = 0; n <= order; ++n) {
    LambdaSeries s = series_from_record(coeffs[n]);
    require(s.dim() == dim, "coefficient dim must match the time series");
    ts.set_coeff(n, std::move(s));
  }
  return ts;
}

std::string spectrum_json(const SpectralData& sd) {
  json eigs = json::array();
  for (const Scalar& e : sd.eigenvalues) eigs.push_back(e.str());
  json projs = json::array();
  const std::vector<std::string> uname{"u"};
  for (const RadialFunction& f : sd.projectors)
    projs.push_back(json{{"rate", f.s.str()}, {"poly", f.g.str(uname)}});
  json doc = envelope("spectrum");
  doc["dof"] = sd.dof;
  doc["eigenvalues"] = eigs;
  doc["projectors"] = projs;
  return doc.dump(2);
}

SpectralData read_spectrum(const std::string& text) {
  json doc = open_doc(text, "spectrum");
  SpectralData sd;
  sd.dof = get_int(doc, "dof");
  require(sd.dof >= 1, "spectrum needs dof >= 1");
  for (const json& e : get_array(doc, "eigenvalues")) {
    require(e.is_string(), "eigenvalues are scalar text");
    sd.eigenvalues.push_back(scalar_from_text(e.get<std::string>()));
  }
  const VarTable uvar{{"u"}, {}};
  for (const json& p : get_array(doc, "projectors")) {
    require(p.is_object(), "projector is not an object");
    sd.projectors.emplace_back(scalar_from_text(get_string(p, "rate")),
                               parse_poly(get_string(p, "poly"), uvar));
  }
  return sd;
}

std::string operator_table_json(
    const std::vector<std::pair<std::string, PolyDiffOp>>& entries) {
  json rows = json::array();
  for (const auto& [label, op] : entries)
    rows.push_back(json{{"label", label}, {"op", operator_record(op)}});
  json doc = envelope("operator_table");
  doc["entries"] = rows;
  return doc.dump(2);
}

std::vector<std::pair<std::string, PolyDiffOp>> read_operator_table(
    const std::string& text) {
  json doc = open_doc(text, "operator_table");
  std::vector<std::pair<std::string, PolyDiffOp>> out;
  for (const json& row : get_array(doc, "entries")) {
    require(row.is_object() && row.contains("op"), "table rows carry label and op");
    out.emplace_back(get_string(row, "label"), operator_from_record(row["op"]));
  }
  return out;
}

std::string census_json(int n, int m, long count) {
  json doc = envelope("census");
  doc["n"] = n;
  doc["m"] = m;
  doc["count"] = count;
  return doc.dump(2);
}

long read_census(const std::string& text) {
  json doc = open_doc(text, "census");
  require(doc.contains("count") && doc["count"].is_number_integer(),
          "missing integer field \"count\"");
  get_int(doc, "n");
  get_int(doc, "m");
  return doc["count"].get<long>();
}

std::string graph_list_json(const std::vector<KGraph>& graphs, int n, int m) {
  json list = json::array();
  for (const KGraph& g : graphs) {
    require(g.n == n && g.m == m, "graphs in a list share n and m");
    list.push_back(edges_record(g));
  }
  json doc = envelope("graph_list");
  doc["n"] = n;
  doc["m"] = m;
  doc["graphs"] = list;
  return doc.dump(2);
}

std::vector<KGraph> read_graph_list(const std::string& text) {
  json doc = open_doc(text, "graph_list");
  const int n = get_int(doc, "n");
  const int m = get_int(doc, "m");
  std::vector<KGraph> out;
  for (const json& edges : get_array(doc, "graphs")) {
    KGraph g;
    g.n = n;
    g.m = m;
    star_from_edges(g, edges);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace dq
