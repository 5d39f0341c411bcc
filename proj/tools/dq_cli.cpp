#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dq/deformation.hpp"
#include "dq/error.hpp"
#include "dq/fedosov.hpp"
#include "dq/io.hpp"
#include "dq/kontsevich.hpp"
#include "dq/moyal.hpp"
#include "dq/parse.hpp"
#include "dq/polydiff.hpp"
#include "dq/star_exp.hpp"

using namespace dq;

namespace {

// exit codes: 0 ok, 2 parse/malformed input, 3 a required-zero quantity is
// nonzero or a library self-check failed, 4 order/degree/sample bounds
int code_for(errc c) {
  switch (c) {
    case errc::invalid_input: return 2;
    case errc::check_failed: return 3;
    case errc::resource_bound: return 4;
  }
  return 2;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path);
  out << text;
}

Scalar scalar_arg(const std::string& text) {
  Poly p = parse_poly(text, xvars(1));
  require(p == Poly::constant(1, p.constant_term()),
          "expected a constant, got \"" + text + "\"");
  return p.constant_term();
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

StarProduct make_product(const std::string& name, const FlatSymplectic& fs,
                         int order) {
  if (name == "standard") return ordered_star(Ordering::standard, fs, order);
  if (name == "normal") return ordered_star(Ordering::normal, fs, order);
  return moyal_star(fs, order);
}

PoissonStructure make_alpha(const std::string& spec, int dof) {
  if (spec == "so3") return PoissonStructure::so3();
  if (spec == "standard") return PoissonStructure::standard(dof);
  auto mat = read_poly_matrix(slurp(spec));
  return PoissonStructure(static_cast<int>(mat.size()), mat);
}

std::string graph_line(const KGraph& g) {
  auto label = [&](int t) {
    return g.is_ground(t) ? "g" + std::to_string(t - g.n + 1)
                          : std::to_string(t + 1);
  };
  std::string line;
  for (int k = 0; k < g.n; ++k)
    for (int t : g.star[k]) {
      if (!line.empty()) line += " ";
      line += std::to_string(k + 1) + ">" + label(t);
    }
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact deformation-quantization toolbox"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  std::function<int()> action;
  auto sub = [&](const std::string& name, const std::string& desc,
                 CLI::App* parent = nullptr) {
    CLI::App* s = (parent ? parent : &app)->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  // mul: star-multiply two expressions
  std::string product = "moyal", expr_u, expr_v;
  int dof = 1, order = 4;
  CLI::App* mul = sub("mul", "star product of two polynomials");
  mul->add_option("--product", product)->check(CLI::IsMember({"moyal", "standard", "normal"}));
  mul->add_option("--dof", dof)->check(CLI::PositiveNumber);
  mul->add_option("--order", order)->check(CLI::NonNegativeNumber);
  mul->add_option("u", expr_u)->required();
  mul->add_option("v", expr_v)->required();
  mul->callback([&] {
    action = [&] {
      FlatSymplectic fs(dof);
      VarTable vt = fs.vars();
      LambdaSeries s = make_product(product, fs, order)
                           .multiply(parse_poly(expr_u, vt), parse_poly(expr_v, vt));
      std::cout << (format == "json" ? series_json(s) : s.str(vt.names)) << "\n";
      return 0;
    };
  });

  // assoc: associativity defect scan
  CLI::App* assoc = sub("assoc", "associativity defect table of a product");
  assoc->add_option("--product", product)->check(CLI::IsMember({"moyal", "standard", "normal"}));
  assoc->add_option("--dof", dof)->check(CLI::PositiveNumber);
  assoc->add_option("--order", order)->check(CLI::NonNegativeNumber);
  assoc->callback([&] {
    action = [&] {
      FlatSymplectic fs(dof);
      StarProduct sp = make_product(product, fs, order);
      std::vector<std::pair<std::string, PolyDiffOp>> table;
      bool ok = true;
      for (int r = 1; r <= order; ++r) {
        PolyDiffOp d = sp.associativity_defect(r);
        ok = ok && d.is_zero();
        table.emplace_back("order " + std::to_string(r), d);
      }
      if (format == "json") {
        std::cout << operator_table_json(table) << "\n";
      } else {
        for (const auto& [label, d] : table)
          std::cout << label << ": " << (d.is_zero() ? "zero" : "NONZERO") << "\n";
      }
      return ok ? 0 : 3;
    };
  });

  // bracket: scaled star commutator of two expressions
  CLI::App* bracket = sub("bracket", "commutator bracket series (1/2L scaling)");
  bracket->add_option("--product", product)->check(CLI::IsMember({"moyal", "standard", "normal"}));
  bracket->add_option("--dof", dof)->check(CLI::PositiveNumber);
  bracket->add_option("--order", order)->check(CLI::PositiveNumber);
  bracket->add_option("u", expr_u)->required();
  bracket->add_option("v", expr_v)->required();
  bracket->callback([&] {
    action = [&] {
      FlatSymplectic fs(dof);
      VarTable vt = fs.vars();
      LambdaSeries s =
          commutator_bracket(make_product(product, fs, order))
              .bracket(parse_poly(expr_u, vt), parse_poly(expr_v, vt));
      std::cout << (format == "json" ? series_json(s) : s.str(vt.names)) << "\n";
      return 0;
    };
  });

  // starexp: exponential of a quadratic Hamiltonian
  std::string sa = "0", sb = "0", sg = "0";
  int torder = 4, lorder = -1;
  bool closed_form = false, check_closed = false;
  CLI::App* sexp = sub("starexp", "star exponential of a quadratic Hamiltonian");
  sexp->add_option("--alpha", sa, "p^2 coefficient");
  sexp->add_option("--beta", sb, "pq coefficient");
  sexp->add_option("--gamma", sg, "q^2 coefficient");
  sexp->add_option("--dof", dof)->check(CLI::PositiveNumber);
  sexp->add_option("--torder", torder)->check(CLI::NonNegativeNumber);
  sexp->add_option("--lorder", lorder, "series truncation, defaults to torder");
  sexp->add_flag("--closed-form", closed_form, "print the resummed flow instead");
  sexp->add_flag("--check", check_closed, "compare the two routes, exit 3 on mismatch");
  sexp->callback([&] {
    action = [&] {
      QuadHamiltonian hq(scalar_arg(sa), scalar_arg(sb), scalar_arg(sg), dof);
      FlatSymplectic fs(dof);
      int lo = (lorder < 0) ? torder : lorder;
      TimeSeries ts = closed_form
                          ? quadratic_closed_form(hq, torder)
                          : star_exponential(fs, hq.polynomial(), torder, lo);
      int rc = 0;
      if (check_closed) {
        int miss = exp_matches_closed_form(hq, torder);
        if (miss >= 0) {
          std::cerr << "first mismatch at t^" << miss << "\n";
          rc = 3;
        } else if (format != "json") {
          std::cout << "routes match through t^" << torder << "\n";
        }
      }
      std::cout << (format == "json" ? time_series_json(ts) : ts.str(fs.vars().names))
                << "\n";
      return rc;
    };
  });

  // spectrum: harmonic eigenvalues with certified projectors
  int nmax = 5;
  bool show_proj = false;
  CLI::App* spec = sub("spectrum", "harmonic oscillator spectrum");
  spec->add_option("--dof", dof)->check(CLI::PositiveNumber);
  spec->add_option("--nmax", nmax)->check(CLI::NonNegativeNumber);
  spec->add_flag("--projectors", show_proj, "also print the eigenprojectors");
  spec->callback([&] {
    action = [&] {
      SpectralData sd = harmonic_spectrum(dof, nmax);
      if (format == "json") {
        std::cout << spectrum_json(sd) << "\n";
        return 0;
      }
      std::string line;
      for (const Scalar& e : sd.eigenvalues) {
        if (!line.empty()) line += ", ";
        line += e.str() + "*h";
      }
      std::cout << line << "\n";
      if (show_proj)
        for (size_t n = 0; n < sd.projectors.size(); ++n)
          std::cout << "n=" << n << ": " << sd.projectors[n].str() << "\n";
      return 0;
    };
  });

  // kgraphs: enumerate / weight / star2
  CLI::App* kg = sub("kgraphs", "graph expansion tools");
  kg->require_subcommand(1);

  int gn = 1, gm = 2;
  bool count_only = false;
  CLI::App* kenum = sub("enumerate", "list admissible graphs", kg);
  kenum->add_option("--n", gn, "aerial vertices")->required()->check(CLI::NonNegativeNumber);
  kenum->add_option("--m", gm, "ground vertices")->check(CLI::NonNegativeNumber);
  kenum->add_flag("--count-only", count_only);
  kenum->callback([&] {
    action = [&] {
      std::vector<KGraph> graphs = enumerate_graphs(gn, gm);
      if (count_only) {
        if (format == "json")
          std::cout << census_json(gn, gm, static_cast<long>(graphs.size())) << "\n";
        else
          std::cout << graphs.size() << "\n";
      } else if (format == "json") {
        std::cout << graph_list_json(graphs, gn, gm) << "\n";
      } else {
        for (const KGraph& g : graphs) std::cout << graph_line(g) << "\n";
      }
      return 0;
    };
  });

  std::string graph_file, emit_file;
  long samples = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  CLI::App* kw = sub("weight", "Monte Carlo weight of one graph", kg);
  kw->add_option("--graph", graph_file, "graph document")->required()->check(CLI::ExistingFile);
  kw->add_option("--samples", samples)->check(CLI::PositiveNumber);
  kw->add_option("--seed", seed, "master seed (reproducibility is the contract)")->required();
  kw->add_option("--threads", threads)->check(CLI::PositiveNumber);
  kw->callback([&] {
    action = [&] {
      if (kw->count("--samples") == 0) {
        const char* env = std::getenv("DQ_MC_SAMPLES");
        samples = env ? std::atol(env) : 1000000;
        require(samples > 0, "DQ_MC_SAMPLES must be a positive integer");
      }
      KGraph g = read_graph(slurp(graph_file));
      WeightEstimate w = weight_estimate(g, samples, seed, threads);
      if (format == "json")
        std::cout << weight_json(w) << "\n";
      else
        std::cout << "mean " << fmt(w.mean) << " std_error " << fmt(w.std_error)
                  << " samples " << w.samples << " seed " << w.seed << "\n";
      return 0;
    };
  });

  std::string alpha_spec = "so3";
  CLI::App* ks = sub("star2", "order-2 graph star product", kg);
  ks->add_option("--alpha", alpha_spec, "so3, standard, or a poly_matrix file");
  ks->add_option("--dof", dof, "pairs for --alpha standard")->check(CLI::PositiveNumber);
  ks->add_option("--emit", emit_file, "write the star_product document here");
  ks->callback([&] {
    action = [&] {
      PoissonStructure alpha = make_alpha(alpha_spec, dof);
      if (!alpha.is_poisson()) {
        std::cerr << "alpha does not satisfy Jacobi\n";
        return 3;
      }
      StarProduct sp = kontsevich_star_order2(alpha);
      std::string doc = star_product_json(sp);
      if (!emit_file.empty()) spill(emit_file, doc);
      if (format == "json") {
        std::cout << doc << "\n";
      } else {
        const auto names = default_names(sp.dim());
        for (int r = 1; r <= sp.order(); ++r)
          std::cout << "C_" << r << ": " << sp.cochain(r).str(names) << "\n";
      }
      return 0;
    };
  });

  // fedosov build: chart data in, star product out
  std::string omega_file, conn_file;
  int dmax = 8, sorder = -1;
  CLI::App* fed = sub("fedosov", "flat-connection star products from chart data");
  fed->require_subcommand(1);
  CLI::App* fb = sub("build", "run the recursion and extract cochains", fed);
  fb->add_option("--omega", omega_file, "poly_matrix document")->required()->check(CLI::ExistingFile);
  fb->add_option("--connection", conn_file, "christoffel document")->check(CLI::ExistingFile);
  fb->add_option("--dmax", dmax, "Weyl filtration cap")->check(CLI::PositiveNumber);
  fb->add_option("--order", sorder, "cochain order, defaults to dmax/2");
  fb->add_option("--emit", emit_file, "write the star_product document here");
  fb->callback([&] {
    action = [&] {
      auto om = read_poly_matrix(slurp(omega_file));
      std::vector<std::vector<std::vector<Poly>>> ga;
      if (!conn_file.empty()) ga = read_christoffel(slurp(conn_file));
      SymplecticData sd(static_cast<int>(om.size()), om, ga);
      FedosovConnection fc = solve_r(sd, dmax);
      int n = (sorder < 0) ? dmax / 2 : sorder;
      StarProduct sp = fedosov_cochains(fc, n);
      std::string doc = star_product_json(sp);
      if (!emit_file.empty()) spill(emit_file, doc);
      if (format == "json") {
        std::cout << doc << "\n";
      } else {
        std::cout << "dim " << sd.dim() << " dmax " << dmax << " order " << n
                  << (fc.r().is_zero() ? ", r = 0" : ", r starts at degree " +
                                                         std::to_string(fc.r().min_degree()))
                  << "\n";
        if (emit_file.empty()) {
          const auto names = default_names(sp.dim());
          for (int r = 1; r <= sp.order(); ++r)
            std::cout << "C_" << r << ": " << sp.cochain(r).str(names) << "\n";
        }
      }
      return 0;
    };
  });

  // check: jacobi / cocycle / closed
  CLI::App* chk = sub("check", "zero-certificate checks");
  chk->require_subcommand(1);

  CLI::App* cj = sub("jacobi", "Schouten square of a bivector", chk);
  cj->add_option("--alpha", alpha_spec, "so3, standard, or a poly_matrix file");
  cj->add_option("--dof", dof, "pairs for --alpha standard")->check(CLI::PositiveNumber);
  cj->callback([&] {
    action = [&] {
      PoissonStructure alpha = make_alpha(alpha_spec, dof);
      PolyDiffOp defect = hkr_inject(alpha.jacobi_defect());
      if (format == "json")
        std::cout << operator_table_json({{"jacobi defect", defect}}) << "\n";
      else
        std::cout << "jacobi defect: " << (defect.is_zero() ? "zero" : "NONZERO")
                  << "\n";
      return defect.is_zero() ? 0 : 3;
    };
  });

  CLI::App* cc = sub("cocycle", "the next obstruction is a 3-cocycle", chk);
  cc->add_option("--product", product)->check(CLI::IsMember({"moyal", "standard", "normal"}));
  cc->add_option("--dof", dof)->check(CLI::PositiveNumber);
  cc->add_option("--order", order, "truncation order t")->check(CLI::NonNegativeNumber);
  cc->callback([&] {
    action = [&] {
      FlatSymplectic fs(dof);
      StarProduct sp = make_product(product, fs, order);
      PolyDiffOp d = sp.interior_defect(order + 1);
      PolyDiffOp bd = hochschild_coboundary(d);
      if (format == "json")
        std::cout << operator_table_json(
                         {{"obstruction", d}, {"coboundary", bd}})
                  << "\n";
      else
        std::cout << "obstruction coboundary: "
                  << (bd.is_zero() ? "zero" : "NONZERO") << "\n";
      return bd.is_zero() ? 0 : 3;
    };
  });

  CLI::App* cl = sub("closed", "commutator cochains integrate to zero", chk);
  cl->add_option("--product", product)->check(CLI::IsMember({"moyal", "standard", "normal"}));
  cl->add_option("--dof", dof)->check(CLI::PositiveNumber);
  cl->add_option("--order", order)->check(CLI::PositiveNumber);
  cl->callback([&] {
    action = [&] {
      FlatSymplectic fs(dof);
      StarProduct sp = make_product(product, fs, order);
      std::vector<std::pair<std::string, PolyDiffOp>> table;
      bool ok = true;
      for (int r = 1; r <= order; ++r) {
        PolyDiffOp d = sp.closedness_defect(r);
        ok = ok && d.is_zero();
        table.emplace_back("order " + std::to_string(r), d);
      }
      if (format == "json") {
        std::cout << operator_table_json(table) << "\n";
      } else {
        for (const auto& [label, d] : table)
          std::cout << label << ": " << (d.is_zero() ? "zero" : "NONZERO") << "\n";
      }
      return ok ? 0 : 3;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    return action();
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return code_for(e.code);
  }
}
