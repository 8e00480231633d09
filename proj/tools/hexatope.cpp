#include "hexatope/brouwer.hpp"
#include "hexatope/dinterval.hpp"
#include "hexatope/grprops.hpp"
#include "hexatope/hexsolve.hpp"
#include "hexatope/scomplex.hpp"
#include "hexatope/service.hpp"
#include "hexatope/setfam.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hexatope;
using json = nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;  // 0 keeps each routine's default cap
  std::string format = "json";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void print_text(const json& j, const std::string& prefix = "") {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !(v.is_array() && !v.empty() && v.front().is_primitive()))
        print_text(v, prefix + k + ".");
      else
        std::cout << prefix << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) print_text(j[i], prefix + std::to_string(i) + ".");
  } else {
    std::cout << prefix << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

json cell_json(Cell c) { return {{"row", c.r}, {"col", c.c}}; }

json points_json(const std::vector<PiercePoint>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back({{"line", p.line}, {"x", to_string(p.x)}});
  return out;
}

json poly_json(const IntPoly& p) {
  json out = json::array();
  for (const auto& c : p) out.push_back(c);
  return out;
}

Position position_from_file(const std::string& path) {
  auto [b, col] = parse_board(read_file(path));
  Position p{b, col, Tile::White};
  const int w = p.count(Tile::White), k = p.count(Tile::Black);
  if (w == k + 1) p.to_move = Tile::Black;
  else if (w != k) throw std::invalid_argument("board is not reachable: White has " + std::to_string(w) + " tiles, Black " + std::to_string(k));
  return p;
}

SimplicialComplex complex_from_file(const std::string& path) {
  return SimplicialComplex::from_family(parse_family(read_file(path)).family);
}

json summary_json(const PropertyFamily& p) {
  const auto s = summarize(p.family);
  std::vector<std::size_t> counts(p.family.m() + 1, 0);
  for (Mask a : p.family.members()) ++counts[std::popcount(a)];
  json j{{"name", p.name},
         {"kind", to_string(p.shape.kind)},
         {"n", p.shape.n},
         {"m", s.m},
         {"size", s.size},
         {"euler", s.euler},
         {"trivial", s.trivial},
         {"counts", counts}};
  j["c"] = s.complexity ? json(*s.complexity) : json(nullptr);
  j["evasive"] = s.evasive ? json(*s.evasive) : json(nullptr);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact HEX, fixed point, evasiveness and d-interval computations"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--budget", g.budget, "node or state budget for exhaustive searches");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  std::function<json()> action;
  auto bind = [&](CLI::App* sub, std::function<json()> f) { sub->callback([&action, f] { action = f; }); };

  // hex
  auto* hex = app.add_subcommand("hex", "rhombus HEX boards");
  hex->require_subcommand(1);
  std::string board_file;
  auto* hsolve = hex->add_subcommand("solve", "winner with optimal play");
  hsolve->add_option("board", board_file)->required()->check(CLI::ExistingFile);
  bind(hsolve, [&] {
    const Position p = position_from_file(board_file);
    if (p.grey() == 0) {
      const auto w = winner_2d(p.board, p.coloring);
      return json{{"winner", to_string(w.winner)}, {"move", nullptr}, {"nodes", 0}};
    }
    const SolveResult r = solve(p, 25);
    return json{{"winner", to_string(r.winner)},
                {"toMove", to_string(p.to_move)},
                {"move", r.move ? cell_json(*r.move) : json(nullptr)},
                {"nodes", r.nodes}};
  });
  auto* hbest = hex->add_subcommand("best", "a best move for the side to move");
  hbest->add_option("board", board_file)->required()->check(CLI::ExistingFile);
  bind(hbest, [&] {
    const Position p = position_from_file(board_file);
    if (p.grey() == 0) throw std::invalid_argument("board is full");
    const SolveResult r = solve(p, 25);
    return json{{"winner", to_string(r.winner)}, {"move", cell_json(*r.move)}, {"moveWins", r.move_wins}, {"nodes", r.nodes}};
  });
  auto* hwin = hex->add_subcommand("winner", "winner of a full coloring with its path");
  hwin->add_option("board", board_file)->required()->check(CLI::ExistingFile);
  bind(hwin, [&] {
    auto [b, c] = parse_board(read_file(board_file));
    const WinResult w = winner_2d(b, c);
    json path = json::array();
    for (Cell x : w.path) path.push_back(cell_json(x));
    return json{{"winner", to_string(w.winner)}, {"path", path}, {"steps", w.steps}};
  });
  int prows = 3, pcols = 4;
  std::uint64_t playouts = 0;
  auto* hpair = hex->add_subcommand("pairing", "check Black's pairing strategy");
  hpair->add_option("--rows", prows)->capture_default_str();
  hpair->add_option("--cols", pcols)->capture_default_str();
  hpair->add_option("--playouts", playouts, "random playouts instead of all lines");
  bind(hpair, [&] {
    if (pcols != prows + 1) throw std::invalid_argument("pairing needs cols = rows + 1");
    const PairingReport r = playouts ? pairing_playouts(prows, playouts, g.seed)
                                     : pairing_exhaustive(prows, g.budget ? g.budget : 10'000'000);
    return json{{"rows", prows}, {"cols", pcols}, {"lines", r.lines}, {"blackWins", r.black_wins}, {"winner", r.all_black() ? "Black" : "White"}};
  });
  std::string dcol_file;
  auto* hd = hex->add_subcommand("dwinner", "winner of a d-dimensional coloring");
  hd->add_option("coloring", dcol_file)->required()->check(CLI::ExistingFile);
  bind(hd, [&] {
    std::istringstream in(read_file(dcol_file));
    const DColoring col = parse_dcoloring(in);
    const DWinResult r = winner_ddim(col);
    json path = json::array();
    for (const Point& v : r.path) path.push_back(v);
    return json{{"winner", r.winner}, {"exitHyperplane", r.exit_hyperplane}, {"path", path}};
  });

  // brouwer
  auto* br = app.add_subcommand("brouwer", "approximate fixed points");
  br->require_subcommand(1);
  std::string map_spec = "rotation", matrix_file;
  int dim = 2;
  double eps = 1e-3;
  auto* bfix = br->add_subcommand("fix", "x with |f(x) − x| < eps");
  bfix->add_option("--map", map_spec, "identity, reflection, rotation, affine or an expression such as '1 - x1; x2'")->capture_default_str();
  bfix->add_option("--dim", dim)->capture_default_str();
  bfix->add_option("--eps", eps)->capture_default_str();
  bfix->add_option("--matrix", matrix_file, "affine map file: d rows of 'a_1 … a_d b'")->check(CLI::ExistingFile);
  bind(bfix, [&] {
    CubeMap f;
    if (map_spec == "affine") {
      if (matrix_file.empty()) throw std::invalid_argument("affine map needs --matrix");
      std::istringstream in(read_file(matrix_file));
      std::vector<Vec> a(dim, Vec(dim));
      Vec b(dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j)
          if (!(in >> a[i][j])) throw std::invalid_argument("matrix file is short");
        if (!(in >> b[i])) throw std::invalid_argument("matrix file is short");
      }
      f = maps::affine(a, b);
    } else if (map_spec == "identity" || map_spec == "reflection" || map_spec == "rotation") {
      f = builtin_map(map_spec, dim);
    } else {
      f = parse_map_expression(map_spec, dim);
    }
    ApproxOptions opt;
    if (g.budget) opt.max_evaluations = g.budget;
    const ApproxResult r = approx_fixed_point(f, eps, opt);
    return json{{"x", r.x}, {"residual", r.residual}, {"n", r.n}, {"evaluations", r.evaluations}, {"method", r.method}};
  });

  // dint
  auto* dint = app.add_subcommand("dint", "families of d-intervals");
  dint->require_subcommand(1);
  std::string dfile;
  auto load = [&] { return parse_dinterval_family(read_file(dfile)); };
  auto trap_opts = [&] {
    TrapOptions o;
    o.seed = g.seed;
    return o;
  };
  auto dsub = [&](const char* name, const char* help, std::function<json()> f) {
    auto* s = dint->add_subcommand(name, help);
    s->add_option("file", dfile)->required()->check(CLI::ExistingFile);
    bind(s, std::move(f));
  };
  dsub("nu", "packing number", [&] {
    const auto r = nu(load());
    return json{{"nu", r.value}, {"members", r.members}};
  });
  dsub("tau", "transversal number", [&] {
    const auto r = tau(load());
    return json{{"tau", r.value}, {"points", points_json(r.points)}};
  });
  dsub("lp", "fractional packing and transversal numbers", [&] {
    const auto f = load();
    const auto r = nu_star_tau_star(f);
    json packing = json::array(), cover = json::array();
    for (const auto& w : r.packing) packing.push_back(to_string(w));
    for (const auto& [p, w] : r.transversal) cover.push_back({{"line", p.line}, {"x", to_string(p.x)}, {"weight", to_string(w)}});
    return json{{"nuStar", to_string(r.value)}, {"tauStar", to_string(r.value)}, {"packing", packing}, {"transversal", cover}};
  });
  dsub("kaiser", "transversal from an equalized trap", [&] {
    const auto r = kaiser_transversal(load(), trap_opts());
    return json{{"size", r.size()}, {"nu", r.nu}, {"t", r.t}, {"fallback", r.fallback}, {"note", r.note}, {"transversal", points_json(r.transversal)}};
  });
  dsub("multipoint", "search for a transversal with one point per line", [&] {
    const auto r = multipoint_search(load(), trap_opts());
    return json{{"k", r.k}, {"hypothesis", r.hypothesis}, {"multipoint", r.multipoint ? points_json(*r.multipoint) : json(nullptr)}};
  });
  int lb_d = 2, lb_k = 2, lb_n = 0;
  auto* lb = dint->add_subcommand("lowerbound", "disjoint copies of an intersecting family with large tau");
  lb->add_option("--d", lb_d)->capture_default_str();
  lb->add_option("--k", lb_k)->capture_default_str();
  lb->add_option("--n", lb_n, "vertices of the expander, 0 for automatic");
  bind(lb, [&] {
    const auto r = lower_bound_family(lb_d, lb_k, g.seed, lb_n);
    return json{{"d", lb_d},
                {"k", lb_k},
                {"b", r.b},
                {"n", r.n},
                {"membersPerCopy", r.members_per_copy},
                {"pairwiseIntersecting", r.pairwise_intersecting},
                {"nu", r.nu},
                {"tau", r.tau ? json(*r.tau) : json(nullptr)},
                {"family", format_dinterval_family(r.family)}};
  });

  // props
  auto* props = app.add_subcommand("props", "graph properties and evasiveness");
  props->require_subcommand(1);
  std::string kind = "graph", pname = "connected";
  int pn = 4, pm = 0, pk = 0;
  auto* pbuild = props->add_subcommand("build", "build a property and compute its complexity");
  pbuild->add_option("--kind", kind)->check(CLI::IsMember({"graph", "digraph", "bipartite"}))->capture_default_str();
  pbuild->add_option("--n", pn)->capture_default_str();
  pbuild->add_option("--m", pm, "size of V for bipartite graphs");
  pbuild->add_option("--name", pname)->check(CLI::IsMember(builtin_property_names()))->capture_default_str();
  pbuild->add_option("--k", pk, "parameter for at_most_k_edges and complete_bipartite_threshold");
  bind(pbuild, [&] {
    GraphShape shape{parse_graph_kind(kind), pn, pm};
    return summary_json(builtin_property(pname, shape, pk));
  });
  auto* psweep = props->add_subcommand("sweep", "all monotone graph properties on n vertices");
  psweep->add_option("--n", pn)->capture_default_str();
  bind(psweep, [&] {
    const auto r = monotone_sweep(pn);
    json hist = json::object();
    for (const auto& [c, cnt] : r.complexity_histogram) hist[std::to_string(c)] = cnt;
    return json{{"n", r.n}, {"m", r.m}, {"classes", r.classes}, {"families", r.families}, {"nontrivial", r.nontrivial},
                {"evasive", r.evasive}, {"violations", r.violations.size()}, {"complexityHistogram", hist}};
  });
  auto* pill = props->add_subcommand("illies", "Illies' invariant family on 12 points");
  bind(pill, [&] {
    const auto il = illies_family();
    const int c = argument_complexity(il.family);
    return json{{"m", 12}, {"counts", il.counts}, {"euler", euler_count(il.family)}, {"c", c}, {"evasive", c == 12},
                {"orbits", orbit_decomposition(il.family, il.group).size()}};
  });
  int ym = 4, yn = 3, yr = -1;
  auto* pyao = props->add_subcommand("yao", "fixed complex of the bipartite threshold property");
  pyao->add_option("--m", ym)->capture_default_str();
  pyao->add_option("--n", yn)->capture_default_str();
  pyao->add_option("--r", yr, "single threshold; all 1 ≤ r < m when omitted");
  bind(pyao, [&] {
    json rows = json::array();
    for (int r = yr >= 0 ? yr : 1; r < (yr >= 0 ? yr + 1 : ym); ++r) {
      const auto y = yao_fixed_complex(ym, yn, r, g.budget ? g.budget : 1500);
      rows.push_back({{"r", r}, {"reducedEuler", y.reduced_euler}, {"formula", y.formula},
                      {"reducedBetti", y.reduced_betti ? json(*y.reduced_betti) : json(nullptr)},
                      {"fixedComplexEuler", y.fixed_complex_euler ? json(*y.fixed_complex_euler) : json(nullptr)},
                      {"matches", y.matches()}});
    }
    return json{{"m", ym}, {"n", yn}, {"thresholds", rows}};
  });
  int cq = 3;
  auto* pcong = props->add_subcommand("congruence", "orbit congruences of a built property");
  pcong->add_option("--kind", kind)->check(CLI::IsMember({"graph", "digraph", "bipartite"}))->capture_default_str();
  pcong->add_option("--n", pn)->capture_default_str();
  pcong->add_option("--m", pm);
  pcong->add_option("--name", pname)->check(CLI::IsMember(builtin_property_names()))->capture_default_str();
  pcong->add_option("--k", pk);
  pcong->add_option("--p", cq, "prime with |E| a power of p")->capture_default_str();
  bind(pcong, [&] {
    const auto prop = builtin_property(pname, GraphShape{parse_graph_kind(kind), pn, pm}, pk);
    const auto r = orbit_congruence_check(prop.family, prop.group(), cq);
    json orbits = json::array();
    for (const auto& o : r.orbits) orbits.push_back({{"k", o.k}, {"size", o.members.size()}});
    return json{{"p", r.p}, {"t", r.t}, {"transitive", r.transitive}, {"hypothesis", r.hypothesis}, {"orbits", orbits},
                {"divisibilityOk", r.divisibility_ok}, {"alternatingSum", r.alternating_sum}, {"alternatingOk", r.alternating_ok},
                {"c", r.complexity ? json(*r.complexity) : json(nullptr)}, {"consistent", r.consistent()}};
  });

  // complex
  auto* cx = app.add_subcommand("complex", "simplicial complexes");
  cx->require_subcommand(1);
  std::string cfile, named, perm_text;
  auto load_complex = [&] {
    if (!named.empty()) {
      if (named == "rp2") return complexes::rp2_6();
      if (named == "dunce") return complexes::dunce_hat();
      if (named == "triangle") return complexes::hollow_triangle();
      throw std::invalid_argument("named complexes: rp2, dunce, triangle");
    }
    if (cfile.empty()) throw std::invalid_argument("give a complex file or --named");
    return complex_from_file(cfile);
  };
  auto csub = [&](const char* name, const char* help) {
    auto* s = cx->add_subcommand(name, help);
    s->add_option("file", cfile)->check(CLI::ExistingFile);
    s->add_option("--named", named, "rp2, dunce or triangle");
    return s;
  };
  auto* cinfo = csub("info", "f-vector, homology, non-evasiveness and collapsibility");
  bind(cinfo, [&] {
    const auto k = load_complex();
    const auto col = is_collapsible(k, g.budget ? g.budget : 200000);
    const auto apex = k.cone_apex();
    return json{{"vertices", k.vertices().size()},
                {"fVector", k.f_vector()},
                {"euler", k.euler_characteristic()},
                {"reducedBetti", reduced_betti(k)},
                {"reducedBettiMod2", reduced_betti_mod_p(k, 2)},
                {"qAcyclic", is_q_acyclic(k)},
                {"simplex", k.is_simplex()},
                {"coneApex", apex ? json(*apex) : json(nullptr)},
                {"nonevasive", is_nonevasive(k)},
                {"collapsible", to_string(col.verdict)}};
  });
  auto* clef = csub("lefschetz", "Lefschetz number of a simplicial vertex map");
  clef->add_option("--map", perm_text, "images of vertices 0..n−1, comma separated")->required();
  bind(clef, [&] {
    const auto k = load_complex();
    std::vector<int> f;
    std::stringstream ss(perm_text);
    for (std::string tok; std::getline(ss, tok, ',');) f.push_back(std::stoi(tok));
    if (static_cast<int>(f.size()) != k.ground_size()) throw std::invalid_argument("map needs one image per vertex");
    if (!is_simplicial_map(k, f)) throw std::invalid_argument("not a simplicial map");
    return json{{"lefschetz", to_string(lefschetz_number(k, f))}, {"hopfTrace", hopf_trace_check(k, f)}};
  });
  auto* cfloyd = csub("floyd", "Euler characteristics of a prime-order action");
  cfloyd->add_option("--action", perm_text, "generator in cycle notation, e.g. '(0 1 2)'")->required();
  bind(cfloyd, [&] {
    const auto k = load_complex();
    const GroupAction act(k.ground_size(), {parse_permutation(k.ground_size(), perm_text)});
    const auto r = floyd_check(k, act);
    return json{{"p", r.p}, {"chi", r.chi}, {"chiFixed", r.chi_fixed}, {"chiQuotient", r.chi_quotient}, {"holds", r.holds}};
  });

  // setfam
  auto* sf = app.add_subcommand("setfam", "set families and decision trees");
  sf->require_subcommand(1);
  std::string ffile;
  auto load_family = [&] { return parse_family(read_file(ffile)).family; };
  auto fsub = [&](const char* name, const char* help, std::function<json()> f) {
    auto* s = sf->add_subcommand(name, help);
    s->add_option("file", ffile)->required()->check(CLI::ExistingFile);
    bind(s, std::move(f));
  };
  fsub("complexity", "argument complexity and evasiveness", [&] {
    const auto f = load_family();
    const int c = argument_complexity(f);
    return json{{"m", f.m()}, {"size", f.size()}, {"c", c}, {"evasive", c == f.m()}, {"euler", euler_count(f)}};
  });
  fsub("tree", "an optimal decision tree", [&] {
    const auto f = load_family();
    const auto t = optimal_tree(f);
    return json{{"m", f.m()}, {"depth", t.depth()}, {"tree", t.serialize()}};
  });
  fsub("poly", "generating polynomial and its (1+t) divisibility", [&] {
    const auto cert = divisibility_certificate(load_family());
    return json{{"c", cert.complexity}, {"exponent", cert.exponent}, {"polynomial", poly_json(cert.polynomial)},
                {"quotient", cert.quotient ? poly_json(*cert.quotient) : json(nullptr)}};
  });

  // serve
  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "HTTP game service; sessions persist under HEXATOPE_DATA_DIR");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--static", static_dir, "directory of web assets to serve at /")->check(CLI::ExistingDirectory);
  bool serving = false;
  serve->callback([&] { serving = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (serving) {
      auto store = service::GameStore::from_env(app.count("--seed") ? g.seed : std::random_device{}());
      httplib::Server server;
      service::install_routes(server, store);
      if (!static_dir.empty()) server.set_mount_point("/", static_dir);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      return server.listen(host, port) ? 0 : 1;
    }
    const json out = action();
    if (g.format == "text") print_text(out);
    else std::cout << out.dump(2) << "\n";
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
