#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "cartanrep/cluster.hpp"
#include "cartanrep/functors.hpp"
#include "cartanrep/grassmann.hpp"
#include "cartanrep/io.hpp"
#include "cartanrep/pimod.hpp"

#include <random>

using namespace cartanrep;

namespace {

struct Options {
  std::string datum_path;
  std::string type;
  std::string omega;
  std::string primes;
  std::optional<std::uint64_t> seed;
  std::string format = "table";
  int workers = 1;
  std::string results_dir;
  int samples = 0;
  std::string max_weight = "2,2";
  std::string pair;
  std::string fixture;
  bool w0 = false;
};

struct Output {
  Json json;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string summary;
  bool ok = true;
};

struct Context {
  CartanDatum d;
  Orientation o;
  std::vector<std::uint32_t> primes;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Context load(const Options& opt) {
  Context c;
  Json j;
  if (!opt.datum_path.empty()) {
    std::ifstream in(opt.datum_path);
    if (!in) throw UsageError("cannot open datum file " + opt.datum_path);
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("datum file " + opt.datum_path + " is not valid JSON: " + e.what());
    }
    c.d = datum_from_json(j);
  } else if (!opt.type.empty()) {
    c.d = data::by_name(opt.type);
  } else {
    throw UsageError("give a datum with --datum <file.json> or --type <A1|A2|A3|B2|B3|C3|G2>");
  }
  if (!opt.omega.empty()) c.o = parse_orientation(c.d, opt.omega);
  else if (j.contains("Omega")) c.o = orientation_from_json(c.d, j["Omega"]);
  else c.o = default_orientation(c.d);
  c.primes = parse_primes(opt.primes);
  return c;
}

std::uint64_t need_seed(const Options& opt, const std::string& cmd) {
  if (!opt.seed) throw UsageError(cmd + " is randomized; pass --seed <u64>");
  return *opt.seed;
}

std::string vec_str(const IntVec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

// Runs fn(0..n-1) on `workers` threads; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> err(n);
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += w) {
        try {
          out[i] = fn(i);
        } catch (...) {
          err[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

IntVec add_scaled(IntVec a, const IntVec& b, std::int64_t k) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += k * b[i];
  return a;
}

Output cmd_roots(const Context& c) {
  Output out;
  const auto seq = positive_roots(c.d);
  const auto orbit = positive_roots_by_orbit(c.d);
  out.ok = std::set<RootVector>(seq.begin(), seq.end()) == std::set<RootVector>(orbit.begin(), orbit.end());
  out.header = {"index", "root", "height"};
  Json roots = Json::array();
  for (std::size_t k = 0; k < seq.size(); ++k) {
    out.rows.push_back({std::to_string(k + 1), vec_str(seq[k]), std::to_string(height(seq[k]))});
    roots.push_back(vector_to_json(seq[k]));
  }
  out.json = {{"count", seq.size()}, {"roots", roots}, {"orbit_agrees", out.ok}};
  out.summary = std::to_string(seq.size()) + " positive roots" + (out.ok ? "" : " (orbit closure disagrees)");
  return out;
}

Json int_matrix_json(const IntMatrix& m) {
  Json a = Json::array();
  for (const auto& r : m.to_rows()) a.push_back(vector_to_json(r));
  return a;
}

Output cmd_forms(const Context& c) {
  Output out;
  const auto f = forms(c.d, c.o);
  out.header = {"form", "matrix"};
  out.rows = {{"gram_sym", f.gram_sym.str()}, {"gram_euler", f.gram_euler.str()}, {"R", f.R.str()}, {"coxeter", f.coxeter.str()}};
  out.json = {{"datum", datum_to_json(c.d, c.o)},
              {"gram_sym", int_matrix_json(f.gram_sym)},
              {"gram_euler", int_matrix_json(f.gram_euler)},
              {"R", int_matrix_json(f.R)},
              {"coxeter", int_matrix_json(f.coxeter)}};
  return out;
}

Output cmd_coxeter_check(const Context& c, const Options& opt) {
  Output out;
  out.header = {"D", "Omega", "coxeter_word", "coxeter", "product", "match"};
  Json rows = Json::array();
  std::size_t checked = 0, failed = 0;
  for (std::int64_t scale : {1, 2}) {
    const auto d = scale_symmetrizer(c.d, scale);
    for (const auto& o : all_orientations(d)) {
      const auto words = admissible_words(d, o);
      if (opt.w0 && !words.w0) throw MathError(Errc::NotDynkin, "w0 requested for a non-Dynkin datum");
      IntMatrix prod = IntMatrix::identity(d.n);
      for (int k : words.coxeter.letters) prod = reflection_matrix(d, k) * prod;
      const auto cox = forms(d, o).coxeter;
      const bool match = cox == prod;
      ++checked;
      if (!match) ++failed;
      std::ostringstream om, cw;
      for (const auto& [i, j] : o) om << "(" << i + 1 << "," << j + 1 << ")";
      for (int k : words.coxeter.letters) cw << k + 1;
      out.rows.push_back({vec_str(d.D), om.str(), cw.str(), cox.str(), prod.str(), match ? "yes" : "no"});
      Json row = {{"D", vector_to_json(d.D)}, {"Omega", datum_to_json(d, o)["Omega"]}, {"match", match}};
      if (opt.w0) {
        Json w = Json::array();
        for (int k : words.w0->letters) w.push_back(k + 1);
        row["w0"] = w;
      }
      rows.push_back(row);
    }
  }
  out.ok = failed == 0;
  out.json = {{"checked", checked}, {"failed", failed}, {"cases", rows}};
  out.summary = std::to_string(checked - failed) + "/" + std::to_string(checked) + " orientations satisfy the Coxeter identity";
  return out;
}

Output cmd_root_modules(const Context& c) {
  Output out;
  const auto t = all_root_modules(Rational(), c.d, c.o);
  out.header = {"k", "beta", "rank", "locally_free", "rigid", "indecomposable"};
  Json table = Json::array();
  std::set<IntVec> ranks;
  for (std::size_t k = 0; k < t.modules.size(); ++k) {
    const auto& m = t.modules[k];
    const auto r = is_locally_free(m);
    const bool rigid = r && ext1_dim(m, m) == 0;
    const bool indec = is_indecomposable(m);
    const bool good = r && *r == t.beta[k] && rigid && indec && check_relations(m).empty();
    if (!good) out.ok = false;
    if (r) ranks.insert(*r);
    out.rows.push_back({std::to_string(k + 1), vec_str(t.beta[k]), r ? vec_str(*r) : "-", r ? "yes" : "no",
                        rigid ? "yes" : "no", indec ? "yes" : "no"});
    table.push_back({{"beta", vector_to_json(t.beta[k])}, {"module", module_to_json(m)}});
  }
  if (ranks.size() != t.modules.size()) out.ok = false;
  out.json = {{"datum", datum_to_json(c.d, c.o)}, {"root_modules", table}};
  out.summary = std::to_string(t.modules.size()) + " root modules" + (out.ok ? "" : " (check failed)");
  return out;
}

Output cmd_homext(const Context& c) {
  Output out;
  const auto t = all_root_modules(Rational(), c.d, c.o);
  const auto meas = homext_table(t);
  const auto pred = homext_prediction(c.d, c.o, t.beta);
  out.header = {"i", "j", "hom", "ext1", "predicted_hom", "predicted_ext1"};
  Json cells = Json::array();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < meas.size(); ++i)
    for (std::size_t j = 0; j < meas.size(); ++j) {
      const auto& m = meas[i][j];
      const auto& p = pred[i][j];
      if (m.hom != p.hom || m.ext != p.ext) ++bad;
      out.rows.push_back({std::to_string(i + 1), std::to_string(j + 1), std::to_string(m.hom), std::to_string(m.ext),
                          std::to_string(p.hom), std::to_string(p.ext)});
      cells.push_back({{"i", i + 1}, {"j", j + 1}, {"hom", m.hom}, {"ext1", m.ext}});
    }
  out.ok = bad == 0;
  out.json = {{"cells", cells}, {"mismatches", bad}};
  out.summary = out.ok ? "table equals the Euler-form prediction" : std::to_string(bad) + " cells differ from the prediction";
  return out;
}

Output cmd_tau(const Context& c) {
  Output out;
  const Rational q;
  const auto t = all_root_modules(q, c.d, c.o);
  const auto cox = forms(c.d, c.o).coxeter;
  std::set<IntVec> proj;
  for (int i = 0; i < c.d.n; ++i) proj.insert(*is_locally_free(projective_module(q, c.d, c.o, i)));
  out.header = {"k", "beta", "rank_tau", "coxeter_beta", "orbit"};
  Json rows = Json::array();
  for (std::size_t k = 0; k < t.modules.size(); ++k) {
    const auto tm = tau(t.modules[k]);
    const auto r = is_locally_free(tm);
    const bool projective = proj.count(t.beta[k]) > 0;
    bool good;
    std::string expect;
    if (projective) {
      good = tm.total_dim() == 0;
      expect = "0";
    } else {
      good = r && *r == cox * t.beta[k];
      expect = vec_str(cox * t.beta[k]);
    }
    std::ostringstream orbit;
    Module<Rational> x = t.modules[k];
    Json orb = Json::array();
    for (std::size_t step = 0; step <= t.modules.size() && x.total_dim() > 0; ++step) {
      const auto rx = is_locally_free(x);
      if (!rx) break;
      orbit << vec_str(*rx) << " ";
      orb.push_back(vector_to_json(*rx));
      x = tau(x);
    }
    if (!good) out.ok = false;
    out.rows.push_back({std::to_string(k + 1), vec_str(t.beta[k]), r ? vec_str(*r) : "not locally free", expect, orbit.str()});
    rows.push_back({{"beta", vector_to_json(t.beta[k])}, {"projective", projective}, {"ok", good}, {"orbit", orb}});
  }
  out.json = {{"modules", rows}};
  out.summary = out.ok ? "rank action of tau matches the Coxeter matrix" : "tau rank check failed";
  return out;
}

std::vector<ClusterVariable> module_side(const Context& c, const Options& opt, Json* transcripts) {
  const auto t = all_root_modules(Rational(), c.d, c.o);
  std::vector<ClusterVariable> vars = parallel_map<ClusterVariable>(t.modules.size(), opt.workers, [&](std::size_t k) {
    return ClusterVariable{f_polynomial(integral_family(t.modules[k]), t.beta[k], c.primes), g_vector(c.d, c.o, t.beta[k])};
  });
  if (transcripts) {
    for (std::size_t k = 0; k < t.modules.size(); ++k) {
      Json per = Json::array();
      const auto fam = integral_family(t.modules[k]);
      IntVec e(c.d.n, 0);
      while (true) {
        per.push_back({{"e", vector_to_json(e)}, {"counts", counting_to_json(grlf_polynomial(fam, t.beta[k], e, c.primes))}});
        std::size_t i = 0;
        while (i < e.size() && ++e[i] > t.beta[k][i]) e[i++] = 0;
        if (i == e.size()) break;
      }
      transcripts->push_back({{"beta", vector_to_json(t.beta[k])}, {"grassmannians", per}});
    }
  }
  return vars;
}

void write_results(const Options& opt, const std::string& name, const Json& j) {
  if (opt.results_dir.empty()) return;
  std::filesystem::create_directories(opt.results_dir);
  std::ofstream f(std::filesystem::path(opt.results_dir) / name);
  f << nlohmann::json::parse(j.dump()).dump(1) << "\n";
}

Output cmd_fpoly(const Context& c, const Options& opt) {
  Output out;
  Json transcripts = Json::array();
  const auto vars = module_side(c, opt, opt.results_dir.empty() ? nullptr : &transcripts);
  const auto betas = all_root_modules(Rational(), c.d, c.o).beta;
  out.header = {"beta", "F", "g"};
  Json polys = Json::array();
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& F = vars[k].F;
    const bool normal = F.count(IntVec(c.d.n, 0)) && F.at(IntVec(c.d.n, 0)) == 1 && F.count(betas[k]) && F.at(betas[k]) == 1;
    if (!normal) out.ok = false;
    out.rows.push_back({vec_str(betas[k]), poly_str(F), vec_str(vars[k].g)});
    Json p = polynomial_to_json(betas[k], F);
    p["g"] = vector_to_json(vars[k].g);
    polys.push_back(p);
  }
  out.json = {{"fpolynomials", polys}};
  write_results(opt, "fpoly_counts.json", transcripts);
  out.summary = out.ok ? "constant and top terms are 1" : "F-polynomial normalization failed";
  return out;
}

Output cmd_cluster_match(const Context& c, const Options& opt) {
  Output out;
  const auto vars = module_side(c, opt, nullptr);
  const auto r = calibrated_match(c.d, c.o, vars);
  const auto all = enumerate_variables(initial_seed(c.d, c.o, r.sign));
  out.header = {"F", "g", "matched"};
  for (const auto& v : vars) out.rows.push_back({poly_str(v.F), vec_str(v.g), all.count(v) ? "yes" : "no"});
  Json misses = Json::array();
  for (const auto& m : r.misses) misses.push_back(m);
  Json cluster = Json::array();
  for (const auto& v : all) {
    Json p = polynomial_to_json(IntVec{}, v.F);
    p.erase("rank");
    p["g"] = vector_to_json(v.g);
    cluster.push_back(p);
  }
  out.json = {{"matched", r.matched}, {"total", r.total}, {"b_sign", r.sign}, {"cluster_variables", cluster}, {"misses", misses}};
  out.ok = r.ok();
  out.summary = std::to_string(r.matched) + "/" + std::to_string(r.total) + " matched";
  return out;
}

std::vector<std::vector<std::int64_t>> multiplicities_up_to(const std::vector<RootVector>& betas, const IntVec& bound) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> m(betas.size(), 0);
  std::function<void(std::size_t, IntVec)> rec = [&](std::size_t k, IntVec w) {
    if (k == betas.size()) {
      if (std::any_of(w.begin(), w.end(), [](auto x) { return x > 0; })) out.push_back(m);
      return;
    }
    for (m[k] = 0;; ++m[k]) {
      const auto next = add_scaled(w, betas[k], m[k]);
      bool fits = true;
      for (std::size_t i = 0; i < next.size(); ++i)
        if (next[i] > bound[i]) fits = false;
      if (!fits) break;
      rec(k + 1, next);
    }
    m[k] = 0;
  };
  rec(0, IntVec(bound.size(), 0));
  return out;
}

IntVec parse_intvec(const std::string& s) {
  IntVec v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stoll(tok));
  return v;
}

Output cmd_pbw(const Context& c, const Options& opt) {
  Output out;
  const auto betas = beta_gamma_sequences(c.d, *admissible_words(c.d, c.o).w0).beta;
  const auto bound = parse_intvec(opt.max_weight);
  if (bound.size() != static_cast<std::size_t>(c.d.n)) throw UsageError("--max-weight needs one entry per vertex");
  const auto ms = multiplicities_up_to(betas, bound);
  const auto n = ms.size();
  const auto vals = parallel_map<mpq_class>(n * n, opt.workers, [&](std::size_t x) {
    return pbw_pairing(c.d, c.o, ms[x / n], ms[x % n], c.primes);
  });
  out.header = {"m", "n", "pairing"};
  std::size_t bad = 0;
  Json cells = Json::array();
  auto mstr = [](const std::vector<std::int64_t>& m) { return vec_str(IntVec(m.begin(), m.end())); };
  for (std::size_t x = 0; x < n * n; ++x) {
    const auto& a = ms[x / n];
    const auto& b = ms[x % n];
    const mpq_class expect = a == b ? 1 : 0;
    if (vals[x] != expect) ++bad;
    if (vals[x] != 0 || a == b) out.rows.push_back({mstr(a), mstr(b), vals[x].get_str()});
    cells.push_back({{"m", a}, {"n", b}, {"value", vals[x].get_str()}});
  }
  out.ok = bad == 0;
  out.json = {{"size", n}, {"entries", cells}, {"off_identity", bad}};
  out.summary = out.ok ? "pairing matrix is the identity (" + std::to_string(n) + "x" + std::to_string(n) + ")"
                       : std::to_string(bad) + " entries differ from the identity";
  return out;
}

Output cmd_serre(const Context& c, const Options& opt) {
  Output out;
  const auto seed = need_seed(opt, "serre-check");
  const int samples = opt.samples > 0 ? opt.samples : 50;
  out.header = {"i", "j", "rank", "seed", "value"};
  Json cases = Json::array();
  std::size_t total = 0, bad = 0;
  std::optional<std::pair<int, int>> only;
  if (!opt.pair.empty()) {
    const auto v = parse_intvec(opt.pair);
    if (v.size() != 2 || v[0] < 1 || v[1] < 1 || v[0] > c.d.n || v[1] > c.d.n)
      throw UsageError("--pair expects two vertices i,j");
    only = std::make_pair(static_cast<int>(v[0] - 1), static_cast<int>(v[1] - 1));
  }
  for (int i = 0; i < c.d.n; ++i)
    for (int j = 0; j < c.d.n; ++j) {
      if (i == j || !c.d.adjacent(i, j)) continue;
      if (only && *only != std::make_pair(i, j)) continue;
      IntVec r(c.d.n, 0);
      r[i] = 1 - c.d.C(i, j);
      r[j] = 1;
      const auto combo = serre_combination(c.d, i, j);
      const auto vals = parallel_map<mpq_class>(samples, opt.workers, [&](std::size_t s) {
        const auto m = random_locally_free(Rational(), c.d, c.o, r, seed + s);
        return theta_eval(combo, integral_family(m), r, c.primes);
      });
      for (int s = 0; s < samples; ++s) {
        ++total;
        if (vals[s] != 0) ++bad;
        out.rows.push_back({std::to_string(i + 1), std::to_string(j + 1), vec_str(r), std::to_string(seed + s), vals[s].get_str()});
      }
      cases.push_back({{"i", i + 1}, {"j", j + 1}, {"rank", vector_to_json(r)}, {"samples", samples}});
    }
  out.ok = bad == 0;
  out.json = {{"cases", cases}, {"evaluated", total}, {"nonzero", bad}};
  out.summary = std::to_string(total - bad) + "/" + std::to_string(total) + " Serre evaluations vanish";
  return out;
}

Output cmd_pi(const Context& c, const Options& opt) {
  Output out;
  const auto seed = need_seed(opt, "pi-check");
  const int samples = opt.samples > 0 ? opt.samples : 100;
  const Rational q;
  std::vector<IntVec> ranks;
  IntVec r(c.d.n, 0);
  std::function<void(int)> rec = [&](int k) {
    if (k == c.d.n) {
      if (std::any_of(r.begin(), r.end(), [](auto x) { return x > 0; })) ranks.push_back(r);
      return;
    }
    for (r[k] = 0; r[k] <= 2; ++r[k]) rec(k + 1);
    r[k] = 0;
  };
  rec(0);
  struct PairResult {
    bool relations = false, symmetric = false, formula = false;
    std::int64_t e12 = 0, e21 = 0, pred = 0;
    IntVec ra, rb;
  };
  const auto res = parallel_map<PairResult>(samples, opt.workers, [&](std::size_t s) {
    std::mt19937_64 rng(seed + s);
    PairResult p;
    p.ra = ranks[rng() % ranks.size()];
    p.rb = ranks[rng() % ranks.size()];
    const auto a = random_pi_module(q, c.d, c.o, p.ra, rng());
    const auto b = random_pi_module(q, c.d, c.o, p.rb, rng());
    p.relations = check_relations(a).empty() && check_relations(b).empty();
    p.e12 = static_cast<std::int64_t>(ext1_pi(a, b));
    p.e21 = static_cast<std::int64_t>(ext1_pi(b, a));
    p.pred = cb_prediction(hom_pi(a, b), hom_pi(b, a), c.d, p.ra, p.rb);
    p.symmetric = p.e12 == p.e21;
    p.formula = p.e12 == p.pred;
    return p;
  });
  std::size_t good = 0;
  out.header = {"sample", "rank_M", "rank_N", "ext(M,N)", "ext(N,M)", "formula", "ok"};
  for (int s = 0; s < samples; ++s) {
    const auto& p = res[s];
    const bool ok = p.relations && p.symmetric && p.formula;
    good += ok;
    out.rows.push_back({std::to_string(s), vec_str(p.ra), vec_str(p.rb), std::to_string(p.e12), std::to_string(p.e21),
                        std::to_string(p.pred), ok ? "yes" : "no"});
  }
  // E-filtered and crystal checks on iterated extensions
  std::size_t filtered = 0, crystal = 0, crystal_filtered = 0;
  const int towers = std::max(1, samples / 5);
  for (int s = 0; s < towers; ++s) {
    std::mt19937_64 rng(seed + 100000 + s);
    std::vector<int> word;
    const auto len = 1 + rng() % 4;
    for (std::size_t t = 0; t < len; ++t) word.push_back(static_cast<int>(rng() % c.d.n));
    const auto m = random_E_filtered(q, c.d, c.o, word, rng());
    const bool ef = is_E_filtered(m, 100000, seed).filtered;
    const bool cr = is_crystal_module(m);
    filtered += ef;
    crystal += cr;
    crystal_filtered += cr && ef;
  }
  out.ok = good == static_cast<std::size_t>(samples) && filtered == static_cast<std::size_t>(towers) &&
           crystal_filtered == crystal;
  out.json = {{"pairs", samples},
              {"pairs_ok", good},
              {"towers", towers},
              {"towers_E_filtered", filtered},
              {"towers_crystal", crystal}};
  out.summary = std::to_string(good) + "/" + std::to_string(samples) + " pairs satisfy Ext symmetry and the CB formula; " +
                std::to_string(filtered) + "/" + std::to_string(towers) + " extension towers E-filtered";
  return out;
}

Output cmd_nofilt(const Context& c) {
  Output out;
  const auto table = all_root_modules(Rational(), c.d, c.o);
  const auto& betas = table.beta;
  const std::size_t r = betas.size();
  out.header = {"k", "m", "increasing_exists", "decreasing_exists"};
  Json cases = Json::array();
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<std::int64_t> m(r, 0);
    std::vector<std::vector<std::int64_t>> decomps;
    std::function<void(std::size_t, IntVec)> rec = [&](std::size_t j, IntVec left) {
      if (j == r) {
        if (std::all_of(left.begin(), left.end(), [](auto x) { return x == 0; })) decomps.push_back(m);
        return;
      }
      if (j == k) return rec(j + 1, left);
      for (m[j] = 0;; ++m[j]) {
        const auto next = add_scaled(left, betas[j], -m[j]);
        if (std::any_of(next.begin(), next.end(), [](auto x) { return x < 0; })) break;
        rec(j + 1, next);
      }
      m[j] = 0;
    };
    rec(0, betas[k]);
    const auto fam = integral_family(table.modules[k]);
    for (const auto& mm : decomps) {
      std::vector<FlagFactor> inc, dec;
      for (std::size_t j = 0; j < r; ++j) {
        if (mm[j] == 0) continue;
        const IntVec beta = add_scaled(IntVec(c.d.n, 0), betas[j], mm[j]);
        const auto copies = mm[j];
        inc.push_back({beta, [&c, j, copies](const PrimeField& f) {
                         auto x = zero_module(f, c.d, c.o);
                         const auto y = root_module(f, c.d, c.o, j);
                         for (std::int64_t t = 0; t < copies; ++t) x = direct_sum(x, y);
                         return x;
                       }});
        dec.insert(dec.begin(), FlagFactor{beta, nullptr});
      }
      const auto ri = filtration_exists(fam, inc, c.primes);
      const auto rd = filtration_exists(fam, dec, c.primes);
      const bool all_inc = std::all_of(ri.begin(), ri.end(), [](const auto& x) { return x.second; });
      const bool none_dec = std::none_of(rd.begin(), rd.end(), [](const auto& x) { return x.second; });
      if (!all_inc || !none_dec || ri.empty()) out.ok = false;
      const IntVec mv(mm.begin(), mm.end());
      out.rows.push_back({std::to_string(k + 1), vec_str(mv), all_inc ? "all primes" : "not on every prime",
                          none_dec ? "no prime" : "some prime"});
      Json per = Json::array();
      for (std::size_t t = 0; t < ri.size(); ++t)
        per.push_back({{"prime", ri[t].first}, {"increasing", ri[t].second}, {"decreasing", rd[t].second}});
      cases.push_back({{"k", k + 1}, {"m", vector_to_json(mv)}, {"per_prime", per}});
    }
  }
  out.json = {{"cases", cases}};
  out.summary = out.ok ? std::to_string(cases.size()) + " decompositions: increasing flags exist, decreasing flags do not"
                       : "filtration order check failed";
  return out;
}

std::vector<IntVec> ranks_up_to(int n, std::int64_t bound) {
  std::vector<IntVec> out;
  IntVec r(n, 0);
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      out.push_back(r);
      return;
    }
    for (r[k] = 0; r[k] <= bound; ++r[k]) rec(k + 1);
    r[k] = 0;
  };
  rec(0);
  return out;
}

Output cmd_euler(const Context& c, const Options& opt) {
  Output out;
  const auto seed = need_seed(opt, "euler-check");
  const int samples = opt.samples > 0 ? opt.samples : 200;
  const auto ranks = ranks_up_to(c.d.n, 2);
  struct Row {
    IntVec ra, rb;
    std::int64_t hom = 0, ext = 0, form = 0;
  };
  const auto rows = parallel_map<Row>(samples, opt.workers, [&](std::size_t s) {
    std::mt19937_64 rng(seed + s);
    Row r;
    r.ra = ranks[rng() % ranks.size()];
    r.rb = ranks[rng() % ranks.size()];
    const auto a = random_locally_free(Rational(), c.d, c.o, r.ra, rng());
    const auto b = random_locally_free(Rational(), c.d, c.o, r.rb, rng());
    r.hom = static_cast<std::int64_t>(hom_dim(a, b));
    r.ext = static_cast<std::int64_t>(ext1_dim(a, b));
    r.form = euler_form(c.d, c.o, r.ra, r.rb);
    return r;
  });
  std::size_t good = 0;
  out.header = {"sample", "rank_M", "rank_N", "hom", "ext1", "euler_form"};
  for (int s = 0; s < samples; ++s) {
    const auto& r = rows[s];
    good += r.hom - r.ext == r.form;
    out.rows.push_back({std::to_string(s), vec_str(r.ra), vec_str(r.rb), std::to_string(r.hom), std::to_string(r.ext),
                        std::to_string(r.form)});
  }
  out.ok = good == static_cast<std::size_t>(samples);
  out.json = {{"pairs", samples}, {"pairs_ok", good}};
  out.summary = std::to_string(good) + "/" + std::to_string(samples) + " pairs satisfy hom - ext1 = <rk M, rk N>";
  return out;
}

Output cmd_crystal(const Context& c, const Options& opt) {
  Output out;
  const auto seed = need_seed(opt, "crystal-check");
  const int samples = opt.samples > 0 ? opt.samples : 20;
  if (c.d.n < 2 || !c.d.adjacent(0, 1)) throw UsageError("crystal-check needs vertices 1 and 2 adjacent");
  IntVec r(c.d.n, 0);
  r[0] = 1 - c.d.C(0, 1);
  r[1] = 1;
  std::vector<std::vector<int>> words;
  for (int k = 0; k <= r[0]; ++k) {
    std::vector<int> w(r[0], 0);
    w.insert(w.begin() + k, 1);
    words.push_back(w);
  }
  const auto combo = serre_combination(c.d, 0, 1);
  const Rational q;
  std::size_t crystals = 0, vanish = 0, witnesses = 0;
  out.header = {"seed", "word", "crystal", "E_filtered", "value"};
  Json found = Json::array();
  for (std::uint64_t s = 0; static_cast<int>(crystals) < samples && s < static_cast<std::uint64_t>(samples) * 20; ++s) {
    const auto& w = words[s % words.size()];
    const auto m = random_E_filtered(q, c.d, c.o, w, seed + s);
    const bool cr = is_crystal_module(m);
    const auto val = theta_eval(combo, integral_family(m), r, c.primes);
    std::string ws;
    for (int i : w) ws += std::to_string(i + 1);
    out.rows.push_back({std::to_string(seed + s), ws, cr ? "yes" : "no", "yes", val.get_str()});
    if (cr) {
      ++crystals;
      vanish += val == 0;
    } else if (val != 0) {
      ++witnesses;
      found.push_back({{"seed", seed + s}, {"word", ws}, {"value", val.get_str()}});
    }
  }
  std::string fixture_value;
  if (!opt.fixture.empty()) {
    std::ifstream in(opt.fixture);
    if (!in) throw UsageError("cannot open fixture " + opt.fixture);
    const auto x = rational_module_from_json(Json::parse(in));
    const auto rx = is_locally_free(x);
    if (!rx) throw MathError(Errc::NotLocallyFree, "fixture is not locally free");
    fixture_value = theta_eval(combo, integral_family(x), *rx, c.primes).get_str();
    if (fixture_value == "0" || is_crystal_module(x)) out.ok = false;
  }
  out.ok = out.ok && static_cast<int>(crystals) >= samples && vanish == crystals && (witnesses > 0 || !fixture_value.empty());
  out.json = {{"rank", vector_to_json(r)}, {"crystal", crystals}, {"crystal_vanishing", vanish},
              {"non_crystal_witnesses", found}};
  if (!fixture_value.empty()) out.json["fixture_value"] = fixture_value;
  out.summary = std::to_string(vanish) + "/" + std::to_string(crystals) + " crystal modules have vanishing commutator; " +
                std::to_string(witnesses) + " non-crystal witnesses" +
                (fixture_value.empty() ? "" : "; fixture value " + fixture_value);
  return out;
}

Output cmd_dim(const Context& c, const Options& opt) {
  Output out;
  const std::int64_t bound = opt.samples > 0 ? opt.samples : 6;
  out.header = {"Omega", "rank", "measured", "formula"};
  std::size_t checked = 0, bad = 0;
  std::function<void(int, IntVec, std::int64_t, const Orientation&)> rec;
  rec = [&](int k, IntVec r, std::int64_t used, const Orientation& o) {
    if (k == c.d.n) {
      std::int64_t want = 0, pair = 0;
      for (int i = 0; i < c.d.n; ++i) {
        want += c.d.D[i] * r[i] * r[i];
        for (int j = 0; j < c.d.n; ++j) pair += r[i] * c.d.D[i] * c.d.C(i, j) * r[j];
      }
      want -= pair / 2;
      const auto got =
          static_cast<std::int64_t>(arrow_solution_basis(jordan_skeleton(Rational(), c.d, o, r)).size());
      ++checked;
      bad += got != want;
      std::ostringstream om;
      for (const auto& [i, j] : o) om << "(" << i + 1 << "," << j + 1 << ")";
      out.rows.push_back({om.str(), vec_str(r), std::to_string(got), std::to_string(want)});
      return;
    }
    for (r[k] = 0; used + c.d.D[k] * r[k] <= bound; ++r[k]) rec(k + 1, r, used + c.d.D[k] * r[k], o);
  };
  for (const auto& o : all_orientations(c.d)) rec(0, IntVec(c.d.n, 0), 0, o);
  out.ok = bad == 0;
  out.json = {{"checked", checked}, {"mismatches", bad}, {"bound", bound}};
  out.summary = std::to_string(checked - bad) + "/" + std::to_string(checked) +
                " ranks with |D r| <= " + std::to_string(bound) + " match sum c_i r_i^2 - (r,r)/2";
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) r += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return r + "\"";
}

void print(const Output& out, const std::string& format) {
  if (format == "json") {
    Json j = out.json;
    j["ok"] = out.ok;
    std::cout << nlohmann::json::parse(j.dump()).dump(1) << "\n";
    return;
  }
  if (format == "csv") {
    for (std::size_t i = 0; i < out.header.size(); ++i) std::cout << (i ? "," : "") << csv_escape(out.header[i]);
    std::cout << "\n";
    for (const auto& row : out.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << csv_escape(row[i]);
      std::cout << "\n";
    }
    return;
  }
  std::vector<std::size_t> w(out.header.size(), 0);
  for (std::size_t i = 0; i < out.header.size(); ++i) w[i] = out.header[i].size();
  for (const auto& row : out.rows)
    for (std::size_t i = 0; i < row.size() && i < w.size(); ++i) w[i] = std::max(w[i], row[i].size());
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::cout << row[i];
      if (i + 1 < row.size()) std::cout << std::string(w[i] - row[i].size() + 2, ' ');
    }
    std::cout << "\n";
  };
  if (!out.header.empty()) line(out.header);
  for (const auto& row : out.rows) line(row);
  if (!out.summary.empty()) std::cout << out.summary << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally free modules over generalized preprojective algebras"};
  app.require_subcommand(1);
  Options opt;
  std::string seed_text;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--datum", opt.datum_path, "datum JSON {\"C\",\"D\",\"Omega\"} with 1-based vertices");
    sub->add_option("--type", opt.type, "built-in datum (A1, A2, A3, B2, B3, C3, G2)");
    sub->add_option("--omega", opt.omega, "orientation as 'i,j;i,j' (1-based) or 'default'");
    sub->add_option("--prime-set", opt.primes, "comma separated primes for point counting");
    sub->add_option("--seed", seed_text, "RNG seed (required by randomized commands)");
    sub->add_option("--format", opt.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--results-dir", opt.results_dir, "directory for counting transcripts");
  };
  std::map<std::string, std::function<Output(const Context&)>> commands;
  auto add = [&](const std::string& name, const std::string& help, std::function<Output(const Context&)> fn) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    commands[name] = std::move(fn);
    return sub;
  };
  add("roots", "positive roots by beta-sequence and Weyl orbit", cmd_roots);
  add("forms", "symmetric and Euler forms, R and the Coxeter matrix", cmd_forms);
  add("coxeter-check", "Coxeter identity for all orientations and symmetrizers D, 2D",
      [&](const Context& c) { return cmd_coxeter_check(c, opt); })
      ->add_flag("--w0", opt.w0, "also compute the reduced word of w0");
  add("root-modules", "the modules M(beta) and their invariants", cmd_root_modules);
  add("homext-table", "Hom/Ext^1 between root modules against the prediction", cmd_homext);
  add("tau-orbits", "rank action of tau on root modules", cmd_tau);
  add("fpoly", "F-polynomials and g-vectors of root modules", [&](const Context& c) { return cmd_fpoly(c, opt); });
  add("cluster-match", "module side against cluster mutation", [&](const Context& c) { return cmd_cluster_match(c, opt); });
  add("pbw-check", "dual PBW pairing matrix", [&](const Context& c) { return cmd_pbw(c, opt); })
      ->add_option("--max-weight", opt.max_weight, "weight bound, e.g. 2,2");
  add("serre-check", "Serre combination on random locally free modules", [&](const Context& c) { return cmd_serre(c, opt); })
      ->add_option("--samples", opt.samples, "modules per pair (default 50)");
  app.get_subcommand("serre-check")->add_option("--pair", opt.pair, "restrict to one pair i,j");
  add("pi-check", "Pi-module relations, Ext symmetry, CB formula, E-filtrations",
      [&](const Context& c) { return cmd_pi(c, opt); })
      ->add_option("--samples", opt.samples, "random pairs (default 100)");
  add("nofilt-check", "filtration order of root modules", cmd_nofilt);
  add("euler-check", "hom - ext1 against the Euler form on random pairs", [&](const Context& c) { return cmd_euler(c, opt); })
      ->add_option("--samples", opt.samples, "random pairs (default 200)");
  auto* crystal = add("crystal-check", "commutator on crystal modules and a non-crystal witness",
                      [&](const Context& c) { return cmd_crystal(c, opt); });
  crystal->add_option("--samples", opt.samples, "crystal modules to collect (default 20)");
  crystal->add_option("--fixture", opt.fixture, "module JSON expected to give a nonzero value");
  add("dim-check", "arrow-solution dimension against the quadratic form", [&](const Context& c) { return cmd_dim(c, opt); })
      ->add_option("--samples", opt.samples, "bound on |D r| (default 6)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (!seed_text.empty()) {
      try {
        opt.seed = std::stoull(seed_text);
      } catch (const std::exception&) {
        throw UsageError("--seed expects an unsigned integer, got '" + seed_text + "'");
      }
    }
    const auto* sub = app.get_subcommands().front();
    const auto ctx = load(opt);
    const auto out = commands.at(sub->get_name())(ctx);
    print(out, opt.format);
    return out.ok ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const MathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
