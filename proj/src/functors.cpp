#include "cartanrep/functors.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace cartanrep {

namespace {

using SlotKey = std::tuple<int, int, int>;

// T_a = M_j^L with eps shifting blocks b -> b+1 and wrapping L-1 -> 0 via eps_j^{src}.
template <class K>
Matrix<K> block_shift(const Matrix<K>& ej, int L, int wrap_exp) {
  const std::size_t d = ej.rows();
  Matrix<K> e(ej.field(), d * L, d * L);
  const auto id = Matrix<K>::identity(ej.field(), d);
  for (int b = 0; b + 1 < L; ++b) e.set_block((b + 1) * d, b * d, id);
  e.set_block(0, (L - 1) * d, power(ej, wrap_exp));
  return e;
}

template <class K>
Module<K> finish(Module<K> m) {
  if (auto j = normalize_jordan(m)) return *j;
  return m;
}

template <class K>
Module<K> reflected_shell(const Module<K>& m, int k, std::map<SlotKey, std::size_t>& old_index) {
  Module<K> out = m;
  out.omega = reflect_orientation(m.datum, m.omega, k);
  out.slots = arrow_slots(m.datum, out.omega, m.algebra);
  out.arrows.clear();
  for (std::size_t a = 0; a < m.slots.size(); ++a) old_index[{m.slots[a].i, m.slots[a].j, m.slots[a].k}] = a;
  return out;
}

}  // namespace

template <class K>
Module<K> reflect_plus(const Module<K>& m, int k) {
  if (m.algebra != Algebra::H) throw MathError(Errc::SpecMismatch, "reflection functors act on H-modules");
  if (!is_sink(m.omega, k)) throw MathError(Errc::NotSink, "vertex " + std::to_string(k + 1) + " is not a sink");
  const K& f = m.field;
  std::vector<std::size_t> in;
  std::vector<std::size_t> offset{0};
  for (std::size_t a = 0; a < m.slots.size(); ++a)
    if (m.slots[a].tgt == k) {
      in.push_back(a);
      offset.push_back(offset.back() + m.dims[m.slots[a].src] * m.slots[a].tgt_exp);
    }
  const std::size_t tdim = offset.back();
  Matrix<K> et(f, tdim, tdim), min(f, m.dims[k], tdim);
  for (std::size_t x = 0; x < in.size(); ++x) {
    const auto& s = m.slots[in[x]];
    const std::size_t dj = m.dims[s.src];
    et.set_block(offset[x], offset[x], block_shift(m.eps[s.src], s.tgt_exp, s.src_exp));
    Matrix<K> p = m.arrows[in[x]];
    for (int b = 0; b < s.tgt_exp; ++b) {
      min.set_block(0, offset[x] + b * dj, p);
      p = m.eps[k] * p;
    }
  }
  const auto ker = kernel(min);
  std::map<SlotKey, std::size_t> old_index;
  Module<K> out = reflected_shell(m, k, old_index);
  out.dims[k] = ker.cols();
  out.eps[k] = *solve(ker, et * ker);
  for (const auto& s : out.slots) {
    if (s.src != k && s.tgt != k) {
      out.arrows.push_back(m.arrows[old_index.at({s.i, s.j, s.k})]);
      continue;
    }
    // new arrow k -> j from the old arrow j -> k
    const std::size_t a = old_index.at({s.j, s.i, s.k});
    const std::size_t x = static_cast<std::size_t>(std::find(in.begin(), in.end(), a) - in.begin());
    const auto& os = m.slots[a];
    const std::size_t dj = m.dims[os.src];
    Matrix<K> sel(f, dj, tdim);
    sel.set_block(0, offset[x] + (os.tgt_exp - 1) * dj, Matrix<K>::identity(f, dj));
    out.arrows.push_back(sel * ker);
  }
  return finish(out);
}

template <class K>
Module<K> reflect_minus(const Module<K>& m, int k) {
  if (m.algebra != Algebra::H) throw MathError(Errc::SpecMismatch, "reflection functors act on H-modules");
  if (!is_source(m.omega, k))
    throw MathError(Errc::NotSource, "vertex " + std::to_string(k + 1) + " is not a source");
  const K& f = m.field;
  std::vector<std::size_t> out_arrows;
  std::vector<std::size_t> offset{0};
  for (std::size_t a = 0; a < m.slots.size(); ++a)
    if (m.slots[a].src == k) {
      out_arrows.push_back(a);
      offset.push_back(offset.back() + m.dims[m.slots[a].tgt] * m.slots[a].src_exp);
    }
  const std::size_t tdim = offset.back();
  Matrix<K> et(f, tdim, tdim), mout(f, tdim, m.dims[k]);
  for (std::size_t x = 0; x < out_arrows.size(); ++x) {
    const auto& s = m.slots[out_arrows[x]];
    const std::size_t dj = m.dims[s.tgt];
    const int L = s.src_exp;
    et.set_block(offset[x], offset[x], block_shift(m.eps[s.tgt], L, s.tgt_exp));
    for (int b = 0; b < L; ++b) mout.set_block(offset[x] + b * dj, 0, m.arrows[out_arrows[x]] * power(m.eps[k], L - 1 - b));
  }
  const auto im = column_basis(mout);
  const auto comp = complement_basis(im);
  const auto full_inv = inverse(hstack(im, comp));
  const auto proj = full_inv->block(im.cols(), 0, comp.cols(), tdim);
  std::map<SlotKey, std::size_t> old_index;
  Module<K> out = reflected_shell(m, k, old_index);
  out.dims[k] = comp.cols();
  out.eps[k] = proj * et * comp;
  for (const auto& s : out.slots) {
    if (s.src != k && s.tgt != k) {
      out.arrows.push_back(m.arrows[old_index.at({s.i, s.j, s.k})]);
      continue;
    }
    // new arrow j -> k from the old arrow k -> j
    const std::size_t a = old_index.at({s.j, s.i, s.k});
    const std::size_t x = static_cast<std::size_t>(std::find(out_arrows.begin(), out_arrows.end(), a) - out_arrows.begin());
    const std::size_t dj = m.dims[m.slots[a].tgt];
    Matrix<K> inc(f, tdim, dj);
    inc.set_block(offset[x], 0, Matrix<K>::identity(f, dj));
    out.arrows.push_back(proj * inc);
  }
  return finish(out);
}

template <class K>
Module<K> coxeter_plus(const Module<K>& m) {
  const auto word = admissible_words(m.datum, m.omega).coxeter.letters;
  Module<K> x = m;
  for (int k : word) x = reflect_plus(x, k);
  return x;
}

template <class K>
Module<K> coxeter_minus(const Module<K>& m) {
  const auto word = admissible_words(m.datum, m.omega).coxeter.letters;
  Module<K> x = m;
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = reflect_minus(x, *it);
  return x;
}

template <class K>
Module<K> tau(const Module<K>& m) {
  return twist(coxeter_plus(m));
}

template <class K>
Module<K> tau_minus(const Module<K>& m) {
  return coxeter_minus(twist(m));
}

template <class K>
Module<K> root_module(const K& field, const CartanDatum& d, const Orientation& o, std::size_t k) {
  if (!is_dynkin(d).dynkin) throw MathError(Errc::NotDynkin, "root modules need a Dynkin datum");
  const auto words = admissible_words(d, o);
  const auto& w = words.w0->letters;
  if (k >= w.size()) throw MathError(Errc::ShapeMismatch, "root index out of range");
  std::vector<Orientation> omegas{o};
  for (std::size_t t = 0; t < k; ++t) omegas.push_back(reflect_orientation(d, omegas.back(), w[t]));
  Module<K> m = generalized_simple(field, d, omegas[k], w[k]);
  for (std::size_t t = k; t-- > 0;) m = reflect_minus(m, w[t]);
  return m;
}

template <class K>
RootModuleTable<K> all_root_modules(const K& field, const CartanDatum& d, const Orientation& o) {
  if (!is_dynkin(d).dynkin) throw MathError(Errc::NotDynkin, "root modules need a Dynkin datum");
  RootModuleTable<K> t;
  t.word = *admissible_words(d, o).w0;
  t.beta = beta_gamma_sequences(d, t.word).beta;
  for (std::size_t k = 0; k < t.beta.size(); ++k) t.modules.push_back(root_module(field, d, o, k));
  return t;
}

template <class K>
std::vector<std::vector<HomExtEntry>> homext_table(const RootModuleTable<K>& t) {
  const std::size_t r = t.modules.size();
  std::vector<std::vector<HomExtEntry>> out(r, std::vector<HomExtEntry>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      out[i][j].hom = static_cast<std::int64_t>(hom_dim(t.modules[i], t.modules[j]));
      out[i][j].ext = static_cast<std::int64_t>(ext1_dim(t.modules[i], t.modules[j]));
    }
  return out;
}

std::vector<std::vector<HomExtEntry>> homext_prediction(const CartanDatum& d, const Orientation& o,
                                                        const std::vector<RootVector>& beta) {
  const std::size_t r = beta.size();
  std::vector<std::vector<HomExtEntry>> out(r, std::vector<HomExtEntry>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const auto e = euler_form(d, o, beta[i], beta[j]);
      if (i <= j) out[i][j] = {e, 0};
      else out[i][j] = {0, -e};
    }
  return out;
}

#define CARTANREP_FUNCTORS(K)                                                                      \
  template Module<K> reflect_plus(const Module<K>&, int);                                          \
  template Module<K> reflect_minus(const Module<K>&, int);                                         \
  template Module<K> coxeter_plus(const Module<K>&);                                               \
  template Module<K> coxeter_minus(const Module<K>&);                                              \
  template Module<K> tau(const Module<K>&);                                                        \
  template Module<K> tau_minus(const Module<K>&);                                                  \
  template Module<K> root_module(const K&, const CartanDatum&, const Orientation&, std::size_t);   \
  template RootModuleTable<K> all_root_modules(const K&, const CartanDatum&, const Orientation&);  \
  template std::vector<std::vector<HomExtEntry>> homext_table(const RootModuleTable<K>&);

CARTANREP_FUNCTORS(Rational)
CARTANREP_FUNCTORS(PrimeField)

}  // namespace cartanrep
