#include "zs/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace zs {

namespace {

constexpr int kMaxOrder = 256;

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Generator letters for the built-in families; 'a','b',... for abelian
// products, 'g' for cyclic, x/y/v for Heisenberg.
std::string power_name(char letter, int e) {
  if (e == 0) return "";
  std::string s(1, letter);
  if (e != 1) s += "^" + std::to_string(e);
  return s;
}

}  // namespace

Elem GroupTable::pow(Elem g, long long k) const {
  Elem base = g;
  if (k < 0) {
    base = inv(g);
    k = -k;
  }
  Elem r = identity_;
  while (k-- > 0) r = mul(r, base);
  return r;
}

int GroupTable::heisenberg_p() const {
  if (heisenberg_p_ == 0)
    throw std::logic_error("group was not built by heisenberg()");
  return heisenberg_p_;
}

int GroupTable::z_class_index(Elem g) const {
  if (heisenberg_p_ == 0)
    throw std::logic_error("z_class_index requires a heisenberg() group");
  return k_index_[g];
}

GroupTable GroupTable::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic: order must be >= 1");
  if (n > kMaxOrder) throw std::invalid_argument("cyclic: order too large");
  GroupTable G;
  G.n_ = n;
  G.mul_.resize(static_cast<size_t>(n) * n);
  G.names_.resize(n);
  for (int a = 0; a < n; ++a) {
    G.names_[a] = a == 0 ? "1" : power_name('g', a);
    for (int b = 0; b < n; ++b) G.mul_[static_cast<size_t>(a) * n + b] = (a + b) % n;
  }
  G.desc_ = "C" + std::to_string(n);
  G.precompute();
  return G;
}

GroupTable GroupTable::abelian_p_group(int p, const std::vector<int>& exps) {
  if (!is_prime(p)) throw std::invalid_argument("abelian_p_group: p must be prime");
  if (exps.empty()) throw std::invalid_argument("abelian_p_group: empty exponent list");
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 1) throw std::invalid_argument("abelian_p_group: exponents must be positive");
    if (i > 0 && exps[i] < exps[i - 1])
      throw std::invalid_argument("abelian_p_group: exponents must be nondecreasing");
  }
  std::vector<int> comp;  // component orders p^{e_i}
  long long order = 1;
  for (int e : exps) {
    comp.push_back(ipow(p, e));
    order *= comp.back();
    if (order > kMaxOrder) throw std::invalid_argument("abelian_p_group: order too large");
  }
  const int n = static_cast<int>(order);
  const int r = static_cast<int>(comp.size());
  GroupTable G;
  G.n_ = n;
  G.mul_.resize(static_cast<size_t>(n) * n);
  G.names_.resize(n);
  auto digits = [&](int id) {
    std::vector<int> d(r);
    for (int i = r - 1; i >= 0; --i) {
      d[i] = id % comp[i];
      id /= comp[i];
    }
    return d;
  };
  auto rank = [&](const std::vector<int>& d) {
    int id = 0;
    for (int i = 0; i < r; ++i) id = id * comp[i] + d[i];
    return id;
  };
  for (int a = 0; a < n; ++a) {
    auto da = digits(a);
    std::string nm;
    for (int i = 0; i < r; ++i) nm += power_name(static_cast<char>('a' + i), da[i]);
    G.names_[a] = nm.empty() ? "1" : nm;
    for (int b = 0; b < n; ++b) {
      auto db = digits(b);
      std::vector<int> dc(r);
      for (int i = 0; i < r; ++i) dc[i] = (da[i] + db[i]) % comp[i];
      G.mul_[static_cast<size_t>(a) * n + b] = rank(dc);
    }
  }
  std::string d;
  for (int i = 0; i < r; ++i) d += (i ? "x" : "") + ("C" + std::to_string(comp[i]));
  G.desc_ = d;
  G.precompute();
  return G;
}

GroupTable GroupTable::heisenberg(int p) {
  if (!is_prime(p) || p % 2 == 0)
    throw std::invalid_argument("heisenberg: p must be an odd prime");
  if (p > 7) throw std::invalid_argument("heisenberg: p <= 7 enforced");
  const int n = p * p * p;
  // Elements are unitriangular matrices I + a*E12 + b*E23 + c*E13 over F_p,
  // encoded as (a,b,c). Matrix product gives c' = c1 + c2 + a1*b2.
  struct M { int a, b, c; };
  auto mmul = [p](M u, M v) {
    return M{(u.a + v.a) % p, (u.b + v.b) % p, (u.c + v.c + u.a * v.b) % p};
  };
  auto mrank = [p](M u) { return (u.a * p + u.b) * p + u.c; };
  auto minv = [&](M u) {
    // (I+N)^-1 = I - N + N^2 for strictly upper triangular N
    return M{(p - u.a) % p, (p - u.b) % p, ((2 * p * p - u.c) + u.a * u.b) % p};
  };
  M x{1, 0, 0}, y{0, 1, 0};
  M v = mmul(mmul(minv(y), minv(x)), mmul(y, x));  // [y,x]
  if (v.a != 0 || v.b != 0 || v.c == 0)
    throw std::logic_error("heisenberg: commutator is not a central generator");

  // Normal-form ids: x^i y^j v^k -> i*p^2 + j*p + k.
  std::vector<int> matrix_to_id(n, -1);
  std::vector<M> id_to_matrix(n);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k) {
        M m{0, 0, 0};
        for (int t = 0; t < i; ++t) m = mmul(m, x);
        for (int t = 0; t < j; ++t) m = mmul(m, y);
        for (int t = 0; t < k; ++t) m = mmul(m, v);
        int id = (i * p + j) * p + k;
        if (matrix_to_id[mrank(m)] != -1)
          throw std::logic_error("heisenberg: normal form is not a bijection");
        matrix_to_id[mrank(m)] = id;
        id_to_matrix[id] = m;
      }

  GroupTable G;
  G.n_ = n;
  G.mul_.resize(static_cast<size_t>(n) * n);
  G.names_.resize(n);
  for (int a = 0; a < n; ++a) {
    int i = a / (p * p), j = (a / p) % p, k = a % p;
    std::string nm = power_name('x', i) + power_name('y', j) + power_name('v', k);
    G.names_[a] = nm.empty() ? "1" : nm;
    for (int b = 0; b < n; ++b)
      G.mul_[static_cast<size_t>(a) * n + b] = matrix_to_id[mrank(mmul(id_to_matrix[a], id_to_matrix[b]))];
  }
  G.heisenberg_p_ = p;
  G.desc_ = "H" + std::to_string(n);
  G.precompute();

  // Presentation relations x^p = y^p = [y,x,y] = [y,x,x] = 1, checked on
  // the finished table.
  Elem ex = G.elem_by_name("x"), ey = G.elem_by_name("y");
  Elem ev = G.commutator(ey, ex);
  if (G.pow(ex, p) != G.identity() || G.pow(ey, p) != G.identity() ||
      G.commutator(ev, ey) != G.identity() || G.commutator(ev, ex) != G.identity())
    throw std::logic_error("heisenberg: presentation relations fail");
  if (ev != G.elem_by_name("v"))
    throw std::logic_error("heisenberg: v != [y,x]");

  // K_i numbering: 0 for Z(G); for non-central x^i y^j v^k, the image
  // (i,j) in G/Z determines the class: j-axis (i=0) is K[y] = K_{p+1},
  // otherwise K[x y^m] = K_{m+1} with m = j * i^-1 mod p.
  G.k_index_.assign(n, 0);
  std::vector<int> inv_mod(p, 0);
  for (int i = 1; i < p; ++i)
    for (int t = 1; t < p; ++t)
      if (i * t % p == 1) inv_mod[i] = t;
  for (int a = 0; a < n; ++a) {
    int i = a / (p * p), j = (a / p) % p;
    if (i == 0 && j == 0)
      G.k_index_[a] = 0;
    else if (i == 0)
      G.k_index_[a] = p + 1;
    else
      G.k_index_[a] = (j * inv_mod[i]) % p + 1;
  }
  return G;
}

GroupTable GroupTable::from_table(std::vector<std::string> names, std::vector<Elem> mul) {
  const size_t n = names.size();
  if (n == 0 || n > kMaxOrder) throw std::invalid_argument("from_table: bad order");
  if (mul.size() != n * n) throw std::invalid_argument("from_table: table size mismatch");
  std::set<std::string> seen;
  for (const auto& nm : names) {
    if (nm.empty()) throw std::invalid_argument("from_table: empty name");
    for (char c : nm)
      if (std::isspace(static_cast<unsigned char>(c)) || c == '*')
        throw std::invalid_argument("from_table: name contains whitespace or '*'");
    if (!seen.insert(nm).second) throw std::invalid_argument("from_table: duplicate name");
  }
  for (Elem e : mul)
    if (e < 0 || e >= static_cast<int>(n)) throw std::invalid_argument("from_table: entry out of range");
  GroupTable G;
  G.n_ = static_cast<int>(n);
  G.names_ = std::move(names);
  G.mul_ = std::move(mul);
  G.desc_ = "G" + std::to_string(n);
  G.precompute();
  return G;
}

void GroupTable::verify_axioms() const {
  const int n = n_;
  // identity and inverse laws
  for (int b = 0; b < n; ++b)
    if (mul(identity_, b) != b || mul(b, identity_) != b)
      throw std::invalid_argument("group axioms: identity law fails");
  for (int a = 0; a < n; ++a)
    if (mul(a, inv_[a]) != identity_ || mul(inv_[a], a) != identity_)
      throw std::invalid_argument("group axioms: inverse law fails");
  // associativity, O(n^3)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Elem ab = mul(a, b);
      for (int c = 0; c < n; ++c)
        if (mul(ab, c) != mul(a, mul(b, c)))
          throw std::invalid_argument("group axioms: associativity fails");
    }
}

void GroupTable::precompute() {
  const int n = n_;
  // locate two-sided identity
  identity_ = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = mul(e, b) == b && mul(b, e) == b;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("group axioms: no identity");
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) {
        inv_[a] = b;
        break;
      }
  for (int a = 0; a < n; ++a)
    if (inv_[a] < 0) throw std::invalid_argument("group axioms: missing inverse");
  verify_axioms();

  name_to_id_.clear();
  for (int a = 0; a < n; ++a) name_to_id_[names_[a]] = a;

  central_.assign(n, 1);
  center_.clear();
  for (int g = 0; g < n; ++g) {
    for (int x = 0; x < n; ++x)
      if (mul(g, x) != mul(x, g)) {
        central_[g] = 0;
        break;
      }
    if (central_[g]) center_.push_back(g);
  }
  abelian_ = static_cast<int>(center_.size()) == n;

  std::vector<Elem> comms;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) comms.push_back(commutator(a, b));
  derived_ = generated_subgroup(*this, comms);
  in_derived_.assign(n, 0);
  for (Elem g : derived_) in_derived_[g] = 1;

  exponent_ = 1;
  for (int g = 0; g < n; ++g) {
    int ord = 1;
    Elem h = g;
    while (h != identity_) {
      h = mul(h, g);
      ++ord;
    }
    exponent_ = static_cast<int>(std::lcm(exponent_, ord));
  }

  // conjugacy classes as conjugation orbits
  conj_class_of_.assign(n, -1);
  conj_classes_.clear();
  for (int g = 0; g < n; ++g) {
    if (conj_class_of_[g] >= 0) continue;
    std::vector<Elem> cls;
    int idx = static_cast<int>(conj_classes_.size());
    for (int x = 0; x < n; ++x) {
      Elem h = conj(g, x);
      if (conj_class_of_[h] < 0) {
        conj_class_of_[h] = idx;
        cls.push_back(h);
      }
    }
    std::sort(cls.begin(), cls.end());
    conj_classes_.push_back(std::move(cls));
  }

  // z-classes: orbits of "centralizers are conjugate subgroups"
  std::vector<std::vector<Elem>> centralizer(n);
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x)
      if (mul(g, x) == mul(x, g)) centralizer[g].push_back(x);
  std::map<std::vector<Elem>, int> cent_id;
  std::vector<int> cent_of(n);
  std::vector<std::vector<Elem>> cents;
  for (int g = 0; g < n; ++g) {
    auto it = cent_id.find(centralizer[g]);
    if (it == cent_id.end()) {
      it = cent_id.emplace(centralizer[g], static_cast<int>(cents.size())).first;
      cents.push_back(centralizer[g]);
    }
    cent_of[g] = it->second;
  }
  const int m = static_cast<int>(cents.size());
  std::vector<int> uf(m);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int a) {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  };
  for (int c = 0; c < m; ++c)
    for (int x = 0; x < n; ++x) {
      std::vector<Elem> img;
      img.reserve(cents[c].size());
      for (Elem g : cents[c]) img.push_back(conj(g, x));
      std::sort(img.begin(), img.end());
      auto it = cent_id.find(img);
      if (it != cent_id.end()) {
        int a = find(c), b = find(it->second);
        if (a != b) uf[std::max(a, b)] = std::min(a, b);
      }
    }
  z_class_of_.assign(n, -1);
  z_classes_.clear();
  for (int g = 0; g < n; ++g) {
    if (z_class_of_[g] >= 0) continue;
    std::vector<Elem> cls;
    int idx = static_cast<int>(z_classes_.size());
    for (int h = g; h < n; ++h)
      if (z_class_of_[h] < 0 && find(cent_of[h]) == find(cent_of[g])) {
        z_class_of_[h] = idx;
        cls.push_back(h);
      }
    z_classes_.push_back(std::move(cls));
  }
}

Elem GroupTable::elem_by_name(const std::string& s) const {
  auto it = name_to_id_.find(s);
  if (it != name_to_id_.end()) return it->second;
  // fall back to a generator-power product, e.g. "x^1y^0v^2"
  Elem acc = identity_;
  size_t i = 0;
  while (i < s.size()) {
    char letter = s[i++];
    std::string base(1, letter);
    auto git = name_to_id_.find(base);
    if (git == name_to_id_.end())
      throw std::invalid_argument("unknown element name: " + s);
    long long e = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (start == i) throw std::invalid_argument("bad exponent in name: " + s);
      e = std::stoll(s.substr(start, i - start));
    }
    acc = mul(acc, pow(git->second, e));
  }
  return acc;
}

std::vector<Elem> generated_subgroup(const GroupTable& G, const std::vector<Elem>& gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<Elem> frontier{G.identity()};
  in[G.identity()] = 1;
  std::vector<Elem> all{G.identity()};
  while (!frontier.empty()) {
    std::vector<Elem> next;
    for (Elem a : frontier)
      for (Elem g : gens) {
        Elem h = G.mul(a, g);
        if (!in[h]) {
          in[h] = 1;
          all.push_back(h);
          next.push_back(h);
        }
      }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end());
  return all;
}

bool is_normal_subgroup(const GroupTable& G, const std::vector<Elem>& N) {
  std::vector<char> in(G.order(), 0);
  for (Elem g : N) {
    if (g < 0 || g >= G.order()) return false;
    in[g] = 1;
  }
  if (!in[G.identity()]) return false;
  for (Elem a : N)
    for (Elem b : N)
      if (!in[G.mul(a, b)]) return false;
  for (Elem a : N)
    if (!in[G.inv(a)]) return false;
  for (Elem a : N)
    for (int x = 0; x < G.order(); ++x)
      if (!in[G.conj(a, x)]) return false;
  return true;
}

const std::vector<std::vector<Elem>>& GroupTable::automorphisms() const {
  if (!automorphisms_.empty()) return automorphisms_;
  if (n_ > 128) throw std::invalid_argument("automorphisms: order > 128 exceeds budget");
  // small generating set by greedy closure, then prune redundant members
  std::vector<Elem> gens;
  {
    std::vector<Elem> cl{identity_};
    std::vector<char> in(n_, 0);
    in[identity_] = 1;
    while (static_cast<int>(cl.size()) < n_) {
      Elem pick = -1;
      for (int g = 0; g < n_; ++g)
        if (!in[g]) {
          pick = g;
          break;
        }
      gens.push_back(pick);
      cl = generated_subgroup(*this, gens);
      in.assign(n_, 0);
      for (Elem g : cl) in[g] = 1;
    }
    for (size_t i = 0; i < gens.size();) {
      std::vector<Elem> rest;
      for (size_t j = 0; j < gens.size(); ++j)
        if (j != i) rest.push_back(gens[j]);
      if (!rest.empty() && static_cast<int>(generated_subgroup(*this, rest).size()) == n_)
        gens = rest;
      else
        ++i;
    }
  }
  const int k = static_cast<int>(gens.size());
  // derivation of every element as parent * generator
  std::vector<int> par(n_, -1), via(n_, -1);
  {
    std::vector<Elem> frontier{identity_};
    std::vector<char> seen(n_, 0);
    seen[identity_] = 1;
    while (!frontier.empty()) {
      std::vector<Elem> next;
      for (Elem a : frontier)
        for (int gi = 0; gi < k; ++gi) {
          Elem h = mul(a, gens[gi]);
          if (!seen[h]) {
            seen[h] = 1;
            par[h] = a;
            via[h] = gi;
            next.push_back(h);
          }
        }
      frontier = std::move(next);
    }
  }
  std::vector<Elem> bfs_order;
  {
    // topological order by derivation depth
    std::vector<int> depth(n_, -1);
    depth[identity_] = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int g = 0; g < n_; ++g)
        if (depth[g] < 0 && par[g] >= 0 && depth[par[g]] >= 0) {
          depth[g] = depth[par[g]] + 1;
          changed = true;
        }
    }
    bfs_order.resize(n_);
    std::iota(bfs_order.begin(), bfs_order.end(), 0);
    std::sort(bfs_order.begin(), bfs_order.end(),
              [&](Elem a, Elem b) { return depth[a] < depth[b]; });
  }
  auto elem_order = [&](Elem g) {
    int o = 1;
    Elem h = g;
    while (h != identity_) {
      h = mul(h, g);
      ++o;
    }
    return o;
  };
  std::vector<int> gen_order(k);
  for (int i = 0; i < k; ++i) gen_order[i] = elem_order(gens[i]);
  std::vector<std::vector<Elem>> candidates(k);
  for (int i = 0; i < k; ++i)
    for (int g = 0; g < n_; ++g)
      if (elem_order(g) == gen_order[i]) candidates[i].push_back(g);

  std::vector<std::vector<Elem>> found;
  std::vector<Elem> images(k);
  std::vector<Elem> phi(n_);
  auto try_images = [&]() {
    phi[identity_] = identity_;
    for (Elem g : bfs_order)
      if (g != identity_) phi[g] = mul(phi[par[g]], images[via[g]]);
    std::vector<char> hit(n_, 0);
    for (int g = 0; g < n_; ++g) {
      if (hit[phi[g]]) return;
      hit[phi[g]] = 1;
    }
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (phi[mul(a, b)] != mul(phi[a], phi[b])) return;
    found.push_back(phi);
  };
  std::vector<int> idx(k, 0);
  for (;;) {
    for (int i = 0; i < k; ++i) images[i] = candidates[i][idx[i]];
    try_images();
    int i = k - 1;
    while (i >= 0 && ++idx[i] == static_cast<int>(candidates[i].size())) idx[i--] = 0;
    if (i < 0) break;
  }
  std::sort(found.begin(), found.end());
  automorphisms_ = std::move(found);
  return automorphisms_;
}

std::pair<GroupTable, std::vector<Elem>> GroupTable::quotient(const std::vector<Elem>& N) const {
  std::vector<Elem> sub = N;
  std::sort(sub.begin(), sub.end());
  sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
  if (!is_normal_subgroup(*this, sub))
    throw std::invalid_argument("quotient: N is not a normal subgroup");
  std::vector<int> coset_of(n_, -1);
  std::vector<Elem> reps;
  for (int g = 0; g < n_; ++g) {
    if (coset_of[g] >= 0) continue;
    int idx = static_cast<int>(reps.size());
    reps.push_back(g);  // g is the minimal element of its coset
    for (Elem u : sub) coset_of[mul(g, u)] = idx;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<std::string> names(q);
  std::vector<Elem> table(static_cast<size_t>(q) * q);
  for (int a = 0; a < q; ++a) {
    names[a] = "[" + names_[reps[a]] + "]";
    for (int b = 0; b < q; ++b)
      table[static_cast<size_t>(a) * q + b] = coset_of[mul(reps[a], reps[b])];
  }
  GroupTable Q = from_table(std::move(names), std::move(table));
  Q.desc_ = desc_ + "/N" + std::to_string(sub.size());
  return {std::move(Q), std::move(coset_of)};
}

std::string GroupTable::serialize() const {
  std::ostringstream out;
  out << "zsgroup 1\n";
  out << "order " << n_ << "\n";
  out << "desc " << desc_ << "\n";
  for (int g = 0; g < n_; ++g) out << "name " << names_[g] << "\n";
  for (int a = 0; a < n_; ++a) {
    out << "row";
    for (int b = 0; b < n_; ++b) out << ' ' << mul(a, b);
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

GroupTable GroupTable::deserialize(std::istream& in) {
  std::string tok;
  int version = 0;
  if (!(in >> tok >> version) || tok != "zsgroup" || version != 1)
    throw std::invalid_argument("group deserialize: bad header");
  int n = 0;
  if (!(in >> tok >> n) || tok != "order" || n < 1 || n > kMaxOrder)
    throw std::invalid_argument("group deserialize: bad order");
  std::string desc;
  if (!(in >> tok >> desc) || tok != "desc")
    throw std::invalid_argument("group deserialize: bad desc line");
  std::vector<std::string> names(n);
  for (int g = 0; g < n; ++g)
    if (!(in >> tok >> names[g]) || tok != "name")
      throw std::invalid_argument("group deserialize: bad name line");
  std::vector<Elem> table(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    if (!(in >> tok) || tok != "row")
      throw std::invalid_argument("group deserialize: bad row line");
    for (int b = 0; b < n; ++b)
      if (!(in >> table[static_cast<size_t>(a) * n + b]))
        throw std::invalid_argument("group deserialize: bad row entry");
  }
  if (!(in >> tok) || tok != "end")
    throw std::invalid_argument("group deserialize: missing end");
  GroupTable G = from_table(std::move(names), std::move(table));
  G.desc_ = desc;
  return G;
}

GroupTable GroupTable::deserialize(const std::string& text) {
  std::istringstream in(text);
  return deserialize(in);
}

}  // namespace zs
