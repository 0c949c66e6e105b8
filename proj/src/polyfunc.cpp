#include "derfun/polyfunc.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

namespace derfun {

// ------------------------------------------------------------ FunctorExpr

FunctorExpr FunctorExpr::power(Family f, int d) {
    switch (f) {
        case Family::Gamma: return gamma(d);
        case Family::Lambda: return lambda(d);
        case Family::Sym: return sym(d);
    }
    return gamma(d);
}

FunctorExpr FunctorExpr::tensor(std::vector<FunctorExpr> fs) {
    FunctorExpr e{Kind::Tensor, 0, 0, 0, {}};
    e.kids = std::move(fs);
    return e;
}

FunctorExpr FunctorExpr::direct_sum(std::vector<FunctorExpr> fs) {
    FunctorExpr e{Kind::DirectSum, 0, 0, 0, {}};
    e.kids = std::move(fs);
    return e;
}

FunctorExpr FunctorExpr::mod_p(std::uint32_t p, FunctorExpr inner) {
    if (!is_prime(p)) throw InputError("ModP needs a prime");
    FunctorExpr e{Kind::ModP, 0, 0, 0, {}};
    e.p = p;
    e.kids = {std::move(inner)};
    return e;
}

FunctorExpr FunctorExpr::twisted(int r, FunctorExpr inner) {
    if (r < 0) throw InputError("negative twist");
    FunctorExpr e{Kind::Twist, 0, 0, 0, {}};
    e.twist = r;
    e.kids = {std::move(inner)};
    return e;
}

void FunctorExpr::validate(std::uint32_t ctx) const {
    switch (kind) {
        case Kind::Gamma:
        case Kind::Lambda:
        case Kind::Sym:
        case Kind::TruncatedQ:
            if (d < 0) throw InputError("negative degree in functor");
            if (kind == Kind::TruncatedQ && ctx == 0) throw InputError("TruncatedQ needs a ModP context");
            return;
        case Kind::Tensor:
        case Kind::DirectSum:
            for (const auto& k : kids) k.validate(ctx);
            return;
        case Kind::ModP:
            kids.at(0).validate(p);
            return;
        case Kind::Twist:
            if (ctx == 0) throw InputError("Twist needs a ModP context");
            kids.at(0).validate(ctx);
            return;
    }
}

long FunctorExpr::weight(std::uint32_t ctx) const {
    switch (kind) {
        case Kind::Gamma:
        case Kind::Lambda:
        case Kind::Sym:
        case Kind::TruncatedQ:
            return d;
        case Kind::Tensor: {
            long w = 0;
            for (const auto& k : kids) w += k.weight(ctx);
            return w;
        }
        case Kind::DirectSum: {
            if (kids.empty()) return 0;
            long w = kids[0].weight(ctx);
            for (const auto& k : kids) {
                if (k.weight(ctx) != w) throw InputError("direct sum of mixed weights");
            }
            return w;
        }
        case Kind::ModP:
            return kids.at(0).weight(p);
        case Kind::Twist: {
            if (ctx == 0) throw InputError("Twist needs a ModP context");
            long w = kids.at(0).weight(ctx);
            for (int i = 0; i < twist; ++i) w *= ctx;
            return w;
        }
    }
    return 0;
}

std::string FunctorExpr::to_string() const {
    std::ostringstream os;
    auto list = [&](const char* sep) {
        os << "(";
        for (std::size_t i = 0; i < kids.size(); ++i) os << (i ? sep : "") << kids[i].to_string();
        os << ")";
    };
    switch (kind) {
        case Kind::Gamma: os << "Gamma^" << d; break;
        case Kind::Lambda: os << "Lambda^" << d; break;
        case Kind::Sym: os << "S^" << d; break;
        case Kind::TruncatedQ: os << "Q^" << d; break;
        case Kind::Tensor: list(" x "); break;
        case Kind::DirectSum: list(" + "); break;
        case Kind::ModP: os << "ModP(" << p << ", " << kids.at(0).to_string() << ")"; break;
        case Kind::Twist: os << kids.at(0).to_string() << "^(" << twist << ")"; break;
    }
    return os.str();
}

// ------------------------------------------------------------------ bases

std::size_t PowerBasis::index_of(const std::vector<int>& key) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), key);
    if (it == elems.end() || *it != key) throw InputError("key not in basis");
    return std::size_t(it - elems.begin());
}

static void gen_exponents(int r, int d, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    int i = int(cur.size());
    if (i == r - 1) {
        cur.push_back(d);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = 0; e <= d; ++e) {
        cur.push_back(e);
        gen_exponents(r, d - e, cur, out);
        cur.pop_back();
    }
}

static void gen_subsets(int r, int d, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (int(cur.size()) == d) {
        out.push_back(cur);
        return;
    }
    for (int i = start; i <= r - (d - int(cur.size())); ++i) {
        cur.push_back(i);
        gen_subsets(r, d, i + 1, cur, out);
        cur.pop_back();
    }
}

std::shared_ptr<const PowerBasis> power_basis(Family f, int rank, int degree) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const PowerBasis>> cache;
    if (rank < 0 || degree < 0) throw InputError("negative rank or degree");
    auto key = std::make_tuple(int(f), rank, degree);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto b = std::make_shared<PowerBasis>();
    b->family = f;
    b->rank = rank;
    b->degree = degree;
    std::vector<int> cur;
    if (f == Family::Lambda) {
        gen_subsets(rank, degree, 0, cur, b->elems);
    } else if (rank == 0) {
        if (degree == 0) b->elems.push_back({});
    } else {
        gen_exponents(rank, degree, cur, b->elems);
    }
    cache[key] = b;
    return b;
}

Int binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Int multinomial(const std::vector<int>& parts) {
    Int r = 1;
    long tot = 0;
    for (int k : parts) {
        tot += k;
        r *= binomial(tot, k);
    }
    return r;
}

// ------------------------------------------------------------ arithmetic

namespace {

struct ZRing {
    using T = Int;
    T zero() const { return 0; }
    T one() const { return 1; }
    T from(const Int& v) const { return v; }
    T add(const T& a, const T& b) const { return a + b; }
    T mul(const T& a, const T& b) const { return a * b; }
    T binom(long n, long k) const { return binomial(n, k); }
    bool is_zero(const T& a) const { return sgn(a) == 0; }
    Int to_int(const T& a) const { return a; }
    std::optional<std::uint32_t> modulus() const { return {}; }
};

struct FpRing {
    std::uint64_t p;
    using T = std::uint64_t;
    T zero() const { return 0; }
    T one() const { return 1 % p; }
    T from(const Int& v) const { return mpz_fdiv_ui(v.get_mpz_t(), p); }
    T add(T a, T b) const { return (a + b) % p; }
    T mul(T a, T b) const { return (a * b) % p; }
    // Lucas' theorem
    T binom(long n, long k) const {
        if (k < 0 || k > n) return 0;
        T r = 1;
        while (n > 0 || k > 0) {
            long ni = n % long(p), ki = k % long(p);
            if (ki > ni) return 0;
            r = mul(r, mpz_fdiv_ui(binomial(ni, ki).get_mpz_t(), p));
            n /= long(p);
            k /= long(p);
        }
        return r;
    }
    bool is_zero(T a) const { return a == 0; }
    Int to_int(T a) const { return Int(static_cast<unsigned long>(a)); }
    std::optional<std::uint32_t> modulus() const { return std::uint32_t(p); }
};

template <class R>
typename R::T rpow(const R& ring, typename R::T a, int k) {
    typename R::T r = ring.one();
    for (int i = 0; i < k; ++i) r = ring.mul(r, a);
    return r;
}

template <class R>
IntMatrix power_morphism_impl(const R& ring, Family fam, int d, const IntMatrix& m) {
    int a = int(m.cols()), b = int(m.rows());
    auto src = power_basis(fam, a, d);
    auto dst = power_basis(fam, b, d);
    // columns of m as (row, value) lists
    std::vector<std::vector<std::pair<int, typename R::T>>> col(a);
    for (const auto& e : m.entries()) {
        auto v = ring.from(e.value);
        if (!ring.is_zero(v)) col[e.col].emplace_back(int(e.row), v);
    }
    std::vector<Entry> out;
    using Poly = std::map<std::vector<int>, typename R::T>;
    for (std::size_t s = 0; s < src->elems.size(); ++s) {
        const auto& key = src->elems[s];
        Poly P;
        if (fam == Family::Lambda) {
            P[{}] = ring.one();
            for (int i : key) {
                Poly Q;
                for (const auto& [t, c] : P) {
                    for (const auto& [j, f] : col[i]) {
                        if (std::find(t.begin(), t.end(), j) != t.end()) continue;
                        std::vector<int> u = t;
                        auto pos = std::upper_bound(u.begin(), u.end(), j);
                        long greater = long(u.end() - pos);
                        u.insert(pos, j);
                        typename R::T v = ring.mul(c, f);
                        if (greater % 2) v = ring.mul(v, ring.from(Int(-1)));
                        auto& slot = Q[u];
                        slot = ring.add(slot, v);
                    }
                }
                P.swap(Q);
            }
        } else {
            P[std::vector<int>(b, 0)] = ring.one();
            for (int i = 0; i < a && !P.empty(); ++i) {
                int e = key[i];
                if (e == 0) continue;
                const auto& ci = col[i];
                Poly Q;
                int k = int(ci.size());
                std::vector<int> cur;
                if (k == 0) {
                    P.clear();
                    break;
                }
                // distribute e among the nonzero rows of column i
                std::function<void(int, int)> rec = [&](int idx, int left) {
                    if (idx == k - 1) {
                        cur.push_back(left);
                        typename R::T coef = ring.one();
                        for (int t = 0; t < k; ++t) coef = ring.mul(coef, rpow(ring, ci[t].second, cur[t]));
                        if (fam == Family::Sym) coef = ring.mul(coef, ring.from(multinomial(cur)));
                        if (!ring.is_zero(coef)) {
                            for (const auto& [u, c] : P) {
                                std::vector<int> w = u;
                                typename R::T v = ring.mul(c, coef);
                                for (int t = 0; t < k; ++t) {
                                    int j = ci[t].first;
                                    if (fam == Family::Gamma) v = ring.mul(v, ring.binom(u[j] + cur[t], cur[t]));
                                    w[j] += cur[t];
                                }
                                if (ring.is_zero(v)) continue;
                                auto& slot = Q[w];
                                slot = ring.add(slot, v);
                            }
                        }
                        cur.pop_back();
                        return;
                    }
                    for (int x = 0; x <= left; ++x) {
                        cur.push_back(x);
                        rec(idx + 1, left - x);
                        cur.pop_back();
                    }
                };
                rec(0, e);
                P.swap(Q);
            }
        }
        for (const auto& [w, c] : P) {
            if (ring.is_zero(c)) continue;
            out.push_back({std::uint32_t(dst->index_of(w)), std::uint32_t(s), ring.to_int(c)});
        }
    }
    return IntMatrix::from_triplets(dst->elems.size(), src->elems.size(), std::move(out), ring.modulus());
}

IntMatrix power_morphism(Family fam, int d, const IntMatrix& m, std::uint32_t p) {
    if (p) return power_morphism_impl(FpRing{p}, fam, d, m);
    return power_morphism_impl(ZRing{}, fam, d, m);
}

std::size_t power_dim(Family f, std::size_t r, int d) {
    if (d < 0) return 0;
    if (f == Family::Lambda) return binomial(long(r), d).get_ui();
    if (r == 0) return d == 0 ? 1 : 0;
    return binomial(long(r) + d - 1, d).get_ui();
}

std::size_t dim_impl(const FunctorExpr& f, std::size_t r, std::uint32_t p);

std::size_t truncated_dim(std::size_t r, int d, std::uint32_t p) {
    // rank of phi : S^d -> Gamma^d, x^e -> prod e_i! gamma_e, over F_p
    auto B = power_basis(Family::Sym, int(r), d);
    std::vector<Entry> es;
    for (std::size_t i = 0; i < B->elems.size(); ++i) {
        Int c = 1;
        for (int e : B->elems[i]) c *= multinomial(std::vector<int>(std::size_t(e), 1));
        es.push_back({std::uint32_t(i), std::uint32_t(i), c});
    }
    auto phi = IntMatrix::from_triplets(B->elems.size(), B->elems.size(), std::move(es), p);
    return fp_rank(phi, p);
}

std::size_t dim_impl(const FunctorExpr& f, std::size_t r, std::uint32_t p) {
    using K = FunctorExpr::Kind;
    switch (f.kind) {
        case K::Gamma: return power_dim(Family::Gamma, r, f.d);
        case K::Sym: return power_dim(Family::Sym, r, f.d);
        case K::Lambda: return power_dim(Family::Lambda, r, f.d);
        case K::TruncatedQ:
            if (!p) throw InputError("TruncatedQ needs a ModP context");
            return truncated_dim(r, f.d, p);
        case K::Tensor: {
            std::size_t n = 1;
            for (const auto& k : f.kids) n *= dim_impl(k, r, p);
            return n;
        }
        case K::DirectSum: {
            std::size_t n = 0;
            for (const auto& k : f.kids) n += dim_impl(k, r, p);
            return n;
        }
        case K::ModP: return dim_impl(f.kids.at(0), r, f.p);
        case K::Twist:
            if (!p) throw InputError("Twist needs a ModP context");
            return dim_impl(f.kids.at(0), r, p);
    }
    return 0;
}

IntMatrix restrict_to(const IntMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    std::map<std::size_t, std::uint32_t> rpos, cpos;
    for (std::size_t i = 0; i < rows.size(); ++i) rpos[rows[i]] = std::uint32_t(i);
    for (std::size_t i = 0; i < cols.size(); ++i) cpos[cols[i]] = std::uint32_t(i);
    std::vector<Entry> es;
    for (const auto& e : m.entries()) {
        auto c = cpos.find(e.col);
        if (c == cpos.end()) continue;
        auto r = rpos.find(e.row);
        if (r == rpos.end()) throw StructuralError("subspace is not invariant");
        es.push_back({r->second, c->second, e.value});
    }
    return IntMatrix::from_triplets(rows.size(), cols.size(), std::move(es), m.modulus());
}

std::vector<std::size_t> truncated_positions(int rank, int d, std::uint32_t p) {
    auto B = power_basis(Family::Gamma, rank, d);
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < B->elems.size(); ++i) {
        bool ok = true;
        for (int e : B->elems[i]) ok = ok && e < int(p);
        if (ok) pos.push_back(i);
    }
    return pos;
}

IntMatrix morph_impl(const FunctorExpr& f, const IntMatrix& m, std::uint32_t p) {
    using K = FunctorExpr::Kind;
    switch (f.kind) {
        case K::Gamma: return power_morphism(Family::Gamma, f.d, m, p);
        case K::Sym: return power_morphism(Family::Sym, f.d, m, p);
        case K::Lambda: return power_morphism(Family::Lambda, f.d, m, p);
        case K::TruncatedQ: {
            if (!p) throw InputError("TruncatedQ needs a ModP context");
            IntMatrix g = power_morphism(Family::Gamma, f.d, m, p);
            return restrict_to(g, truncated_positions(int(m.rows()), f.d, p),
                               truncated_positions(int(m.cols()), f.d, p));
        }
        case K::Tensor: {
            IntMatrix acc = IntMatrix::identity(1);
            if (p) acc = acc.reduce_mod(p);
            for (const auto& k : f.kids) acc = kronecker(acc, morph_impl(k, m, p));
            return acc;
        }
        case K::DirectSum: {
            std::vector<IntMatrix> blocks;
            for (const auto& k : f.kids) blocks.push_back(morph_impl(k, m, p));
            return block_diagonal(blocks);
        }
        case K::ModP: return morph_impl(f.kids.at(0), m.reduce_mod(f.p), f.p);
        case K::Twist:
            // a^p = a on F_p, so precomposition with Frobenius leaves matrices unchanged
            if (!p) throw InputError("Twist needs a ModP context");
            return morph_impl(f.kids.at(0), m, p);
    }
    return {};
}

}  // namespace

std::size_t eval_dim(const FunctorExpr& f, std::size_t r) {
    f.validate();
    return dim_impl(f, r, 0);
}

IntMatrix eval_morphism(const FunctorExpr& f, const IntMatrix& m) {
    f.validate();
    if (m.modulus()) {
        if (f.kind != FunctorExpr::Kind::ModP || f.p != *m.modulus()) {
            throw StructuralError("mod-p matrix needs a matching ModP functor");
        }
    }
    return morph_impl(f, m, 0);
}

std::vector<std::vector<int>> truncated_basis(int rank, int d, std::uint32_t p) {
    auto B = power_basis(Family::Gamma, rank, d);
    std::vector<std::vector<int>> out;
    for (auto i : truncated_positions(rank, d, p)) out.push_back(B->elems[i]);
    return out;
}

// ------------------------------------------------------------ natural maps

namespace {

std::optional<std::uint32_t> mod_of(const NatContext& c) {
    if (c.p) return c.p;
    return {};
}

long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

IntMatrix identity_on(Family f, int rank, int d, std::optional<std::uint32_t> mod) {
    auto n = power_dim(f, std::size_t(rank), d);
    IntMatrix I = IntMatrix::identity(n);
    return mod ? I.reduce_mod(*mod) : I;
}

// sign of merging sorted disjoint tuples u (first) and v
int merge_sign(const std::vector<int>& u, const std::vector<int>& v) {
    long inv = 0;
    for (int x : u) {
        for (int y : v) {
            if (y < x) ++inv;
        }
    }
    return inv % 2 ? -1 : 1;
}

IntMatrix mult_map(Family fam, int rank, int a, int b, std::optional<std::uint32_t> mod) {
    auto A = power_basis(fam, rank, a), B = power_basis(fam, rank, b), C = power_basis(fam, rank, a + b);
    std::vector<Entry> es;
    for (std::size_t i = 0; i < A->elems.size(); ++i) {
        for (std::size_t j = 0; j < B->elems.size(); ++j) {
            const auto &u = A->elems[i], &v = B->elems[j];
            std::uint32_t col = std::uint32_t(i * B->elems.size() + j);
            if (fam == Family::Lambda) {
                std::vector<int> w;
                std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(w));
                if (w.size() != u.size() + v.size()) continue;
                es.push_back({std::uint32_t(C->index_of(w)), col, Int(merge_sign(u, v))});
            } else {
                std::vector<int> w(static_cast<std::size_t>(rank));
                Int c = 1;
                for (int t = 0; t < rank; ++t) {
                    w[t] = u[t] + v[t];
                    if (fam == Family::Gamma) c *= binomial(w[t], u[t]);
                }
                es.push_back({std::uint32_t(C->index_of(w)), col, c});
            }
        }
    }
    return IntMatrix::from_triplets(C->elems.size(), A->elems.size() * B->elems.size(), std::move(es), mod);
}

IntMatrix comult_map(Family fam, int rank, int a, int b, std::optional<std::uint32_t> mod) {
    auto A = power_basis(fam, rank, a), B = power_basis(fam, rank, b), C = power_basis(fam, rank, a + b);
    std::vector<Entry> es;
    for (std::size_t k = 0; k < C->elems.size(); ++k) {
        const auto& w = C->elems[k];
        for (std::size_t i = 0; i < A->elems.size(); ++i) {
            const auto& u = A->elems[i];
            if (fam == Family::Lambda) {
                if (!std::includes(w.begin(), w.end(), u.begin(), u.end())) continue;
                std::vector<int> v;
                std::set_difference(w.begin(), w.end(), u.begin(), u.end(), std::back_inserter(v));
                std::size_t j = B->index_of(v);
                es.push_back({std::uint32_t(i * B->elems.size() + j), std::uint32_t(k), Int(merge_sign(u, v))});
            } else {
                std::vector<int> v(static_cast<std::size_t>(rank));
                bool ok = true;
                Int c = 1;
                for (int t = 0; t < rank && ok; ++t) {
                    v[t] = w[t] - u[t];
                    ok = v[t] >= 0;
                    if (ok && fam == Family::Sym) c *= binomial(w[t], u[t]);
                }
                if (!ok) continue;
                std::size_t j = B->index_of(v);
                es.push_back({std::uint32_t(i * B->elems.size() + j), std::uint32_t(k), c});
            }
        }
    }
    return IntMatrix::from_triplets(A->elems.size() * B->elems.size(), C->elems.size(), std::move(es), mod);
}

IntMatrix verschiebung_map(int rank, std::uint32_t p, int r) {
    int d = int(ipow(p, r));
    auto G = power_basis(Family::Gamma, rank, d);
    std::vector<Entry> es;
    for (int i = 0; i < rank; ++i) {
        std::vector<int> e(std::size_t(rank), 0);
        e[i] = d;
        es.push_back({std::uint32_t(i), std::uint32_t(G->index_of(e)), Int(1)});
    }
    return IntMatrix::from_triplets(std::size_t(rank), G->elems.size(), std::move(es), p);
}

IntMatrix frobenius_map(int rank, std::uint32_t p, int r) {
    return verschiebung_map(rank, p, r).transpose();
}

}  // namespace

IntMatrix nat_map(const std::string& name, const NatContext& c) {
    auto mod = mod_of(c);
    if (c.p && !is_prime(c.p)) throw InputError("nat_map: p must be prime");
    if (c.rank < 0 || c.a < 0 || c.b < 0) throw InputError("nat_map: negative parameter");
    if (name == "mult") return mult_map(c.family, c.rank, c.a, c.b, mod);
    if (name == "comult") return comult_map(c.family, c.rank, c.a, c.b, mod);
    if (name == "verschiebung") {
        if (!c.p) throw InputError("verschiebung needs a prime");
        return verschiebung_map(c.rank, c.p, c.twist);
    }
    if (name == "frobenius") {
        if (!c.p) throw InputError("frobenius needs a prime");
        return frobenius_map(c.rank, c.p, c.twist);
    }
    if (name == "lambda_to_gamma") {
        if (c.p != 2) throw InputError("lambda_to_gamma exists only in characteristic 2");
        auto L = power_basis(Family::Lambda, c.rank, c.a);
        auto G = power_basis(Family::Gamma, c.rank, c.a);
        std::vector<Entry> es;
        for (std::size_t i = 0; i < L->elems.size(); ++i) {
            std::vector<int> e(std::size_t(c.rank), 0);
            for (int x : L->elems[i]) e[x] = 1;
            es.push_back({std::uint32_t(G->index_of(e)), std::uint32_t(i), Int(1)});
        }
        return IntMatrix::from_triplets(G->elems.size(), L->elems.size(), std::move(es), 2);
    }
    if (name == "koszul_step") {
        std::size_t src = power_dim(Family::Gamma, c.rank, c.a) * power_dim(Family::Lambda, c.rank, c.b);
        if (c.a == 0) return IntMatrix(0, src, mod);
        IntMatrix step1 = kronecker(comult_map(Family::Gamma, c.rank, c.a - 1, 1, mod),
                                    identity_on(Family::Lambda, c.rank, c.b, mod));
        IntMatrix step2 = kronecker(identity_on(Family::Gamma, c.rank, c.a - 1, mod),
                                    mult_map(Family::Lambda, c.rank, 1, c.b, mod));
        return step2 * step1;
    }
    if (name == "skew_koszul_step") {
        if (c.p != 2) throw InputError("skew_koszul_step is defined in characteristic 2");
        std::size_t src = power_dim(Family::Gamma, c.rank, c.a) * power_dim(Family::Gamma, c.rank, c.b);
        if (c.a < 2) return IntMatrix(0, src, 2);
        IntMatrix step1 = kronecker(comult_map(Family::Gamma, c.rank, c.a - 2, 2, 2),
                                    identity_on(Family::Gamma, c.rank, c.b, 2));
        IntMatrix step2 = kronecker(kronecker(identity_on(Family::Gamma, c.rank, c.a - 2, 2), verschiebung_map(c.rank, 2, 1)),
                                    identity_on(Family::Gamma, c.rank, c.b, 2));
        IntMatrix step3 = kronecker(identity_on(Family::Gamma, c.rank, c.a - 2, 2),
                                    mult_map(Family::Gamma, c.rank, 1, c.b, 2));
        return step3 * (step2 * step1);
    }
    if (name == "q_res_d1") {
        if (!c.p) throw InputError("q_res_d1 needs a prime");
        std::size_t src = power_dim(Family::Sym, c.rank, c.a) * power_dim(Family::Lambda, c.rank, c.b);
        if (c.b == 0) return IntMatrix(0, src, mod);
        int P = int(c.p);
        IntMatrix step1 = kronecker(identity_on(Family::Sym, c.rank, c.a, mod),
                                    comult_map(Family::Lambda, c.rank, 1, c.b - 1, mod));
        IntMatrix step2 = kronecker(kronecker(identity_on(Family::Sym, c.rank, c.a, mod), frobenius_map(c.rank, c.p, 1)),
                                    identity_on(Family::Lambda, c.rank, c.b - 1, mod));
        IntMatrix step3 = kronecker(mult_map(Family::Sym, c.rank, c.a, P, mod),
                                    identity_on(Family::Lambda, c.rank, c.b - 1, mod));
        return step3 * (step2 * step1);
    }
    if (name == "q_res_d0") {
        if (!c.p) throw InputError("q_res_d0 needs a prime");
        auto S = power_basis(Family::Sym, c.rank, c.a);
        auto Q = truncated_basis(c.rank, c.a, c.p);
        std::vector<Entry> es;
        for (std::size_t i = 0; i < S->elems.size(); ++i) {
            auto it = std::lower_bound(Q.begin(), Q.end(), S->elems[i]);
            if (it == Q.end() || *it != S->elems[i]) continue;
            Int coef = 1;
            for (int e : S->elems[i]) coef *= multinomial(std::vector<int>(static_cast<std::size_t>(e), 1));
            es.push_back({std::uint32_t(it - Q.begin()), std::uint32_t(i), coef});
        }
        return IntMatrix::from_triplets(Q.size(), S->elems.size(), std::move(es), c.p);
    }
    throw InputError("unknown natural map: " + name);
}

bool base_change_check(const FunctorExpr& f, int r, std::uint32_t p, int trials, std::uint64_t seed) {
    if (!is_prime(p)) throw InputError("base_change_check: p must be prime");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-5, 5);
    FunctorExpr fp = FunctorExpr::mod_p(p, f);
    for (int t = 0; t < trials; ++t) {
        std::vector<std::vector<long>> rows(static_cast<std::size_t>(r), std::vector<long>(static_cast<std::size_t>(r)));
        for (auto& row : rows) {
            for (auto& x : row) x = dist(rng);
        }
        IntMatrix m = IntMatrix::from_dense(rows);
        if (!(eval_morphism(f, m).reduce_mod(p) == eval_morphism(fp, m))) return false;
    }
    return true;
}

}  // namespace derfun
