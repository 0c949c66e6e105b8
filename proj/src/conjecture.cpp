#include "derfun/conjecture.hpp"

#include "derfun/cartan.hpp"
#include "derfun/closedform.hpp"
#include "derfun/doldkan.hpp"
#include "derfun/polyfunc.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>

namespace derfun {

namespace {

long ipow(long b, int e) {
    long x = 1;
    while (e-- > 0) x *= b;
    return x;
}

std::uint64_t choose(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    return binomial(n, k).get_ui();
}

std::vector<std::uint32_t> primes_upto(long n) {
    std::vector<std::uint32_t> ps;
    for (long q = 2; q <= n; ++q)
        if (is_prime(std::uint64_t(q))) ps.push_back(std::uint32_t(q));
    return ps;
}

int distinct_positive(const std::vector<int>& t) {
    std::set<int> s;
    for (int x : t)
        if (x > 0) s.insert(x);
    return int(s.size());
}

long seq_shift(const std::vector<int>& t, std::uint32_t p) {
    if (t.size() <= 1) return 1;
    long s = 0;
    for (std::size_t j = 1; j < t.size(); ++j) s += ipow(p, t[j]);
    return 2 * s + 1;
}

IntMatrix scaled(const IntMatrix& m, long by) {
    std::vector<Entry> es;
    for (const auto& e : m.entries()) es.push_back({e.row, e.col, e.value * by});
    return IntMatrix::from_triplets(m.rows(), m.cols(), std::move(es));
}

/// Weight-k part of (Gamma(A[1]) (x) Lambda(A[0]), p d_Kos), lowest degree at `base`.
ChainComplex small_model(int k, std::uint32_t p, int r, int base) {
    ChainComplex c(base, base + k);
    auto dim = [&](int a) {
        return eval_dim(FunctorExpr::gamma(a), std::size_t(r)) * eval_dim(FunctorExpr::lambda(k - a), std::size_t(r));
    };
    for (int a = 0; a <= k; ++a) c.set_rank(base + a, dim(a));
    for (int a = 1; a <= k; ++a) {
        NatContext ctx;
        ctx.rank = r;
        ctx.a = a;
        ctx.b = k - a;
        c.set_differential(base + a, scaled(nat_map("koszul_step", ctx), long(p)));
    }
    return c;
}

}  // namespace

int ConjTerm::weight() const {
    int w = d0;
    for (const auto& [t, k] : parts) w += k * int(ipow(p, t.front()));
    return w;
}

std::string ConjTerm::to_string() const {
    std::string f = n % 2 ? "L" : "G";
    std::string s = f + std::to_string(d0) + "(A)";
    for (const auto& [t, k] : parts) {
        s += " * " + f + std::to_string(k) + "(A(x)Z/" + std::to_string(p) + "^" + std::to_string(distinct_positive(t)) + "; (";
        for (std::size_t j = 0; j < t.size(); ++j) s += (j ? "," : "") + std::to_string(t[j]);
        s += "))";
    }
    return s + " [" + std::to_string(shift) + "]";
}

std::vector<ConjTerm> conjecture_terms(int d, int n) {
    if (d < 1 || n < 1) throw InputError("conjecture_terms needs d >= 1 and n >= 1");
    bool odd = n % 2;
    int M = odd ? n / 2 + 1 : n / 2;
    std::vector<ConjTerm> out;
    for (std::uint32_t p : primes_upto(d)) {
        std::vector<std::vector<int>> alphas;
        std::vector<int> cur;
        std::function<void(int)> seqs = [&](int maxv) {
            if (int(cur.size()) == M) {
                alphas.push_back(cur);
                return;
            }
            for (int v = cur.empty() ? 1 : 0; v <= maxv; ++v) {
                if (cur.empty() && ipow(p, v) > d) break;
                cur.push_back(v);
                seqs(v);
                cur.pop_back();
            }
        };
        int tmax = 0;
        while (ipow(p, tmax + 1) <= d) ++tmax;
        seqs(tmax);

        for (int d0 = 0; d0 < d; ++d0) {
            std::vector<int> mult(alphas.size(), 0);
            std::function<void(std::size_t, long)> fam = [&](std::size_t idx, long left) {
                if (idx == alphas.size()) {
                    if (left) return;
                    ConjTerm t;
                    t.p = p;
                    t.n = n;
                    t.d0 = d0;
                    long sh = long(n) * d0;
                    for (std::size_t j = 0; j < alphas.size(); ++j) {
                        if (!mult[j]) continue;
                        t.parts.push_back({alphas[j], mult[j]});
                        sh += seq_shift(alphas[j], p) * mult[j] + (odd ? 0 : mult[j]);
                    }
                    t.shift = int(sh);
                    out.push_back(std::move(t));
                    return;
                }
                long w = ipow(p, alphas[idx].front());
                for (int k = 0; k * w <= left; ++k) {
                    mult[idx] = k;
                    fam(idx + 1, left - k * w);
                }
                mult[idx] = 0;
            };
            fam(0, d - d0);
        }
    }
    return out;
}

GradedGroup lambda_of_modp(int k, std::uint32_t p, int r) {
    if (k == 0) return {{0, AbGroupType::free(1)}};
    return normalized(homology(small_model(k, p, r, 0)));
}

GradedGroup gamma_of_modp(int k, std::uint32_t p, int r) {
    if (k == 0) return {{0, AbGroupType::free(1)}};
    static std::mutex mu;
    static std::map<std::tuple<int, std::uint32_t, int>, GradedGroup> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(k, p, r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto g = normalized(derived_of_complex_all(FunctorExpr::gamma(k), IntMatrix::identity(std::size_t(r), long(p)), 0));
    cache.emplace(key, g);
    return g;
}

GradedGroup conj_term_homology(const ConjTerm& t, int r) {
    bool odd = t.n % 2;
    std::uint64_t base = odd ? choose(r, t.d0) : choose(r + t.d0 - 1, t.d0);
    GradedGroup g{{0, AbGroupType::free(base)}};
    for (const auto& [seq, k] : t.parts) {
        int o = distinct_positive(seq);
        GradedGroup piece;
        if (k == 1) {
            piece = derived_tensor_homology(r, t.p, o);
        } else if (o == 1) {
            piece = odd ? lambda_of_modp(k, t.p, r) : gamma_of_modp(k, t.p, r);
        } else {
            throw InputError("derived powers of iterated derived tensors are not implemented");
        }
        g = normalized(derived_tensor(g, piece));
    }
    return shift(g, t.shift);
}

GradedGroup conjecture_rhs(int d, int n, int r) {
    GradedGroup g;
    std::uint64_t diag = n % 2 ? choose(r, d) : choose(r + d - 1, d);
    add_into(g, n * d, AbGroupType::free(diag));
    for (const auto& t : conjecture_terms(d, n)) g = direct_sum(g, conj_term_homology(t, r));
    return normalized(g);
}

std::vector<ConjMismatch> conjecture_check(int d, int n_max, int r) {
    std::vector<ConjMismatch> bad;
    for (int n = 1; n <= n_max; ++n) {
        auto closed = integral_closed(d, n, r);
        if (!closed) throw InputError("no closed form for d=" + std::to_string(d) + " n=" + std::to_string(n));
        auto rhs = conjecture_rhs(d, n, r);
        std::set<int> degrees;
        for (const auto& [s, a] : *closed) degrees.insert(s);
        for (const auto& [s, a] : rhs) degrees.insert(s);
        for (int s : degrees) {
            AbGroupType x = closed->count(s) ? closed->at(s) : AbGroupType{};
            AbGroupType y = rhs.count(s) ? rhs.at(s) : AbGroupType{};
            if (x.free_rank != y.free_rank)
                bad.push_back({d, n, s, r, 0, std::to_string(x.free_rank), std::to_string(y.free_rank)});
            std::set<long> ps;
            for (const auto* g : {&x, &y})
                for (const auto& f : g->torsion)
                    for (long q = 2; q <= 64; ++q)
                        if (is_prime(std::uint64_t(q)) && f % q == 0) ps.insert(q);
            for (long q : ps)
                if (x.p_order(q) != y.p_order(q))
                    bad.push_back({d, n, s, r, q, x.p_order(q).get_str(), y.p_order(q).get_str()});
            if (x.torsion_order() != y.torsion_order())
                bad.push_back({d, n, s, r, -1, x.torsion_order().get_str(), y.torsion_order().get_str()});
        }
    }
    return bad;
}

ChainComplex tensor_complex(const ChainComplex& a, const ChainComplex& b) {
    int lo = a.lo() + b.lo(), hi = a.hi() + b.hi();
    ChainComplex c(lo, hi, a.modulus());
    // block offsets of A_i (x) B_j inside C_{i+j}
    std::map<std::pair<int, int>, std::size_t> off;
    for (int n = lo; n <= hi; ++n) {
        std::size_t o = 0;
        for (int i = a.lo(); i <= a.hi(); ++i) {
            int j = n - i;
            if (j < b.lo() || j > b.hi()) continue;
            off[{i, j}] = o;
            o += a.rank(i) * b.rank(j);
        }
        c.set_rank(n, o);
    }
    for (int n = lo + 1; n <= hi; ++n) {
        std::vector<Entry> es;
        for (int i = a.lo(); i <= a.hi(); ++i) {
            int j = n - i;
            if (j < b.lo() || j > b.hi()) continue;
            std::size_t src = off.at({i, j});
            if (i - 1 >= a.lo()) {
                auto m = kronecker(a.differential(i), IntMatrix::identity(b.rank(j)));
                std::size_t dst = off.at({i - 1, j});
                for (const auto& e : m.entries()) es.push_back({std::uint32_t(dst + e.row), std::uint32_t(src + e.col), e.value});
            }
            if (j - 1 >= b.lo()) {
                auto m = kronecker(IntMatrix::identity(a.rank(i)), b.differential(j));
                std::size_t dst = off.at({i, j - 1});
                bool neg = (i % 2) != 0;
                for (const auto& e : m.entries())
                    es.push_back({std::uint32_t(dst + e.row), std::uint32_t(src + e.col), neg ? Int(-e.value) : e.value});
            }
        }
        c.set_differential(n, IntMatrix::from_triplets(c.rank(n - 1), c.rank(n), std::move(es), a.modulus()));
    }
    return c;
}

GradedGroup n1_complex_homology(int d, std::uint32_t p, int r) {
    GradedGroup total;
    std::vector<int> k(std::size_t(d) + 1, 0);
    std::function<void(int, long)> rec = [&](int i, long left) {
        if (i == 0) {
            k[0] = int(left);
            ChainComplex c(k[0], k[0]);
            c.set_rank(k[0], choose(r, k[0]));
            for (int j = 1; j <= d; ++j)
                if (k[std::size_t(j)]) c = tensor_complex(c, small_model(k[std::size_t(j)], p, r, k[std::size_t(j)]));
            c.validate();
            total = direct_sum(total, homology(c));
            return;
        }
        long w = ipow(p, i);
        for (int m = 0; m * w <= left; ++m) {
            k[std::size_t(i)] = m;
            rec(i - 1, left - m * w);
        }
        k[std::size_t(i)] = 0;
    };
    rec(d, d);
    return normalized(total);
}

}  // namespace derfun
