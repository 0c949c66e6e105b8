#include "derfun/koszul.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace derfun {

namespace {

std::size_t fdim(Family f, int r, int d) {
    if (d < 0) return 0;
    return eval_dim(FunctorExpr::power(f, d), std::size_t(r));
}

long ipow(long b, int e) {
    long x = 1;
    while (e-- > 0) x *= b;
    return x;
}

int max_twist(std::uint32_t p, int d) {
    int s = 0;
    while (ipow(p, s + 1) <= d) ++s;
    return s;
}

std::size_t product_dim(const std::vector<TensorFactor>& fs, int r) {
    std::size_t n = 1;
    for (const auto& f : fs) n *= fdim(f.family, r, f.degree);
    return n;
}

/// Adds sign * (I_before (x) step (x) I_after) at the given block offsets, mod p.
void embed(std::vector<Entry>& out, const IntMatrix& step, std::size_t before, std::size_t after,
           std::size_t row_off, std::size_t col_off, bool negate, std::uint32_t p) {
    for (const auto& e : step.entries()) {
        Int v = e.value;
        if (negate) v = -v;
        for (std::size_t b = 0; b < before; ++b) {
            for (std::size_t a = 0; a < after; ++a) {
                std::size_t r = (b * step.rows() + e.row) * after + a;
                std::size_t c = (b * step.cols() + e.col) * after + a;
                out.push_back({std::uint32_t(row_off + r), std::uint32_t(col_off + c), v});
            }
        }
    }
    (void)p;
}

struct Move {
    std::size_t factor;                // the step acts on factors factor, factor+1
    IntMatrix step;
    std::vector<int> target;
    bool negate;
};

WeightComplex assemble(WeightComplex w, std::vector<WeightSummand> all,
                       const std::function<std::vector<Move>(const WeightSummand&)>& moves) {
    std::map<std::vector<int>, std::pair<int, std::size_t>> where;  // exponents -> (degree, position)
    for (auto& s : all) {
        int deg = 0;
        for (const auto& f : s.factors) deg += f.degree * (f.family == Family::Gamma && w.kind == WeightComplex::Kind::Koszul ? 2 : 1);
        s.dim = product_dim(s.factors, w.rank);
        auto& term = w.terms[deg];
        term.push_back(s);
    }
    for (auto& [deg, term] : w.terms) {
        std::sort(term.begin(), term.end(), [](const WeightSummand& a, const WeightSummand& b) { return a.exponents < b.exponents; });
        std::size_t off = 0;
        for (std::size_t k = 0; k < term.size(); ++k) {
            term[k].offset = off;
            off += term[k].dim;
            where[term[k].exponents] = {deg, k};
        }
    }
    w.complex = ChainComplex(0, w.d, w.p);
    for (int i = 0; i <= w.d; ++i) {
        std::size_t n = 0;
        if (auto it = w.terms.find(i); it != w.terms.end())
            for (const auto& s : it->second) n += s.dim;
        w.complex.set_rank(i, n);
    }
    for (int i = 1; i <= w.d; ++i) {
        std::vector<Entry> es;
        auto it = w.terms.find(i);
        if (it != w.terms.end()) {
            for (const auto& src : it->second) {
                for (const auto& mv : moves(src)) {
                    auto loc = where.find(mv.target);
                    if (loc == where.end()) throw StructuralError("weight complex: missing target summand");
                    if (loc->second.first != i - 1) throw StructuralError("weight complex: differential changes degree wrongly");
                    const auto& dst = w.terms.at(i - 1)[loc->second.second];
                    std::size_t before = 1, after = 1;
                    for (std::size_t f = 0; f < mv.factor; ++f) before *= fdim(src.factors[f].family, w.rank, src.factors[f].degree);
                    for (std::size_t f = mv.factor + 2; f < src.factors.size(); ++f)
                        after *= fdim(src.factors[f].family, w.rank, src.factors[f].degree);
                    embed(es, mv.step, before, after, dst.offset, src.offset, mv.negate, w.p);
                }
            }
        }
        w.complex.set_differential(i, IntMatrix::from_triplets(w.complex.rank(i - 1), w.complex.rank(i), std::move(es), w.p));
    }
    w.validate();
    return w;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::Gamma: return "Gamma";
        case Family::Lambda: return "Lambda";
        case Family::Sym: return "S";
    }
    return "?";
}

/// Dense row reduction over F_p; returns the pivot rows as a matrix whose
/// columns are a basis of the column space of m.
IntMatrix column_space(const IntMatrix& m, std::uint32_t p) {
    std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<std::uint64_t>> cols(C, std::vector<std::uint64_t>(R, 0));
    for (const auto& e : m.entries()) cols[e.col][e.row] = mpz_fdiv_ui(e.value.get_mpz_t(), p);
    auto inv = [p](std::uint64_t x) {
        std::uint64_t r = 1, e = p - 2;
        while (e) {
            if (e & 1) r = r * x % p;
            x = x * x % p;
            e >>= 1;
        }
        return r;
    };
    std::vector<std::vector<std::uint64_t>> basis;  // reduced, pivot at pivots[k]
    std::vector<std::size_t> pivots;
    for (auto& v : cols) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            std::uint64_t f = v[pivots[k]];
            if (!f) continue;
            for (std::size_t j = 0; j < R; ++j) v[j] = (v[j] + p - f * basis[k][j] % p) % p;
        }
        std::size_t piv = R;
        for (std::size_t j = 0; j < R; ++j)
            if (v[j]) {
                piv = j;
                break;
            }
        if (piv == R) continue;
        std::uint64_t iv = inv(v[piv]);
        for (auto& x : v) x = x * iv % p;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            std::uint64_t f = basis[k][piv];
            if (!f) continue;
            for (std::size_t j = 0; j < R; ++j) basis[k][j] = (basis[k][j] + p - f * v[j] % p) % p;
        }
        basis.push_back(v);
        pivots.push_back(piv);
    }
    std::vector<Entry> es;
    for (std::size_t k = 0; k < basis.size(); ++k)
        for (std::size_t j = 0; j < R; ++j)
            if (basis[k][j]) es.push_back({std::uint32_t(j), std::uint32_t(k), Int(static_cast<unsigned long>(basis[k][j]))});
    return IntMatrix::from_triplets(R, basis.size(), std::move(es), p);
}

}  // namespace

std::string WeightSummand::label() const {
    std::string s;
    for (const auto& f : factors) {
        if (f.degree == 0) continue;
        if (!s.empty()) s += " (x) ";
        s += std::string(family_name(f.family)) + "^" + std::to_string(f.degree);
        if (f.twist) s += "(V^(" + std::to_string(f.twist) + "))";
    }
    return s.empty() ? "k" : s;
}

FunctorExpr WeightSummand::functor(std::uint32_t p) const {
    std::vector<FunctorExpr> fs;
    for (const auto& f : factors) {
        FunctorExpr e = FunctorExpr::power(f.family, f.degree);
        fs.push_back(f.twist ? FunctorExpr::twisted(f.twist, e) : e);
    }
    return FunctorExpr::mod_p(p, FunctorExpr::tensor(std::move(fs)));
}

void WeightComplex::validate() const {
    complex.validate();
    for (const auto& [deg, term] : terms) {
        std::size_t n = 0;
        for (const auto& s : term) {
            if (eval_dim(s.functor(p), std::size_t(rank)) != s.dim)
                throw StructuralError("weight complex: summand " + s.label() + " has the wrong dimension");
            n += s.dim;
        }
        if (n != complex.rank(deg)) throw StructuralError("weight complex: term size mismatch");
    }
}

std::size_t WeightComplex::homology_dim(int i) const {
    if (i < complex.lo() || i > complex.hi()) return 0;
    std::size_t out = complex.rank(i - 1) && i > complex.lo() ? fp_rank(complex.differential(i), p) : 0;
    std::size_t in = i < complex.hi() ? fp_rank(complex.differential(i + 1), p) : 0;
    return complex.rank(i) - out - in;
}

std::string WeightComplex::to_string() const {
    std::ostringstream os;
    os << (kind == Kind::Koszul ? "koszul" : "skew-koszul") << " weight " << d << " p=" << p << " rank " << rank << "\n";
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        os << "  degree " << it->first << ":";
        for (const auto& s : it->second) os << " [" << s.label() << "]";
        os << "\n";
    }
    return os.str();
}

WeightComplex koszul_weight_complex(std::uint32_t p, int d, int r) {
    if (!is_prime(p)) throw InputError("koszul_weight_complex: p must be prime");
    if (d < 1 || r < 1) throw InputError("koszul_weight_complex: need d >= 1 and r >= 1");
    int S = max_twist(p, d);
    std::vector<WeightSummand> all;
    std::vector<int> ex;
    std::function<void(int, int)> rec = [&](int s, int left) {
        if (s > S) {
            if (left) return;
            WeightSummand w;
            w.exponents = ex;
            w.factors.push_back({Family::Lambda, ex[0], 0});
            for (int t = 1; t <= S; ++t) {
                w.factors.push_back({Family::Gamma, ex[std::size_t(2 * t - 1)], t});
                w.factors.push_back({Family::Lambda, ex[std::size_t(2 * t)], t});
            }
            all.push_back(std::move(w));
            return;
        }
        long unit = ipow(p, s);
        for (int k = 0; k * unit <= left; ++k) {
            for (int e = 0; (k + e) * unit <= left; ++e) {
                ex.push_back(k);
                ex.push_back(e);
                rec(s + 1, int(left - (k + e) * unit));
                ex.pop_back();
                ex.pop_back();
            }
        }
    };
    for (int e0 = 0; e0 <= d; ++e0) {
        ex = {e0};
        rec(1, d - e0);
    }
    WeightComplex w;
    w.kind = WeightComplex::Kind::Koszul;
    w.d = d;
    w.p = p;
    w.rank = r;
    auto moves = [p, r, S](const WeightSummand& s) {
        std::vector<Move> out;
        int parity = s.exponents[0];
        for (int t = 1; t <= S; ++t) {
            int k = s.exponents[std::size_t(2 * t - 1)], e = s.exponents[std::size_t(2 * t)];
            if (k > 0) {
                NatContext c{p, r, k, e, 1, Family::Gamma};
                auto tgt = s.exponents;
                tgt[std::size_t(2 * t - 1)] -= 1;
                tgt[std::size_t(2 * t)] += 1;
                out.push_back({std::size_t(2 * t - 1), nat_map("koszul_step", c), tgt, (parity % 2) == 1});
            }
            parity += e;
        }
        return out;
    };
    return assemble(std::move(w), std::move(all), moves);
}

WeightComplex skew_koszul_weight_complex(int d, int r) {
    if (d < 1 || r < 1) throw InputError("skew_koszul_weight_complex: need d >= 1 and r >= 1");
    int S = max_twist(2, d);
    std::vector<WeightSummand> all;
    std::vector<int> ex;
    std::function<void(int, int)> rec = [&](int s, int left) {
        if (s > S) {
            if (left) return;
            WeightSummand w;
            w.exponents = ex;
            for (int t = 0; t <= S; ++t) w.factors.push_back({Family::Gamma, ex[std::size_t(t)], t});
            all.push_back(std::move(w));
            return;
        }
        long unit = ipow(2, s);
        for (int a = 0; a * unit <= left; ++a) {
            ex.push_back(a);
            rec(s + 1, int(left - a * unit));
            ex.pop_back();
        }
    };
    rec(0, d);
    WeightComplex w;
    w.kind = WeightComplex::Kind::SkewKoszul;
    w.d = d;
    w.p = 2;
    w.rank = r;
    auto moves = [r, S](const WeightSummand& s) {
        std::vector<Move> out;
        for (int t = 0; t < S; ++t) {
            int a = s.exponents[std::size_t(t)], b = s.exponents[std::size_t(t + 1)];
            if (a < 2) continue;
            NatContext c{2, r, a, b, 1, Family::Gamma};
            auto tgt = s.exponents;
            tgt[std::size_t(t)] -= 2;
            tgt[std::size_t(t + 1)] += 1;
            out.push_back({std::size_t(t), nat_map("skew_koszul_step", c), tgt, false});
        }
        return out;
    };
    return assemble(std::move(w), std::move(all), moves);
}

Cycles cycles(const WeightComplex& w, int i) {
    const auto& c = w.complex;
    if (i < c.lo() || i > c.hi()) return {0, IntMatrix(0, 0, w.p)};
    if (i == c.lo()) return {c.rank(i), IntMatrix::identity(c.rank(i)).reduce_mod(w.p)};
    IntMatrix k = fp_kernel(c.differential(i), w.p);
    return {k.cols(), k};
}

std::size_t phi(int d, int r) {
    if (d < 1 || r < 1) throw InputError("phi: need d >= 1 and r >= 1");
    WeightComplex sk = skew_koszul_weight_complex(d, r);
    std::size_t by_cycles = cycles(sk, d - 1).dim;
    std::size_t by_image = fp_rank(sk.complex.differential(d), 2);
    NatContext c{2, r, d, 0, 1, Family::Gamma};
    std::size_t by_cokernel = fdim(Family::Gamma, r, d) - fp_rank(nat_map("lambda_to_gamma", c), 2);
    if (by_cycles != by_image || by_image != by_cokernel)
        throw StructuralError("phi: descriptions disagree (" + std::to_string(by_cycles) + ", " + std::to_string(by_image) +
                              ", " + std::to_string(by_cokernel) + ")");
    return by_cycles;
}

Cycles weyl_hook(int d, int k, std::uint32_t p, int r) {
    if (!is_prime(p)) throw InputError("weyl_hook: p must be prime");
    if (k < 0 || k > d || r < 0) return {0, IntMatrix(0, 0, p)};
    NatContext c{p, r, k, d - k, 1, Family::Gamma};
    IntMatrix ker = fp_kernel(nat_map("koszul_step", c), p);
    return {ker.cols(), ker};
}

SigmaResult sigma_one_n(int n, int r) {
    if (n < 2 || r < 1) throw InputError("sigma_one_n: need n >= 2 and r >= 1");
    auto L2 = power_basis(Family::Lambda, r, 2);
    auto Sz = power_basis(Family::Sym, r, n - 2);
    auto Sn = power_basis(Family::Sym, r, n);
    std::vector<Entry> es;
    std::size_t col = 0;
    for (const auto& xy : L2->elems) {
        for (const auto& z : Sz->elems) {
            int x = xy[0], y = xy[1];
            auto a = z;
            a[std::size_t(y)] += 2;
            auto b = z;
            b[std::size_t(x)] += 2;
            es.push_back({std::uint32_t(std::size_t(x) * Sn->elems.size() + Sn->index_of(a)), std::uint32_t(col), Int(1)});
            es.push_back({std::uint32_t(std::size_t(y) * Sn->elems.size() + Sn->index_of(b)), std::uint32_t(col), Int(-1)});
            ++col;
        }
    }
    IntMatrix u = IntMatrix::from_triplets(std::size_t(r) * Sn->elems.size(), col, std::move(es), 2);
    std::size_t dim = u.rows() - fp_rank(u, 2);
    std::size_t expected = fdim(Family::Sym, r, n + 2) - fdim(Family::Lambda, r, n + 2);
    if (dim != expected) throw StructuralError("sigma_one_n: cokernel of u disagrees with S^{n+2} - Lambda^{n+2}");
    return {dim, u};
}

std::optional<AbGroupType> maximal_filtration_gr_closed(int d, int i, int r) {
    if (d < 1 || i < 1 || i > d || r < 1) throw InputError("maximal_filtration_gr: need 1 <= i <= d and r >= 1");
    auto prime_power = [](long x, long& p, int& e) {
        for (long q = 2; q <= x; ++q) {
            if (x % q) continue;
            long y = x;
            e = 0;
            while (y % q == 0) {
                y /= q;
                ++e;
            }
            p = q;
            return y == 1;
        }
        return false;
    };
    std::uint64_t R = std::uint64_t(r);
    if (i == d) return AbGroupType::free(fdim(Family::Sym, r, d));
    if (i == 1) {
        long p;
        int e;
        if (prime_power(d, p, e)) return AbGroupType::elementary(p, R);
        return AbGroupType{};
    }
    if (i == d - 1 && d >= 4) return AbGroupType::elementary(2, fdim(Family::Sym, r, d) - fdim(Family::Lambda, r, d));
    if (i == 2 && d >= 3) {
        AbGroupType g;
        for (long p = 2; p <= d; ++p) {
            if (!is_prime(std::uint64_t(p))) continue;
            for (long a = 1; a < d; a *= p) {
                for (long b = a; a + b <= d; b *= p) {
                    if (a + b != d) continue;
                    std::uint64_t dim = a == b ? R * (R + 1) / 2 : R * R;
                    g = g + AbGroupType::elementary(p, dim);
                }
            }
        }
        return g;
    }
    return std::nullopt;
}

AbGroupType maximal_filtration_gr(int d, int i, int r) {
    auto closed = maximal_filtration_gr_closed(d, i, r);
    // F_{-i} is spanned by products of divided power monomials, each of which is an
    // integer multiple of a single basis monomial; so F_{-i} = sum_E m_i(E) Z gamma_E.
    std::map<std::pair<std::vector<int>, int>, Int> memo;
    std::function<Int(const std::vector<int>&, int)> m = [&](const std::vector<int>& E, int parts) -> Int {
        int total = std::accumulate(E.begin(), E.end(), 0);
        if (total < parts) return 0;
        if (parts == 1) return 1;
        auto key = std::make_pair(E, parts);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Int g = 0;
        std::vector<int> e(E.size(), 0);
        std::function<void(std::size_t)> rec = [&](std::size_t j) {
            if (j == E.size()) {
                int s = std::accumulate(e.begin(), e.end(), 0);
                if (s == 0 || total - s < parts - 1) return;
                std::vector<int> rest(E.size());
                Int c = 1;
                for (std::size_t t = 0; t < E.size(); ++t) {
                    rest[t] = E[t] - e[t];
                    c *= binomial(E[t], e[t]);
                }
                Int v = c * m(rest, parts - 1);
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
                return;
            }
            for (int x = 0; x <= E[j]; ++x) {
                e[j] = x;
                rec(j + 1);
            }
            e[j] = 0;
        };
        rec(0);
        memo[key] = g;
        return g;
    };
    auto G = power_basis(Family::Gamma, r, d);
    AbGroupType direct;
    if (i == d) {
        direct = AbGroupType::free(G->elems.size());
    } else {
        std::vector<Int> factors;
        for (const auto& E : G->elems) {
            Int lo = m(E, i), hi = m(E, i + 1);
            if (lo == 0 || hi % lo != 0) throw StructuralError("maximal_filtration_gr: filtration not nested");
            factors.push_back(hi / lo);
        }
        direct = AbGroupType::from_factors(0, std::move(factors));
    }
    if (closed && !(*closed == direct))
        throw StructuralError("maximal_filtration_gr: closed description " + closed->to_string() + " differs from " +
                              direct.to_string());
    return direct;
}

bool q_resolution_check(int d, std::uint32_t p, int r) {
    if (!is_prime(p)) throw InputError("q_resolution_check: p must be prime");
    if (d < 0 || r < 1) throw InputError("q_resolution_check: need d >= 0 and r >= 1");
    int top = d / int(p);
    ChainComplex c(0, top, p);
    for (int b = 0; b <= top; ++b) c.set_rank(b, fdim(Family::Sym, r, d - int(p) * b) * fdim(Family::Lambda, r, b));
    for (int b = 1; b <= top; ++b) {
        NatContext ctx{p, r, d - int(p) * b, b, 1, Family::Sym};
        c.set_differential(b, nat_map("q_res_d1", ctx));
    }
    c.validate();
    for (int b = 1; b <= top; ++b) {
        std::size_t out = fp_rank(c.differential(b), p);
        std::size_t in = b < top ? fp_rank(c.differential(b + 1), p) : 0;
        if (c.rank(b) != out + in) return false;
    }
    NatContext ctx{p, r, d, 0, 1, Family::Sym};
    IntMatrix aug = nat_map("q_res_d0", ctx);
    std::size_t q = truncated_basis(r, d, p).size();
    if (fp_rank(aug, p) != q) return false;
    if (top >= 1 && !(aug * c.differential(1)).is_zero()) return false;
    std::size_t h0 = c.rank(0) - (top >= 1 ? fp_rank(c.differential(1), p) : 0);
    return h0 == q;
}

std::vector<FiltrationRow> principal_filtration_dims(int weight_bound, std::uint32_t p, int r) {
    if (!is_prime(p)) throw InputError("principal_filtration_dims: p must be prime");
    if (weight_bound < 0 || r < 1) throw InputError("principal_filtration_dims: bad arguments");
    std::vector<FiltrationRow> rows;
    // ideal[n][d]: basis of I^n in weight d, as columns inside Gamma^d
    std::vector<std::vector<IntMatrix>> ideal(std::size_t(weight_bound) + 2,
                                              std::vector<IntMatrix>(std::size_t(weight_bound) + 1));
    for (int d = 0; d <= weight_bound; ++d) ideal[0][std::size_t(d)] = IntMatrix::identity(fdim(Family::Gamma, r, d)).reduce_mod(p);
    for (int n = 1; n <= weight_bound + 1; ++n) {
        for (int d = 0; d <= weight_bound; ++d) {
            std::size_t N = fdim(Family::Gamma, r, d);
            if (d < n) {
                ideal[std::size_t(n)][std::size_t(d)] = IntMatrix(N, 0, p);
                continue;
            }
            NatContext c{p, r, 1, d - 1, 1, Family::Gamma};
            IntMatrix mult = nat_map("mult", c);
            IntMatrix span = mult * kronecker(IntMatrix::identity(std::size_t(r)).reduce_mod(p),
                                              ideal[std::size_t(n - 1)][std::size_t(d - 1)]);
            ideal[std::size_t(n)][std::size_t(d)] = column_space(span, p);
        }
    }
    for (int d = 0; d <= weight_bound; ++d) {
        for (int n = 0; n <= d; ++n) {
            FiltrationRow row;
            row.weight = d;
            row.n = n;
            row.from_ideals = ideal[std::size_t(n)][std::size_t(d)].cols() - ideal[std::size_t(n + 1)][std::size_t(d)].cols();
            row.from_formula = (d - n) % int(p) == 0
                                   ? truncated_basis(r, n, p).size() * fdim(Family::Gamma, r, (d - n) / int(p))
                                   : 0;
            rows.push_back(row);
        }
        // iterated form: Gamma^d = sum over d = sum_s a_s p^s of prod_s Q^{a_s}
        std::function<std::size_t(int, long)> iter = [&](int left, long unit) -> std::size_t {
            if (left == 0) return 1;
            if (unit > left) return 0;
            std::size_t total = 0;
            for (int a = 0; a * unit <= left; ++a)
                total += truncated_basis(r, a, p).size() * iter(int(left - a * unit), unit * long(p));
            return total;
        };
        if (iter(d, 1) != fdim(Family::Gamma, r, d))
            throw StructuralError("principal_filtration_dims: iterated dimension count fails in weight " + std::to_string(d));
    }
    return rows;
}

}  // namespace derfun
