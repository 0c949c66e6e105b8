#include "derfun/closedform.hpp"

#include "derfun/doldkan.hpp"
#include "derfun/koszul.hpp"
#include "derfun/polyfunc.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <mutex>
#include <sstream>

namespace derfun {

namespace {

std::uint64_t choose(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    return binomial(n, k).get_ui();
}

// dim Gamma^k(F^r), dim Lambda^k(F^r)
std::uint64_t gdim(int r, int k) { return k < 0 ? 0 : choose(r + k - 1, k); }
std::uint64_t ldim(int r, int k) { return choose(r, k); }

long ipow(long b, int e) {
    long x = 1;
    while (e-- > 0) x *= b;
    return x;
}

struct Generator {
    long weight;
    int degree;
    bool exterior;
};

/// Weight-d part of a free graded commutative algebra on the generators, each a
/// copy of F^r: Gamma on the non-exterior ones, Lambda on the exterior ones.
DimTable weight_part(const std::vector<Generator>& gens, int d, int r) {
    // state: (weight, degree) -> dim
    std::map<std::pair<long, int>, std::uint64_t> acc{{{0, 0}, 1}};
    for (const auto& g : gens) {
        std::map<std::pair<long, int>, std::uint64_t> next;
        for (const auto& [key, v] : acc) {
            for (int k = 0; key.first + k * g.weight <= d; ++k) {
                std::uint64_t m = g.exterior ? ldim(r, k) : gdim(r, k);
                if (m == 0) break;
                next[{key.first + k * g.weight, key.second + k * g.degree}] += v * m;
            }
        }
        acc = std::move(next);
    }
    DimTable out;
    for (const auto& [key, v] : acc)
        if (key.first == d && v) out[key.second] += v;
    return out;
}

const std::vector<std::uint32_t>& primes_upto_8() {
    static const std::vector<std::uint32_t> ps{2, 3, 5, 7};
    return ps;
}

AbGroupType el(long p, std::uint64_t dim) { return AbGroupType::elementary(p, dim); }

struct Atoms {
    int r;
    AbGroupType a_mod(long p) const { return el(p, r); }
    AbGroupType lambda2_f2() const { return el(2, choose(r, 2)); }
    AbGroupType gamma2_f2() const { return el(2, choose(r + 1, 2)); }
    AbGroupType gamma2_f2_times_mod2() const { return el(2, std::uint64_t(r) * choose(r + 1, 2)); }
    AbGroupType mod_tensor(long p) const { return el(p, std::uint64_t(r) * r); }
    AbGroupType gamma2_z() const { return gamma2_of_mod2(r); }
    AbGroupType phi4() const { return el(2, phi(4, r)); }
};

}  // namespace

DimTable char2_all(int d, int n, int r) {
    if (d < 1 || n < 1) throw InputError("char2_all needs d >= 1 and n >= 1");
    std::vector<Generator> gens;
    std::vector<int> t(std::size_t(n), 0);
    std::function<void(int, int)> rec = [&](int pos, int used) {
        if (pos == n) {
            int deg = 1;
            for (int k = 1; k < n; ++k) {
                int s = 0;
                for (int j = k; j < n; ++j) s += t[std::size_t(j)];
                deg += int(ipow(2, s));
            }
            gens.push_back({ipow(2, used), deg, false});
            return;
        }
        for (int v = 0; ipow(2, used + v) <= d; ++v) {
            t[std::size_t(pos)] = v;
            rec(pos + 1, used + v);
        }
        t[std::size_t(pos)] = 0;
    };
    rec(0, 0);
    return weight_part(gens, d, r);
}

DimTable oddp_n1(std::uint32_t p, int d, int r) {
    if (p == 2 || !is_prime(p)) throw InputError("oddp_n1 needs an odd prime");
    std::vector<Generator> gens;
    for (int s = 0; ipow(p, s) <= d; ++s) {
        gens.push_back({ipow(p, s), 1, true});
        if (s >= 1) gens.push_back({ipow(p, s), 2, false});
    }
    return weight_part(gens, d, r);
}

GradedGroup integral_n1(int d, int r) {
    GradedGroup g;
    if (d == 0) {
        add_into(g, 0, AbGroupType::free(1));
        return g;
    }
    add_into(g, d, AbGroupType::free(ldim(r, d)));
    for (std::uint32_t p : primes_upto_8()) {
        if (long(p) > d) break;
        auto w = p == 2 ? skew_koszul_weight_complex(d, r) : koszul_weight_complex(p, d, r);
        for (int i = 1; i < d; ++i) add_into(g, i, el(p, cycles(w, i).dim));
    }
    return g;
}

DimTable uptofiltration_n1(int d, std::uint32_t p, int r) {
    std::map<std::pair<int, int>, std::uint64_t> hook;
    auto W = [&](int k, int a) -> std::uint64_t {
        if (a < 0 || a > k) return 0;
        auto it = hook.find({k, a});
        if (it != hook.end()) return it->second;
        return hook[{k, a}] = weyl_hook(k, a, p, r).dim;
    };

    DimTable out;
    for (int k = 1; k <= d; ++k) {
        std::uint64_t outer = ldim(r, d - k);
        if (!outer) continue;
        // Decomp(p, k): strictly increasing positive twists with positive multiplicities
        std::vector<std::pair<int, int>> seq;
        std::function<void(int, long)> dec = [&](int min_twist, long left) {
            if (left == 0) {
                int len = int(seq.size());
                for (int i = 1; i < d; ++i) {
                    std::uint64_t total = 0;
                    for (int j = 0; j < len; ++j) {
                        int target = i + k - d - j;
                        // sum over i_1 + ... + i_len = target, i_l in [k_l, 2k_l]
                        std::function<std::uint64_t(int, int)> comp = [&](int pos, int rest) -> std::uint64_t {
                            if (pos == len) return rest == 0 ? 1 : 0;
                            std::uint64_t s = 0;
                            int kl = seq[std::size_t(pos)].second;
                            for (int il = kl; il <= 2 * kl && il <= rest; ++il) {
                                std::uint64_t w = W(kl, il - kl);
                                if (w) s += w * comp(pos + 1, rest - il);
                            }
                            return s;
                        };
                        total += choose(len - 1, j) * comp(0, target);
                    }
                    if (total) out[i] += outer * total;
                }
                return;
            }
            for (int t = min_twist; ipow(p, t) <= left; ++t)
                for (long m = 1; m * ipow(p, t) <= left; ++m) {
                    seq.push_back({t, int(m)});
                    dec(t + 1, left - m * ipow(p, t));
                    seq.pop_back();
                }
        };
        dec(1, k);
    }
    return out;
}

GradedGroup integral_gamma2(int n, int r) {
    if (n < 0) throw InputError("n must be nonnegative");
    Atoms at{r};
    GradedGroup g;
    if (n % 2) {
        for (int i = n; i <= 2 * n - 1; i += 2) add_into(g, i, at.a_mod(2));
        add_into(g, 2 * n, AbGroupType::free(ldim(r, 2)));
    } else {
        for (int i = n; i <= 2 * n - 2; i += 2) add_into(g, i, at.a_mod(2));
        add_into(g, 2 * n, AbGroupType::free(gdim(r, 2)));
    }
    return g;
}

GradedGroup integral_gamma3(int n, int r) {
    if (n < 0) throw InputError("n must be nonnegative");
    Atoms at{r};
    GradedGroup g;
    if (n % 2) {
        for (int i = n; i <= 3 * n - 2; i += 4) add_into(g, i, at.a_mod(3));
        for (int i = 2 * n; i <= 3 * n - 1; i += 2) add_into(g, i, at.mod_tensor(2));
        add_into(g, 3 * n, AbGroupType::free(ldim(r, 3)));
    } else {
        for (int i = n; i <= 3 * n - 4; i += 4) add_into(g, i, at.a_mod(3));
        for (int i = 2 * n; i <= 3 * n - 2; i += 2) add_into(g, i, at.mod_tensor(2));
        add_into(g, 3 * n, AbGroupType::free(gdim(r, 3)));
    }
    return g;
}

AbGroupType gamma2_of_mod2(int r) {
    static std::mutex mu;
    static std::map<int, AbGroupType> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    auto g = derived_of_complex(FunctorExpr::gamma(2), IntMatrix::identity(std::size_t(r), 2), 0, 0);
    cache.emplace(r, g);
    return g;
}

GradedGroup integral_gamma4_direct(int n, int r) {
    if (n < 1) throw InputError("integral_gamma4 needs n >= 1");
    Atoms at{r};
    GradedGroup g;
    int m = n / 2;
    if (n % 2) {
        add_into(g, 4 * n, AbGroupType::free(ldim(r, 4)));
        add_into(g, 4 * n - 1, at.phi4());
        for (int i = 0; i <= m - 1; ++i) add_into(g, 3 * n + 2 * i, at.gamma2_f2_times_mod2());
        for (int i = 0; i <= m; ++i) add_into(g, 2 * n + 4 * i, at.lambda2_f2());
        for (int i = 0; i <= m - 1; ++i) add_into(g, 2 * n + 4 * i + 1, at.gamma2_f2());
        for (int i = 0; i <= m - 1; ++i)
            for (int j = 2 * i; j <= n - 3; ++j) add_into(g, 2 * n + 2 * i + j + 2, at.mod_tensor(2));
        for (int i = 0; i <= m; ++i) add_into(g, 2 * n + 4 * i, at.mod_tensor(3));
        for (int i = 0; i <= m; ++i) add_into(g, n + 6 * i, at.a_mod(2));
        for (int i = 0; i <= m - 1; ++i)
            for (int j = 2 * i; j <= n - 2; ++j) add_into(g, n + 4 * i + j + 2, at.a_mod(2));
    } else {
        add_into(g, 4 * n, AbGroupType::free(gdim(r, 4)));
        for (int i = 0; i <= m - 1; ++i) add_into(g, 3 * n + 2 * i, at.gamma2_f2_times_mod2());
        for (int i = 0; i <= m - 1; ++i) add_into(g, 2 * n + 4 * i, at.gamma2_z());
        for (int i = 0; i <= m - 1; ++i) add_into(g, 2 * n + 4 * i + 1, at.gamma2_f2());
        for (int i = 0; i <= m - 2; ++i)
            for (int j = 2 * i; j <= n - 3; ++j) add_into(g, 2 * n + 2 * i + j + 2, at.mod_tensor(2));
        for (int i = 0; i <= m - 1; ++i) add_into(g, 2 * n + 4 * i, at.mod_tensor(3));
        for (int i = 0; i <= m - 1; ++i) add_into(g, n + 6 * i, at.a_mod(2));
        for (int i = 0; i <= m - 2; ++i)
            for (int j = 2 * i; j <= n - 3; ++j) add_into(g, n + 4 * i + j + 2, at.a_mod(2));
    }
    return g;
}

GradedGroup integral_gamma4_recursive(int n, int r) {
    if (n <= 2) return integral_gamma4_direct(n, r);
    Atoms at{r};
    GradedGroup g = shift(integral_gamma4_recursive(n - 2, r), 8);
    int top = n % 2 ? 2 * n : 2 * n - 1;
    for (int i = n; i <= top; ++i)
        if (i != n + 1) add_into(g, i, at.a_mod(2));
    for (int i = 2 * n + 2; i <= 3 * n - 1; ++i) add_into(g, i, at.mod_tensor(2));
    add_into(g, 3 * n, at.gamma2_f2_times_mod2());
    add_into(g, 2 * n, n % 2 ? at.lambda2_f2() : at.gamma2_z());
    add_into(g, 2 * n + 1, at.gamma2_f2());
    add_into(g, 2 * n, at.mod_tensor(3));
    return g;
}

GradedGroup integral_gamma4(int n, int r) {
    auto direct = integral_gamma4_direct(n, r);
    if (n >= 3 && !same_groups(direct, integral_gamma4_recursive(n, r)))
        throw StructuralError("Gamma^4 direct formula and recursion disagree at n=" + std::to_string(n) +
                              " r=" + std::to_string(r));
    return direct;
}

std::optional<GradedGroup> integral_closed(int d, int n, int r) {
    if (d < 0 || n < 0 || r < 0) return std::nullopt;
    GradedGroup g;
    if (d == 0) {
        add_into(g, 0, AbGroupType::free(1));
        return g;
    }
    if (d == 1) {
        add_into(g, n, AbGroupType::free(std::uint64_t(r)));
        return g;
    }
    if (n == 0) {
        add_into(g, 0, AbGroupType::free(gdim(r, d)));
        return g;
    }
    if (n == 1) return integral_n1(d, r);
    if (d == 2) return integral_gamma2(n, r);
    if (d == 3) return integral_gamma3(n, r);
    if (d == 4) return integral_gamma4(n, r);
    return std::nullopt;
}

AbGroupType eval_functor_expr(const std::string& expr, int r) {
    Atoms at{r};
    auto atom = [&](std::string s) -> AbGroupType {
        s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
        if (s.empty()) throw InputError("empty atom in '" + expr + "'");
        if (s == "0") return {};
        if (s == "A") return AbGroupType::free(std::uint64_t(r));
        if (s.rfind("A/", 0) == 0) return at.a_mod(std::stol(s.substr(2)));
        if (s == "L2F") return at.lambda2_f2();
        if (s == "G2F") return at.gamma2_f2();
        if (s == "G2Z") return at.gamma2_z();
        if (s == "Phi4") return at.phi4();
        if (s.size() >= 2 && (s[0] == 'L' || s[0] == 'G') && std::isdigit(static_cast<unsigned char>(s[1]))) {
            int k = std::stoi(s.substr(1));
            return AbGroupType::free(s[0] == 'L' ? ldim(r, k) : gdim(r, k));
        }
        throw InputError("unknown atom '" + s + "'");
    };
    AbGroupType total;
    std::stringstream terms(expr);
    std::string term;
    while (std::getline(terms, term, '+')) {
        std::stringstream factors(term);
        std::string f;
        std::optional<AbGroupType> prod;
        while (std::getline(factors, f, '*')) prod = prod ? tensor(*prod, atom(f)) : atom(f);
        if (!prod) throw InputError("empty term in '" + expr + "'");
        total = total + *prod;
    }
    return total;
}

std::uint64_t char2_correction_dim(int n, int i, int r) {
    std::uint64_t v1v1 = std::uint64_t(r) * r, g2v1 = gdim(r, 2) * r, g2 = gdim(r, 2), v2 = r;
    if (i > 3 * n + 1) return 0;
    if (i == 3 * n + 1) return g2v1;
    if (i == 3 * n) return g2v1 + v1v1;
    if (i > 2 * n + 2) return 2 * v1v1;
    if (i == 2 * n + 2) return v1v1 + g2;
    if (i == 2 * n + 1) return v1v1 + v2;
    if (i == 2 * n) return g2 + v2;
    if (i > n + 2) return 2 * v2;
    if (i >= n) return v2;
    return 0;
}

std::vector<RecursionMismatch> char2_recursion_check(int n_max) {
    std::vector<RecursionMismatch> bad;
    for (int n = 3; n <= n_max; ++n)
        for (int r = 1; r <= 4; ++r) {
            auto full = char2_all(4, n, r), lower = char2_all(4, n - 2, r);
            for (int i = 0; i <= 4 * n + 1; ++i) {
                std::uint64_t want = full.count(i) ? full.at(i) : 0;
                std::uint64_t got = (lower.count(i - 8) ? lower.at(i - 8) : 0) + char2_correction_dim(n, i, r);
                if (want != got) bad.push_back({n, i, r, want, got});
            }
        }
    return bad;
}

std::vector<RecursionMismatch> uct_check(int n, int r) {
    std::vector<RecursionMismatch> bad;
    auto z = integral_gamma4(n, r);
    auto f = char2_all(4, n, r);
    auto at = [&](int i) { return z.count(i) ? z.at(i) : AbGroupType{}; };
    for (int i = 0; i <= 4 * n + 1; ++i) {
        std::uint64_t lhs = at(i).mod_p_dim(2) + at(i - 1).p_torsion_dim(2);
        std::uint64_t rhs = f.count(i) ? f.at(i) : 0;
        if (lhs != rhs) bad.push_back({n, i, r, rhs, lhs});
    }
    return bad;
}

}  // namespace derfun
