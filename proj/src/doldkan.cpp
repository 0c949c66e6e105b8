#include "derfun/doldkan.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <thread>

namespace derfun {

namespace {

constexpr int kMaxDegree = 62;

std::uint64_t low_bits(int m) { return m <= 0 ? 0 : (m >= 64 ? ~0ULL : ((1ULL << m) - 1)); }

void combos(int m, int k, int start, std::uint64_t cur, int have, std::vector<std::uint64_t>& out) {
    if (have == k) {
        out.push_back(cur);
        return;
    }
    for (int j = start; j <= m - (k - have); ++j) combos(m, k, j + 1, cur | (1ULL << j), have + 1, out);
}

enum class FaceKind { Surjective, Designated, Zero };

// sigma o delta^i for the surjection with jump set J on [m].
// Designated: the image misses 0, i.e. the composite is delta^0 o tau.
std::pair<FaceKind, std::uint64_t> face_jumps(std::uint64_t J, int m, int i) {
    if (i == 0) return {(J & 1) ? FaceKind::Designated : FaceKind::Surjective, J >> 1};
    if (i == m) {
        if ((J >> (m - 1)) & 1) return {FaceKind::Zero, 0};
        return {FaceKind::Surjective, J};
    }
    bool lo = (J >> (i - 1)) & 1, hi = (J >> i) & 1;
    if (lo && hi) return {FaceKind::Zero, 0};
    std::uint64_t low = J & low_bits(i - 1);
    std::uint64_t mid = (lo || hi) ? (1ULL << (i - 1)) : 0;
    std::uint64_t high = (J >> (i + 1)) << i;
    return {FaceKind::Surjective, low | mid | high};
}

std::uint64_t degeneracy_jumps(std::uint64_t J, int i) { return (J & low_bits(i)) | ((J >> i) << (i + 1)); }

std::uint64_t cell_key(std::uint64_t jumps, int part) { return (jumps << 1) | std::uint64_t(part); }

}  // namespace

// ------------------------------------------------------------ SimplicialModule

const std::vector<KanCell>& SimplicialModule::cells(int m) const {
    if (m < 0 || m > M_) throw InputError("degree outside the truncation");
    return cells_[std::size_t(m)];
}

std::size_t SimplicialModule::cell_index(int m, const KanCell& c) const {
    const auto& fm = first_.at(std::size_t(m));
    auto it = fm.find(cell_key(c.jumps, c.part));
    if (it == fm.end() || c.index >= (c.part ? a_ : b_)) throw InputError("cell not in K");
    return it->second + c.index;
}

const IntMatrix& SimplicialModule::face(int m, int i) const {
    if (m < 1 || m > M_ || i < 0 || i > m) throw InputError("face index out of range");
    return faces_[std::size_t(m)][std::size_t(i)];
}

const IntMatrix& SimplicialModule::degeneracy(int m, int i) const {
    if (m < 0 || m >= M_ || i < 0 || i > m) throw InputError("degeneracy index out of range");
    return degens_[std::size_t(m)][std::size_t(i)];
}

void SimplicialModule::validate() const {
    auto fail = [](const std::string& what) { throw StructuralError("simplicial identity fails: " + what); };
    for (int m = 2; m <= M_; ++m) {
        for (int j = 1; j <= m; ++j) {
            for (int i = 0; i < j; ++i) {
                if (!(face(m - 1, i) * face(m, j) == face(m - 1, j - 1) * face(m, i))) fail("d_i d_j");
            }
        }
    }
    for (int m = 0; m + 1 <= M_; ++m) {
        IntMatrix I = IntMatrix::identity(rank(m));
        for (int j = 0; j <= m; ++j) {
            const IntMatrix& s = degeneracy(m, j);
            if (!(face(m + 1, j) * s == I) || !(face(m + 1, j + 1) * s == I)) fail("d_j s_j");
            for (int i = 0; i < j; ++i) {
                if (!(face(m + 1, i) * s == degeneracy(m - 1, j - 1) * face(m, i))) fail("d_i s_j, i < j");
            }
            for (int i = j + 2; i <= m + 1; ++i) {
                if (!(face(m + 1, i) * s == degeneracy(m - 1, j) * face(m, i - 1))) fail("d_i s_j, i > j+1");
            }
            if (m + 2 <= M_) {
                for (int i = 0; i <= j; ++i) {
                    if (!(degeneracy(m + 1, i) * s == degeneracy(m + 1, j + 1) * degeneracy(m, i))) fail("s_i s_j");
                }
            }
        }
    }
}

SimplicialModule kan_of_shift(std::size_t r, int n, int M) { return kan_of_two_term(IntMatrix(r, 0), n, M); }

SimplicialModule kan_of_two_term(const IntMatrix& f, int n, int M) {
    if (n < 0 || M < 0) throw InputError("negative degree or truncation");
    if (M > kMaxDegree) throw InputError("truncation above supported simplicial degree");
    if (f.modulus()) throw InputError("K is built over Z");
    SimplicialModule s;
    s.n_ = n;
    s.M_ = M;
    s.a_ = f.cols();
    s.b_ = f.rows();
    s.f_ = f;
    s.cells_.resize(std::size_t(M) + 1);
    s.first_.resize(std::size_t(M) + 1);
    for (int m = 0; m <= M; ++m) {
        auto& cm = s.cells_[std::size_t(m)];
        for (int part = 0; part < 2; ++part) {
            std::size_t count = part ? s.a_ : s.b_;
            if (count == 0) continue;
            std::vector<std::uint64_t> masks;
            combos(m, n + part, 0, 0, 0, masks);
            for (auto J : masks) {
                s.first_[std::size_t(m)][cell_key(J, part)] = std::uint32_t(cm.size());
                for (std::size_t x = 0; x < count; ++x) cm.push_back({J, std::uint8_t(part), std::uint32_t(x)});
            }
        }
    }
    std::vector<std::vector<std::pair<std::uint32_t, Int>>> fcol(s.a_);
    for (const auto& e : f.entries()) fcol[e.col].emplace_back(e.row, e.value);

    s.faces_.resize(std::size_t(M) + 1);
    for (int m = 1; m <= M; ++m) {
        const auto& src = s.cells_[std::size_t(m)];
        for (int i = 0; i <= m; ++i) {
            std::vector<Entry> es;
            for (std::size_t q = 0; q < src.size(); ++q) {
                const KanCell& c = src[q];
                auto [kind, J] = face_jumps(c.jumps, m, i);
                if (kind == FaceKind::Surjective) {
                    es.push_back({std::uint32_t(s.cell_index(m - 1, {J, c.part, c.index})), std::uint32_t(q), 1});
                } else if (kind == FaceKind::Designated && c.part == 1) {
                    for (const auto& [row, v] : fcol[c.index]) {
                        es.push_back({std::uint32_t(s.cell_index(m - 1, {J, 0, row})), std::uint32_t(q), v});
                    }
                }
            }
            s.faces_[std::size_t(m)].push_back(
                IntMatrix::from_triplets(s.cells_[std::size_t(m) - 1].size(), src.size(), std::move(es)));
        }
    }
    s.degens_.resize(std::size_t(M));
    for (int m = 0; m < M; ++m) {
        const auto& src = s.cells_[std::size_t(m)];
        for (int i = 0; i <= m; ++i) {
            std::vector<Entry> es;
            for (std::size_t q = 0; q < src.size(); ++q) {
                const KanCell& c = src[q];
                KanCell t{degeneracy_jumps(c.jumps, i), c.part, c.index};
                es.push_back({std::uint32_t(s.cell_index(m + 1, t)), std::uint32_t(q), 1});
            }
            s.degens_[std::size_t(m)].push_back(
                IntMatrix::from_triplets(s.cells_[std::size_t(m) + 1].size(), src.size(), std::move(es)));
        }
    }
    return s;
}

// ------------------------------------------------------------ functor shapes

namespace {

// One factor Gamma^d, S^d, Lambda^d or Q^d (Gamma^d restricted to exponents < p).
struct Atom {
    Family fam;
    int d;
    bool truncated;
};
using Summand = std::vector<Atom>;

struct Flat {
    std::uint32_t p = 0;
    std::vector<Summand> summands;
    int weight() const {
        int w = 0;
        for (const auto& s : summands) {
            int x = 0;
            for (const auto& a : s) x += a.d;
            w = std::max(w, x);
        }
        return w;
    }
};

std::vector<Summand> flat_of(const FunctorExpr& f, std::uint32_t p) {
    using K = FunctorExpr::Kind;
    switch (f.kind) {
        case K::Gamma: return {{Atom{Family::Gamma, f.d, false}}};
        case K::Sym: return {{Atom{Family::Sym, f.d, false}}};
        case K::Lambda: return {{Atom{Family::Lambda, f.d, false}}};
        case K::TruncatedQ:
            if (!p) throw InputError("TruncatedQ needs a ModP context");
            return {{Atom{Family::Gamma, f.d, true}}};
        case K::Tensor: {
            std::vector<Summand> acc(1);
            for (const auto& k : f.kids) {
                auto ks = flat_of(k, p);
                std::vector<Summand> next;
                for (const auto& x : acc) {
                    for (const auto& y : ks) {
                        Summand s = x;
                        s.insert(s.end(), y.begin(), y.end());
                        next.push_back(std::move(s));
                    }
                }
                acc.swap(next);
            }
            return acc;
        }
        case K::DirectSum: {
            std::vector<Summand> out;
            for (const auto& k : f.kids) {
                auto ks = flat_of(k, p);
                out.insert(out.end(), ks.begin(), ks.end());
            }
            return out;
        }
        case K::ModP:
            if (f.p != p) throw InputError("ModP must enclose the whole functor with a single prime");
            return flat_of(f.kids.at(0), p);
        case K::Twist:
            if (!p) throw InputError("Twist needs a ModP context");
            return flat_of(f.kids.at(0), p);
    }
    return {};
}

Flat flatten(const FunctorExpr& F) {
    F.validate();
    Flat out;
    out.p = F.kind == FunctorExpr::Kind::ModP ? F.p : 0;
    out.summands = flat_of(F, out.p);
    return out;
}

Int atom_dim(const Atom& a, const Int& N, std::uint32_t p) {
    if (N == 0) return a.d == 0 ? 1 : 0;
    long n = N.get_si();
    switch (a.fam) {
        case Family::Lambda: return binomial(n, a.d);
        case Family::Sym: return binomial(n + a.d - 1, a.d);
        case Family::Gamma:
            if (!a.truncated) return binomial(n + a.d - 1, a.d);
            // exponent vectors with sum d and entries < p
            {
                Int total = 0;
                for (long j = 0; j * long(p) <= a.d && j <= n; ++j) {
                    Int t = binomial(n, j) * binomial(n + a.d - j * long(p) - 1, a.d - j * long(p));
                    if (j % 2) total -= t;
                    else total += t;
                }
                return total;
            }
    }
    return 0;
}

Int flat_dim(const Flat& F, const Int& N) {
    Int total = 0;
    for (const auto& s : F.summands) {
        Int x = 1;
        for (const auto& a : s) x *= atom_dim(a, N, F.p);
        total += x;
    }
    return total;
}

Int kan_rank(std::size_t a, std::size_t b, int n, int m) {
    return Int(static_cast<unsigned long>(a)) * binomial(m, n + 1) + Int(static_cast<unsigned long>(b)) * binomial(m, n);
}

Int normalized_rank(const Flat& F, std::size_t a, std::size_t b, int n, int m) {
    Int total = 0;
    for (int k = 0; k <= m; ++k) {
        Int t = binomial(m, k) * flat_dim(F, kan_rank(a, b, n, k));
        if ((m - k) % 2) total -= t;
        else total += t;
    }
    return total;
}

std::size_t max_column(const IntMatrix& f) {
    std::vector<std::size_t> cnt(f.cols(), 0);
    std::size_t best = 1;
    for (const auto& e : f.entries()) best = std::max(best, ++cnt[e.col]);
    return best;
}

// ------------------------------------------------------------ coefficients

struct Arith {
    std::uint32_t p = 0;

    [[noreturn]] static void overflow() {
        throw StructuralError("coefficient exceeds machine range in chain construction");
    }
    long reduce(long a) const {
        if (!p) return a;
        long r = a % long(p);
        return r < 0 ? r + long(p) : r;
    }
    long add(long a, long b) const {
        long r;
        if (__builtin_add_overflow(a, b, &r)) overflow();
        return reduce(r);
    }
    long neg(long a) const { return p ? (a == 0 ? 0 : long(p) - a) : -a; }
    long mul(long a, long b) const {
        if (p) return long((__int128)a * b % long(p));
        long r;
        if (__builtin_mul_overflow(a, b, &r)) overflow();
        return r;
    }
    long from(const Int& v) const {
        if (p) return long(mpz_fdiv_ui(v.get_mpz_t(), p));
        if (!v.fits_slong_p()) overflow();
        return v.get_si();
    }
    long pow(long a, int e) const {
        long r = reduce(1);
        for (int i = 0; i < e; ++i) r = mul(r, a);
        return r;
    }
    long binom(long n, long k) const {
        static const auto table = [] {
            std::vector<std::vector<long>> t(65, std::vector<long>(65, 0));
            for (int i = 0; i <= 64; ++i) {
                t[i][0] = 1;
                for (int j = 1; j <= i; ++j) t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
            }
            return t;
        }();
        if (k < 0 || k > n) return 0;
        if (n <= 64) return reduce(table[std::size_t(n)][std::size_t(k)]);
        return from(binomial(n, k));
    }
};

using Mono = std::vector<std::uint32_t>;
using Col = std::vector<std::pair<std::uint32_t, long>>;
using Poly = std::map<Mono, long>;

struct MonoHash {
    std::size_t operator()(const Mono& m) const {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : m) h = (h ^ x) * 1099511628211ULL;
        return h;
    }
};

void add_term(Poly& P, Mono&& k, long c, const Arith& ar) {
    auto [it, inserted] = P.try_emplace(std::move(k), 0);
    it->second = ar.add(it->second, c);
}

void drop_zeros(Poly& P) {
    for (auto it = P.begin(); it != P.end();) {
        if (it->second == 0) it = P.erase(it);
        else ++it;
    }
}

// Image of the monomial x[0..len) of one atom under the linear map with the given columns.
Poly atom_image(const Atom& at, const std::uint32_t* x, int len, const std::vector<Col>& cols, const Arith& ar) {
    Poly P;
    P.emplace(Mono{}, ar.reduce(1));
    if (at.fam == Family::Lambda) {
        for (int s = 0; s < len; ++s) {
            const Col& c = cols[x[s]];
            Poly Q;
            for (const auto& [t, v] : P) {
                for (const auto& [y, cy] : c) {
                    auto pos = std::lower_bound(t.begin(), t.end(), y);
                    if (pos != t.end() && *pos == y) continue;
                    long greater = long(t.end() - pos);
                    Mono u = t;
                    u.insert(u.begin() + (pos - t.begin()), y);
                    long w = ar.mul(v, cy);
                    if (greater % 2) w = ar.neg(w);
                    add_term(Q, std::move(u), w, ar);
                }
            }
            drop_zeros(Q);
            P.swap(Q);
            if (P.empty()) return P;
        }
        return P;
    }
    int s = 0;
    while (s < len) {
        std::uint32_t b = x[s];
        int e = 0;
        while (s < len && x[s] == b) {
            ++e;
            ++s;
        }
        const Col& c = cols[b];
        if (c.empty()) return {};
        // terms of the e-th divided or symmetric power of sum c_j y_j
        std::vector<std::pair<std::vector<std::pair<std::uint32_t, int>>, long>> T;
        std::vector<int> parts(c.size(), 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
            if (j + 1 == c.size()) {
                parts[j] = left;
                long coef = ar.reduce(1);
                std::vector<std::pair<std::uint32_t, int>> items;
                for (std::size_t t = 0; t < c.size(); ++t) {
                    if (!parts[t]) continue;
                    coef = ar.mul(coef, ar.pow(c[t].second, parts[t]));
                    items.emplace_back(c[t].first, parts[t]);
                }
                if (at.fam == Family::Sym) coef = ar.mul(coef, ar.from(multinomial(parts)));
                if (coef != 0) T.emplace_back(std::move(items), coef);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                parts[j] = v;
                rec(j + 1, left - v);
            }
        };
        rec(0, e);
        Poly Q;
        for (const auto& [u, cu] : P) {
            for (const auto& [items, ct] : T) {
                Mono w = u;
                long coef = ar.mul(cu, ct);
                for (const auto& [y, a] : items) {
                    if (at.fam == Family::Gamma) {
                        auto r = std::equal_range(u.begin(), u.end(), y);
                        coef = ar.mul(coef, ar.binom(long(r.second - r.first) + a, a));
                    }
                    w.insert(w.end(), std::size_t(a), y);
                }
                if (coef == 0) continue;
                std::sort(w.begin(), w.end());
                add_term(Q, std::move(w), coef, ar);
            }
        }
        drop_zeros(Q);
        P.swap(Q);
        if (P.empty()) return P;
    }
    if (at.truncated) {
        for (const auto& [w, c] : P) {
            for (std::size_t i = 0; i < w.size();) {
                std::size_t j = i;
                while (j < w.size() && w[j] == w[i]) ++j;
                if (j - i >= ar.p) throw StructuralError("truncated functor is not preserved");
                i = j;
            }
        }
    }
    return P;
}

// ------------------------------------------------------------ normalized engine

class Builder {
public:
    Builder(const SimplicialModule& K, const Flat& F, unsigned threads) : K_(K), F_(F), ar_{F.p}, threads_(threads) {
        if (threads_ == 0) threads_ = std::max(1u, std::thread::hardware_concurrency());
        for (const auto& s : F_.summands) {
            int total = 0;
            for (const auto& a : s) total += a.d;
            slots_.push_back(total);
        }
    }

    const std::vector<Mono>& basis(int m) {
        auto it = basis_.find(m);
        if (it != basis_.end()) return it->second;
        auto& out = basis_[m];
        auto& idx = index_[m];
        const auto& cells = K_.cells(m);
        std::uint64_t full = low_bits(m);
        int maxb = std::max(1, K_.max_jumps());
        for (std::size_t si = 0; si < F_.summands.size(); ++si) {
            const Summand& S = F_.summands[si];
            int total = slots_[si];
            std::vector<int> atom_of, first_of;
            for (std::size_t a = 0; a < S.size(); ++a) {
                for (int t = 0; t < S[a].d; ++t) {
                    atom_of.push_back(int(a));
                    first_of.push_back(t == 0);
                }
            }
            Mono cur(std::size_t(total) + 1);
            cur[0] = std::uint32_t(si);
            std::function<void(int, std::uint64_t, int)> rec = [&](int slot, std::uint64_t covered, int run) {
                if (slot == total) {
                    if (covered == full) {
                        idx.emplace(cur, std::uint32_t(out.size()));
                        out.push_back(cur);
                    }
                    return;
                }
                int missing = std::popcount(full & ~covered);
                if (missing > (total - slot) * maxb) return;
                const Atom& at = S[std::size_t(atom_of[std::size_t(slot)])];
                bool first = first_of[std::size_t(slot)];
                std::uint32_t prev = first ? 0 : cur[std::size_t(slot)];
                std::uint32_t start = first ? 0 : (at.fam == Family::Lambda ? prev + 1 : prev);
                for (std::uint32_t v = start; v < cells.size(); ++v) {
                    int r = (!first && v == prev) ? run + 1 : 1;
                    if (at.truncated && r >= int(F_.p)) continue;
                    cur[std::size_t(slot) + 1] = v;
                    rec(slot + 1, covered | cells[v].jumps, r);
                }
            };
            rec(0, 0, 0);
        }
        return out;
    }

    // N_m -> N_{m-1}
    IntMatrix differential(int m) {
        const auto& src = basis(m);
        const auto& dst = basis(m - 1);
        const auto& dst_index = index_[m - 1];
        std::vector<std::vector<Col>> faces(std::size_t(m) + 1);
        for (int i = 0; i <= m; ++i) {
            const IntMatrix& fm = K_.face(m, i);
            auto& cols = faces[std::size_t(i)];
            cols.resize(fm.cols());
            for (const auto& e : fm.entries()) {
                long v = ar_.from(e.value);
                if (v != 0) cols[e.col].emplace_back(e.row, v);
            }
        }
        const auto& tcells = K_.cells(m - 1);
        std::uint64_t full = low_bits(m - 1);

        auto column = [&](std::size_t q, std::vector<Entry>& out) {
            const Mono& mono = src[q];
            const Summand& S = F_.summands[mono[0]];
            std::map<std::uint32_t, long> acc;
            for (int i = 0; i <= m; ++i) {
                const auto& cols = faces[std::size_t(i)];
                std::vector<std::vector<std::pair<Mono, long>>> imgs;
                std::size_t off = 1;
                bool dead = false;
                for (const auto& at : S) {
                    Poly P = atom_image(at, mono.data() + off, at.d, cols, ar_);
                    off += std::size_t(at.d);
                    if (P.empty()) {
                        dead = true;
                        break;
                    }
                    imgs.emplace_back(P.begin(), P.end());
                }
                if (dead) continue;
                long sign = (i % 2) ? ar_.neg(ar_.reduce(1)) : ar_.reduce(1);
                Mono key(mono.size());
                key[0] = mono[0];
                std::function<void(std::size_t, std::size_t, long, std::uint64_t)> prod =
                    [&](std::size_t a, std::size_t pos, long coef, std::uint64_t mask) {
                        if (a == imgs.size()) {
                            if (mask != full) return;
                            auto it = dst_index.find(key);
                            if (it == dst_index.end()) throw StructuralError("face image outside normalized basis");
                            auto [slot, inserted] = acc.try_emplace(it->second, 0);
                            slot->second = ar_.add(slot->second, ar_.mul(sign, coef));
                            return;
                        }
                        for (const auto& [w, c] : imgs[a]) {
                            std::uint64_t mk = mask;
                            for (std::size_t t = 0; t < w.size(); ++t) {
                                key[pos + t] = w[t];
                                mk |= tcells[w[t]].jumps;
                            }
                            prod(a + 1, pos + w.size(), ar_.mul(coef, c), mk);
                        }
                    };
                prod(0, 1, ar_.reduce(1), 0);
            }
            for (const auto& [row, v] : acc) {
                if (v != 0) out.push_back({row, std::uint32_t(q), Int(v)});
            }
        };

        std::vector<Entry> es;
        unsigned nt = std::min<unsigned>(threads_, unsigned(std::max<std::size_t>(1, src.size() / 64)));
        if (nt <= 1) {
            for (std::size_t q = 0; q < src.size(); ++q) column(q, es);
        } else {
            std::vector<std::vector<Entry>> parts(nt);
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errs(nt);
            std::size_t chunk = (src.size() + nt - 1) / nt;
            for (unsigned t = 0; t < nt; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        std::size_t lo = t * chunk, hi = std::min(src.size(), lo + chunk);
                        for (std::size_t q = lo; q < hi; ++q) column(q, parts[t]);
                    } catch (...) {
                        errs[t] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errs) {
                if (e) std::rethrow_exception(e);
            }
            for (auto& p : parts) es.insert(es.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
        }
        std::optional<std::uint32_t> mod;
        if (F_.p) mod = F_.p;
        return IntMatrix::from_triplets(dst.size(), src.size(), std::move(es), mod);
    }

private:
    const SimplicialModule& K_;
    Flat F_;
    Arith ar_;
    unsigned threads_;
    std::vector<int> slots_;
    std::map<int, std::vector<Mono>> basis_;
    std::map<int, std::unordered_map<Mono, std::uint32_t, MonoHash>> index_;
};

std::optional<std::uint32_t> modulus_of(const Flat& F) {
    if (F.p) return F.p;
    return {};
}

int top_of(const Flat& F, const SimplicialModule& K) { return K.max_jumps() * F.weight(); }

void require_feasible(const Prediction& p) {
    if (!p.feasible) throw BudgetExceeded("budget exceeded: " + p.reason, p);
}

ChainComplex moore_complex(const SimplicialModule& K, const FunctorExpr& F, const Flat& flat) {
    int M = K.truncation();
    ChainComplex c(0, M, modulus_of(flat));
    for (int m = 0; m <= M; ++m) c.set_rank(m, flat_dim(flat, Int(static_cast<unsigned long>(K.rank(m)))).get_ui());
    for (int m = 1; m <= M; ++m) {
        std::vector<Entry> es;
        for (int i = 0; i <= m; ++i) {
            IntMatrix g = eval_morphism(F, K.face(m, i));
            for (const auto& e : g.entries()) es.push_back({e.row, e.col, (i % 2) ? Int(-e.value) : e.value});
        }
        c.set_differential(m, IntMatrix::from_triplets(c.rank(m - 1), c.rank(m), std::move(es), modulus_of(flat)));
    }
    return c;
}

AbGroupType group_at(const ChainComplex& c, int i) {
    if (i < c.lo() || i > c.hi()) return {};
    return homology_at(c, i);
}

}  // namespace

// ------------------------------------------------------------ public API

std::string Prediction::to_string() const {
    std::ostringstream os;
    os << "predicted ranks {";
    bool first = true;
    for (const auto& [m, r] : ranks) {
        os << (first ? "" : ", ") << m << ": " << r.get_str();
        first = false;
    }
    os << "}, predicted nonzeros " << nonzeros.get_str();
    return os.str();
}

int top_degree(const FunctorExpr& F, const IntMatrix& f, int n) {
    Flat flat = flatten(F);
    int jumps = f.cols() ? n + 1 : n;
    return jumps * flat.weight();
}

Prediction predict(const FunctorExpr& F, const IntMatrix& f, int n, ChainMode mode, int lo, int hi,
                   const Budget& budget) {
    Flat flat = flatten(F);
    Prediction p;
    p.nonzeros = 0;
    Int expand = 1;
    std::size_t mc = max_column(f);
    for (int t = 0; t < flat.weight(); ++t) expand *= Int(static_cast<unsigned long>(mc));
    for (int m = std::max(0, lo); m <= hi; ++m) {
        Int r = mode == ChainMode::Normalized ? normalized_rank(flat, f.cols(), f.rows(), n, m)
                                              : flat_dim(flat, kan_rank(f.cols(), f.rows(), n, m));
        p.ranks[m] = r;
        p.nonzeros += r * (m + 1) * expand;
        if (p.feasible && r > Int(static_cast<unsigned long>(budget.max_rank))) {
            p.feasible = false;
            p.reason = "chain rank " + r.get_str() + " in degree " + std::to_string(m) + " exceeds cap " +
                       std::to_string(budget.max_rank);
        }
    }
    if (p.feasible && p.nonzeros > Int(static_cast<unsigned long>(budget.max_nonzeros))) {
        p.feasible = false;
        p.reason = "predicted nonzeros " + p.nonzeros.get_str() + " exceed cap " + std::to_string(budget.max_nonzeros);
    }
    if (!p.feasible) p.reason += "; " + p.to_string();
    return p;
}

ChainComplex normalized_window(const SimplicialModule& sm, const FunctorExpr& F, int lo, int hi,
                               const EngineOptions& opts) {
    Flat flat = flatten(F);
    lo = std::max(lo, 0);
    hi = std::min(hi, sm.truncation());
    if (hi < lo) return ChainComplex(lo, lo - 1, modulus_of(flat));
    require_feasible(predict(F, sm.boundary(), sm.base_degree(), ChainMode::Normalized, lo, hi, opts.budget));
    Builder b(sm, flat, opts.threads);
    ChainComplex c(lo, hi, modulus_of(flat));
    for (int m = lo; m <= hi; ++m) {
        std::size_t r = b.basis(m).size();
        if (opts.certify && Int(static_cast<unsigned long>(r)) !=
                                normalized_rank(flat, sm.upper_rank(), sm.lower_rank(), sm.base_degree(), m)) {
            throw StructuralError("normalized basis size disagrees with inclusion-exclusion count");
        }
        c.set_rank(m, r);
    }
    for (int m = lo + 1; m <= hi; ++m) c.set_differential(m, b.differential(m));
    if (opts.certify) c.validate();
    return c;
}

ChainComplex moore_or_normalized(const SimplicialModule& sm, const FunctorExpr& F, ChainMode mode,
                                 const EngineOptions& opts) {
    Flat flat = flatten(F);
    if (mode == ChainMode::Normalized) return normalized_window(sm, F, 0, std::min(sm.truncation(), top_of(flat, sm)), opts);
    require_feasible(predict(F, sm.boundary(), sm.base_degree(), ChainMode::Moore, 0, sm.truncation(), opts.budget));
    ChainComplex c = moore_complex(sm, F, flat);
    if (opts.certify) c.validate();
    return c;
}

AbGroupType derived_of_complex(const FunctorExpr& F, const IntMatrix& f, int n, int i, const EngineOptions& opts) {
    if (n < 0) throw InputError("negative degree");
    Flat flat = flatten(F);
    int top = (f.cols() ? n + 1 : n) * flat.weight();
    if (i < 0 || i > top) return {};
    if (opts.mode == ChainMode::Normalized) {
        int lo = std::max(0, i - 1), hi = std::min(top, i + 1);
        require_feasible(predict(F, f, n, ChainMode::Normalized, lo, hi, opts.budget));
        SimplicialModule K = kan_of_two_term(f, n, hi);
        return group_at(normalized_window(K, F, lo, hi, opts), i);
    }
    int M = opts.truncation ? opts.truncation : top + 1;
    if (M < i + 1) throw InputError("truncation too small for the requested degree");
    require_feasible(predict(F, f, n, ChainMode::Moore, 0, M, opts.budget));
    SimplicialModule K = kan_of_two_term(f, n, M);
    return group_at(moore_or_normalized(K, F, ChainMode::Moore, opts), i);
}

GradedGroup derived_of_complex_all(const FunctorExpr& F, const IntMatrix& f, int n, const EngineOptions& opts) {
    if (n < 0) throw InputError("negative degree");
    Flat flat = flatten(F);
    int top = (f.cols() ? n + 1 : n) * flat.weight();
    GradedGroup out;
    if (opts.mode == ChainMode::Normalized) {
        require_feasible(predict(F, f, n, ChainMode::Normalized, 0, top, opts.budget));
        SimplicialModule K = kan_of_two_term(f, n, top);
        out = homology(normalized_window(K, F, 0, top, opts));
    } else {
        int M = opts.truncation ? opts.truncation : top + 1;
        require_feasible(predict(F, f, n, ChainMode::Moore, 0, M, opts.budget));
        SimplicialModule K = kan_of_two_term(f, n, M);
        ChainComplex c = moore_or_normalized(K, F, ChainMode::Moore, opts);
        for (int i = 0; i < M; ++i) out[i] = homology_at(c, i);
    }
    return normalized(out);
}

AbGroupType derived_functor(const FunctorExpr& F, std::size_t r, int n, int i, const EngineOptions& opts) {
    return derived_of_complex(F, IntMatrix(r, 0), n, i, opts);
}

GradedGroup derived_functor_all(const FunctorExpr& F, std::size_t r, int n, const EngineOptions& opts) {
    return derived_of_complex_all(F, IntMatrix(r, 0), n, opts);
}

std::map<int, std::uint64_t> derived_dims_mod_p(const FunctorExpr& F, std::size_t r, int n, std::uint32_t p,
                                                const EngineOptions& opts) {
    if (!is_prime(p)) throw InputError("mod-p dimensions need a prime");
    FunctorExpr G = F;
    if (F.kind == FunctorExpr::Kind::ModP) {
        if (F.p != p) throw InputError("functor already carries a different prime");
    } else {
        G = FunctorExpr::mod_p(p, F);
    }
    std::map<int, std::uint64_t> out;
    for (const auto& [deg, g] : derived_functor_all(G, r, n, opts)) out[deg] = g.mod_p_dim(long(p));
    return out;
}

}  // namespace derfun
