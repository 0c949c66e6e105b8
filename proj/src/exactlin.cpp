#include "derfun/exactlin.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace derfun {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (p % q == 0) return p == q;
    }
    for (std::uint64_t q = 17; q * q <= p; q += 2) {
        if (p % q == 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::optional<std::uint32_t> modulus)
    : rows_(rows), cols_(cols), modulus_(modulus) {
    if (modulus_ && !is_prime(*modulus_)) throw InputError("modulus must be prime");
}

IntMatrix IntMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Entry> entries,
                                   std::optional<std::uint32_t> modulus) {
    IntMatrix m(rows, cols, modulus);
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols) throw StructuralError("matrix entry out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (auto& e : entries) {
        if (!m.entries_.empty() && m.entries_.back().row == e.row && m.entries_.back().col == e.col) {
            m.entries_.back().value += e.value;
        } else {
            if (!m.entries_.empty() && m.entries_.back().value == 0) m.entries_.pop_back();
            m.entries_.push_back(std::move(e));
        }
        if (modulus) {
            Int& v = m.entries_.back().value;
            mpz_fdiv_r_ui(v.get_mpz_t(), v.get_mpz_t(), *modulus);
        }
    }
    if (!m.entries_.empty() && m.entries_.back().value == 0) m.entries_.pop_back();
    return m;
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<long>>& rows,
                                std::optional<std::uint32_t> modulus) {
    std::size_t nc = rows.empty() ? 0 : rows[0].size();
    std::vector<Entry> es;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != nc) throw StructuralError("ragged dense matrix");
        for (std::size_t j = 0; j < nc; ++j) {
            if (rows[i][j] != 0) {
                es.push_back({std::uint32_t(i), std::uint32_t(j), Int(rows[i][j])});
            }
        }
    }
    return from_triplets(rows.size(), nc, std::move(es), modulus);
}

IntMatrix IntMatrix::identity(std::size_t n, long scale) {
    std::vector<Entry> es;
    if (scale != 0) {
        for (std::size_t i = 0; i < n; ++i) es.push_back({std::uint32_t(i), std::uint32_t(i), Int(scale)});
    }
    return from_triplets(n, n, std::move(es));
}

Int IntMatrix::at(std::size_t r, std::size_t c) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(r, c),
                               [](const Entry& e, const std::pair<std::size_t, std::size_t>& k) {
                                   return e.row != k.first ? e.row < k.first : e.col < k.second;
                               });
    if (it != entries_.end() && it->row == r && it->col == c) return it->value;
    return 0;
}

IntMatrix IntMatrix::transpose() const {
    std::vector<Entry> es;
    es.reserve(entries_.size());
    for (const auto& e : entries_) es.push_back({e.col, e.row, e.value});
    return from_triplets(cols_, rows_, std::move(es), modulus_);
}

IntMatrix IntMatrix::reduce_mod(std::uint32_t p) const {
    return from_triplets(rows_, cols_, entries_, p);
}

std::vector<std::vector<Int>> IntMatrix::to_dense() const {
    std::vector<std::vector<Int>> d(rows_, std::vector<Int>(cols_, 0));
    for (const auto& e : entries_) d[e.row][e.col] = e.value;
    return d;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || modulus_ != o.modulus_) return false;
    if (entries_.size() != o.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto &a = entries_[i], &b = o.entries_[i];
        if (a.row != b.row || a.col != b.col || a.value != b.value) return false;
    }
    return true;
}

static std::optional<std::uint32_t> joint_modulus(const IntMatrix& a, const IntMatrix& b) {
    if (a.modulus() && b.modulus() && *a.modulus() != *b.modulus()) {
        throw StructuralError("mixed moduli");
    }
    return a.modulus() ? a.modulus() : b.modulus();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw StructuralError("product shape mismatch");
    std::vector<std::vector<const Entry*>> brows(b.rows());
    for (const auto& e : b.entries()) brows[e.row].push_back(&e);
    std::vector<Entry> out;
    std::map<std::uint32_t, Int> acc;
    std::size_t i = 0;
    const auto& ae = a.entries();
    while (i < ae.size()) {
        std::uint32_t r = ae[i].row;
        acc.clear();
        for (; i < ae.size() && ae[i].row == r; ++i) {
            for (const Entry* be : brows[ae[i].col]) acc[be->col] += ae[i].value * be->value;
        }
        for (auto& [c, v] : acc) {
            if (v != 0) out.push_back({r, c, v});
        }
    }
    return IntMatrix::from_triplets(a.rows(), b.cols(), std::move(out), joint_modulus(a, b));
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw StructuralError("sum shape mismatch");
    std::vector<Entry> es = a.entries();
    es.insert(es.end(), b.entries().begin(), b.entries().end());
    return IntMatrix::from_triplets(a.rows(), a.cols(), std::move(es), joint_modulus(a, b));
}

IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b) {
    std::vector<Entry> es;
    es.reserve(a.nnz() * b.nnz());
    for (const auto& x : a.entries()) {
        for (const auto& y : b.entries()) {
            es.push_back({std::uint32_t(x.row * b.rows() + y.row), std::uint32_t(x.col * b.cols() + y.col),
                          x.value * y.value});
        }
    }
    return IntMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), std::move(es),
                                    joint_modulus(a, b));
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
    std::size_t R = 0, C = 0;
    std::optional<std::uint32_t> mod;
    std::vector<Entry> es;
    for (const auto& b : blocks) {
        if (b.modulus()) mod = b.modulus();
        for (const auto& e : b.entries()) {
            es.push_back({std::uint32_t(e.row + R), std::uint32_t(e.col + C), e.value});
        }
        R += b.rows();
        C += b.cols();
    }
    return IntMatrix::from_triplets(R, C, std::move(es), mod);
}

// ------------------------------------------------------------- AbGroupType

static std::vector<Int> invariant_chain(std::vector<Int> fs) {
    for (auto& f : fs) f = abs(f);
    fs.erase(std::remove_if(fs.begin(), fs.end(), [](const Int& v) { return v == 1; }), fs.end());
    for (const auto& f : fs) {
        if (f == 0) throw StructuralError("zero torsion factor");
    }
    std::sort(fs.begin(), fs.end());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
            Int g = gcd(fs[i], fs[j]);
            Int l = fs[i] / g * fs[j];
            fs[i] = g;
            fs[j] = l;
        }
    }
    fs.erase(std::remove_if(fs.begin(), fs.end(), [](const Int& v) { return v == 1; }), fs.end());
    return fs;
}

AbGroupType AbGroupType::from_factors(std::uint64_t free_rank, std::vector<Int> factors) {
    return {free_rank, invariant_chain(std::move(factors))};
}

AbGroupType AbGroupType::elementary(long p, std::uint64_t dim) {
    return from_factors(0, std::vector<Int>(dim, Int(p)));
}

Int AbGroupType::torsion_order() const {
    Int o = 1;
    for (const auto& t : torsion) o *= t;
    return o;
}

static Int p_power_part(Int v, long p) {
    Int r = 1;
    while (v % p == 0) {
        v /= p;
        r *= p;
    }
    return r;
}

Int AbGroupType::p_order(long p) const {
    Int o = 1;
    for (const auto& t : torsion) o *= p_power_part(t, p);
    return o;
}

std::uint64_t AbGroupType::mod_p_dim(long p) const {
    std::uint64_t d = free_rank;
    for (const auto& t : torsion) {
        if (t % p == 0) ++d;
    }
    return d;
}

std::uint64_t AbGroupType::p_torsion_dim(long p) const {
    std::uint64_t d = 0;
    for (const auto& t : torsion) {
        if (t % p == 0) ++d;
    }
    return d;
}

AbGroupType AbGroupType::p_part(long p) const {
    std::vector<Int> fs;
    for (const auto& t : torsion) fs.push_back(p_power_part(t, p));
    return from_factors(0, std::move(fs));
}

std::string AbGroupType::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
        os << (free_rank == 1 ? std::string("Z") : "Z^" + std::to_string(free_rank));
        first = false;
    }
    for (const auto& t : torsion) {
        if (!first) os << " ⊕ ";
        os << "Z/" << t.get_str();
        first = false;
    }
    return os.str();
}

AbGroupType operator+(const AbGroupType& a, const AbGroupType& b) {
    std::vector<Int> fs = a.torsion;
    fs.insert(fs.end(), b.torsion.begin(), b.torsion.end());
    return AbGroupType::from_factors(a.free_rank + b.free_rank, std::move(fs));
}

AbGroupType scale(const AbGroupType& a, std::uint64_t copies) {
    std::vector<Int> fs;
    for (std::uint64_t i = 0; i < copies; ++i) fs.insert(fs.end(), a.torsion.begin(), a.torsion.end());
    return AbGroupType::from_factors(a.free_rank * copies, std::move(fs));
}

AbGroupType tensor(const AbGroupType& a, const AbGroupType& b) {
    std::vector<Int> fs;
    for (std::uint64_t i = 0; i < b.free_rank; ++i) fs.insert(fs.end(), a.torsion.begin(), a.torsion.end());
    for (std::uint64_t i = 0; i < a.free_rank; ++i) fs.insert(fs.end(), b.torsion.begin(), b.torsion.end());
    for (const auto& s : a.torsion)
        for (const auto& t : b.torsion) fs.push_back(gcd(s, t));
    return AbGroupType::from_factors(a.free_rank * b.free_rank, std::move(fs));
}

AbGroupType tor(const AbGroupType& a, const AbGroupType& b) {
    std::vector<Int> fs;
    for (const auto& s : a.torsion)
        for (const auto& t : b.torsion) fs.push_back(gcd(s, t));
    return AbGroupType::from_factors(0, std::move(fs));
}

GradedGroup derived_tensor(const GradedGroup& a, const GradedGroup& b) {
    GradedGroup out;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b) {
            add_into(out, i + j, tensor(x, y));
            add_into(out, i + j + 1, tor(x, y));
        }
    return out;
}

void add_into(GradedGroup& g, int degree, const AbGroupType& a) {
    if (a.is_zero()) return;
    auto it = g.find(degree);
    if (it == g.end()) {
        g.emplace(degree, a);
    } else {
        it->second = it->second + a;
    }
}

GradedGroup shift(const GradedGroup& g, int by) {
    GradedGroup out;
    for (const auto& [d, a] : g) out[d + by] = a;
    return out;
}

GradedGroup direct_sum(const GradedGroup& a, const GradedGroup& b) {
    GradedGroup out = normalized(a);
    for (const auto& [d, x] : b) add_into(out, d, x);
    return out;
}

GradedGroup normalized(const GradedGroup& g) {
    GradedGroup out;
    for (const auto& [d, a] : g) {
        if (!a.is_zero()) out[d] = a;
    }
    return out;
}

bool same_groups(const GradedGroup& a, const GradedGroup& b) { return normalized(a) == normalized(b); }

std::string to_string(const GradedGroup& g) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [d, a] : normalized(g)) {
        if (!first) os << ", ";
        os << d << ": " << a.to_string();
        first = false;
    }
    os << "}";
    return os.str();
}

// ------------------------------------------------------ sparse elimination

namespace {

struct Overflow {};

inline std::int64_t ck_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline std::int64_t ck_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}

inline std::int64_t absval(std::int64_t a) {
    if (a == INT64_MIN) throw Overflow{};
    return a < 0 ? -a : a;
}
inline Int absval(const Int& a) { return abs(a); }
inline bool is_zero_v(std::int64_t a) { return a == 0; }
inline bool is_zero_v(const Int& a) { return sgn(a) == 0; }
inline bool is_unit_abs(std::int64_t a) { return a == 1; }
inline bool is_unit_abs(const Int& a) { return a == 1; }
inline std::int64_t tquot(std::int64_t a, std::int64_t b) {
    if (a == INT64_MIN && b == -1) throw Overflow{};
    return a / b;
}
inline Int tquot(const Int& a, const Int& b) {
    Int q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}
inline std::int64_t mulsub(std::int64_t a, std::int64_t q, std::int64_t b) { return ck_sub(a, ck_mul(q, b)); }
inline Int mulsub(const Int& a, const Int& q, const Int& b) { return a - q * b; }

inline std::int64_t convert(const Int& v, std::int64_t*) {
    if (!v.fits_slong_p()) throw Overflow{};
    return v.get_si();
}
inline Int convert(const Int& v, Int*) { return v; }
inline Int to_int(std::int64_t v) { return Int(static_cast<long>(v)); }
inline Int to_int(const Int& v) { return v; }

template <class T>
class SparseSmith {
public:
    using Row = std::vector<std::pair<std::uint32_t, T>>;

    SparseSmith(const IntMatrix& m) : rows_(m.rows()), colrows_(m.cols()), colcount_(m.cols(), 0) {
        for (const auto& e : m.entries()) {
            rows_[e.row].emplace_back(e.col, convert(e.value, static_cast<T*>(nullptr)));
            colrows_[e.col].push_back(e.row);
            ++colcount_[e.col];
        }
        alive_.assign(m.rows(), 1);
        for (std::uint32_t c = 0; c < m.cols(); ++c) {
            if (colcount_[c]) bycount_.insert({colcount_[c], c});
        }
    }

    std::vector<T> run() {
        while (!bycount_.empty()) {
            auto [r, c] = choose_pivot();
            eliminate(r, c);
        }
        return diag_;
    }

private:
    std::vector<Row> rows_;
    std::vector<std::vector<std::uint32_t>> colrows_;
    std::vector<std::uint32_t> colcount_;
    std::set<std::pair<std::uint32_t, std::uint32_t>> bycount_;
    std::vector<char> alive_;
    std::vector<T> diag_;

    const T* find(std::uint32_t r, std::uint32_t c) const {
        const Row& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const std::pair<std::uint32_t, T>& e, std::uint32_t k) { return e.first < k; });
        if (it != row.end() && it->first == c) return &it->second;
        return nullptr;
    }

    void set_count(std::uint32_t c, std::uint32_t n) {
        if (colcount_[c]) bycount_.erase({colcount_[c], c});
        colcount_[c] = n;
        if (n) bycount_.insert({n, c});
    }

    // Live rows holding column c; compacts the lazy list.
    std::vector<std::uint32_t>& col_rows(std::uint32_t c) {
        auto& v = colrows_[c];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        std::vector<std::uint32_t> keep;
        keep.reserve(colcount_[c]);
        for (auto r : v) {
            if (alive_[r] && find(r, c)) keep.push_back(r);
        }
        v.swap(keep);
        return v;
    }

    static bool better(const T& av, std::uint64_t cost, const T& bv, std::uint64_t bcost) {
        if (av != bv) return av < bv;
        return cost < bcost;
    }

    std::pair<std::uint32_t, std::uint32_t> choose_pivot() {
        constexpr int kCandidates = 6;
        bool have = false;
        T bestv{};
        std::uint64_t bestcost = 0;
        std::uint32_t br = 0, bc = 0;
        int seen = 0;
        std::vector<std::uint32_t> cols;
        for (auto it = bycount_.begin(); it != bycount_.end() && seen < kCandidates; ++it, ++seen) {
            cols.push_back(it->second);
        }
        for (auto c : cols) {
            for (auto r : col_rows(c)) {
                T v = absval(*find(r, c));
                std::uint64_t cost = std::uint64_t(rows_[r].size() - 1) * (colcount_[c] - 1);
                if (!have || better(v, cost, bestv, bestcost)) {
                    have = true;
                    bestv = v;
                    bestcost = cost;
                    br = r;
                    bc = c;
                }
            }
        }
        if (have && is_unit_abs(bestv)) return {br, bc};
        for (std::uint32_t r = 0; r < rows_.size(); ++r) {
            if (!alive_[r]) continue;
            for (const auto& [c, val] : rows_[r]) {
                T v = absval(val);
                std::uint64_t cost = std::uint64_t(rows_[r].size() - 1) * (colcount_[c] - 1);
                if (!have || better(v, cost, bestv, bestcost)) {
                    have = true;
                    bestv = v;
                    bestcost = cost;
                    br = r;
                    bc = c;
                }
            }
        }
        return {br, bc};
    }

    // row_k -= q * row_p
    void row_op(std::uint32_t k, const T& q, std::uint32_t p) {
        const Row& src = rows_[p];
        Row& dst = rows_[k];
        Row out;
        out.reserve(dst.size() + src.size());
        std::size_t i = 0, j = 0;
        while (i < dst.size() || j < src.size()) {
            if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
                out.push_back(std::move(dst[i++]));
            } else if (i == dst.size() || src[j].first < dst[i].first) {
                T v = mulsub(T(0), q, src[j].second);
                std::uint32_t c = src[j].first;
                out.emplace_back(c, std::move(v));
                colrows_[c].push_back(k);
                set_count(c, colcount_[c] + 1);
                ++j;
            } else {
                T v = mulsub(dst[i].second, q, src[j].second);
                std::uint32_t c = src[j].first;
                if (is_zero_v(v)) {
                    set_count(c, colcount_[c] - 1);
                } else {
                    out.emplace_back(c, std::move(v));
                }
                ++i;
                ++j;
            }
        }
        dst.swap(out);
    }

    void remove_row(std::uint32_t r) {
        for (const auto& [c, v] : rows_[r]) set_count(c, colcount_[c] - 1);
        rows_[r].clear();
        alive_[r] = 0;
    }

    void eliminate(std::uint32_t pr, std::uint32_t pc) {
        for (;;) {
            T pv = *find(pr, pc);
            std::vector<std::uint32_t> others;
            for (auto r : col_rows(pc)) {
                if (r != pr) others.push_back(r);
            }
            bool remainder = false;
            for (auto k : others) {
                T q = tquot(*find(k, pc), pv);
                if (!is_zero_v(q)) row_op(k, q, pr);
                if (find(k, pc)) remainder = true;
            }
            if (remainder) {
                T bestv{};
                bool have = false;
                for (auto r : col_rows(pc)) {
                    T v = absval(*find(r, pc));
                    if (!have || v < bestv) {
                        have = true;
                        bestv = v;
                        pr = r;
                    }
                }
                continue;
            }
            // Column pc is now zero outside the pivot row, so column operations
            // only touch the pivot row.
            bool changed = false;
            T bestv{};
            std::uint32_t nc = pc;
            Row& row = rows_[pr];
            Row kept;
            kept.reserve(row.size());
            for (auto& [c, v] : row) {
                if (c != pc) {
                    T q = tquot(v, pv);
                    T rem = mulsub(v, q, pv);
                    if (!is_zero_v(rem)) {
                        T a = absval(rem);
                        if (!changed || a < bestv) {
                            bestv = a;
                            nc = c;
                        }
                        changed = true;
                        v = rem;
                    } else if (!is_zero_v(q)) {
                        v = rem;
                    }
                }
                if (is_zero_v(v)) {
                    set_count(c, colcount_[c] - 1);
                } else {
                    kept.emplace_back(c, std::move(v));
                }
            }
            row.swap(kept);
            if (!changed) {
                diag_.push_back(absval(pv));
                remove_row(pr);
                return;
            }
            pc = nc;
        }
    }
};

template <class T>
std::vector<Int> run_smith(const IntMatrix& m) {
    SparseSmith<T> s(m);
    std::vector<Int> out;
    for (const auto& v : s.run()) out.push_back(to_int(v));
    return out;
}

SmithResult finish(std::vector<Int> diag) {
    SmithResult res;
    res.rank = diag.size();
    auto chain = invariant_chain(diag);
    res.factors.assign(res.rank - chain.size(), Int(1));
    res.factors.insert(res.factors.end(), chain.begin(), chain.end());
    return res;
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
    if (m.modulus()) throw InputError("smith_normal_form needs an integer matrix");
    if (m.is_zero()) return {};
    std::size_t expected = modular_rank(m);
    std::vector<Int> diag;
    try {
        diag = run_smith<std::int64_t>(m);
    } catch (const Overflow&) {
        diag = run_smith<Int>(m);
    }
    if (diag.size() < expected) throw StructuralError("smith rank below modular rank");
    return finish(std::move(diag));
}

SmithResult dense_smith_normal_form(const IntMatrix& m) {
    if (m.modulus()) throw InputError("dense_smith_normal_form needs an integer matrix");
    auto a = m.to_dense();
    std::size_t R = m.rows(), C = m.cols();
    std::vector<Int> diag;
    for (std::size_t t = 0; t < std::min(R, C); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block
            std::size_t pi = R, pj = C;
            for (std::size_t i = t; i < R; ++i) {
                for (std::size_t j = t; j < C; ++j) {
                    if (a[i][j] != 0 && (pi == R || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (pi == R) return finish(diag);
            std::swap(a[t], a[pi]);
            for (std::size_t i = 0; i < R; ++i) std::swap(a[i][t], a[i][pj]);
            bool dirty = false;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (a[i][t] == 0) continue;
                Int q = tquot(a[i][t], a[t][t]);
                for (std::size_t j = t; j < C; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (a[t][j] == 0) continue;
                Int q = tquot(a[t][j], a[t][t]);
                for (std::size_t i = t; i < R; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) dirty = true;
            }
            if (dirty) continue;
            std::size_t bad = R;
            for (std::size_t i = t + 1; i < R && bad == R; ++i) {
                for (std::size_t j = t + 1; j < C; ++j) {
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad == R) break;
            for (std::size_t j = t; j < C; ++j) a[t][j] += a[bad][j];
        }
        diag.push_back(abs(a[t][t]));
    }
    // diag is already a divisibility chain; finish() keeps it canonical.
    return finish(diag);
}

// ----------------------------------------------------------------- mod p

namespace {

class FpElim {
public:
    using Row = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

    FpElim(const IntMatrix& m, std::uint32_t p) : p_(p), rows_(m.rows()), colrows_(m.cols()), colcount_(m.cols(), 0) {
        for (const auto& e : m.entries()) {
            std::uint32_t v = std::uint32_t(mpz_fdiv_ui(e.value.get_mpz_t(), p));
            if (v == 0) continue;
            rows_[e.row].emplace_back(e.col, v);
            colrows_[e.col].push_back(e.row);
            ++colcount_[e.col];
        }
        alive_.assign(m.rows(), 1);
        for (std::uint32_t c = 0; c < m.cols(); ++c) {
            if (colcount_[c]) bycount_.insert({colcount_[c], c});
        }
    }

    std::size_t rank() {
        std::size_t rk = 0;
        while (!bycount_.empty()) {
            std::uint32_t c = bycount_.begin()->second;
            std::uint32_t pr = 0;
            std::size_t best = SIZE_MAX;
            for (auto r : live(c)) {
                if (rows_[r].size() < best) {
                    best = rows_[r].size();
                    pr = r;
                }
            }
            std::uint64_t inv = inverse(*find(pr, c));
            for (auto k : live(c)) {
                if (k == pr) continue;
                std::uint64_t q = (*find(k, c) * inv) % p_;
                row_op(k, std::uint32_t(q), pr);
            }
            for (const auto& [cc, v] : rows_[pr]) set_count(cc, colcount_[cc] - 1);
            rows_[pr].clear();
            alive_[pr] = 0;
            ++rk;
        }
        return rk;
    }

private:
    std::uint64_t p_;
    std::vector<Row> rows_;
    std::vector<std::vector<std::uint32_t>> colrows_;
    std::vector<std::uint32_t> colcount_;
    std::set<std::pair<std::uint32_t, std::uint32_t>> bycount_;
    std::vector<char> alive_;

    std::uint64_t inverse(std::uint64_t a) const {
        std::uint64_t r = 1, b = a, e = p_ - 2;
        while (e) {
            if (e & 1) r = r * b % p_;
            b = b * b % p_;
            e >>= 1;
        }
        return r;
    }

    const std::uint32_t* find(std::uint32_t r, std::uint32_t c) const {
        const Row& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const std::pair<std::uint32_t, std::uint32_t>& e, std::uint32_t k) {
                                       return e.first < k;
                                   });
        if (it != row.end() && it->first == c) return &it->second;
        return nullptr;
    }

    void set_count(std::uint32_t c, std::uint32_t n) {
        if (colcount_[c]) bycount_.erase({colcount_[c], c});
        colcount_[c] = n;
        if (n) bycount_.insert({n, c});
    }

    std::vector<std::uint32_t> live(std::uint32_t c) {
        auto& v = colrows_[c];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        std::vector<std::uint32_t> keep;
        for (auto r : v) {
            if (alive_[r] && find(r, c)) keep.push_back(r);
        }
        v = keep;
        return keep;
    }

    // row_k -= q * row_p (mod p)
    void row_op(std::uint32_t k, std::uint32_t q, std::uint32_t p) {
        const Row& src = rows_[p];
        Row& dst = rows_[k];
        Row out;
        out.reserve(dst.size() + src.size());
        std::size_t i = 0, j = 0;
        while (i < dst.size() || j < src.size()) {
            if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
                out.push_back(dst[i++]);
            } else if (i == dst.size() || src[j].first < dst[i].first) {
                std::uint32_t c = src[j].first;
                std::uint64_t v = (p_ - (std::uint64_t(q) * src[j].second) % p_) % p_;
                out.emplace_back(c, std::uint32_t(v));
                colrows_[c].push_back(k);
                set_count(c, colcount_[c] + 1);
                ++j;
            } else {
                std::uint32_t c = src[j].first;
                std::uint64_t v = (dst[i].second + p_ - (std::uint64_t(q) * src[j].second) % p_) % p_;
                if (v == 0) {
                    set_count(c, colcount_[c] - 1);
                } else {
                    out.emplace_back(c, std::uint32_t(v));
                }
                ++i;
                ++j;
            }
        }
        dst.swap(out);
    }
};

const std::vector<std::uint32_t>& rank_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::mt19937_64 rng(0x6d6f6470726b);
        std::vector<std::uint32_t> ps;
        while (ps.size() < 3) {
            std::uint32_t c = std::uint32_t((1u << 29) + (rng() % (1u << 29))) | 1u;
            if (is_prime(c) && std::find(ps.begin(), ps.end(), c) == ps.end()) ps.push_back(c);
        }
        return ps;
    }();
    return primes;
}

}  // namespace

std::size_t fp_rank(const IntMatrix& m, std::uint32_t p) {
    if (!is_prime(p)) throw InputError("fp_rank: p must be prime");
    if (m.modulus() && *m.modulus() != p) throw InputError("fp_rank: modulus mismatch");
    FpElim e(m, p);
    return e.rank();
}

std::size_t modular_rank(const IntMatrix& m) {
    std::size_t r = 0;
    for (auto p : rank_primes()) r = std::max(r, fp_rank(m, p));
    return r;
}

AbGroupType group_of_two_term(const IntMatrix& f) {
    if (f.modulus()) throw InputError("group_of_two_term needs an integer matrix");
    SmithResult s = smith_normal_form(f);
    return AbGroupType::from_factors(f.rows() - s.rank, s.factors);
}

IntMatrix fp_kernel(const IntMatrix& m, std::uint32_t p) {
    if (!is_prime(p)) throw InputError("fp_kernel: p must be prime");
    std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<std::uint64_t>> a(R, std::vector<std::uint64_t>(C, 0));
    for (const auto& e : m.entries()) a[e.row][e.col] = mpz_fdiv_ui(e.value.get_mpz_t(), p);
    auto inv = [p](std::uint64_t x) {
        std::uint64_t r = 1, e = p - 2;
        while (e) {
            if (e & 1) r = r * x % p;
            x = x * x % p;
            e >>= 1;
        }
        return r;
    };
    std::vector<std::size_t> pivcol;
    std::size_t row = 0;
    for (std::size_t c = 0; c < C && row < R; ++c) {
        std::size_t sel = R;
        for (std::size_t i = row; i < R; ++i) {
            if (a[i][c]) {
                sel = i;
                break;
            }
        }
        if (sel == R) continue;
        std::swap(a[row], a[sel]);
        std::uint64_t iv = inv(a[row][c]);
        for (auto& x : a[row]) x = x * iv % p;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == row || a[i][c] == 0) continue;
            std::uint64_t f = a[i][c];
            for (std::size_t j = 0; j < C; ++j) a[i][j] = (a[i][j] + p - f * a[row][j] % p) % p;
        }
        pivcol.push_back(c);
        ++row;
    }
    std::vector<char> is_piv(C, 0);
    for (auto c : pivcol) is_piv[c] = 1;
    std::vector<Entry> es;
    std::uint32_t k = 0;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_piv[f]) continue;
        es.push_back({std::uint32_t(f), k, Int(1)});
        for (std::size_t i = 0; i < pivcol.size(); ++i) {
            if (a[i][f]) es.push_back({std::uint32_t(pivcol[i]), k, Int(static_cast<unsigned long>((p - a[i][f]) % p))});
        }
        ++k;
    }
    return IntMatrix::from_triplets(C, k, std::move(es), p);
}

// ------------------------------------------------------------ ChainComplex

ChainComplex::ChainComplex(int lo, int hi, std::optional<std::uint32_t> modulus)
    : lo_(lo), hi_(hi), modulus_(modulus), ranks_(hi >= lo ? std::size_t(hi - lo + 1) : 0, 0) {}

std::size_t ChainComplex::rank(int deg) const {
    if (deg < lo_ || deg > hi_) return 0;
    return ranks_[std::size_t(deg - lo_)];
}

void ChainComplex::set_rank(int deg, std::size_t r) {
    if (deg < lo_ || deg > hi_) throw InputError("degree outside complex");
    ranks_[std::size_t(deg - lo_)] = r;
}

const IntMatrix& ChainComplex::differential(int deg) const {
    auto it = diffs_.find(deg);
    if (it != diffs_.end()) return it->second;
    auto& z = zero_cache_[deg];
    z = IntMatrix(rank(deg - 1), rank(deg), modulus_);
    return z;
}

void ChainComplex::set_differential(int deg, IntMatrix d) {
    if (d.rows() != rank(deg - 1) || d.cols() != rank(deg)) {
        throw StructuralError("differential shape does not match module ranks at degree " + std::to_string(deg));
    }
    if (modulus_ && d.modulus() != modulus_) d = d.reduce_mod(*modulus_);
    diffs_[deg] = std::move(d);
}

void ChainComplex::validate() const {
    for (const auto& [deg, d] : diffs_) {
        if (d.rows() != rank(deg - 1) || d.cols() != rank(deg)) {
            throw StructuralError("differential shape mismatch at degree " + std::to_string(deg));
        }
    }
    for (const auto& [deg, d] : diffs_) {
        auto it = diffs_.find(deg - 1);
        if (it == diffs_.end()) continue;
        IntMatrix dd = it->second * d;
        if (modulus_) dd = dd.reduce_mod(*modulus_);
        if (!dd.is_zero()) throw StructuralError("d o d != 0 at degree " + std::to_string(deg));
    }
}

AbGroupType homology_from_smith(std::size_t dim, const SmithResult& out, const SmithResult& in) {
    if (out.rank + in.rank > dim) throw StructuralError("ranks exceed module dimension");
    return AbGroupType::from_factors(dim - out.rank - in.rank, in.factors);
}

AbGroupType homology_at(const ChainComplex& c, int i) {
    if (i < c.lo() || i > c.hi()) throw InputError("homology degree outside complex");
    const IntMatrix& out = c.differential(i);
    const IntMatrix& in = c.differential(i + 1);
    if (out.cols() != c.rank(i) || in.rows() != c.rank(i)) throw StructuralError("shape mismatch");
    if (c.modulus()) {
        std::uint32_t p = *c.modulus();
        std::size_t dim = c.rank(i) - fp_rank(out, p) - fp_rank(in, p);
        return AbGroupType::elementary(p, dim);
    }
    return homology_from_smith(c.rank(i), smith_normal_form(out), smith_normal_form(in));
}

GradedGroup homology(const ChainComplex& c) {
    GradedGroup g;
    if (c.hi() < c.lo()) return g;
    if (c.modulus()) {
        for (int i = c.lo(); i <= c.hi(); ++i) add_into(g, i, homology_at(c, i));
        return g;
    }
    std::map<int, SmithResult> snf;
    for (int i = c.lo(); i <= c.hi() + 1; ++i) snf[i] = smith_normal_form(c.differential(i));
    for (int i = c.lo(); i <= c.hi(); ++i) add_into(g, i, homology_from_smith(c.rank(i), snf[i], snf[i + 1]));
    return g;
}

}  // namespace derfun
