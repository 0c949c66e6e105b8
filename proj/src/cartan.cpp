#include "derfun/cartan.hpp"

#include <algorithm>
#include <functional>

namespace derfun {

namespace {

long ipow(long b, int e) {
    long x = 1;
    while (e-- > 0) x *= b;
    return x;
}

std::vector<std::uint32_t> primes_upto(long n) {
    std::vector<std::uint32_t> ps;
    for (long q = 2; q <= n; ++q)
        if (is_prime(std::uint64_t(q))) ps.push_back(std::uint32_t(q));
    return ps;
}

}  // namespace

AdmissibleWord AdmissibleWord::parse(const std::string& s, std::uint32_t p) {
    AdmissibleWord w;
    w.p = p;
    for (char c : s) {
        switch (c) {
            case 's': w.letters.push_back(Letter::Sigma); break;
            case 'g': w.letters.push_back(Letter::Gamma); break;
            case 'f': w.letters.push_back(Letter::Phi); break;
            default: throw InputError(std::string("unknown letter '") + c + "'");
        }
    }
    return w;
}

void AdmissibleWord::validate() const {
    if (!is_prime(p)) throw StructuralError("word prime is not prime");
    if (letters.empty()) throw StructuralError("empty word");
    if (letters.front() == Letter::Gamma) throw StructuralError("word starts with gamma: " + to_string());
    if (letters.back() == Letter::Gamma) throw StructuralError("word ends with gamma: " + to_string());
    int sigmas = 0;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        if (*it == Letter::Sigma)
            ++sigmas;
        else if (sigmas % 2)
            throw StructuralError("odd number of sigmas right of gamma or phi: " + to_string());
    }
}

bool AdmissibleWord::restricted() const {
    return std::find(letters.begin(), letters.end(), Letter::Phi) == letters.end();
}

std::string AdmissibleWord::to_string() const {
    std::string s;
    for (auto l : letters) s += l == Letter::Sigma ? 's' : l == Letter::Gamma ? 'g' : 'f';
    return s;
}

WordStats word_stats(const AdmissibleWord& w) {
    w.validate();
    WordStats st;
    int r = 0;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        switch (*it) {
            case Letter::Sigma:
                st.degree += 1;
                ++st.height;
                break;
            case Letter::Phi:
                st.degree = 2 + long(w.p) * st.degree;
                ++st.height;
                ++r;
                break;
            case Letter::Gamma:
                st.degree *= long(w.p);
                ++r;
                break;
        }
    }
    st.weight = ipow(w.p, w.first_type() ? r : r - 1);
    return st;
}

std::vector<AdmissibleWord> enumerate_words(std::uint32_t p, long max_degree, bool restricted) {
    std::vector<AdmissibleWord> out;
    std::vector<Letter> rev;  // right to left
    std::function<void(long, int)> grow = [&](long deg, int sigmas) {
        std::size_t n = rev.size();
        if (n >= 2 && rev[n - 1] == Letter::Sigma && rev[n - 2] == Letter::Gamma) {
            AdmissibleWord w{{rev.rbegin(), rev.rend()}, p};
            if (!restricted || w.first_type()) out.push_back(std::move(w));
        }
        if (deg + 1 <= max_degree) {
            rev.push_back(Letter::Sigma);
            grow(deg + 1, sigmas + 1);
            rev.pop_back();
        }
        if (n == 0 || sigmas % 2) return;
        if (long(p) * deg <= max_degree) {
            rev.push_back(Letter::Gamma);
            grow(long(p) * deg, sigmas);
            rev.pop_back();
        }
        if (!restricted && 2 + long(p) * deg <= max_degree) {
            rev.push_back(Letter::Phi);
            grow(2 + long(p) * deg, sigmas);
            rev.pop_back();
        }
    };
    // the rightmost letter is sigma or phi
    if (1 <= max_degree) {
        rev.push_back(Letter::Sigma);
        grow(1, 1);
        rev.pop_back();
    }
    if (!restricted && 2 <= max_degree) {
        rev.push_back(Letter::Phi);
        grow(2, 0);
        rev.pop_back();
    }
    std::sort(out.begin(), out.end());
    return out;
}

AdmissibleWord xi(const AdmissibleWord& w) {
    w.validate();
    std::size_t n = w.letters.size();
    if (n < 2 || w.letters[n - 1] != Letter::Sigma || w.letters[n - 2] != Letter::Sigma)
        throw StructuralError("xi needs a word ending in sigma^2: " + w.to_string());
    AdmissibleWord out = w;
    out.letters.resize(n - 2);
    out.letters.push_back(Letter::Phi);
    return out;
}

AdmissibleWord sigma2_gamma_substitution(const AdmissibleWord& w) {
    AdmissibleWord out{{}, w.p};
    for (auto l : w.letters) {
        if (l == Letter::Phi) {
            out.letters.insert(out.letters.end(), {Letter::Sigma, Letter::Sigma, Letter::Gamma});
        } else {
            out.letters.push_back(l);
        }
    }
    return out;
}

void AlphaSeq::validate() const {
    if (t.empty()) throw StructuralError("empty sequence");
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] <= 0) throw StructuralError("sequence entries must be positive");
        if (j && t[j] > t[j - 1]) throw StructuralError("sequence must be nonincreasing");
    }
}

int AlphaSeq::o() const {
    std::vector<int> u(t);
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return int(std::count_if(u.begin(), u.end(), [](int x) { return x > 0; }));
}

long AlphaSeq::degree() const {
    long s = 0;
    for (int x : t) s += ipow(p, x);
    return 2 * s;
}

std::string AlphaSeq::to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < t.size(); ++j) s += (j ? "," : "") + std::to_string(t[j]);
    return s + ")";
}

AlphaSeq chi(const AdmissibleWord& w) {
    w.validate();
    if (!w.restricted() || !w.first_type()) throw StructuralError("chi needs a restricted word: " + w.to_string());
    const auto& L = w.letters;
    if (L.size() < 2 || L[0] != Letter::Sigma || L[1] != Letter::Gamma)
        throw StructuralError("chi needs a word starting with sigma gamma: " + w.to_string());
    std::vector<int> k;  // k_1..k_s
    int run = 0;
    for (std::size_t j = 2; j < L.size(); ++j) {
        if (L[j] == Letter::Gamma) {
            k.push_back(run / 2);
            run = 0;
        } else {
            ++run;
        }
    }
    k.push_back(run / 2);
    AlphaSeq a{{}, w.p};
    for (int s = int(k.size()); s >= 1; --s) a.t.insert(a.t.end(), std::size_t(k[std::size_t(s - 1)]), s);
    return a;
}

AdmissibleWord chi_inverse(const AlphaSeq& a) {
    a.validate();
    int s = a.t.front();
    AdmissibleWord w{{Letter::Sigma}, a.p};
    for (int j = 1; j <= s; ++j) {
        w.letters.push_back(Letter::Gamma);
        long kj = std::count(a.t.begin(), a.t.end(), j);
        for (long c = 0; c < kj; ++c) w.letters.insert(w.letters.end(), {Letter::Sigma, Letter::Sigma});
    }
    return w;
}

std::vector<AlphaSeq> enumerate_alpha(std::uint32_t p, long max_shift) {
    std::vector<AlphaSeq> out;
    std::vector<int> cur;
    std::function<void(int, long)> rec = [&](int maxt, long shift) {
        if (!cur.empty()) out.push_back({cur, p});
        for (int t = 1; t <= maxt; ++t) {
            long add = 2 * (ipow(p, t) - 1);
            if (shift + add > max_shift) break;
            cur.push_back(t);
            rec(t, shift + add);
            cur.pop_back();
        }
    };
    int tmax = 0;
    while (2 * (ipow(p, tmax + 1) - 1) <= max_shift) ++tmax;
    rec(tmax, 0);
    return out;
}

GradedGroup derived_tensor_homology(int r, std::uint32_t p, int n_fold) {
    if (n_fold < 1) throw InputError("n_fold must be positive");
    GradedGroup g{{0, AbGroupType::free(std::uint64_t(r))}};
    GradedGroup zp{{0, AbGroupType::cyclic(long(p))}};
    for (int k = 0; k < n_fold; ++k) g = normalized(derived_tensor(g, zp));
    return g;
}

std::vector<StableTerm> stable_terms(int r, int i_max) {
    std::vector<StableTerm> out;
    out.push_back({0, 0, "", AbGroupType::free(std::uint64_t(r))});
    for (std::uint32_t p : primes_upto(i_max / 2 + 1)) {
        for (const auto& w : enumerate_words(p, 2L * i_max + 2, false)) {
            if (!w.first_type()) continue;
            auto st = word_stats(w);
            long deg = st.degree - st.height;
            if (deg <= i_max) out.push_back({int(deg), p, w.to_string(), AbGroupType::elementary(p, std::uint64_t(r))});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const StableTerm& a, const StableTerm& b) {
        return a.degree != b.degree ? a.degree < b.degree : a.p < b.p;
    });
    return out;
}

GradedGroup stable_homology_words(int r, int i_max) {
    GradedGroup g;
    for (const auto& t : stable_terms(r, i_max)) add_into(g, t.degree, t.group);
    return g;
}

GradedGroup stable_homology_st(int r, int i_max) {
    GradedGroup g;
    add_into(g, 0, AbGroupType::free(std::uint64_t(r)));
    for (std::uint32_t p : primes_upto(i_max / 2 + 1)) {
        for (const auto& a : enumerate_alpha(p, i_max)) {
            int sh = int(a.degree() - a.height());
            for (const auto& [i, grp] : derived_tensor_homology(r, p, a.o()))
                if (i + sh <= i_max) add_into(g, i + sh, grp);
        }
    }
    return g;
}

GradedGroup stable_homology(int r, int i_max) {
    auto a = stable_homology_words(r, i_max), b = stable_homology_st(r, i_max);
    if (!same_groups(a, b)) throw StructuralError("stable homology: word count and St(A) disagree");
    return a;
}

GradedGroup stable_gamma(std::uint32_t p, int e, int r, int i_max) {
    if (e < 1) throw InputError("exponent must be positive");
    GradedGroup g;
    for (const auto& a : enumerate_alpha(p, i_max + 2 * (ipow(p, e) - 1))) {
        if (a.t.front() != e) continue;
        long sh = 0;
        for (std::size_t j = 1; j < a.t.size(); ++j) sh += ipow(p, a.t[j]);
        sh = 2 * (sh - long(a.t.size() - 1));
        for (const auto& [i, grp] : derived_tensor_homology(r, p, a.o()))
            if (i + sh <= i_max) add_into(g, int(i + sh), grp);
    }
    return g;
}

GradedGroup stable_gamma_d(int d, int r, int i_max) {
    if (d == 1) return {{0, AbGroupType::free(std::uint64_t(r))}};
    for (std::uint32_t p : primes_upto(d)) {
        int e = 0;
        long q = 1;
        while (q < d) {
            q *= p;
            ++e;
        }
        if (q == d) return stable_gamma(p, e, r, i_max);
        if (d % long(p) == 0) return {};
    }
    return {};
}

}  // namespace derfun
