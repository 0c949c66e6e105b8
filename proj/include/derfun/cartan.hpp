#pragma once

#include "derfun/exactlin.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace derfun {

enum class Letter { Sigma, Gamma, Phi };

/// Word over {sigma, gamma_p, phi_p}. Letters are stored left to right.
struct AdmissibleWord {
    std::vector<Letter> letters;
    std::uint32_t p = 2;

    /// Parses "sgss"-style strings: s = sigma, g = gamma_p, f = phi_p.
    static AdmissibleWord parse(const std::string& s, std::uint32_t p);

    /// Starts with sigma or phi, even number of sigmas right of every gamma and
    /// phi, ends with sigma or phi. Throws StructuralError otherwise.
    void validate() const;
    bool first_type() const { return !letters.empty() && letters.back() == Letter::Sigma; }
    bool restricted() const;
    std::string to_string() const;
    bool operator==(const AdmissibleWord&) const = default;
    auto operator<=>(const AdmissibleWord&) const = default;
};

struct WordStats {
    long degree = 0;
    int height = 0;
    long weight = 0;
};

/// deg(sigma b) = 1 + deg b, deg(phi b) = 2 + p deg b, deg(gamma b) = p deg b;
/// height counts sigma and phi; weight is p^(#gamma + #phi), divided by p for
/// words of the second type.
WordStats word_stats(const AdmissibleWord& w);

/// All valid words starting with sigma gamma_p of degree <= max_degree, of both
/// types, or only the phi-free ones when restricted is set. Sorted.
std::vector<AdmissibleWord> enumerate_words(std::uint32_t p, long max_degree, bool restricted);

/// Replaces the final sigma^2 by phi_p.
AdmissibleWord xi(const AdmissibleWord& w);
/// Replaces every phi_p by sigma^2 gamma_p.
AdmissibleWord sigma2_gamma_substitution(const AdmissibleWord& w);

/// Nonincreasing positive sequence t_1 >= ... >= t_m > 0.
struct AlphaSeq {
    std::vector<int> t;
    std::uint32_t p = 2;

    void validate() const;
    /// Number of distinct values.
    int o() const;
    long degree() const;  // 2 sum p^{t_j}
    int height() const { return 2 * int(t.size()); }
    std::string to_string() const;
    bool operator==(const AlphaSeq&) const = default;
};

/// Restricted word sigma gamma (sigma^2)^{k_1} gamma ... gamma (sigma^2)^{k_s}
/// to (s^{k_s}, ..., 1^{k_1}). The word's degree and height exceed those of the
/// sequence by one (the leading sigma).
AlphaSeq chi(const AdmissibleWord& w);
AdmissibleWord chi_inverse(const AlphaSeq& a);

/// All sequences for the prime p with 2(sum p^{t_j} - m) <= max_shift.
std::vector<AlphaSeq> enumerate_alpha(std::uint32_t p, long max_shift);

/// H_*(Z^r (x)^L Z/p (x)^L ... (x)^L Z/p) with n_fold copies of Z/p.
GradedGroup derived_tensor_homology(int r, std::uint32_t p, int n_fold);

struct StableTerm {
    int degree = 0;
    std::uint32_t p = 0;
    std::string word;
    AbGroupType group;
};

/// Summands of H^st_*(Z^r) of degree <= i_max from first-type admissible words.
std::vector<StableTerm> stable_terms(int r, int i_max);

GradedGroup stable_homology_words(int r, int i_max);
/// Z^r[0] plus the homology of St(Z^r).
GradedGroup stable_homology_st(int r, int i_max);
/// Both of the above; throws StructuralError when they differ.
GradedGroup stable_homology(int r, int i_max);

/// L^st_*Gamma^{p^e}(Z^r) in degrees <= i_max.
GradedGroup stable_gamma(std::uint32_t p, int e, int r, int i_max);
/// L^st_*Gamma^d(Z^r); zero unless d is 1 or a prime power.
GradedGroup stable_gamma_d(int d, int r, int i_max);

}  // namespace derfun
