#pragma once

#include "derfun/exactlin.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace derfun {

/// One term of the conjectured associated graded: L F^{d_0}(A) tensored with
/// L F^{d_alpha}(A (x)^L Z/p^{(x) o(alpha)}) over the sequences alpha, shifted.
/// F is Lambda for odd n and Gamma for even n.
struct ConjTerm {
    std::uint32_t p = 2;
    int n = 1;
    int d0 = 0;
    /// Sequences of length M (trailing zeros allowed) with their multiplicities.
    std::vector<std::pair<std::vector<int>, int>> parts;
    int shift = 0;

    int weight() const;
    std::string to_string() const;
};

/// Every term of weight d for L_*Gamma^d(-, n), for all primes p <= d.
std::vector<ConjTerm> conjecture_terms(int d, int n);

/// Homotopy of L Lambda^k(Z^r/p) from the small model: degree i is
/// Gamma^i (x) Lambda^{k-i}, differential p times the Koszul differential.
GradedGroup lambda_of_modp(int k, std::uint32_t p, int r);
/// Homotopy of L Gamma^k(Z^r/p) from the Dold-Kan engine on p * id.
GradedGroup gamma_of_modp(int k, std::uint32_t p, int r);

/// Homology of one term (shift included).
GradedGroup conj_term_homology(const ConjTerm& t, int r);

/// Direct sum of all terms and the diagonal Lambda^d or Gamma^d in degree nd.
/// Only orders per prime and free ranks are meaningful: the conjecture is up to
/// a filtration.
GradedGroup conjecture_rhs(int d, int n, int r);

struct ConjMismatch {
    int d = 0, n = 0, s = 0, r = 0;
    long p = 0;  // 0 for the free rank
    std::string expected, got;
};

/// Compares conjecture_rhs with the closed forms for 1 <= n <= n_max by
/// p-primary order in every degree and by free rank.
std::vector<ConjMismatch> conjecture_check(int d, int n_max, int r);

/// Tensor product of chain complexes with the Koszul sign on the second differential.
ChainComplex tensor_complex(const ChainComplex& a, const ChainComplex& b);

/// Homology of sum over k_0 + k_1 p + ... + k_d p^d = d of
/// (Lambda^{k_0}(A)[k_0], 0) (x) C^{k_1} (x) ... (x) C^{k_d}, where C^k is the
/// weight-k part of (Gamma(A[2]) (x) Lambda(A[1]), p d_Kos), built as one complex.
GradedGroup n1_complex_homology(int d, std::uint32_t p, int r);

}  // namespace derfun
