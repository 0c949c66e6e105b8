#pragma once

#include "derfun/exactlin.hpp"
#include "derfun/polyfunc.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace derfun {

/// One tensor factor of a summand: family, weight and Frobenius twist.
struct TensorFactor {
    Family family;
    int degree;
    int twist;
};

/// A direct summand of one term of a weight complex.
struct WeightSummand {
    std::vector<int> exponents;        // koszul: e0,k1,e1,k2,e2,...; skew: a0,a1,...
    std::vector<TensorFactor> factors;
    std::size_t dim = 0;
    std::size_t offset = 0;            // position inside the term
    std::string label() const;
    FunctorExpr functor(std::uint32_t p) const;
};

/// Weight-d component of one of the two differential graded algebras, over F_p.
struct WeightComplex {
    enum class Kind { Koszul, SkewKoszul };
    Kind kind = Kind::Koszul;
    int d = 0;
    std::uint32_t p = 2;
    int rank = 1;
    ChainComplex complex;
    std::map<int, std::vector<WeightSummand>> terms;

    std::size_t dim(int i) const { return complex.rank(i); }
    /// d o d = 0 and term dimensions against eval_dim; throws StructuralError.
    void validate() const;
    /// dim over F_p of the homology at degree i.
    std::size_t homology_dim(int i) const;
    std::string to_string() const;
};

/// Lambda(V[1]) (x) prod_{s>=1} Gamma(V^(s)[2]) (x) Lambda(V^(s)[1]) in weight d with the
/// Koszul differential on each twisted block.
WeightComplex koszul_weight_complex(std::uint32_t p, int d, int r);
/// prod_{s>=0} Gamma(V^(s)[1]) over F_2 in weight d.
WeightComplex skew_koszul_weight_complex(int d, int r);

struct Cycles {
    std::size_t dim = 0;
    IntMatrix basis;  // columns span the kernel
};

Cycles cycles(const WeightComplex& w, int i);

/// dim Phi^d(F_2^r). The three descriptions (cycles, image of the first
/// differential, cokernel of Lambda^d -> Gamma^d) are computed and compared;
/// disagreement throws StructuralError.
std::size_t phi(int d, int r);

/// Kernel of Gamma^k (x) Lambda^{d-k} -> Gamma^{k-1} (x) Lambda^{d-k+1} over F_p^r.
/// Zero for k outside [0, d].
Cycles weyl_hook(int d, int k, std::uint32_t p, int r);

struct SigmaResult {
    std::size_t dim = 0;
    IntMatrix presentation;  // the map u, cokernel is sigma_(1,n)
};

/// sigma_(1,n)(F_2^r) as the cokernel of u. Throws StructuralError when it
/// disagrees with dim S^{n+2} - dim Lambda^{n+2}.
SigmaResult sigma_one_n(int n, int r);

/// gr_{-i} Gamma^d(Z^r) for the adic filtration of the augmentation ideal,
/// computed from the definition. Where a closed description exists it is
/// evaluated too and compared.
AbGroupType maximal_filtration_gr(int d, int i, int r);
/// Same, from the closed description only; nullopt when none applies.
std::optional<AbGroupType> maximal_filtration_gr_closed(int d, int i, int r);

/// Homology of the weight-d part of S(V) (x) Lambda(V^(1)[1]) over F_p is Q^d in
/// degree 0 (as the cokernel mapping onto Q^d) and zero above.
bool q_resolution_check(int d, std::uint32_t p, int r);

struct FiltrationRow {
    int weight = 0, n = 0;
    std::size_t from_ideals = 0;   // dim I^n / I^{n+1} in weight d
    std::size_t from_formula = 0;  // dim Q^n (x) Gamma^{(d-n)/p}(V^(1))
};

/// Principal filtration of Gamma(F_p^r) up to the weight bound. Also checks the
/// iterated form dim Gamma^d = sum prod_s dim Q^{a_s}; throws StructuralError on mismatch.
std::vector<FiltrationRow> principal_filtration_dims(int weight_bound, std::uint32_t p, int r);

}  // namespace derfun
