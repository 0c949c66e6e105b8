#pragma once

#include "derfun/exactlin.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace derfun {

/// Degree -> dimension over a prime field.
using DimTable = std::map<int, std::uint64_t>;

/// L_*Gamma^d(F_2^r, n) over F_2, from the tensor product of divided power
/// algebras on the generators V^{(r_1+...+r_n)} indexed by N^n.
DimTable char2_all(int d, int n, int r);

/// L_*Gamma^d(F_p^r, 1) over F_p for odd p. Throws InputError for p = 2.
DimTable oddp_n1(std::uint32_t p, int d, int r);

/// L_*Gamma^d(Z^r, 1): Lambda^d free in degree d, and for 0 < i < d the
/// p-torsion read off the cycles of the weight-d Koszul complexes.
GradedGroup integral_n1(int d, int r);

/// p-part of L_iGamma^d(Z^r, 1) up to a filtration, as F_p-dimensions for
/// 0 < i < d, from decompositions of k and hook Weyl functor dimensions.
DimTable uptofiltration_n1(int d, std::uint32_t p, int r);

GradedGroup integral_gamma2(int n, int r);
GradedGroup integral_gamma3(int n, int r);
/// Direct formula, separate odd and even cases. For n >= 3 it is compared
/// with integral_gamma4_recursive; disagreement throws StructuralError.
GradedGroup integral_gamma4(int n, int r);
GradedGroup integral_gamma4_direct(int n, int r);
/// L(n-2)[8] plus the correction terms, with the direct formula at n = 1, 2.
GradedGroup integral_gamma4_recursive(int n, int r);

/// Gamma^2_Z(Z/2^r), from the derived functor engine and cached per rank.
AbGroupType gamma2_of_mod2(int r);

/// Any closed form that applies to L_*Gamma^d(Z^r, n): d <= 1, n <= 1, or d <= 4.
std::optional<GradedGroup> integral_closed(int d, int n, int r);

/// Group of a named functor evaluated at Z^r. Atoms: A, A/p, Lk, Gk (free
/// Lambda^k, Gamma^k), L2F, G2F (Lambda^2, Gamma^2 of A/2 over F_2), G2Z
/// (Gamma^2_Z(A/2)), Phi4, 0. An expression is a '+'-separated sum of
/// '*'-separated tensor products of atoms. Twists are ignored: they do not
/// change the group.
AbGroupType eval_functor_expr(const std::string& expr, int r);

struct RecursionMismatch {
    int n = 0, i = 0, r = 0;
    std::uint64_t expected = 0, got = 0;
};

/// Checks L_iGamma^4_{F_2}(n) = L_{i-8}Gamma^4_{F_2}(n-2) + C_i for 3 <= n <= n_max
/// and r = 1..4. Returns the mismatches (empty on success).
std::vector<RecursionMismatch> char2_recursion_check(int n_max);
/// Dimension of C_i(F_2^r, n).
std::uint64_t char2_correction_dim(int n, int i, int r);

/// dim(L_i (x) F_2) + dim 2-torsion(L_{i-1}) = dim L_iGamma^4_{F_2} for all i.
std::vector<RecursionMismatch> uct_check(int n, int r);

}  // namespace derfun
