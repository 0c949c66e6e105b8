#pragma once

#include "derfun/exactlin.hpp"

#include <memory>
#include <string>
#include <vector>

namespace derfun {

enum class Family { Gamma, Lambda, Sym };

/// Expression tree for a polynomial functor.
struct FunctorExpr {
    enum class Kind { Gamma, Lambda, Sym, Tensor, DirectSum, TruncatedQ, ModP, Twist };

    Kind kind = Kind::Gamma;
    int d = 0;                 // Gamma, Lambda, Sym, TruncatedQ
    std::uint32_t p = 0;       // ModP
    int twist = 0;             // Twist
    std::vector<FunctorExpr> kids;

    static FunctorExpr gamma(int d) { return {Kind::Gamma, d, 0, 0, {}}; }
    static FunctorExpr lambda(int d) { return {Kind::Lambda, d, 0, 0, {}}; }
    static FunctorExpr sym(int d) { return {Kind::Sym, d, 0, 0, {}}; }
    static FunctorExpr power(Family f, int d);
    static FunctorExpr truncated_q(int d) { return {Kind::TruncatedQ, d, 0, 0, {}}; }
    static FunctorExpr tensor(std::vector<FunctorExpr> fs);
    static FunctorExpr direct_sum(std::vector<FunctorExpr> fs);
    static FunctorExpr mod_p(std::uint32_t p, FunctorExpr inner);
    static FunctorExpr twisted(int r, FunctorExpr inner);

    /// Weight; Twist(r, F) has weight p^r * weight(F) where p comes from the
    /// enclosing ModP. Throws InputError for a Twist outside ModP.
    long weight(std::uint32_t p = 0) const;
    std::string to_string() const;
    /// Checks d >= 0 and Twist only under ModP.
    void validate(std::uint32_t p = 0) const;
};

/// Basis of Gamma^d / S^d (exponent vectors) or Lambda^d (increasing tuples)
/// of a rank-r free module, in lexicographic order.
struct PowerBasis {
    Family family;
    int rank, degree;
    std::vector<std::vector<int>> elems;  // exponent vectors for Gamma/Sym, index tuples for Lambda
    /// Position of key in elems; throws InputError if absent.
    std::size_t index_of(const std::vector<int>& key) const;
};

std::shared_ptr<const PowerBasis> power_basis(Family f, int rank, int degree);

Int binomial(long n, long k);
Int multinomial(const std::vector<int>& parts);

std::size_t eval_dim(const FunctorExpr& f, std::size_t r);

/// Matrix of F(m) in canonical bases, for m a (b x a) matrix of a map Z^a -> Z^b.
/// Under ModP the computation runs in F_p arithmetic throughout.
IntMatrix eval_morphism(const FunctorExpr& f, const IntMatrix& m);

struct NatContext {
    std::uint32_t p = 0;        // 0 means over Z
    int rank = 1;
    int a = 0, b = 0;           // weights of the two tensor factors, or source weight
    int twist = 1;              // Frobenius twist index for verschiebung/frobenius
    Family family = Family::Gamma;
};

/// Named natural transformations. Supported names: mult, comult, verschiebung,
/// frobenius, lambda_to_gamma, koszul_step, skew_koszul_step, q_res_d1, q_res_d0.
///   mult            F^a (x) F^b -> F^{a+b}          (family Gamma/Lambda/Sym)
///   comult          F^{a+b} -> F^a (x) F^b
///   verschiebung    Gamma^{p^twist} -> V^(twist)    (p required)
///   frobenius       V^(twist) -> S^{p^twist}        (p required)
///   lambda_to_gamma Lambda^a -> Gamma^a             (p = 2 only)
///   koszul_step     Gamma^a (x) Lambda^b -> Gamma^{a-1} (x) Lambda^{b+1}
///   skew_koszul_step Gamma^a(V) (x) Gamma^b(V^(1)) -> Gamma^{a-2}(V) (x) Gamma^{b+1}(V^(1))   (p = 2)
///   q_res_d1        S^a (x) Lambda^b(V^(1)) -> S^{a+p} (x) Lambda^{b-1}(V^(1))
///   q_res_d0        S^a -> Q^a, x^e -> prod(e_i!) gamma_e
IntMatrix nat_map(const std::string& name, const NatContext& ctx);

/// Exponent vectors with all entries < p: the canonical basis of Q^d inside Gamma^d.
std::vector<std::vector<int>> truncated_basis(int rank, int d, std::uint32_t p);

/// Compares F(m) mod p with ModP(p, F)(m) on random integer matrices.
bool base_change_check(const FunctorExpr& f, int r, std::uint32_t p, int trials = 20,
                       std::uint64_t seed = 1);

}  // namespace derfun
