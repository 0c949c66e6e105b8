#pragma once

#include "derfun/exactlin.hpp"
#include "derfun/polyfunc.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace derfun {

/// Basis element of K(C)_m: a monotone surjection [m] -> [k] together with a
/// basis vector of C_k. The surjection is stored as its jump set: bit j is set
/// iff sigma(j+1) = sigma(j) + 1, so k is the number of set bits.
struct KanCell {
    std::uint64_t jumps = 0;
    std::uint8_t part = 0;  // 0: C_n, 1: C_{n+1}
    std::uint32_t index = 0;
};

/// Dold-Kan image K(C) of a chain complex C concentrated in degrees n and n+1,
/// truncated at simplicial degree M. Faces and degeneracies are stored as
/// integer matrices.
class SimplicialModule {
public:
    int base_degree() const { return n_; }
    int truncation() const { return M_; }
    std::size_t lower_rank() const { return b_; }   // rank of C_n
    std::size_t upper_rank() const { return a_; }   // rank of C_{n+1}
    const IntMatrix& boundary() const { return f_; }

    std::size_t rank(int m) const { return cells(m).size(); }
    const std::vector<KanCell>& cells(int m) const;
    /// Position of a cell in degree m; throws InputError when absent.
    std::size_t cell_index(int m, const KanCell& c) const;

    /// d_i : K_m -> K_{m-1} for 1 <= m <= M, 0 <= i <= m.
    const IntMatrix& face(int m, int i) const;
    /// s_i : K_m -> K_{m+1} for 0 <= m < M, 0 <= i <= m.
    const IntMatrix& degeneracy(int m, int i) const;

    /// Largest surjection target among the cells (n, or n+1 when C_{n+1} != 0).
    int max_jumps() const { return a_ ? n_ + 1 : n_; }

    /// Checks every simplicial identity up to the truncation; throws StructuralError.
    void validate() const;

private:
    friend SimplicialModule kan_of_two_term(const IntMatrix& f, int n, int M);

    int n_ = 0, M_ = 0;
    std::size_t a_ = 0, b_ = 0;
    IntMatrix f_;
    std::vector<std::vector<KanCell>> cells_;
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> first_;
    std::vector<std::vector<IntMatrix>> faces_, degens_;
};

/// K(Z^r[n]) truncated at degree M.
SimplicialModule kan_of_shift(std::size_t r, int n, int M);
/// K of f : Z^a -> Z^b placed in degrees n+1 and n, truncated at degree M.
SimplicialModule kan_of_two_term(const IntMatrix& f, int n, int M);

enum class ChainMode { Moore, Normalized };

struct Budget {
    std::size_t max_rank = 50000;
    std::size_t max_nonzeros = 10000000;
};

/// Predicted sizes of the chain complex an engine would build.
struct Prediction {
    std::map<int, Int> ranks;
    Int nonzeros;
    bool feasible = true;
    std::string reason;
    std::string to_string() const;
};

struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(const std::string& what, Prediction p) : std::runtime_error(what), prediction(std::move(p)) {}
    Prediction prediction;
};

struct EngineOptions {
    ChainMode mode = ChainMode::Normalized;
    Budget budget;
    unsigned threads = 1;  // 0: hardware concurrency
    int truncation = 0;    // Moore mode only; 0 picks the vanishing bound plus one
    bool certify = true;   // check normalized ranks and d o d = 0
};

/// Sizes of the degree window [lo, hi] for F applied to K(C), C = (f : Z^a -> Z^b)
/// in degrees n+1, n. Normalized ranks come from inclusion-exclusion over the
/// full term dimensions.
Prediction predict(const FunctorExpr& F, const IntMatrix& f, int n, ChainMode mode, int lo, int hi,
                   const Budget& budget);

/// Highest degree in which the normalized chains of F(K(C)) can be nonzero.
int top_degree(const FunctorExpr& F, const IntMatrix& f, int n);

/// Chain complex of F applied degreewise to sm. Normalized mode returns the
/// quotient by degenerate monomials, whose basis is the set of monomials in
/// cells whose jump sets jointly cover every position. Moore mode uses full
/// terms; its top degree is not a valid homology degree.
ChainComplex moore_or_normalized(const SimplicialModule& sm, const FunctorExpr& F, ChainMode mode,
                                 const EngineOptions& opts = {});

/// Normalized chains only in degrees lo..hi.
ChainComplex normalized_window(const SimplicialModule& sm, const FunctorExpr& F, int lo, int hi,
                               const EngineOptions& opts = {});

AbGroupType derived_functor(const FunctorExpr& F, std::size_t r, int n, int i, const EngineOptions& opts = {});
GradedGroup derived_functor_all(const FunctorExpr& F, std::size_t r, int n, const EngineOptions& opts = {});

AbGroupType derived_of_complex(const FunctorExpr& F, const IntMatrix& f, int n, int i,
                               const EngineOptions& opts = {});
GradedGroup derived_of_complex_all(const FunctorExpr& F, const IntMatrix& f, int n, const EngineOptions& opts = {});

/// Dimensions over F_p of the homology of the chains reduced mod p. These are
/// mod-p dimensions, not group types.
std::map<int, std::uint64_t> derived_dims_mod_p(const FunctorExpr& F, std::size_t r, int n, std::uint32_t p,
                                                const EngineOptions& opts = {});

}  // namespace derfun
