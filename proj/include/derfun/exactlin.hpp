#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace derfun {

using Int = mpz_class;

/// Structural problems in inputs (shape mismatch, broken invariants).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejected parameters (non-prime modulus, out-of-range degree, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_prime(std::uint64_t p);

struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Int value;
};

/// Sparse exact matrix, integral or over F_p.
/// Entries are kept sorted row-major, without duplicates or zeros.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols, std::optional<std::uint32_t> modulus = {});

    /// Duplicates are summed, zeros dropped, values reduced when a modulus is set.
    static IntMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Entry> entries,
                                   std::optional<std::uint32_t> modulus = {});
    static IntMatrix from_dense(const std::vector<std::vector<long>>& rows,
                                std::optional<std::uint32_t> modulus = {});
    static IntMatrix identity(std::size_t n, long scale = 1);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::optional<std::uint32_t> modulus() const { return modulus_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    Int at(std::size_t r, std::size_t c) const;
    IntMatrix transpose() const;
    IntMatrix reduce_mod(std::uint32_t p) const;
    std::vector<std::vector<Int>> to_dense() const;

    bool operator==(const IntMatrix& o) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::optional<std::uint32_t> modulus_;
    std::vector<Entry> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b);
IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);

/// Finitely generated abelian group: Z^free_rank plus invariant factors.
struct AbGroupType {
    std::uint64_t free_rank = 0;
    std::vector<Int> torsion;  // ascending, each divides the next, no 1s

    static AbGroupType from_factors(std::uint64_t free_rank, std::vector<Int> factors);
    static AbGroupType cyclic(long order) { return from_factors(0, {Int(order)}); }
    static AbGroupType elementary(long p, std::uint64_t dim);
    static AbGroupType free(std::uint64_t rank) { return {rank, {}}; }

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    Int torsion_order() const;
    /// Order of the p-primary part of the torsion subgroup.
    Int p_order(long p) const;
    /// dim_{F_p} (G tensor F_p).
    std::uint64_t mod_p_dim(long p) const;
    /// dim_{F_p} of the p-torsion subgroup {x : px = 0}.
    std::uint64_t p_torsion_dim(long p) const;
    AbGroupType p_part(long p) const;
    std::string to_string() const;

    bool operator==(const AbGroupType& o) const = default;
};

AbGroupType operator+(const AbGroupType& a, const AbGroupType& b);  // direct sum
AbGroupType scale(const AbGroupType& a, std::uint64_t copies);
AbGroupType tensor(const AbGroupType& a, const AbGroupType& b);
AbGroupType tor(const AbGroupType& a, const AbGroupType& b);

using GradedGroup = std::map<int, AbGroupType>;

void add_into(GradedGroup& g, int degree, const AbGroupType& a);
GradedGroup shift(const GradedGroup& g, int by);
GradedGroup direct_sum(const GradedGroup& a, const GradedGroup& b);
/// Drops zero entries.
GradedGroup normalized(const GradedGroup& g);
bool same_groups(const GradedGroup& a, const GradedGroup& b);
std::string to_string(const GradedGroup& g);
/// Kunneth: homology of the tensor product of complexes of free groups with
/// homology a and b.
GradedGroup derived_tensor(const GradedGroup& a, const GradedGroup& b);

struct SmithResult {
    std::vector<Int> factors;  // nonzero diagonal, ascending divisibility, units included
    std::size_t rank = 0;
};

/// Sparse Smith normal form over Z. Runs on machine words and restarts
/// with GMP integers when an intermediate value overflows.
SmithResult smith_normal_form(const IntMatrix& m);

/// Dense textbook SNF (row/column gcd steps). Used as an oracle in tests.
SmithResult dense_smith_normal_form(const IntMatrix& m);

std::size_t fp_rank(const IntMatrix& m, std::uint32_t p);

/// Rank over Z, estimated as the max of ranks modulo several 30-bit primes
/// drawn from a fixed seed.
std::size_t modular_rank(const IntMatrix& m);

AbGroupType group_of_two_term(const IntMatrix& f);

/// Bounded chain complex; differential at degree i maps C_i to C_{i-1}.
class ChainComplex {
public:
    ChainComplex() = default;
    ChainComplex(int lo, int hi, std::optional<std::uint32_t> modulus = {});

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    std::optional<std::uint32_t> modulus() const { return modulus_; }

    std::size_t rank(int deg) const;
    void set_rank(int deg, std::size_t r);
    /// Differential C_deg -> C_{deg-1}; zero matrix if never set.
    const IntMatrix& differential(int deg) const;
    void set_differential(int deg, IntMatrix d);

    /// Shapes and d o d = 0; throws StructuralError.
    void validate() const;

private:
    int lo_ = 0, hi_ = -1;
    std::optional<std::uint32_t> modulus_;
    std::vector<std::size_t> ranks_;
    std::map<int, IntMatrix> diffs_;
    mutable std::map<int, IntMatrix> zero_cache_;
};

AbGroupType homology_at(const ChainComplex& c, int i);
GradedGroup homology(const ChainComplex& c);

/// Homology from already computed Smith data of the two adjacent differentials.
AbGroupType homology_from_smith(std::size_t dim, const SmithResult& out, const SmithResult& in);

/// Basis of the kernel of m (columns of the returned matrix) over F_p.
IntMatrix fp_kernel(const IntMatrix& m, std::uint32_t p);

}  // namespace derfun
