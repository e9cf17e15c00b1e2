#ifndef CSTARLAB_KTHEORY_HPP
#define CSTARLAB_KTHEORY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cstarlab/graphs.hpp"
#include "cstarlab/rational.hpp"

namespace cstarlab::ktheory {

class IntMatrix {
  public:
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n);
    // A^t - I of a digraph's adjacency matrix.
    static IntMatrix transpose_minus_identity(const graphs::Digraph& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  private:
    std::size_t rows_, cols_;
    std::vector<BigInt> entries_;
};

// Invariant factors d_1 | d_2 | ... | d_k (all positive) plus the rank.
struct SmithNormalForm {
    std::vector<BigInt> invariant_factors;
    std::size_t rank = 0;
    std::size_t nullity = 0;  // cols - rank
};

// Torsion invariant-factor chain (entries >= 2) plus free rank.
struct FiniteAbelianGroup {
    std::vector<BigInt> invariant_factors;
    std::size_t free_rank = 0;

    bool is_finite() const { return free_rank == 0; }
    bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
    BigInt order() const;  // torsion order; requires is_finite()
    std::string to_string() const;  // "Z^s + Z/d1 + Z/d2 + ..."

    static FiniteAbelianGroup from_cyclic_orders(const std::vector<BigInt>& orders,
                                                 std::size_t free_rank = 0);

    bool operator==(const FiniteAbelianGroup&) const = default;
};

struct KGroups {
    FiniteAbelianGroup k0;
    std::size_t k1_rank = 0;
};

SmithNormalForm smith_normal_form(const IntMatrix& m);

// Brute-force oracle: d_i = g_i/g_{i-1} with g_i the gcd of all i x i minors.
// Dimensions capped at 6 (combinatorial blowup).
SmithNormalForm minors_gcd_oracle(const IntMatrix& m);

FiniteAbelianGroup cokernel(const SmithNormalForm& snf);

// K_0 = coker(A^t - I), K_1 rank = ker rank; the digraph must have no sinks.
KGroups k_groups(const graphs::Digraph& d);

// p-primary component of a finite group (or of the torsion part).
FiniteAbelianGroup sylow_component(const FiniteAbelianGroup& g, const BigInt& p);

// Exponent partition lambda_1 >= lambda_2 >= ... of the p-Sylow subgroup.
std::vector<unsigned> sylow_partition(const FiniteAbelianGroup& g, const BigInt& p);

// N(V) for a p-group with the given exponent partition.
double wood_normalizing_constant(const BigInt& p, const std::vector<unsigned>& partition);

struct PGroupSpec {
    BigInt p;                        // odd prime not dividing r-1
    std::vector<unsigned> partition; // exponents, descending; empty = trivial
};

// Limiting probability that the p-Sylow parts of K_0 match the given V, per
// prime, times prod_{k>=0}(1-p^{-2k-1}) truncated below 1e-13.
double wood_limit_probability(const std::vector<PGroupSpec>& v, std::size_t r);

bool is_prime(const BigInt& n);

}  // namespace cstarlab::ktheory

#endif
