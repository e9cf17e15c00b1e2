#include "cstarlab/ktheory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace cstarlab::ktheory {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transpose_minus_identity(const graphs::Digraph& d) {
    const std::size_t n = d.size();
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = BigInt(d.at(j, i)) - (i == j ? 1 : 0);
    return m;
}

namespace {

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

BigInt gcd_big(BigInt a, BigInt b) {
    a = abs_big(a);
    b = abs_big(b);
    while (b != 0) {
        BigInt t = a % b;
        a = std::move(b);
        b = std::move(t);
    }
    return a;
}

}  // namespace

SmithNormalForm smith_normal_form(const IntMatrix& input) {
    IntMatrix m = input;
    const std::size_t rows = m.rows(), cols = m.cols();
    const std::size_t bound = std::min(rows, cols);
    std::size_t t = 0;

    while (t < bound) {
        // Pivot on the smallest nonzero entry of the trailing submatrix to
        // control coefficient growth.
        std::size_t pi = t, pj = t;
        bool found = false;
        BigInt best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                if (m.at(i, j) == 0) continue;
                BigInt a = abs_big(m.at(i, j));
                if (!found || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break;
        if (pi != t)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m.at(t, j), m.at(pi, j));
        if (pj != t)
            for (std::size_t i = 0; i < rows; ++i) std::swap(m.at(i, t), m.at(i, pj));

        // Reduce column, then row; a leftover remainder becomes the smaller
        // pivot on the next pass.
        bool dirty = false;
        for (std::size_t i = t + 1; i < rows && !dirty; ++i) {
            if (m.at(i, t) == 0) continue;
            BigInt q = m.at(i, t) / m.at(t, t);
            for (std::size_t j = t; j < cols; ++j) m.at(i, j) -= q * m.at(t, j);
            if (m.at(i, t) != 0) dirty = true;
        }
        if (dirty) continue;
        for (std::size_t j = t + 1; j < cols && !dirty; ++j) {
            if (m.at(t, j) == 0) continue;
            BigInt q = m.at(t, j) / m.at(t, t);
            for (std::size_t i = t; i < rows; ++i) m.at(i, j) -= q * m.at(i, t);
            if (m.at(t, j) != 0) dirty = true;
        }
        if (dirty) continue;

        // Enforce the divisibility chain: fold any non-divisible entry of the
        // trailing submatrix into the pivot row and repeat.
        bool divides_all = true;
        for (std::size_t i = t + 1; i < rows && divides_all; ++i)
            for (std::size_t j = t + 1; j < cols && divides_all; ++j)
                if (m.at(i, j) % m.at(t, t) != 0) {
                    for (std::size_t c = t; c < cols; ++c) m.at(t, c) += m.at(i, c);
                    divides_all = false;
                }
        if (!divides_all) continue;
        ++t;
    }

    SmithNormalForm snf;
    snf.rank = t;
    snf.nullity = cols - t;
    snf.invariant_factors.reserve(t);
    for (std::size_t i = 0; i < t; ++i) snf.invariant_factors.push_back(abs_big(m.at(i, i)));
    return snf;
}

namespace {

// Determinant by cofactor expansion; only used on tiny submatrices.
BigInt small_det(const IntMatrix& m, const std::vector<std::size_t>& ri,
                 const std::vector<std::size_t>& ci) {
    const std::size_t k = ri.size();
    if (k == 1) return m.at(ri[0], ci[0]);
    BigInt det = 0;
    std::vector<std::size_t> sub_rows(ri.begin() + 1, ri.end());
    std::vector<std::size_t> sub_cols(k - 1);
    for (std::size_t c = 0; c < k; ++c) {
        if (m.at(ri[0], ci[c]) == 0) continue;
        std::size_t idx = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (j != c) sub_cols[idx++] = ci[j];
        BigInt minor = small_det(m, sub_rows, sub_cols);
        if (c % 2 == 0)
            det += m.at(ri[0], ci[c]) * minor;
        else
            det -= m.at(ri[0], ci[c]) * minor;
    }
    return det;
}

void combinations(std::size_t n, std::size_t k,
                  const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == k) {
            fn(idx);
            return;
        }
        for (std::size_t i = start; i + (k - depth) <= n; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

}  // namespace

SmithNormalForm minors_gcd_oracle(const IntMatrix& m) {
    if (m.rows() > 6 || m.cols() > 6)
        throw std::invalid_argument("minors_gcd_oracle: dimensions capped at 6");
    const std::size_t bound = std::min(m.rows(), m.cols());
    std::vector<BigInt> g;  // g[i] = gcd of all (i+1)x(i+1) minors
    for (std::size_t k = 1; k <= bound; ++k) {
        BigInt gk = 0;
        combinations(m.rows(), k, [&](const std::vector<std::size_t>& ri) {
            combinations(m.cols(), k, [&](const std::vector<std::size_t>& ci) {
                gk = gcd_big(gk, small_det(m, ri, ci));
            });
        });
        if (gk == 0) break;
        g.push_back(gk);
    }
    SmithNormalForm snf;
    snf.rank = g.size();
    snf.nullity = m.cols() - snf.rank;
    BigInt prev = 1;
    for (const BigInt& gk : g) {
        snf.invariant_factors.push_back(gk / prev);
        prev = gk;
    }
    return snf;
}

BigInt FiniteAbelianGroup::order() const {
    if (!is_finite()) throw std::logic_error("FiniteAbelianGroup: infinite group has no order");
    BigInt o = 1;
    for (const BigInt& d : invariant_factors) o *= d;
    return o;
}

std::string FiniteAbelianGroup::to_string() const {
    if (is_trivial()) return "0";
    std::string out;
    if (free_rank > 0) out = "Z^" + std::to_string(free_rank);
    for (const BigInt& d : invariant_factors) {
        if (!out.empty()) out += " + ";
        out += "Z/" + d.str();
    }
    return out;
}

FiniteAbelianGroup FiniteAbelianGroup::from_cyclic_orders(const std::vector<BigInt>& orders,
                                                          std::size_t free_rank) {
    // Invariant factors from arbitrary cyclic orders via repeated gcd/lcm.
    std::vector<BigInt> work;
    for (const BigInt& o : orders) {
        if (o < 1) throw std::invalid_argument("from_cyclic_orders: orders must be >= 1");
        if (o > 1) work.push_back(o);
    }
    for (std::size_t i = 0; i < work.size(); ++i)
        for (std::size_t j = i + 1; j < work.size(); ++j) {
            BigInt g = gcd_big(work[i], work[j]);
            BigInt l = work[i] / g * work[j];
            work[i] = g;  // gcd first so the chain divides upward
            work[j] = l;
        }
    std::vector<BigInt> chain;
    for (const BigInt& d : work)
        if (d > 1) chain.push_back(d);
    std::sort(chain.begin(), chain.end());
    FiniteAbelianGroup g;
    g.invariant_factors = std::move(chain);
    g.free_rank = free_rank;
    return g;
}

FiniteAbelianGroup cokernel(const SmithNormalForm& snf) {
    FiniteAbelianGroup g;
    g.free_rank = snf.nullity;
    for (const BigInt& d : snf.invariant_factors)
        if (d > 1) g.invariant_factors.push_back(d);
    return g;
}

KGroups k_groups(const graphs::Digraph& d) {
    for (std::size_t v = 0; v < d.size(); ++v)
        if (d.out_degree(v) == 0)
            throw std::invalid_argument("k_groups: graph has a sink");
    SmithNormalForm snf = smith_normal_form(IntMatrix::transpose_minus_identity(d));
    KGroups out;
    out.k0 = cokernel(snf);
    out.k1_rank = snf.nullity;
    return out;
}

bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    for (BigInt d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FiniteAbelianGroup sylow_component(const FiniteAbelianGroup& g, const BigInt& p) {
    if (!is_prime(p)) throw std::invalid_argument("sylow_component: p must be prime");
    FiniteAbelianGroup out;
    for (const BigInt& d : g.invariant_factors) {
        BigInt pk = 1, rem = d;
        while (rem % p == 0) {
            pk *= p;
            rem /= p;
        }
        if (pk > 1) out.invariant_factors.push_back(pk);
    }
    return out;
}

std::vector<unsigned> sylow_partition(const FiniteAbelianGroup& g, const BigInt& p) {
    std::vector<unsigned> partition;
    for (const BigInt& d : sylow_component(g, p).invariant_factors) {
        unsigned e = 0;
        BigInt v = d;
        while (v > 1) {
            v /= p;
            ++e;
        }
        partition.push_back(e);
    }
    std::sort(partition.rbegin(), partition.rend());
    return partition;
}

double wood_normalizing_constant(const BigInt& p, const std::vector<unsigned>& partition) {
    for (std::size_t i = 1; i < partition.size(); ++i)
        if (partition[i] > partition[i - 1])
            throw std::invalid_argument("wood_normalizing_constant: partition must be descending");
    if (partition.empty()) return 1.0;
    const unsigned lambda1 = partition[0];
    auto mu = [&](unsigned i) {
        unsigned count = 0;
        for (unsigned l : partition)
            if (l >= i) ++count;
        return count;
    };
    const double pd = p.convert_to<double>();
    double log_n = 0;
    for (unsigned i = 1; i <= lambda1; ++i) {
        double mi = mu(i);
        log_n -= mi * (mi + 1) / 2.0 * std::log(pd);
        unsigned drop = mu(i) - mu(i + 1);
        for (unsigned j = 1; j <= drop / 2; ++j)
            log_n -= std::log1p(-std::pow(pd, -2.0 * j));
    }
    return std::exp(log_n);
}

double wood_limit_probability(const std::vector<PGroupSpec>& v, std::size_t r) {
    double result = 1.0;
    for (const auto& spec : v) {
        if (!is_prime(spec.p) || spec.p == 2)
            throw std::invalid_argument("wood_limit_probability: primes must be odd");
        if (BigInt(r - 1) % spec.p == 0)
            throw std::invalid_argument("wood_limit_probability: p must not divide r-1");
        result *= wood_normalizing_constant(spec.p, spec.partition);
        const double pd = spec.p.convert_to<double>();
        for (unsigned k = 0;; ++k) {
            double term = std::pow(pd, -(2.0 * k + 1.0));
            if (term < 1e-13) break;
            result *= 1.0 - term;
        }
    }
    return result;
}

}  // namespace cstarlab::ktheory
