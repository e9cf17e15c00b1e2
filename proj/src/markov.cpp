#include "cstarlab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cstarlab::markov {

RateSpec::RateSpec(std::vector<Rational> lambda_prefix, std::vector<Rational> mu_prefix,
                   GeometricTail lambda_tail, GeometricTail mu_tail)
    : lambda_prefix_(std::move(lambda_prefix)),
      mu_prefix_(std::move(mu_prefix)),
      lambda_tail_(std::move(lambda_tail)),
      mu_tail_(std::move(mu_tail)) {
    tail_start_ = static_cast<long>(std::max(lambda_prefix_.size(), mu_prefix_.size()));
    for (const auto& l : lambda_prefix_)
        if (l <= 0) throw std::invalid_argument("RateSpec: lambda_i must be positive");
    if (lambda_tail_.base <= 0 || lambda_tail_.ratio <= 0)
        throw std::invalid_argument("RateSpec: lambda tail must be positive");
    if (mu_tail_.base <= 0 || mu_tail_.ratio <= 0)
        throw std::invalid_argument("RateSpec: mu tail must be positive");
    for (std::size_t i = 0; i < mu_prefix_.size(); ++i) {
        if (mu_prefix_[i] < 0 || (i >= 1 && mu_prefix_[i] == 0))
            throw std::invalid_argument("RateSpec: mu_i must be positive for i >= 1");
    }
}

RateSpec RateSpec::constant(const Rational& l, const Rational& m) {
    return RateSpec({}, {}, {l, Rational(1)}, {m, Rational(1)});
}

RateSpec RateSpec::geometric(const Rational& lb, const Rational& lr, const Rational& mb,
                             const Rational& mr) {
    return RateSpec({}, {}, {lb, lr}, {mb, mr});
}

Rational RateSpec::lambda(long i) const {
    if (i < 0) throw std::invalid_argument("RateSpec: negative index");
    if (i < static_cast<long>(lambda_prefix_.size())) return lambda_prefix_[i];
    return lambda_tail_.base * rational_pow(lambda_tail_.ratio, i - tail_start_);
}

Rational RateSpec::mu(long i) const {
    if (i < 0) throw std::invalid_argument("RateSpec: negative index");
    if (i < static_cast<long>(mu_prefix_.size())) return mu_prefix_[i];
    return mu_tail_.base * rational_pow(mu_tail_.ratio, i - tail_start_);
}

TransitionSpec::TransitionSpec(Family family, BoundaryKind boundary, Rational q0)
    : family_(std::move(family)), boundary_(boundary), q0_(std::move(q0)) {
    if (boundary_ == BoundaryKind::Reflecting) {
        if (q0_ != 0) throw std::invalid_argument("TransitionSpec: reflecting requires q0 = 0");
    } else {
        if (q0_ <= 0 || q0_ > 1)
            throw std::invalid_argument("TransitionSpec: absorbing requires q0 in (0,1]");
    }
    auto check_p = [](const Rational& p) {
        if (p <= 0 || p >= 1) throw std::invalid_argument("TransitionSpec: p_i must be in (0,1)");
    };
    if (auto* c = std::get_if<ConstantPQ>(&family_)) {
        check_p(c->p);
    } else if (auto* t = std::get_if<TableFamily>(&family_)) {
        for (const auto& p : t->prefix) check_p(p);
        check_p(t->tail_p);
    }
}

TransitionSpec TransitionSpec::constant_reflecting(const Rational& p) {
    return TransitionSpec(ConstantPQ{p}, BoundaryKind::Reflecting);
}

TransitionSpec TransitionSpec::constant_absorbing(const Rational& p, const Rational& q0) {
    return TransitionSpec(ConstantPQ{p}, BoundaryKind::Absorbing, q0);
}

TransitionSpec TransitionSpec::from_rates(const RateSpec& rates) {
    Rational mu0 = rates.mu(0);
    if (mu0 == 0) return TransitionSpec(FromRates{rates}, BoundaryKind::Reflecting);
    Rational q0 = mu0 / (rates.lambda(0) + mu0);
    return TransitionSpec(FromRates{rates}, BoundaryKind::Absorbing, q0);
}

Rational TransitionSpec::p(long i) const {
    if (i < 0) throw std::invalid_argument("TransitionSpec: negative state");
    if (i == 0) return Rational(1) - q0_;
    if (auto* c = std::get_if<ConstantPQ>(&family_)) return c->p;
    if (auto* t = std::get_if<TableFamily>(&family_)) {
        if (i - 1 < static_cast<long>(t->prefix.size())) return t->prefix[i - 1];
        return t->tail_p;
    }
    const RateSpec& r = std::get<FromRates>(family_).rates;
    Rational l = r.lambda(i), m = r.mu(i);
    return l / (l + m);
}

std::optional<std::pair<long, Rational>> TransitionSpec::constant_tail() const {
    if (auto* c = std::get_if<ConstantPQ>(&family_)) return {{1, c->p}};
    if (auto* t = std::get_if<TableFamily>(&family_))
        return {{static_cast<long>(t->prefix.size()) + 1, t->tail_p}};
    const RateSpec& r = std::get<FromRates>(family_).rates;
    if (r.lambda_tail().ratio != r.mu_tail().ratio) return std::nullopt;
    long start = std::max<long>(r.tail_start(), 1);
    return {{start, p(start)}};
}

InitialDistribution InitialDistribution::point_mass(long state) {
    if (state < 0) throw std::invalid_argument("InitialDistribution: negative state");
    InitialDistribution d;
    d.weights[state] = 1;
    return d;
}

void InitialDistribution::validate() const {
    Rational total(0);
    for (const auto& [state, w] : weights) {
        if (state < 0) throw std::invalid_argument("InitialDistribution: negative state");
        if (w < 0) throw std::invalid_argument("InitialDistribution: negative weight");
        total += w;
    }
    if (total != 1) throw std::invalid_argument("InitialDistribution: weights must sum to 1");
}

long InitialDistribution::sample(Rng& rng) const {
    // Invert the CDF against a uniform 64-bit draw; exact up to 2^-64.
    BigInt u = rng.u64();
    BigInt scale = BigInt(1) << 64;
    Rational cum(0);
    long last = -1;
    for (const auto& [state, w] : weights) {
        cum += w;
        last = state;
        if (Rational(u, scale) < cum) return state;
    }
    return last;
}

std::pair<Rational, Rational> jump_probabilities(const TransitionSpec& spec, long i) {
    if (i < 0) throw std::invalid_argument("jump_probabilities: state must be >= 0");
    Rational p = spec.p(i);
    return {p, Rational(1) - p};
}

WalkPath simulate_path(const TransitionSpec& spec, const InitialDistribution& init,
                       std::size_t max_steps, Rng& rng) {
    if (max_steps < 1) throw std::invalid_argument("simulate_path: max_steps must be >= 1");
    WalkPath path;
    long cur = init.sample(rng);
    path.states.push_back(cur);
    for (std::size_t step = 0; step < max_steps; ++step) {
        cur += rng.bernoulli(spec.p(cur)) ? 1 : -1;
        path.states.push_back(cur);
        if (cur == -1) {
            path.absorbed = true;
            break;
        }
    }
    path.truncated_at = path.states.size() - 1;
    return path;
}

namespace {

// Ratio q_j/p_j of the product series at index j.
Rational qp_ratio(const TransitionSpec& spec, long j) {
    Rational p = spec.p(j);
    return (Rational(1) - p) / p;
}

// T_n = prod_{j=j0}^{n} q_j/p_j (empty product = 1 at n = j0-1).
Rational prod_qp(const TransitionSpec& spec, long j0, long n) {
    Rational t(1);
    for (long j = j0; j <= n; ++j) t *= qp_ratio(spec, j);
    return t;
}

// Sum over n in [from, hi] of T_n, T as above. Finite, exact.
Rational sum_prod_range(const TransitionSpec& spec, long j0, long from, long to) {
    Rational sum(0);
    if (to < from) return sum;
    Rational t = prod_qp(spec, j0, from);
    sum = t;
    for (long n = from + 1; n <= to; ++n) {
        t *= qp_ratio(spec, n);
        sum += t;
    }
    return sum;
}

// Sum over n >= from of T_n. Constant-tail families get an exact geometric
// closed form; FromRates with distinct geometric ratios gets a certified
// interval (the term ratio itself decays or grows geometrically).
SeriesSum sum_prod_tail(const TransitionSpec& spec, long j0, long from) {
    SeriesSum out;
    if (auto tail = spec.constant_tail()) {
        auto [start, p] = *tail;
        Rational r = (Rational(1) - p) / p;
        if (r >= 1) {
            out.divergent = true;
            return out;
        }
        long n0 = std::max(from, start);
        // Terms from index n0 on form a geometric sequence with ratio r.
        Rational head = sum_prod_range(spec, j0, from, n0 - 1);
        Rational t_n0 = prod_qp(spec, j0, n0);
        Rational total = head + t_n0 / (Rational(1) - r);
        out.lower = out.upper = total;
        out.exact = true;
        return out;
    }
    const RateSpec& rates = std::get<FromRates>(spec.family()).rates;
    // q_j/p_j = mu_j/lambda_j has geometric growth factor s = mu_r/lambda_r.
    Rational s = rates.mu_tail().ratio / rates.lambda_tail().ratio;
    if (s > 1) {
        out.divergent = true;
        return out;
    }
    long n = std::max({from, rates.tail_start(), j0});
    // March until both the term and its ratio are tiny, then bound the tail.
    Rational partial = sum_prod_range(spec, j0, from, n - 1);
    Rational t = prod_qp(spec, j0, n);
    const Rational tiny(BigInt(1), BigInt(1) << 60);
    for (int guard = 0; guard < 4096; ++guard) {
        Rational rho = qp_ratio(spec, n + 1);
        if (rho < 1 && t * rho / (Rational(1) - rho) < tiny * (partial + t + 1)) {
            partial += t;
            out.lower = partial;
            out.upper = partial + t * rho / (Rational(1) - rho);
            out.exact = false;
            return out;
        }
        partial += t;
        ++n;
        t *= qp_ratio(spec, n);
    }
    throw std::runtime_error("sum_prod_tail: no certified tail bound reached");
}

bool series_b_diverges(const TransitionSpec& spec) {
    if (auto tail = spec.constant_tail()) return tail->second <= Rational(1, 2);
    const RateSpec& rates = std::get<FromRates>(spec.family()).rates;
    return rates.mu_tail().ratio > rates.lambda_tail().ratio;
}

bool series_a_diverges(const TransitionSpec& spec) {
    // a_n ratio is p_{n-1}/q_n, eventually p/q for constant tails.
    if (auto tail = spec.constant_tail()) return tail->second >= Rational(1, 2);
    const RateSpec& rates = std::get<FromRates>(spec.family()).rates;
    return rates.lambda_tail().ratio > rates.mu_tail().ratio;
}

}  // namespace

Rational sum_c(const TransitionSpec& spec, long from, long to) {
    return sum_prod_range(spec, 0, from, to);
}

SeriesSum sum_c_tail(const TransitionSpec& spec, long from) { return sum_prod_tail(spec, 0, from); }

ChainClassification classify_chain(const TransitionSpec& spec) {
    if (spec.absorbing())
        throw std::invalid_argument("classify_chain: requires a reflecting boundary");
    ChainClassification out;
    out.sum_b_diverges = series_b_diverges(spec);
    out.sum_a_diverges = series_a_diverges(spec);
    if (out.sum_b_diverges)
        out.kind = out.sum_a_diverges ? ChainKind::NullRecurrent : ChainKind::PositiveRecurrent;
    else
        out.kind = ChainKind::Transient;
    double pa = 0, pb = 0;
    Rational a(1), b(1);
    for (long n = 1; n <= 12; ++n) {
        a *= spec.p(n - 1) / (Rational(1) - spec.p(n));
        b *= (Rational(1) - spec.p(n)) / spec.p(n);
        pa += to_double(a);
        pb += to_double(b);
        out.partial_sums_a.push_back(pa);
        out.partial_sums_b.push_back(pb);
    }
    return out;
}

const Rational& Prob::value() const {
    if (!exact) throw std::logic_error("Prob: value requested from non-exact interval");
    return lower;
}

Prob absorption_probability(const TransitionSpec& spec, long i, AbsorptionMode mode) {
    if (mode == AbsorptionMode::AbsorbAtMinusOne) {
        if (!spec.absorbing())
            throw std::invalid_argument("absorption_probability: mode requires absorbing boundary");
        if (i < 0) throw std::invalid_argument("absorption_probability: state must be >= 0");
        SeriesSum tail_i = sum_c_tail(spec, i);
        if (tail_i.divergent) return Prob::exactly(Rational(1));
        Rational head = sum_c(spec, 0, i - 1);
        if (tail_i.exact) {
            Rational s_i = tail_i.lower;
            return Prob::exactly(s_i / (Rational(1) + head + s_i));
        }
        Rational lo = tail_i.lower / (Rational(1) + head + tail_i.upper);
        Rational hi = tail_i.upper / (Rational(1) + head + tail_i.lower);
        return {lo, hi, false};
    }
    // Probability of never reaching 0 from i >= 1, reflecting boundary.
    if (spec.absorbing())
        throw std::invalid_argument("absorption_probability: mode requires reflecting boundary");
    if (i < 1) throw std::invalid_argument("absorption_probability: NeverReachZero requires i >= 1");
    // b_0 = 1, b_n = prod_{j=1}^n q_j/p_j.
    Rational head = Rational(1) + sum_prod_range(spec, 1, 1, i - 1);
    SeriesSum all = sum_prod_tail(spec, 1, i);
    if (all.divergent) return Prob::exactly(Rational(0));
    if (all.exact) return Prob::exactly(head / (head + all.lower));
    return {head / (head + all.upper), head / (head + all.lower), false};
}

Rational max_not_exceeding_unchecked(const TransitionSpec& spec, long k, long i) {
    if (!spec.absorbing())
        throw std::invalid_argument("max_not_exceeding_probability: requires absorbing boundary");
    if (k < 0) throw std::invalid_argument("max_not_exceeding_probability: k must be >= 0");
    if (i == -1) return Rational(1);
    if (i < -1) throw std::invalid_argument("max_not_exceeding_probability: invalid state");
    if (i >= k + 1) return Rational(0);
    Rational num = sum_c(spec, i, k);
    Rational den = Rational(1) + sum_c(spec, 0, k);
    return num / den;
}

Rational max_not_exceeding_probability(const TransitionSpec& spec, long k, long i) {
    if (k < 1) throw std::invalid_argument("max_not_exceeding_probability: k must be >= 1");
    return max_not_exceeding_unchecked(spec, k, i);
}

Criterion uniqueness_criterion(const RateSpec& rates, std::size_t cutoff) {
    // alpha_n = prod lambda_{i-1}/mu_i grows by lambda_{n-1}/mu_n,
    // beta_n = prod mu_i/lambda_i grows by mu_n/lambda_n; beyond the prefix
    // both growth factors are c*s^n with s a ratio of the geometric rates.
    const Rational& lr = rates.lambda_tail().ratio;
    const Rational& mr = rates.mu_tail().ratio;
    if (lr != mr) return Criterion::Satisfied;  // one of the two series diverges
    // s = 1 for both: growth factors are eventually the constants below.
    long t = std::max<long>(rates.tail_start(), 1);
    Rational alpha_ratio = rates.lambda(t) / rates.mu(t + 1);
    Rational beta_ratio = rates.mu(t) / rates.lambda(t);
    if (alpha_ratio >= 1 || beta_ratio >= 1) return Criterion::Satisfied;
    (void)cutoff;
    return Criterion::Violated;
}

Rational finite_hitting_oracle(const TransitionSpec& spec, long lo, long hi,
                               const std::set<long>& target, long start) {
    if (lo > hi || start < lo || start > hi)
        throw std::invalid_argument("finite_hitting_oracle: start outside range");
    for (long s : target)
        if (s < lo || s > hi) throw std::invalid_argument("finite_hitting_oracle: target outside range");
    const long n = hi - lo + 1;
    auto idx = [lo](long s) { return static_cast<std::size_t>(s - lo); };

    // Augmented system rows: coefficients + rhs.
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, Rational(0)));
    for (long s = lo; s <= hi; ++s) {
        auto& row = m[idx(s)];
        if (target.count(s)) {
            row[idx(s)] = 1;
            row[n] = 1;
            continue;
        }
        if (s == -1) {
            row[idx(s)] = 1;  // absorbing, never hits the target
            continue;
        }
        Rational p = spec.p(s), q = Rational(1) - p;
        if (p > 0 && s + 1 > hi)
            throw std::invalid_argument("finite_hitting_oracle: range open at the top");
        if (q > 0 && s - 1 < lo)
            throw std::invalid_argument("finite_hitting_oracle: range open at the bottom");
        row[idx(s)] = 1;
        if (p > 0) row[idx(s + 1)] -= p;
        if (q > 0) row[idx(s - 1)] -= q;
    }

    // Exact Gaussian elimination.
    for (long col = 0; col < n; ++col) {
        long pivot = -1;
        for (long r = col; r < n; ++r)
            if (m[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::runtime_error("finite_hitting_oracle: singular system");
        std::swap(m[col], m[pivot]);
        Rational inv = Rational(1) / m[col][col];
        for (long c2 = col; c2 <= n; ++c2) m[col][c2] *= inv;
        for (long r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rational f = m[r][col];
            for (long c2 = col; c2 <= n; ++c2) m[r][c2] -= f * m[col][c2];
        }
    }
    return m[idx(start)][n];
}

namespace {

// Cached double transition probabilities for the hot simulation loops.
struct PCache {
    const TransitionSpec* spec;
    std::vector<double> p;
    double at(long s) {
        while (static_cast<long>(p.size()) <= s) p.push_back(to_double(spec->p(static_cast<long>(p.size()))));
        return p[static_cast<std::size_t>(s)];
    }
};

}  // namespace

bool mc_absorbed(const TransitionSpec& spec, long start, double eps, std::size_t cap, Rng& rng) {
    if (!spec.absorbing())
        throw std::invalid_argument("mc_absorbed: chain is not absorbing");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("mc_absorbed: eps must lie in (0,1)");
    long barrier = -1;
    auto tail = spec.constant_tail();
    if (tail) {
        Rational p = tail->second;
        if (p > Rational(1, 2)) {
            // Escape once (q/p)^{s+1} < eps; beyond the tail start the bound
            // only improves, so a barrier from the tail ratio is valid.
            double ratio = to_double((Rational(1) - p) / p);
            long s = static_cast<long>(std::ceil(std::log(eps) / std::log(ratio)));
            barrier = std::max<long>(s, tail->first + 1);
        }
    }
    PCache pc{&spec, {}};
    long pos = start;
    for (std::size_t step = 0; step < cap; ++step) {
        if (pos < 0) return true;
        if (barrier >= 0 && pos >= barrier) return false;
        pos += (rng.real01() < pc.at(pos)) ? 1 : -1;
    }
    // Cap reached without an escape barrier: absorption is almost sure.
    return true;
}

bool mc_sup_at_most(const TransitionSpec& spec, long start, long k, std::size_t cap, Rng& rng) {
    if (!spec.absorbing())
        throw std::invalid_argument("mc_sup_at_most: chain is not absorbing");
    if (start > k) return false;
    PCache pc{&spec, {}};
    long pos = start;
    for (std::size_t step = 0; step < cap; ++step) {
        if (pos < 0) return true;
        pos += (rng.real01() < pc.at(pos)) ? 1 : -1;
        if (pos > k) return false;
    }
    return true;
}

}  // namespace cstarlab::markov
