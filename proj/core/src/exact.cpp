#include <expcert/exact.hpp>

#include <mpfr.h>

#include <algorithm>
#include <future>
#include <ostream>
#include <stdexcept>
#include <string>

namespace expcert
{

namespace
{

void require(bool ok, const std::string &what)
{
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

std::uint64_t as_index(std::int64_t x) { return static_cast<std::uint64_t>(x); }

// RAII wrapper for a 256-bit MPFR value.
class Real
{
public:
    static constexpr mpfr_prec_t precision = 256;

    Real() { mpfr_init2(x_, precision); mpfr_set_ui(x_, 0, MPFR_RNDN); }
    explicit Real(const BigInteger &z) : Real() { mpfr_set_z(x_, z.get_mpz_t(), MPFR_RNDN); }
    explicit Real(const BigRational &q) : Real() { mpfr_set_q(x_, q.get_mpq_t(), MPFR_RNDN); }
    Real(const Real &) = delete;
    Real &operator=(const Real &) = delete;
    ~Real() { mpfr_clear(x_); }

    mpfr_ptr get() noexcept { return x_; }
    mpfr_srcptr get() const noexcept { return x_; }

private:
    mpfr_t x_;
};

// t ln t with 0 ln 0 = 0, accumulated into acc with the given integer weight.
void add_xlogx(Real &acc, const BigRational &t, long weight)
{
    if (t == 0) {
        return;
    }
    Real x(t);
    Real lx;
    mpfr_log(lx.get(), x.get(), MPFR_RNDN);
    mpfr_mul(lx.get(), lx.get(), x.get(), MPFR_RNDN);
    mpfr_mul_si(lx.get(), lx.get(), weight, MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), lx.get(), MPFR_RNDN);
}

} // namespace

BigInteger binomial(std::uint64_t n, std::uint64_t k)
{
    BigInteger r;
    if (k > n) {
        return r;
    }
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

BigRational containment_probability(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d)
{
    require(0 <= u && u <= v && 0 <= n && n <= v && d >= 1, "containment probability needs u, n in [0, v] and d >= 1");
    BigRational q(binomial(as_index(d * n), as_index(d * u)), binomial(as_index(d * v), as_index(d * u)));
    q.canonicalize();
    return q;
}

BigRational probability_bound(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d)
{
    require(0 <= u && u <= n && n <= v && d >= 1, "P(u, n) needs 0 <= u <= n <= v and d >= 1");
    BigRational q(binomial(as_index(v), as_index(u)) * binomial(as_index(v), as_index(n)) *
                      binomial(as_index(d * n), as_index(d * u)),
                  binomial(as_index(d * v), as_index(d * u)));
    q.canonicalize();
    return q;
}

BigRational monotone_ratio(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d)
{
    require(1 <= u && u <= n && n < v && d >= 1, "monotone ratio needs 1 <= u <= n < v and d >= 1");
    BigInteger num = v - n;
    BigInteger den = n + 1;
    for (std::int64_t i = 1; i <= d; ++i) {
        num *= d * n + i;
        den *= d * n - d * u + i;
    }
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

RegionSpec::RegionSpec(std::int64_t v, PiecewiseLinearProfile profile, BigRational delta)
    : v_(v), profile_(std::move(profile)), delta_(std::move(delta))
{
    require(v >= 0, "region size v must be non-negative");
    require(delta_ >= 0, "delta must be non-negative");
}

std::int64_t RegionSpec::top(std::int64_t u) const
{
    if (u < 1 || u > v_) {
        return u - 1;
    }
    const BigInteger cap = floor(BigRational(v_) * eval_rational(profile_, ratio(u, v_)));
    const std::int64_t capped = std::min<std::int64_t>(cap.get_si(), v_ - 1);
    return std::max(capped, u - 1);
}

bool RegionSpec::in_omega(std::int64_t u, std::int64_t n) const { return u >= 1 && u <= n && n <= top(u); }

bool RegionSpec::in_omega_delta(std::int64_t u, std::int64_t n) const
{
    return in_omega(u, n) && BigRational(std::min(u, v_ - n)) <= delta_ * v_;
}

std::vector<std::pair<std::int64_t, std::int64_t>> RegionSpec::omega() const
{
    std::vector<std::pair<std::int64_t, std::int64_t>> points;
    for (std::int64_t u = 1; u <= v_; ++u) {
        for (std::int64_t n = u, t = top(u); n <= t; ++n) {
            points.emplace_back(u, n);
        }
    }
    return points;
}

BigRational union_bound(const RegionSpec &spec, const BigRational &max_extreme, const BigRational &max_interior)
{
    const BigRational v = spec.v();
    const BigRational delta_v = spec.delta() * v;
    const BigRational f_delta_v = v * eval_rational(spec.profile(), spec.delta());
    return BigRational(2 * delta_v * f_delta_v * max_extreme + v * v * max_interior);
}

ExhaustiveUnionBound union_bound_exhaustive(const RegionSpec &spec, std::size_t max_pairs, unsigned jobs)
{
    const std::int64_t v = spec.v();
    const std::int64_t d = spec.d();
    ExhaustiveUnionBound result;
    std::vector<std::int64_t> tops(static_cast<std::size_t>(v + 1), 0);
    for (std::int64_t u = 1; u <= v; ++u) {
        tops[static_cast<std::size_t>(u)] = spec.top(u);
        for (std::int64_t n = u; n <= tops[static_cast<std::size_t>(u)]; ++n) {
            ++result.pairs;
            if (spec.in_omega_delta(u, n)) {
                ++result.delta_pairs;
            }
        }
        if (result.pairs > max_pairs) {
            throw std::length_error("Omega has more than " + std::to_string(max_pairs) + " pairs at v = " +
                                    std::to_string(v));
        }
    }

    // Column u contributes C(v, u) / C(dv, du) * sum_n C(v, n) C(dn, du).
    auto column = [&](std::int64_t u) {
        BigInteger sum;
        for (std::int64_t n = u; n <= tops[static_cast<std::size_t>(u)]; ++n) {
            sum += binomial(as_index(v), as_index(n)) * binomial(as_index(d * n), as_index(d * u));
        }
        BigRational term(binomial(as_index(v), as_index(u)) * sum, binomial(as_index(d * v), as_index(d * u)));
        term.canonicalize();
        return term;
    };

    std::vector<BigRational> terms(static_cast<std::size_t>(v + 1));
    const unsigned workers = std::max(1U, jobs);
    std::vector<std::future<void>> pending;
    for (unsigned w = 1; w < workers; ++w) {
        pending.push_back(std::async(std::launch::async, [&, w] {
            for (std::int64_t u = 1 + w; u <= v; u += workers) {
                terms[static_cast<std::size_t>(u)] = column(u);
            }
        }));
    }
    for (std::int64_t u = 1; u <= v; u += workers) {
        terms[static_cast<std::size_t>(u)] = column(u);
    }
    for (auto &f : pending) {
        f.get();
    }

    for (std::int64_t u = 1; u <= v; ++u) {
        result.value += terms[static_cast<std::size_t>(u)];
    }
    result.value *= 2;
    return result;
}

LemmaCase lemma_case_for(int d)
{
    switch (d) {
    case 5:
        return {2, 5};
    case 6:
        return {3, 6};
    case 7:
        return {3, 7};
    case 8:
        return {3, 8};
    default:
        throw std::invalid_argument("no extreme-point lemma case for degree " + std::to_string(d) +
                                    " (supported: 5, 6, 7, 8)");
    }
}

bool LemmaReport::passed() const
{
    return monotone_ok && !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const LemmaRow &r) {
               return r.bound_ok && r.ratio_ok && r.ratio_dominates_estimate;
           });
}

LemmaReport extreme_lemma_check(LemmaCase c, std::int64_t v, const BigRational &delta)
{
    const LemmaCase known = lemma_case_for(c.d);
    require(known.k == c.k, "unsupported lemma case (" + std::to_string(c.k) + "," + std::to_string(c.d) + ")");
    const std::int64_t u_max = floor(delta * v).get_si();
    require(u_max >= 1, "floor(delta v) < 1 at v = " + std::to_string(v) + "; the lemma range is empty");

    LemmaReport report;
    report.lemma = c;
    report.v = v;

    const int k = c.k;
    const int d = c.d;
    {
        BigInteger delta_pow_num;
        BigInteger delta_pow_den;
        mpz_pow_ui(delta_pow_num.get_mpz_t(), delta.get_den_mpz_t(), static_cast<unsigned long>(d - k - 1));
        mpz_pow_ui(delta_pow_den.get_mpz_t(), delta.get_num_mpz_t(), static_cast<unsigned long>(d - k - 1));
        BigInteger top;
        BigInteger bottom;
        mpz_ui_pow_ui(top.get_mpz_t(), static_cast<unsigned long>(k - 1), static_cast<unsigned long>((k - 1) * d));
        mpz_ui_pow_ui(bottom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(k * d));
        BigRational inv_delta_pow(delta_pow_num, delta_pow_den);
        inv_delta_pow.canonicalize();
        BigRational combinatorial(top, bottom);
        combinatorial.canonicalize();
        report.estimate = inv_delta_pow * (1 - (k * d + 3 * d) * delta) * combinatorial;
    }

    const BigRational half(1, 2);
    const BigRational scale = 2 * k * delta * delta * v * v;
    for (std::int64_t u = 1; u <= u_max; ++u) {
        LemmaRow row;
        row.u = u;
        const BigRational p = probability_bound(u, k * u, v, d);
        row.bound_value = scale * p;
        row.bound_ok = row.bound_value < half;
        if (u < u_max) {
            row.ratio = p / probability_bound(u + 1, k * u + k, v, d);
            row.ratio_ok = *row.ratio > 1;
            row.ratio_dominates_estimate = *row.ratio >= report.estimate;
        }
        report.rows.push_back(std::move(row));
    }

    const PiecewiseLinearProfile profile = builtin_profile(d);
    for (std::int64_t u = 1; u <= u_max; ++u) {
        const std::int64_t cap =
            std::min<std::int64_t>(floor(BigRational(v) * eval_rational(profile, ratio(u, v))).get_si(), v - 1);
        for (std::int64_t n = u; n < cap; ++n) {
            ++report.monotone_checked;
            if (!(monotone_ratio(u, n, v, d) > 1)) {
                report.monotone_ok = false;
            }
        }
    }
    return report;
}

double stirling_gap(std::int64_t u, std::int64_t n, std::int64_t v, std::int64_t d)
{
    require(0 < u && u <= n && n < v && d >= 1, "stirling gap needs 0 < u <= n < v");
    const BigRational p = probability_bound(u, n, v, d);

    // ln(v^2 P) / v
    Real lhs;
    {
        Real num(p.get_num());
        Real den(p.get_den());
        Real vv{BigInteger(v)};
        Real t;
        mpfr_log(lhs.get(), num.get(), MPFR_RNDN);
        mpfr_log(t.get(), den.get(), MPFR_RNDN);
        mpfr_sub(lhs.get(), lhs.get(), t.get(), MPFR_RNDN);
        mpfr_log(t.get(), vv.get(), MPFR_RNDN);
        mpfr_mul_ui(t.get(), t.get(), 2, MPFR_RNDN);
        mpfr_add(lhs.get(), lhs.get(), t.get(), MPFR_RNDN);
        mpfr_div_si(lhs.get(), lhs.get(), static_cast<long>(v), MPFR_RNDN);
    }

    const BigRational alpha = ratio(u, v);
    const BigRational beta = ratio(n, v);
    Real log_q;
    add_xlogx(log_q, BigRational(1 - alpha), static_cast<long>(d - 1));
    add_xlogx(log_q, beta, static_cast<long>(d - 1));
    add_xlogx(log_q, alpha, -1);
    add_xlogx(log_q, BigRational(1 - beta), -1);
    add_xlogx(log_q, BigRational(beta - alpha), -static_cast<long>(d));

    mpfr_sub(lhs.get(), lhs.get(), log_q.get(), MPFR_RNDN);
    return mpfr_get_d(lhs.get(), MPFR_RNDN);
}

void write_lemma_table(std::ostream &os, const LemmaReport &report)
{
    const int k = report.lemma.k;
    os << "u,n,value\n";
    for (const auto &r : report.rows) {
        os << r.u << ',' << k * r.u << ',' << to_double(r.bound_value) << '\n';
    }
}

} // namespace expcert
