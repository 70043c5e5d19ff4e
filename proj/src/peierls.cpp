#include "toombound/peierls.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <memory>

namespace toombound {

namespace {

// Owning MPFR value. Every operation below names its rounding direction.
class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
  ~Real() { mpfr_clear(x_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;

  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

 private:
  mpfr_t x_;
};

Rational to_rational(const Real& r) {
  BigInt z;
  mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), r.get());
  Rational q(z);
  if (e > 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else if (e < 0) {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  q.canonicalize();
  return q;
}

struct Interval {
  Interval(mpfr_prec_t prec) : lo(prec), hi(prec) {}
  Real lo;
  Real hi;
};

void set_rational(Interval& iv, const Rational& q) {
  mpfr_set_q(iv.lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(iv.hi.get(), q.get_mpq_t(), MPFR_RNDU);
}

void set_integer(Interval& iv, const BigInt& z) {
  mpfr_set_z(iv.lo.get(), z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(iv.hi.get(), z.get_mpz_t(), MPFR_RNDU);
}

// x^x on a positive interval; convex with its minimum at 1/e.
void self_power(Interval& out, const Interval& x, mpfr_prec_t prec) {
  Real a(prec), b(prec);
  mpfr_pow(a.get(), x.lo.get(), x.lo.get(), MPFR_RNDD);
  mpfr_pow(b.get(), x.hi.get(), x.hi.get(), MPFR_RNDD);
  mpfr_min(out.lo.get(), a.get(), b.get(), MPFR_RNDD);

  Real inv_e_lo(prec), inv_e_hi(prec);
  mpfr_set_ui(inv_e_lo.get(), 1, MPFR_RNDN);
  mpfr_exp(inv_e_lo.get(), inv_e_lo.get(), MPFR_RNDU);  // e rounded up
  mpfr_ui_div(inv_e_lo.get(), 1, inv_e_lo.get(), MPFR_RNDD);
  mpfr_set_ui(inv_e_hi.get(), 1, MPFR_RNDN);
  mpfr_exp(inv_e_hi.get(), inv_e_hi.get(), MPFR_RNDD);
  mpfr_ui_div(inv_e_hi.get(), 1, inv_e_hi.get(), MPFR_RNDU);
  if (mpfr_lessequal_p(x.lo.get(), inv_e_hi.get()) && mpfr_greaterequal_p(x.hi.get(), inv_e_lo.get())) {
    Real m(prec);
    mpfr_neg(m.get(), inv_e_hi.get(), MPFR_RNDD);
    mpfr_exp(m.get(), m.get(), MPFR_RNDD);
    mpfr_min(out.lo.get(), out.lo.get(), m.get(), MPFR_RNDD);
  }

  mpfr_pow(a.get(), x.lo.get(), x.lo.get(), MPFR_RNDU);
  mpfr_pow(b.get(), x.hi.get(), x.hi.get(), MPFR_RNDU);
  mpfr_max(out.hi.get(), a.get(), b.get(), MPFR_RNDU);
}

void check_params(const BoundParameters& p) {
  if (p.sigma < 2) throw CertificateError("sigma must be at least 2, got " + std::to_string(p.sigma));
  if (p.union_size < 2) throw CertificateError("|A| must be at least 2");
  if (p.max_obstacle_size < 1) throw CertificateError("obstacles must be non-empty");
  if (p.rho < 0) throw CertificateError("rho must be non-negative");
}

BigInt combinatorial_factor(const BoundParameters& p) {
  BigInt k = int_pow(2, static_cast<unsigned long>(p.sigma - 1)) - 1;
  return k * BigInt(static_cast<unsigned long>(p.union_size)) * BigInt(static_cast<unsigned long>(p.union_size - 1));
}

BoundValue exact_value(Rational v, int prec) {
  v.canonicalize();
  BoundValue b;
  b.exact = true;
  b.lower = v;
  b.upper = v;
  b.precision_bits = prec;
  return b;
}

}  // namespace

std::string BoundValue::decimal() const {
  Real r(std::max<mpfr_prec_t>(precision_bits, 64) + 64);
  mpfr_set_q(r.get(), lower.get_mpq_t(), MPFR_RNDD);
  mpfr_exp_t exp10 = 0;
  char* digits = mpfr_get_str(nullptr, &exp10, 10, 20, r.get(), MPFR_RNDD);
  std::string s(digits);
  mpfr_free_str(digits);
  if (s == "0" || s.find_first_not_of("0-") == std::string::npos) return "0";
  bool neg = s[0] == '-';
  if (neg) s.erase(0, 1);
  // mpfr gives 0.d1d2... x 10^exp10; print d1.d2... e(exp10-1).
  std::string out = (neg ? "-" : "") + s.substr(0, 1) + "." + s.substr(1) + "e" + std::to_string(exp10 - 1);
  return out;
}

BoundParameters parameters_of(const DriftCertificate& cert) {
  BoundParameters p;
  p.sigma = cert.sigma();
  p.rho = cert.rho;
  p.union_size = cert.union_a.size();
  p.max_obstacle_size = cert.max_obstacle_size();
  return p;
}

BoundValue main_bound(const BoundParameters& params, const BoundOptions& opts) {
  check_params(params);
  const unsigned long sigma = static_cast<unsigned long>(params.sigma);
  const BigInt k = combinatorial_factor(params);
  const BigInt m(static_cast<unsigned long>(params.max_obstacle_size));

  if (is_integer(params.rho) && !opts.force_rounded) {
    const unsigned long r = params.rho.get_num().get_ui();
    BigInt num = int_pow(static_cast<long>(params.max_obstacle_size), r) * k *
                 int_pow(static_cast<long>(r + sigma), r + sigma);
    BigInt den = int_pow(static_cast<long>(sigma), sigma) * (r == 0 ? BigInt(1) : int_pow(static_cast<long>(r), r));
    return exact_value(Rational(den, num), opts.precision_bits);
  }

  const mpfr_prec_t prec = std::max(opts.precision_bits, 16);
  Interval rho(prec), mpow(prec), x(prec), xpow(prec), rpow(prec), kk(prec), ss(prec);
  set_rational(rho, params.rho);

  mpfr_set_z(mpow.lo.get(), m.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(mpow.hi.get(), m.get_mpz_t(), MPFR_RNDU);
  mpfr_pow(mpow.lo.get(), mpow.lo.get(), rho.lo.get(), MPFR_RNDD);
  mpfr_pow(mpow.hi.get(), mpow.hi.get(), rho.hi.get(), MPFR_RNDU);

  mpfr_add_ui(x.lo.get(), rho.lo.get(), sigma, MPFR_RNDD);
  mpfr_add_ui(x.hi.get(), rho.hi.get(), sigma, MPFR_RNDU);
  mpfr_pow(xpow.lo.get(), x.lo.get(), x.lo.get(), MPFR_RNDD);
  mpfr_pow(xpow.hi.get(), x.hi.get(), x.hi.get(), MPFR_RNDU);

  if (params.rho == 0) {
    mpfr_set_ui(rpow.lo.get(), 1, MPFR_RNDN);
    mpfr_set_ui(rpow.hi.get(), 1, MPFR_RNDN);
  } else {
    self_power(rpow, rho, prec);
  }
  set_integer(kk, k);
  set_integer(ss, int_pow(static_cast<long>(sigma), sigma));

  // base = mpow * k * xpow / (ss * rpow), bracketed from both sides.
  Real base_hi(prec), base_lo(prec), den(prec);
  mpfr_mul(base_hi.get(), mpow.hi.get(), kk.hi.get(), MPFR_RNDU);
  mpfr_mul(base_hi.get(), base_hi.get(), xpow.hi.get(), MPFR_RNDU);
  mpfr_mul(den.get(), ss.lo.get(), rpow.lo.get(), MPFR_RNDD);
  mpfr_div(base_hi.get(), base_hi.get(), den.get(), MPFR_RNDU);

  mpfr_mul(base_lo.get(), mpow.lo.get(), kk.lo.get(), MPFR_RNDD);
  mpfr_mul(base_lo.get(), base_lo.get(), xpow.lo.get(), MPFR_RNDD);
  mpfr_mul(den.get(), ss.hi.get(), rpow.hi.get(), MPFR_RNDU);
  mpfr_div(base_lo.get(), base_lo.get(), den.get(), MPFR_RNDD);

  Real lo(prec), hi(prec);
  mpfr_ui_div(lo.get(), 1, base_hi.get(), MPFR_RNDD);
  mpfr_ui_div(hi.get(), 1, base_lo.get(), MPFR_RNDU);

  BoundValue b;
  b.exact = false;
  b.lower = to_rational(lo);
  b.upper = to_rational(hi);
  b.precision_bits = opts.precision_bits;
  return b;
}

BoundValue simple_bound(const BoundParameters& params, const BoundOptions& opts) {
  check_params(params);
  const unsigned long base = 2UL * static_cast<unsigned long>(params.union_size);
  if (is_integer(params.rho) && !opts.force_rounded) {
    const unsigned long e = params.rho.get_num().get_ui() + static_cast<unsigned long>(params.sigma);
    return exact_value(Rational(BigInt(1), int_pow(static_cast<long>(base), e)), opts.precision_bits);
  }
  const mpfr_prec_t prec = std::max(opts.precision_bits, 16);
  Interval rho(prec), e(prec);
  set_rational(rho, params.rho);
  mpfr_add_ui(e.lo.get(), rho.lo.get(), static_cast<unsigned long>(params.sigma), MPFR_RNDD);
  mpfr_add_ui(e.hi.get(), rho.hi.get(), static_cast<unsigned long>(params.sigma), MPFR_RNDU);
  mpfr_neg(e.lo.get(), e.lo.get(), MPFR_RNDN);
  mpfr_neg(e.hi.get(), e.hi.get(), MPFR_RNDN);
  Real b(prec), lo(prec), hi(prec);
  mpfr_set_ui(b.get(), base, MPFR_RNDN);
  mpfr_pow(lo.get(), b.get(), e.hi.get(), MPFR_RNDD);  // larger exponent magnitude, smaller value
  mpfr_pow(hi.get(), b.get(), e.lo.get(), MPFR_RNDU);
  BoundValue v;
  v.exact = false;
  v.lower = to_rational(lo);
  v.upper = to_rational(hi);
  v.precision_bits = opts.precision_bits;
  return v;
}

std::string certificate_hash(const DriftCertificate& cert) {
  std::string canon;
  for (const auto& e : cert.entries) {
    canon += "v=" + e.v.vec().str() + ";mu=" + to_string(e.mu) + ";A=" + str(e.obstacle) + "|";
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BoundReport bound(const DriftCertificate& cert, const BoundOptions& opts) {
  if (cert.sigma() < 2) throw CertificateError("malformed certificate: sigma < 2");
  BoundReport rep;
  rep.params = parameters_of(cert);
  rep.main_bound = main_bound(rep.params, opts);
  rep.simple_bound = simple_bound(rep.params, opts);
  rep.certificate_hash = certificate_hash(cert);
  return rep;
}

BigInt fork_alphabet_size(int sigma, std::size_t union_size) {
  BigInt pairs = BigInt(static_cast<unsigned long>(union_size)) * BigInt(static_cast<unsigned long>(union_size - 1)) / 2;
  return (int_pow(2, static_cast<unsigned long>(sigma)) - 2) * pairs;
}

BigInt encoding_count(const BoundParameters& params, int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("n and m must be non-negative");
  const unsigned long seps = static_cast<unsigned long>(params.sigma) * static_cast<unsigned long>(m + 1) - 1;
  BigInt incr = int_pow(static_cast<long>(params.max_obstacle_size), static_cast<unsigned long>(n));
  BigInt forks;
  mpz_pow_ui(forks.get_mpz_t(), fork_alphabet_size(params.sigma, params.union_size).get_mpz_t(),
             static_cast<unsigned long>(m));
  return incr * forks * binomial(static_cast<unsigned long>(n) + seps, seps);
}

BigInt remark_count(const BoundParameters& params, int n, int m) {
  return int_pow(2L * static_cast<long>(params.union_size),
                 static_cast<unsigned long>(n + params.sigma * (m + 1)));
}

Rational partial_peierls_sum(const DriftCertificate& cert, const Rational& p, int m_max, const ContourCounts& counts,
                             int counts_complete_through) {
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
  Rational total = 0;
  Rational pw = p;  // p^(m+1)
  for (int m = 0; m <= m_max; ++m) {
    BigInt nmax_z = cert.rho.get_num() * m / cert.rho.get_den();  // floor, rho >= 0
    const long nmax = nmax_z.get_si();
    BigInt inner = 0;
    for (long n = 0; n <= nmax; ++n) {
      auto it = counts.find({static_cast<int>(n), m});
      if (it == counts.end()) {
        if (counts_complete_through >= m) continue;
        throw MissingCounts("missing contour count for (n, m) = (" + std::to_string(n) + ", " + std::to_string(m) + ")");
      }
      inner += it->second;
    }
    total += pw * Rational(inner);
    pw *= p;
  }
  total.canonicalize();
  return total;
}

}  // namespace toombound
