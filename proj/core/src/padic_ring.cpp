#include "dwork/padic_ring.hpp"

#include <algorithm>
#include <string>

namespace dwork {

namespace {

std::uint64_t ipow(std::uint64_t p, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= p;
  return r;
}

int ord_p_u64(std::uint64_t c, std::uint64_t p) {
  int v = 0;
  while (c != 0 && c % p == 0) {
    c /= p;
    ++v;
  }
  return v;
}

// Modular inverse by extended Euclid; a must be prime to m.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw Error(ErrorKind::DivisionByZero, "residue is not invertible");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

// Exact monomial coefficient * pi^r with 0 <= r < p-1 (pi^0 block, b^0).
struct Monomial {
  std::uint64_t coef = 0;
  std::size_t r = 0;
};

Monomial mono_mul(const RingParams& R, const Monomial& a, const Monomial& b) {
  Monomial out{R.mul(a.coef, b.coef), a.r + b.r};
  if (out.r >= R.pi_slots()) {
    out.r -= R.pi_slots();
    out.coef = R.sub(0, R.mul(out.coef, R.p() % R.modulus()));
  }
  return out;
}

// pi^a / a! as a monomial, given ord_p(a!) and the unit part of a! mod p^M.
Monomial pi_over_factorial(const RingParams& R, std::uint64_t a, std::uint64_t fact_val,
                           std::uint64_t fact_unit) {
  const std::uint64_t pm1 = R.pi_slots();
  const std::uint64_t r = a % pm1;
  const std::uint64_t k = a / pm1;
  // pi^a = pi^r (-p)^k, and k >= ord_p(a!) always holds.
  const std::uint64_t excess = k - fact_val;
  Monomial m;
  m.r = static_cast<std::size_t>(r);
  if (excess >= static_cast<std::uint64_t>(R.precision())) return m;
  std::uint64_t c = R.mul(ipow(R.p(), excess) % R.modulus(), R.inverse_residue(fact_unit));
  if (k % 2 == 1) c = R.sub(0, c);
  m.coef = c;
  return m;
}

}  // namespace

RingParams::RingParams(std::uint64_t p, int s, int precision) : p_(p), s_(s), M_(precision) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (p == 2) throw Error(ErrorKind::UnsupportedPrime, "p = 2 is not supported");
  if (s < 1) throw Error(ErrorKind::InvalidArgument, "unramified degree must be >= 1");
  if (precision < 1) throw Error(ErrorKind::InvalidArgument, "precision must be >= 1");
  std::uint64_t m = 1;
  for (int i = 0; i < precision; ++i) {
    if (m > (std::uint64_t{1} << 62) / p) {
      throw Error(ErrorKind::PrecisionBudgetExceeded, "p^M must stay below 2^62");
    }
    m *= p;
  }
  mod_ = m;
  small_ = mod_ < (std::uint64_t{1} << 32);
  g_ = select_modulus(p, s);
}

std::uint64_t RingParams::inverse_residue(std::uint64_t a) const { return inv_mod(a % mod_, mod_); }

void RingParams::accumulate_product(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                                    std::vector<std::uint64_t>& scratch) const {
  const std::size_t P = pi_slots();
  const auto S = static_cast<std::size_t>(s_);
  const std::size_t W = 2 * S - 1;
  scratch.assign((2 * P - 1) * W, 0);
  for (std::size_t i1 = 0; i1 < P; ++i1) {
    for (std::size_t j1 = 0; j1 < S; ++j1) {
      const std::uint64_t a = x[i1 * S + j1];
      if (!a) continue;
      for (std::size_t i2 = 0; i2 < P; ++i2) {
        std::uint64_t* row = scratch.data() + (i1 + i2) * W + j1;
        const std::uint64_t* yrow = y.data() + i2 * S;
        for (std::size_t j2 = 0; j2 < S; ++j2) {
          if (yrow[j2]) row[j2] = add(row[j2], mul(a, yrow[j2]));
        }
      }
    }
  }
  if (S > 1) {
    for (std::size_t r = 0; r < 2 * P - 1; ++r) {
      std::uint64_t* row = scratch.data() + r * W;
      for (std::size_t e = W - 1; e >= S; --e) {
        const std::uint64_t top = row[e];
        if (!top) continue;
        row[e] = 0;
        for (std::size_t j = 0; j < S; ++j) {
          if (g_[j]) row[e - S + j] = sub(row[e - S + j], mul(top, g_[j]));
        }
      }
    }
  }
}

void RingParams::multiply(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                          std::span<std::uint64_t> out) const {
  std::fill(out.begin(), out.end(), 0);
  multiply_add(x, y, out);
}

void RingParams::multiply_add(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                              std::span<std::uint64_t> acc) const {
  thread_local std::vector<std::uint64_t> scratch;
  accumulate_product(x, y, scratch);
  const std::size_t P = pi_slots();
  const auto S = static_cast<std::size_t>(s_);
  const std::size_t W = 2 * S - 1;
  const std::uint64_t p_res = p_ % mod_;
  for (std::size_t i = 0; i < P; ++i) {
    for (std::size_t j = 0; j < S; ++j) {
      std::uint64_t v = scratch[i * W + j];
      if (i + P < 2 * P - 1) {
        // pi^{i+p-1} = -p pi^i
        const std::uint64_t hi = scratch[(i + P) * W + j];
        if (hi) v = sub(v, mul(hi, p_res));
      }
      acc[i * S + j] = add(acc[i * S + j], v);
    }
  }
}

Ring ring_create(std::uint64_t p, int s, int M) { return std::make_shared<const RingParams>(p, s, M); }

// ---------------------------------------------------------------------------

RamifiedElement::RamifiedElement(Ring ring) : ring_(std::move(ring)), c_(ring_->stride(), 0) {}

RamifiedElement RamifiedElement::from_integer(Ring ring, std::int64_t value) {
  RamifiedElement r(ring);
  r.c_[0] = ring->reduce(value);
  return r;
}

RamifiedElement RamifiedElement::pi(Ring ring) {
  RamifiedElement r(ring);
  if (ring->pi_slots() > 1) {
    r.c_[static_cast<std::size_t>(ring->degree())] = 1 % ring->modulus();
  } else {
    // p = 2 is rejected at construction, so pi_slots() >= 2; kept for clarity.
    r.c_[0] = ring->reduce(-2);
  }
  return r;
}

RamifiedElement RamifiedElement::lift(Ring ring, const FqElement& residue) {
  if (residue.field()->p() != ring->p() || residue.field()->degree() != ring->degree()) {
    throw Error(ErrorKind::ParamsMismatch, "residue field does not match the ring");
  }
  RamifiedElement r(ring);
  for (int j = 0; j < ring->degree(); ++j) r.c_[static_cast<std::size_t>(j)] = residue.coeff(j);
  return r;
}

void RamifiedElement::set_coeff(std::size_t pi_power, std::size_t b_power, std::uint64_t residue) {
  c_.at(pi_power * static_cast<std::size_t>(ring_->degree()) + b_power) = residue % ring_->modulus();
}

bool RamifiedElement::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](std::uint64_t v) { return v == 0; });
}

void RamifiedElement::check_same(const RamifiedElement& y) const {
  if (ring_ != y.ring_ && !ring_->same_as(*y.ring_)) {
    throw Error(ErrorKind::ParamsMismatch, "ring elements with different parameters");
  }
}

RamifiedElement& RamifiedElement::operator+=(const RamifiedElement& y) {
  check_same(y);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = ring_->add(c_[k], y.c_[k]);
  return *this;
}

RamifiedElement& RamifiedElement::operator-=(const RamifiedElement& y) {
  check_same(y);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = ring_->sub(c_[k], y.c_[k]);
  return *this;
}

RamifiedElement& RamifiedElement::operator*=(const RamifiedElement& y) {
  *this = *this * y;
  return *this;
}

RamifiedElement RamifiedElement::operator+(const RamifiedElement& y) const {
  RamifiedElement r(*this);
  r += y;
  return r;
}

RamifiedElement RamifiedElement::operator-(const RamifiedElement& y) const {
  RamifiedElement r(*this);
  r -= y;
  return r;
}

RamifiedElement RamifiedElement::operator-() const {
  RamifiedElement r(ring_);
  for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = ring_->sub(0, c_[k]);
  return r;
}

RamifiedElement RamifiedElement::operator*(const RamifiedElement& y) const {
  check_same(y);
  RamifiedElement r(ring_);
  ring_->multiply(c_, y.c_, r.c_);
  return r;
}

RamifiedElement RamifiedElement::scaled(std::int64_t k) const {
  RamifiedElement r(ring_);
  const std::uint64_t kk = ring_->reduce(k);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = ring_->mul(c_[i], kk);
  return r;
}

RamifiedElement RamifiedElement::pow(std::uint64_t e) const {
  RamifiedElement r = from_integer(ring_, 1);
  RamifiedElement b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

bool RamifiedElement::operator==(const RamifiedElement& y) const {
  return ring_->same_as(*y.ring_) && c_ == y.c_;
}

// ---------------------------------------------------------------------------

PiOrd pi_ord(const RamifiedElement& x) {
  const RingParams& R = *x.ring();
  const auto S = static_cast<std::size_t>(R.degree());
  std::optional<Rational> best;
  for (std::size_t i = 0; i < R.pi_slots(); ++i) {
    for (std::size_t j = 0; j < S; ++j) {
      const std::uint64_t c = x.coords()[i * S + j];
      if (!c) continue;
      const Rational v = Rational(ord_p_u64(c, R.p())) +
                         Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(R.pi_slots()));
      if (!best || v < *best) best = v;
    }
  }
  return {best};
}

bool vanishes_to(const RamifiedElement& x, const Rational& bound) {
  const Rational M(x.ring()->precision());
  if (bound > M) return false;
  const PiOrd o = pi_ord(x);
  if (o.at_least_precision()) return true;
  return *o.value >= bound;
}

RamifiedElement divide_by_integer(const RamifiedElement& x, std::int64_t k) {
  if (k == 0) throw Error(ErrorKind::DivisionByZero, "division by zero");
  const RingParams& R = *x.ring();
  const auto p = static_cast<std::int64_t>(R.p());
  int v = 0;
  std::int64_t u = k;
  while (u % p == 0) {
    u /= p;
    ++v;
  }
  if (v >= R.precision()) return RamifiedElement(x.ring());
  const std::uint64_t pv = ipow(R.p(), static_cast<std::uint64_t>(v));
  const std::uint64_t uinv = R.inverse_residue(R.reduce(u));
  RamifiedElement out(x.ring());
  for (std::size_t idx = 0; idx < R.stride(); ++idx) {
    const std::uint64_t c = x.coords()[idx];
    if (c % pv != 0) {
      throw Error(ErrorKind::InvalidArgument, "element is not divisible by " + std::to_string(k));
    }
    out.coords()[idx] = R.mul(c / pv, uinv);
  }
  return out;
}

FqElement residue(const RamifiedElement& x, const Field& field) {
  const RingParams& R = *x.ring();
  if (field->p() != R.p() || field->degree() != R.degree()) {
    throw Error(ErrorKind::ParamsMismatch, "residue field does not match the ring");
  }
  std::vector<std::uint32_t> c(static_cast<std::size_t>(R.degree()));
  for (int j = 0; j < R.degree(); ++j) c[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(x.coords()[j] % R.p());
  return FqElement(field, std::move(c));
}

RamifiedElement inverse(const RamifiedElement& x) {
  const PiOrd o = pi_ord(x);
  if (o.at_least_precision() || *o.value != Rational(0)) {
    throw Error(ErrorKind::DivisionByZero, "element is not a unit");
  }
  const Ring& ring = x.ring();
  Field field = field_create(ring->p(), ring->degree());
  RamifiedElement y = RamifiedElement::lift(ring, residue(x, field).inverse());
  const RamifiedElement two = RamifiedElement::from_integer(ring, 2);
  const RamifiedElement one = RamifiedElement::from_integer(ring, 1);
  for (int it = 0; it < 80; ++it) {
    const RamifiedElement xy = x * y;
    if (xy == one) return y;
    y = y * (two - xy);
  }
  throw Error(ErrorKind::DivisionByZero, "Newton inversion did not converge");
}

RamifiedElement reduce_precision(const RamifiedElement& x, const Ring& target) {
  const RingParams& R = *x.ring();
  if (target->p() != R.p() || target->degree() != R.degree() || target->precision() > R.precision()) {
    throw Error(ErrorKind::ParamsMismatch, "target ring is not a lower-precision copy");
  }
  RamifiedElement out(target);
  for (std::size_t k = 0; k < R.stride(); ++k) out.coords()[k] = x.coords()[k] % target->modulus();
  return out;
}

RamifiedElement teichmueller(const FqElement& residue_value, const Ring& ring) {
  RamifiedElement x = RamifiedElement::lift(ring, residue_value);
  if (x.is_zero()) return x;
  const std::uint64_t q = ipow(ring->p(), static_cast<std::uint64_t>(ring->degree()));
  for (int it = 0; it <= ring->precision() + 1; ++it) {
    RamifiedElement next = x.pow(q);
    if (next == x) return x;
    x = std::move(next);
  }
  throw Error(ErrorKind::NoRoot, "Teichmueller iteration did not reach a fixed point");
}

// ---------------------------------------------------------------------------

std::uint64_t splitting_cutoff(const RingParams& ring, std::uint64_t Q) {
  const auto num = static_cast<unsigned __int128>(ring.precision()) * ring.p() * Q;
  const std::uint64_t den = ring.p() - 1;
  return static_cast<std::uint64_t>((num + den - 1) / den);
}

std::vector<SplittingCoefficient> splitting_coefficients(const Ring& ring, std::uint64_t Q, std::uint64_t i_max) {
  const RingParams& R = *ring;
  const std::uint64_t p = R.p();
  {
    std::uint64_t t = Q;
    while (t > 1 && t % p == 0) t /= p;
    if (t != 1 || Q < p) throw Error(ErrorKind::InvalidArgument, "Q must be a positive power of p");
  }
  if (static_cast<unsigned __int128>(p - 1) * i_max <
      static_cast<unsigned __int128>(R.precision()) * p * Q) {
    throw Error(ErrorKind::PrecisionBudgetExceeded,
                "i_max = " + std::to_string(i_max) + " leaves a tail above p^-M");
  }
  // pi^a / a! for a <= i_max.
  std::vector<Monomial> e(i_max + 1);
  std::uint64_t fact_val = 0, fact_unit = 1 % R.modulus();
  for (std::uint64_t a = 0; a <= i_max; ++a) {
    if (a > 0) {
      std::uint64_t t = a;
      while (t % p == 0) {
        t /= p;
        ++fact_val;
      }
      fact_unit = R.mul(fact_unit, t % R.modulus());
    }
    e[a] = pi_over_factorial(R, a, fact_val, fact_unit);
  }
  std::vector<SplittingCoefficient> out;
  out.reserve(i_max + 1);
  for (std::uint64_t i = 0; i <= i_max; ++i) {
    std::vector<std::uint64_t> acc(R.pi_slots(), 0);
    for (std::uint64_t b = 0; Q * b <= i; ++b) {
      Monomial fb = e[b];
      if (b % 2 == 1) fb.coef = R.sub(0, fb.coef);  // (-pi)^b / b!
      const Monomial t = mono_mul(R, e[i - Q * b], fb);
      acc[t.r] = R.add(acc[t.r], t.coef);
    }
    RamifiedElement v(ring);
    for (std::size_t r = 0; r < R.pi_slots(); ++r) v.set_coeff(r, 0, acc[r]);
    out.push_back({std::move(v), Rational(static_cast<std::int64_t>((p - 1) * i),
                                          static_cast<std::int64_t>(p * Q))});
  }
  return out;
}

RamifiedElement pi_power_over_factorial(const Ring& ring, std::uint64_t a) {
  const RingParams& R = *ring;
  std::uint64_t fact_val = 0, fact_unit = 1 % R.modulus();
  for (std::uint64_t k = 2; k <= a; ++k) {
    std::uint64_t t = k;
    while (t % R.p() == 0) {
      t /= R.p();
      ++fact_val;
    }
    fact_unit = R.mul(fact_unit, t % R.modulus());
  }
  const Monomial m = pi_over_factorial(R, a, fact_val, fact_unit);
  RamifiedElement out(ring);
  out.set_coeff(m.r, 0, m.coef);
  return out;
}

RamifiedElement theta_one(const Ring& ring) {
  const std::uint64_t p = ring->p();
  const auto num = static_cast<std::uint64_t>(ring->precision()) * p * p;
  const std::uint64_t cutoff = (num + p - 2) / (p - 1) + p;
  RamifiedElement sum(ring);
  for (const auto& c : splitting_coefficients(ring, p, cutoff)) sum += c.value;
  return sum;
}

SigmaOrd sigma_and_factorial_ord(std::uint64_t m, std::uint64_t p) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "m must be positive");
  std::uint64_t sigma = 0;
  for (std::uint64_t t = m; t; t /= p) sigma += t % p;
  std::uint64_t legendre = 0;
  for (std::uint64_t pk = p; pk <= m; pk *= p) {
    legendre += m / pk;
    if (pk > m / p) break;
  }
  const Rational ord = Rational(static_cast<std::int64_t>(m), static_cast<std::int64_t>(p - 1)) -
                       Rational(static_cast<std::int64_t>(legendre));
  return {sigma, ord};
}

// ---------------------------------------------------------------------------

RingEmbedding::RingEmbedding(Ring from, Ring to) : from_(std::move(from)), to_(std::move(to)) {
  if (from_->p() != to_->p() || from_->precision() != to_->precision() ||
      to_->degree() % from_->degree() != 0) {
    throw Error(ErrorKind::InvalidArgument, "embedding needs the same p and M and s | s'");
  }
  const Field ff = field_create(from_->p(), from_->degree());
  const Field tf = field_create(to_->p(), to_->degree());
  const FqElement rho = embedding_root(ff, tf);

  // Hensel lift of rho to a root of the integer modulus g in the target ring.
  const auto& g = from_->generator_modulus();
  const int s = from_->degree();
  auto eval = [&](const RamifiedElement& x, bool derivative) {
    RamifiedElement acc(to_);
    if (!derivative) {
      acc = RamifiedElement::from_integer(to_, 1);
      for (int j = s - 1; j >= 0; --j) acc = acc * x + RamifiedElement::from_integer(to_, g[static_cast<std::size_t>(j)]);
    } else {
      acc = RamifiedElement::from_integer(to_, s);
      for (int j = s - 1; j >= 1; --j) {
        acc = acc * x + RamifiedElement::from_integer(to_, static_cast<std::int64_t>(j) * g[static_cast<std::size_t>(j)]);
      }
    }
    return acc;
  };
  RamifiedElement beta = RamifiedElement::lift(to_, rho);
  bool converged = false;
  for (int it = 0; it < 80; ++it) {
    const RamifiedElement gv = eval(beta, false);
    if (gv.is_zero()) {
      converged = true;
      break;
    }
    beta = beta - gv * inverse(eval(beta, true));
  }
  if (!converged) throw Error(ErrorKind::NoRoot, "Hensel lift of the generator failed");

  RamifiedElement power = RamifiedElement::from_integer(to_, 1);
  for (int j = 0; j < s; ++j) {
    powers_.push_back(power);
    power *= beta;
  }

  // Left inverse over Z/p^M of the s' x s coordinate matrix of the pi^0 block.
  const int t = to_->degree();
  const RingParams& T = *to_;
  const std::uint64_t p = T.p();
  auto col = [&](int r, int j) { return powers_[static_cast<std::size_t>(j)].coords()[static_cast<std::size_t>(r)]; };
  std::vector<bool> used(static_cast<std::size_t>(t), false);
  {
    std::vector<std::vector<std::uint64_t>> work(static_cast<std::size_t>(t), std::vector<std::uint64_t>(static_cast<std::size_t>(s)));
    for (int r = 0; r < t; ++r)
      for (int j = 0; j < s; ++j) work[r][j] = col(r, j) % p;
    for (int c = 0; c < s; ++c) {
      int piv = -1;
      for (int r = 0; r < t; ++r) {
        if (!used[r] && work[r][c] != 0) {
          piv = r;
          break;
        }
      }
      if (piv < 0) throw Error(ErrorKind::NoRoot, "generator powers are dependent mod p");
      used[piv] = true;
      pivot_rows_.push_back(piv);
      const std::uint64_t inv = inv_mod(work[piv][c], p);
      for (int r = 0; r < t; ++r) {
        if (r == piv || work[r][c] == 0) continue;
        const std::uint64_t f = work[r][c] * inv % p;
        for (int k = 0; k < s; ++k) work[r][k] = (work[r][k] + p - f * work[piv][k] % p) % p;
      }
    }
  }
  std::vector<std::vector<std::uint64_t>> aug(static_cast<std::size_t>(s), std::vector<std::uint64_t>(2 * static_cast<std::size_t>(s), 0));
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) aug[i][j] = col(pivot_rows_[i], j);
    aug[i][s + i] = 1 % T.modulus();
  }
  for (int c = 0; c < s; ++c) {
    int piv = c;
    while (aug[piv][c] % p == 0) ++piv;
    std::swap(aug[piv], aug[c]);
    const std::uint64_t inv = T.inverse_residue(aug[c][c]);
    for (auto& v : aug[c]) v = T.mul(v, inv);
    for (int r = 0; r < s; ++r) {
      if (r == c || aug[r][c] == 0) continue;
      const std::uint64_t f = aug[r][c];
      for (int k = 0; k < 2 * s; ++k) aug[r][k] = T.sub(aug[r][k], T.mul(f, aug[c][k]));
    }
  }
  left_inverse_.assign(static_cast<std::size_t>(s), std::vector<std::uint64_t>(static_cast<std::size_t>(s)));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) left_inverse_[i][j] = aug[i][s + j];
}

RamifiedElement RingEmbedding::apply(const RamifiedElement& x) const {
  if (!x.ring()->same_as(*from_)) throw Error(ErrorKind::ParamsMismatch, "element is not in the source ring");
  const RingParams& T = *to_;
  const auto s = static_cast<std::size_t>(from_->degree());
  const auto t = static_cast<std::size_t>(to_->degree());
  RamifiedElement out(to_);
  for (std::size_t i = 0; i < T.pi_slots(); ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const std::uint64_t c = x.coords()[i * s + j];
      if (!c) continue;
      const auto img = powers_[j].coords();
      for (std::size_t r = 0; r < t; ++r) {
        if (img[r]) out.coords()[i * t + r] = T.add(out.coords()[i * t + r], T.mul(c, img[r]));
      }
    }
  }
  return out;
}

RamifiedElement RingEmbedding::descend(const RamifiedElement& y) const {
  if (!y.ring()->same_as(*to_)) throw Error(ErrorKind::ParamsMismatch, "element is not in the target ring");
  const RingParams& T = *to_;
  const auto s = static_cast<std::size_t>(from_->degree());
  const auto t = static_cast<std::size_t>(to_->degree());
  RamifiedElement x(from_);
  for (std::size_t i = 0; i < T.pi_slots(); ++i) {
    for (std::size_t k = 0; k < s; ++k) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < s; ++j) {
        acc = T.add(acc, T.mul(left_inverse_[k][j], y.coords()[i * t + static_cast<std::size_t>(pivot_rows_[j])]));
      }
      x.coords()[i * s + k] = acc;
    }
  }
  if (apply(x) != y) throw Error(ErrorKind::NotASubfield, "element is not in the image of the embedding");
  return x;
}

RamifiedElement ring_embed(const RamifiedElement& x, const Ring& target) {
  return RingEmbedding(x.ring(), target).apply(x);
}

// ---------------------------------------------------------------------------

RingMatrix::RingMatrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), stride_(ring_->stride()), data_(rows * cols * stride_, 0) {}

RamifiedElement RingMatrix::element(std::size_t r, std::size_t c) const {
  RamifiedElement x(ring_);
  const auto src = at(r, c);
  std::copy(src.begin(), src.end(), x.coords().begin());
  return x;
}

void RingMatrix::set(std::size_t r, std::size_t c, const RamifiedElement& x) {
  if (!x.ring()->same_as(*ring_)) throw Error(ErrorKind::ParamsMismatch, "matrix entry from a different ring");
  auto dst = at(r, c);
  std::copy(x.coords().begin(), x.coords().end(), dst.begin());
}

bool RingMatrix::is_zero_at(std::size_t r, std::size_t c) const noexcept {
  const auto v = at(r, c);
  return std::all_of(v.begin(), v.end(), [](std::uint64_t e) { return e == 0; });
}

}  // namespace dwork
