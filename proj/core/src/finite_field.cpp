#include "dwork/finite_field.hpp"

#include <algorithm>
#include <string>

namespace dwork {

namespace {

using Poly = std::vector<std::uint64_t>;  // low degree first, entries mod p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod_p(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod_p(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + p - c * m[i] % p) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^{p^k} mod m
Poly frobenius_power_of_x(std::uint64_t k, const Poly& m, std::uint64_t p) {
  Poly x{0, 1};
  for (std::uint64_t i = 0; i < k; ++i) x = poly_powmod(x, p, m, p);
  return x;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_irreducible(const Poly& g, std::uint64_t p) {
  const auto s = static_cast<std::uint64_t>(g.size() - 1);
  if (s == 1) return true;
  Poly x{0, 1};
  Poly xq = frobenius_power_of_x(s, g, p);
  if (xq != poly_mod(x, g, p)) return false;
  for (std::uint64_t r : prime_factors(s)) {
    Poly h = frobenius_power_of_x(s / r, g, p);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    if (poly_gcd(g, h, p).size() != 1) return false;
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t p, int s) {
  std::uint64_t r = 1;
  for (int i = 0; i < s; ++i) {
    if (r > (std::uint64_t{1} << 62) / p) {
      throw Error(ErrorKind::InvalidArgument, "field order p^s overflows 64 bits");
    }
    r *= p;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint32_t> select_modulus(std::uint64_t p, int s) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (s < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  const std::uint64_t count = checked_pow(p, s);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    // c_0 is the most significant digit so that idx order is lexicographic.
    Poly g(static_cast<std::size_t>(s) + 1, 0);
    std::uint64_t rest = idx;
    for (int j = s - 1; j >= 0; --j) {
      g[static_cast<std::size_t>(j)] = rest % p;
      rest /= p;
    }
    g[static_cast<std::size_t>(s)] = 1;
    if (is_irreducible(g, p)) {
      return {g.begin(), g.end() - 1};
    }
  }
  throw Error(ErrorKind::NoRoot, "no irreducible polynomial found");
}

FqParams::FqParams(std::uint64_t p, int degree)
    : p_(p), degree_(degree), order_(checked_pow(p, degree)), modulus_(select_modulus(p, degree)) {}

Field field_create(std::uint64_t p, int degree) {
  return std::make_shared<const FqParams>(p, degree);
}

FqElement::FqElement(Field field) : field_(std::move(field)), c_(static_cast<std::size_t>(field_->degree()), 0) {}

FqElement::FqElement(Field field, std::vector<std::uint32_t> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
  if (c_.size() != static_cast<std::size_t>(field_->degree())) {
    throw Error(ErrorKind::InvalidArgument, "coefficient vector length must equal the field degree");
  }
  for (auto& v : c_) v = static_cast<std::uint32_t>(v % field_->p());
}

FqElement FqElement::from_integer(Field field, std::int64_t value) {
  FqElement r(field);
  const auto p = static_cast<std::int64_t>(field->p());
  r.c_[0] = static_cast<std::uint32_t>(((value % p) + p) % p);
  return r;
}

FqElement FqElement::from_index(Field field, std::uint64_t index) {
  FqElement r(field);
  const int s = field->degree();
  for (int j = s - 1; j >= 0; --j) {
    r.c_[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(index % field->p());
    index /= field->p();
  }
  return r;
}

bool FqElement::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](std::uint32_t v) { return v == 0; });
}

bool FqElement::is_one() const noexcept {
  if (c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](std::uint32_t v) { return v == 0; });
}

std::uint64_t FqElement::index() const noexcept {
  std::uint64_t idx = 0;
  for (std::uint32_t v : c_) idx = idx * field_->p() + v;
  return idx;
}

void FqElement::check_same(const FqElement& y) const {
  if (!field_->same_as(*y.field_)) {
    throw Error(ErrorKind::ParamsMismatch, "finite field elements from different fields");
  }
}

FqElement FqElement::operator+(const FqElement& y) const {
  FqElement r(*this);
  r += y;
  return r;
}

FqElement& FqElement::operator+=(const FqElement& y) {
  check_same(y);
  const auto p = field_->p();
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] = static_cast<std::uint32_t>((c_[j] + y.c_[j]) % p);
  return *this;
}

FqElement FqElement::operator-(const FqElement& y) const {
  check_same(y);
  FqElement r(*this);
  const auto p = field_->p();
  for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = static_cast<std::uint32_t>((c_[j] + p - y.c_[j]) % p);
  return r;
}

FqElement FqElement::operator-() const {
  FqElement r(field_);
  const auto p = field_->p();
  for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = static_cast<std::uint32_t>((p - c_[j]) % p);
  return r;
}

FqElement FqElement::operator*(const FqElement& y) const {
  check_same(y);
  const std::uint64_t p = field_->p();
  const auto s = static_cast<std::size_t>(field_->degree());
  std::vector<std::uint64_t> prod(2 * s - 1, 0);
  for (std::size_t i = 0; i < s; ++i) {
    if (!c_[i]) continue;
    for (std::size_t j = 0; j < s; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{c_[i]} * y.c_[j]) % p;
  }
  const auto& g = field_->modulus();
  for (std::size_t e = prod.size(); e-- > s;) {
    const std::uint64_t top = prod[e];
    if (!top) continue;
    prod[e] = 0;
    for (std::size_t j = 0; j < s; ++j) {
      prod[e - s + j] = (prod[e - s + j] + p - top * g[j] % p) % p;
    }
  }
  FqElement r(field_);
  for (std::size_t j = 0; j < s; ++j) r.c_[j] = static_cast<std::uint32_t>(prod[j]);
  return r;
}

FqElement& FqElement::operator*=(const FqElement& y) {
  *this = *this * y;
  return *this;
}

FqElement FqElement::pow(std::uint64_t e) const {
  FqElement r = from_integer(field_, 1);
  FqElement b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

FqElement FqElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in F_q");
  return pow(field_->order() - 2);
}

FqElement FqElement::pow_signed(std::int64_t e) const {
  if (e >= 0) return pow(static_cast<std::uint64_t>(e));
  return inverse().pow(static_cast<std::uint64_t>(-e));
}

bool FqElement::operator==(const FqElement& y) const {
  return field_->same_as(*y.field_) && c_ == y.c_;
}

FqElement fq_arith(const FqElement& x, const FqElement& y, FqOp op, std::uint64_t exponent) {
  switch (op) {
    case FqOp::Add: return x + y;
    case FqOp::Mul: return x * y;
    case FqOp::Inv: return x.inverse();
    case FqOp::Pow: return x.pow(exponent);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown field operation");
}

std::vector<FqElement> enumerate_units(const Field& field) {
  std::vector<FqElement> out;
  out.reserve(field->order() - 1);
  for (std::uint64_t idx = 1; idx < field->order(); ++idx) out.push_back(FqElement::from_index(field, idx));
  return out;
}

FqElement primitive_element(const Field& field) {
  const std::uint64_t group = field->order() - 1;
  const auto factors = prime_factors(group);
  for (std::uint64_t idx = 1; idx < field->order(); ++idx) {
    FqElement x = FqElement::from_index(field, idx);
    bool ok = true;
    for (std::uint64_t r : factors) {
      if (x.pow(group / r).is_one()) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw Error(ErrorKind::NoRoot, "no primitive element");
}

FqElement embedding_root(const Field& from, const Field& to) {
  if (from->p() != to->p() || to->degree() % from->degree() != 0) {
    throw Error(ErrorKind::NotASubfield, "source field does not embed into target");
  }
  const auto& g = from->modulus();
  for (std::uint64_t idx = 0; idx < to->order(); ++idx) {
    FqElement x = FqElement::from_index(to, idx);
    FqElement acc = FqElement::from_integer(to, 1);  // leading coefficient
    for (std::size_t j = g.size(); j-- > 0;) {
      acc = acc * x + FqElement::from_integer(to, g[j]);
    }
    if (acc.is_zero()) return x;
  }
  throw Error(ErrorKind::NoRoot, "source modulus has no root in target field");
}

FieldEmbedding::FieldEmbedding(Field from, Field to) : from_(std::move(from)), to_(std::move(to)) {
  const FqElement root = embedding_root(from_, to_);
  const int s = from_->degree();
  const int t = to_->degree();
  const std::uint64_t p = from_->p();
  FqElement power = FqElement::from_integer(to_, 1);
  for (int j = 0; j < s; ++j) {
    images_.push_back(power);
    power *= root;
  }
  // Left inverse of the t x s coordinate matrix E (column j = images_[j]),
  // built from s pivot rows by Gauss-Jordan over F_p.
  std::vector<std::vector<std::uint64_t>> aug(static_cast<std::size_t>(t),
                                              std::vector<std::uint64_t>(static_cast<std::size_t>(s), 0));
  for (int r = 0; r < t; ++r)
    for (int j = 0; j < s; ++j) aug[r][j] = images_[j].coeff(r);
  std::vector<int> rows(static_cast<std::size_t>(t));
  for (int r = 0; r < t; ++r) rows[r] = r;
  // Work on a copy: pick pivot rows, then invert the s x s submatrix.
  auto work = aug;
  std::vector<int> chosen;
  std::vector<bool> used(static_cast<std::size_t>(t), false);
  for (int col = 0; col < s; ++col) {
    int piv = -1;
    for (int r = 0; r < t; ++r) {
      if (!used[r] && work[r][col] % p != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw Error(ErrorKind::NoRoot, "embedding images are linearly dependent");
    used[piv] = true;
    chosen.push_back(piv);
    const std::uint64_t inv = inv_mod_p(work[piv][col], p);
    for (int r = 0; r < t; ++r) {
      if (r == piv || work[r][col] == 0) continue;
      const std::uint64_t f = work[r][col] * inv % p;
      for (int c = 0; c < s; ++c) work[r][c] = (work[r][c] + p - f * work[piv][c] % p) % p;
    }
  }
  // Invert S = aug restricted to chosen rows.
  std::vector<std::vector<std::uint64_t>> sub(static_cast<std::size_t>(s),
                                              std::vector<std::uint64_t>(2 * static_cast<std::size_t>(s), 0));
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) sub[i][j] = aug[chosen[i]][j];
    sub[i][s + i] = 1;
  }
  for (int col = 0; col < s; ++col) {
    int piv = col;
    while (sub[piv][col] == 0) ++piv;
    std::swap(sub[piv], sub[col]);
    const std::uint64_t inv = inv_mod_p(sub[col][col], p);
    for (auto& v : sub[col]) v = v * inv % p;
    for (int r = 0; r < s; ++r) {
      if (r == col || sub[r][col] == 0) continue;
      const std::uint64_t f = sub[r][col];
      for (int c = 0; c < 2 * s; ++c) sub[r][c] = (sub[r][c] + p - f * sub[col][c] % p) % p;
    }
  }
  left_inverse_.assign(static_cast<std::size_t>(s), std::vector<std::uint32_t>(static_cast<std::size_t>(s), 0));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) left_inverse_[i][j] = static_cast<std::uint32_t>(sub[i][s + j]);
  pivot_rows_ = chosen;
}

FqElement FieldEmbedding::apply(const FqElement& x) const {
  if (!x.field()->same_as(*from_)) throw Error(ErrorKind::ParamsMismatch, "element is not in the source field");
  FqElement r(to_);
  for (int j = 0; j < from_->degree(); ++j) {
    if (x.coeff(j)) r += images_[j] * FqElement::from_integer(to_, x.coeff(j));
  }
  return r;
}

FqElement FieldEmbedding::restrict(const FqElement& y) const {
  if (!y.field()->same_as(*to_)) throw Error(ErrorKind::ParamsMismatch, "element is not in the target field");
  const int s = from_->degree();
  const std::uint64_t p = from_->p();
  std::vector<std::uint32_t> x(static_cast<std::size_t>(s), 0);
  for (int i = 0; i < s; ++i) {
    std::uint64_t acc = 0;
    for (int j = 0; j < s; ++j) acc = (acc + std::uint64_t{left_inverse_[i][j]} * y.coeff(pivot_rows_[j])) % p;
    x[i] = static_cast<std::uint32_t>(acc);
  }
  FqElement candidate(from_, std::move(x));
  if (apply(candidate) != y) throw Error(ErrorKind::NotASubfield, "element does not lie in the subfield");
  return candidate;
}

TraceNorm trace_norm(const FqElement& x, const Field& base) {
  const Field& ext = x.field();
  if (base->p() != ext->p() || ext->degree() % base->degree() != 0) {
    throw Error(ErrorKind::NotASubfield, "base field is not a subfield");
  }
  const std::uint64_t q = base->order();
  const int steps = ext->degree() / base->degree();
  FqElement tr(ext);
  FqElement nm = FqElement::from_integer(ext, 1);
  FqElement conj = x;
  for (int i = 0; i < steps; ++i) {
    tr += conj;
    nm *= conj;
    conj = conj.pow(q);
  }
  FieldEmbedding emb(base, ext);
  return {emb.restrict(tr), emb.restrict(nm)};
}

std::uint32_t absolute_trace(const FqElement& x) {
  FqElement tr(x.field());
  FqElement conj = x;
  for (int i = 0; i < x.field()->degree(); ++i) {
    tr += conj;
    conj = conj.frobenius();
  }
  return tr.coeff(0);
}

}  // namespace dwork
