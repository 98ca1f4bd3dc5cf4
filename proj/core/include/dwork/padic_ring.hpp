#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dwork/error.hpp"
#include "dwork/finite_field.hpp"
#include "dwork/rational.hpp"

namespace dwork {

// (W(F_{p^s}) / p^M)[pi] / (pi^{p-1} + p).
//
// An element is stored as residues c[i][j] in [0, p^M) with value
// sum c[i][j] pi^i b^j, 0 <= i < p-1, 0 <= j < s, where b is a root of the
// integer lift of select_modulus(p, s). The pi^i b^j basis is orthogonal for
// ord_p, so ord_p(x) >= v for integer v iff every c[i][j] is divisible by p^v.
class RingParams {
 public:
  RingParams(std::uint64_t p, int s, int precision);

  std::uint64_t p() const noexcept { return p_; }
  int degree() const noexcept { return s_; }
  int precision() const noexcept { return M_; }
  std::uint64_t modulus() const noexcept { return mod_; }
  const std::vector<std::uint32_t>& generator_modulus() const noexcept { return g_; }
  std::size_t pi_slots() const noexcept { return static_cast<std::size_t>(p_ - 1); }
  std::size_t stride() const noexcept { return pi_slots() * static_cast<std::size_t>(s_); }

  bool same_as(const RingParams& o) const noexcept { return p_ == o.p_ && s_ == o.s_ && M_ == o.M_; }

  // Residue arithmetic mod p^M.
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t r = a + b;
    return r >= mod_ ? r - mod_ : r;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + mod_ - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    if (small_) return a * b % mod_;
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod_);
  }
  std::uint64_t reduce(std::int64_t v) const noexcept {
    const auto m = static_cast<std::int64_t>(mod_);
    const std::int64_t r = v % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
  }
  // Inverse of a residue prime to p.
  std::uint64_t inverse_residue(std::uint64_t a) const;

  // Coordinate kernels on stride()-length spans.
  void multiply(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                std::span<std::uint64_t> out) const;
  void multiply_add(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                    std::span<std::uint64_t> acc) const;

 private:
  void accumulate_product(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                          std::vector<std::uint64_t>& scratch) const;

  std::uint64_t p_;
  int s_;
  int M_;
  std::uint64_t mod_;
  bool small_;
  std::vector<std::uint32_t> g_;
};

using Ring = std::shared_ptr<const RingParams>;

// NotPrime for composite p, UnsupportedPrime for p = 2.
Ring ring_create(std::uint64_t p, int s, int M);

class RamifiedElement {
 public:
  explicit RamifiedElement(Ring ring);

  static RamifiedElement from_integer(Ring ring, std::int64_t value);
  static RamifiedElement pi(Ring ring);
  // Unramified lift of a residue: coordinates of pi^0 set to the F_{p^s}
  // coordinates of `residue`.
  static RamifiedElement lift(Ring ring, const FqElement& residue);

  const Ring& ring() const noexcept { return ring_; }
  std::span<const std::uint64_t> coords() const noexcept { return c_; }
  std::span<std::uint64_t> coords() noexcept { return c_; }
  std::uint64_t coeff(std::size_t pi_power, std::size_t b_power) const {
    return c_.at(pi_power * static_cast<std::size_t>(ring_->degree()) + b_power);
  }
  void set_coeff(std::size_t pi_power, std::size_t b_power, std::uint64_t residue);

  bool is_zero() const noexcept;

  RamifiedElement operator+(const RamifiedElement& y) const;
  RamifiedElement operator-(const RamifiedElement& y) const;
  RamifiedElement operator-() const;
  RamifiedElement operator*(const RamifiedElement& y) const;
  RamifiedElement& operator+=(const RamifiedElement& y);
  RamifiedElement& operator-=(const RamifiedElement& y);
  RamifiedElement& operator*=(const RamifiedElement& y);
  RamifiedElement scaled(std::int64_t k) const;
  RamifiedElement pow(std::uint64_t e) const;

  bool operator==(const RamifiedElement& y) const;
  bool operator!=(const RamifiedElement& y) const { return !(*this == y); }

 private:
  void check_same(const RamifiedElement& y) const;

  Ring ring_;
  std::vector<std::uint64_t> c_;
};

// ord_p of an element: a rational in (1/(p-1))Z, or "at least precision" when
// every coordinate vanishes mod p^M.
struct PiOrd {
  std::optional<Rational> value;

  bool at_least_precision() const noexcept { return !value.has_value(); }
  static PiOrd at_least() { return {}; }
};

PiOrd pi_ord(const RamifiedElement& x);

// True when ord_p(x) >= bound is certified by the stored digits. A bound above
// the ring precision is never certified.
bool vanishes_to(const RamifiedElement& x, const Rational& bound);

// A value together with its certified absolute precision (ord_p of the error).
struct Certified {
  RamifiedElement value;
  Rational precision;
};

// x / k where ord_p(x) >= ord_p(k). The top ord_p(k) digits of the result are
// not determined; callers subtract ord_p(k) from their precision.
RamifiedElement divide_by_integer(const RamifiedElement& x, std::int64_t k);

// Inverse of a unit (ord_p = 0). DivisionByZero otherwise.
RamifiedElement inverse(const RamifiedElement& x);

// Reduction mod p of the pi^0 part.
FqElement residue(const RamifiedElement& x, const Field& field);

// Same element viewed at a lower precision M' <= M (same p, s).
RamifiedElement reduce_precision(const RamifiedElement& x, const Ring& target);

// Teichmueller lift of a residue in F_{p^s}; the field must match the ring's
// (p, s).
RamifiedElement teichmueller(const FqElement& residue, const Ring& ring);

// theta(1) = exp(pi z - pi z^p) at z = 1, a primitive p-th root of unity.
RamifiedElement theta_one(const Ring& ring);

struct SplittingCoefficient {
  RamifiedElement value;
  Rational floor;  // (p-1) i / (p Q), a lower bound for ord_p(value)
};

// Coefficients c_0..c_{i_max} of exp(pi z - pi z^Q), Q a power of p.
// PrecisionBudgetExceeded when (p-1) i_max / (p Q) < M.
std::vector<SplittingCoefficient> splitting_coefficients(const Ring& ring, std::uint64_t Q, std::uint64_t i_max);

// Smallest i_max accepted by splitting_coefficients for this ring and Q.
std::uint64_t splitting_cutoff(const RingParams& ring, std::uint64_t Q);

// pi^a / a! as an exact element of the ring.
RamifiedElement pi_power_over_factorial(const Ring& ring, std::uint64_t a);

struct SigmaOrd {
  std::uint64_t sigma;  // base-p digit sum of m
  Rational ord;         // ord_p(pi^m / m!) = m/(p-1) - ord_p(m!)
};

SigmaOrd sigma_and_factorial_ord(std::uint64_t m, std::uint64_t p);

// Ring homomorphism R(s, M) -> R(s', M), s | s'. The generator b is sent to
// the Hensel lift of the smallest root of its modulus in F_{p^{s'}}.
class RingEmbedding {
 public:
  RingEmbedding(Ring from, Ring to);

  const Ring& from() const noexcept { return from_; }
  const Ring& to() const noexcept { return to_; }
  const RamifiedElement& generator_image() const noexcept { return powers_.at(1 % powers_.size()); }

  RamifiedElement apply(const RamifiedElement& x) const;
  // Preimage of y; NotASubfield when y is outside the image.
  RamifiedElement descend(const RamifiedElement& y) const;

 private:
  Ring from_;
  Ring to_;
  std::vector<RamifiedElement> powers_;  // images of b^0..b^{s-1}
  std::vector<int> pivot_rows_;
  std::vector<std::vector<std::uint64_t>> left_inverse_;
};

RamifiedElement ring_embed(const RamifiedElement& x, const Ring& target);

// Dense square matrix over a ring, coordinates stored contiguously.
class RingMatrix {
 public:
  RingMatrix(Ring ring, std::size_t rows, std::size_t cols);

  const Ring& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const std::uint64_t> at(std::size_t r, std::size_t c) const noexcept {
    return {data_.data() + (r * cols_ + c) * stride_, stride_};
  }
  std::span<std::uint64_t> at(std::size_t r, std::size_t c) noexcept {
    return {data_.data() + (r * cols_ + c) * stride_, stride_};
  }
  RamifiedElement element(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const RamifiedElement& x);
  bool is_zero_at(std::size_t r, std::size_t c) const noexcept;

 private:
  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t stride_;
  std::vector<std::uint64_t> data_;
};

// Coefficients of det(I - T * mat) up to T^max_degree (default: the full
// dimension), computed without any division. `workers` splits the
// matrix-vector products; the result does not depend on it.
std::vector<RamifiedElement> char_series_division_free(const RingMatrix& mat,
                                                       std::optional<std::size_t> max_degree = std::nullopt,
                                                       unsigned workers = 1);

}  // namespace dwork
