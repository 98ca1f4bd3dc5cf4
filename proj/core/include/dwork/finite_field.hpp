#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dwork/error.hpp"

namespace dwork {

bool is_prime(std::uint64_t n);

// Lexicographically smallest monic irreducible polynomial of degree s over F_p.
// Returned as the non-leading coefficients g_0..g_{s-1}; candidates are ordered
// by comparing g_0 first, each coefficient ranging over 0..p-1. This is the one
// modulus used by both FqParams and RingParams.
std::vector<std::uint32_t> select_modulus(std::uint64_t p, int s);

// F_{p^s} = F_p[b]/(g(b)).
class FqParams {
 public:
  FqParams(std::uint64_t p, int degree);

  std::uint64_t p() const noexcept { return p_; }
  int degree() const noexcept { return degree_; }
  std::uint64_t order() const noexcept { return order_; }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  bool same_as(const FqParams& other) const noexcept {
    return p_ == other.p_ && degree_ == other.degree_;
  }

 private:
  std::uint64_t p_;
  int degree_;
  std::uint64_t order_;
  std::vector<std::uint32_t> modulus_;
};

using Field = std::shared_ptr<const FqParams>;

// Throws NotPrime for composite p. p = 2 is accepted here; only the p-adic
// ring rejects it.
Field field_create(std::uint64_t p, int degree);

class FqElement {
 public:
  explicit FqElement(Field field);
  FqElement(Field field, std::vector<std::uint32_t> coeffs);

  static FqElement from_integer(Field field, std::int64_t value);
  // Inverse of index(): coordinates read as base-p digits, c_0 most significant.
  static FqElement from_index(Field field, std::uint64_t index);

  const Field& field() const noexcept { return field_; }
  std::span<const std::uint32_t> coeffs() const noexcept { return c_; }
  std::uint32_t coeff(int j) const { return c_.at(static_cast<std::size_t>(j)); }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  std::uint64_t index() const noexcept;

  FqElement operator+(const FqElement& y) const;
  FqElement operator-(const FqElement& y) const;
  FqElement operator-() const;
  FqElement operator*(const FqElement& y) const;
  FqElement& operator+=(const FqElement& y);
  FqElement& operator*=(const FqElement& y);

  // DivisionByZero on 0.
  FqElement inverse() const;
  FqElement pow(std::uint64_t e) const;
  // Integer powers; negative exponents go through inverse().
  FqElement pow_signed(std::int64_t e) const;
  FqElement frobenius() const { return pow(field_->p()); }

  bool operator==(const FqElement& y) const;
  bool operator!=(const FqElement& y) const { return !(*this == y); }

 private:
  void check_same(const FqElement& y) const;

  Field field_;
  std::vector<std::uint32_t> c_;
};

enum class FqOp { Add, Mul, Inv, Pow };

// Single entry point mirroring the add|mul|inv|pow operation; `y` is ignored
// for Inv and `exponent` is used only for Pow.
FqElement fq_arith(const FqElement& x, const FqElement& y, FqOp op, std::uint64_t exponent = 0);

// All q-1 nonzero elements in increasing index() order.
std::vector<FqElement> enumerate_units(const Field& field);

// Lexicographically smallest generator of the multiplicative group.
FqElement primitive_element(const Field& field);

// Embedding of F_{p^s} into F_{p^{s'}} (s | s') sending b to the smallest
// root of the source modulus in the target field.
class FieldEmbedding {
 public:
  FieldEmbedding(Field from, Field to);

  const Field& from() const noexcept { return from_; }
  const Field& to() const noexcept { return to_; }
  const FqElement& root() const noexcept { return images_.at(1 % images_.size()); }

  FqElement apply(const FqElement& x) const;
  // Preimage of y; NotASubfield if y is not in the image.
  FqElement restrict(const FqElement& y) const;

 private:
  Field from_;
  Field to_;
  std::vector<FqElement> images_;      // images of b^0..b^{s-1}
  std::vector<std::vector<std::uint32_t>> left_inverse_;  // s x s' over F_p
  std::vector<int> pivot_rows_;
};

// Smallest root (in index() order) of `from`'s modulus inside `to`.
// Throws NoRoot when none exists.
FqElement embedding_root(const Field& from, const Field& to);

struct TraceNorm {
  FqElement trace;
  FqElement norm;
};

// Trace and norm from x's field down to `base`, expressed in base coordinates.
// NotASubfield unless base->degree() divides x's degree.
TraceNorm trace_norm(const FqElement& x, const Field& base);

// Absolute trace to F_p as an integer in [0, p).
std::uint32_t absolute_trace(const FqElement& x);

}  // namespace dwork
