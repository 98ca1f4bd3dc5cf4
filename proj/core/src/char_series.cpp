#include <algorithm>

#include "dwork/padic_ring.hpp"
#include "parallel.hpp"

namespace dwork {

// det(I - T M_{r+1}) = det(I - T A) * (1 - a T - sum_{i>=0} (R A^i C) T^{i+2}),
// where A is the leading r x r block, C its new column, R its new row and a
// the new diagonal entry. Everything is truncated at T^{K+1}, so each step
// needs only K-1 matrix-vector products with A.
std::vector<RamifiedElement> char_series_division_free(const RingMatrix& mat, std::optional<std::size_t> max_degree,
                                                       unsigned workers) {
  if (mat.rows() != mat.cols()) throw Error(ErrorKind::InvalidArgument, "matrix is not square");
  const Ring& ring = mat.ring();
  const RingParams& R = *ring;
  const std::size_t n = mat.rows();
  const std::size_t K = std::min(n, max_degree.value_or(n));
  const std::size_t S = R.stride();

  using Poly = std::vector<std::uint64_t>;  // (K+1) * S coordinates
  Poly P((K + 1) * S, 0);
  P[0] = 1 % R.modulus();
  Poly Q((K + 1) * S, 0);
  Poly next((K + 1) * S, 0);
  std::vector<std::uint64_t> v, w;

  for (std::size_t r = 0; r < n; ++r) {
    std::fill(Q.begin(), Q.end(), 0);
    Q[0] = 1 % R.modulus();
    if (K >= 1) {
      const auto a = mat.at(r, r);
      for (std::size_t k = 0; k < S; ++k) Q[S + k] = R.sub(0, a[k]);
    }
    if (K >= 2 && r > 0) {
      v.assign(r * S, 0);
      w.assign(r * S, 0);
      for (std::size_t i = 0; i < r; ++i) {
        const auto c = mat.at(i, r);
        std::copy(c.begin(), c.end(), v.begin() + static_cast<std::ptrdiff_t>(i * S));
      }
      for (std::size_t i = 0; i + 2 <= K; ++i) {
        std::vector<std::uint64_t> dot(S, 0);
        for (std::size_t j = 0; j < r; ++j) {
          if (mat.is_zero_at(r, j)) continue;
          R.multiply_add(mat.at(r, j), std::span<const std::uint64_t>(v.data() + j * S, S), dot);
        }
        for (std::size_t k = 0; k < S; ++k) Q[(i + 2) * S + k] = R.sub(0, dot[k]);
        if (i + 3 <= K) {
          detail::parallel_for(r, workers, [&](std::size_t row) {
            std::span<std::uint64_t> out(w.data() + row * S, S);
            std::fill(out.begin(), out.end(), 0);
            for (std::size_t j = 0; j < r; ++j) {
              if (mat.is_zero_at(row, j)) continue;
              R.multiply_add(mat.at(row, j), std::span<const std::uint64_t>(v.data() + j * S, S), out);
            }
          });
          std::swap(v, w);
        }
      }
    }
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t i = 0; i <= K; ++i) {
      std::span<const std::uint64_t> pi(P.data() + i * S, S);
      if (std::all_of(pi.begin(), pi.end(), [](std::uint64_t x) { return x == 0; })) continue;
      for (std::size_t j = 0; i + j <= K; ++j) {
        std::span<const std::uint64_t> qj(Q.data() + j * S, S);
        if (std::all_of(qj.begin(), qj.end(), [](std::uint64_t x) { return x == 0; })) continue;
        R.multiply_add(pi, qj, std::span<std::uint64_t>(next.data() + (i + j) * S, S));
      }
    }
    std::swap(P, next);
  }

  std::vector<RamifiedElement> out;
  out.reserve(K + 1);
  for (std::size_t i = 0; i <= K; ++i) {
    RamifiedElement e(ring);
    std::copy(P.begin() + static_cast<std::ptrdiff_t>(i * S), P.begin() + static_cast<std::ptrdiff_t>((i + 1) * S),
              e.coords().begin());
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace dwork
