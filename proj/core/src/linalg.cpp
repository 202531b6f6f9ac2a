#include "qcfa/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace qcfa {

Matrix to_scalar(const RationalMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = Scalar(m(r, c));
  return out;
}

Scalar max_abs_entry(const Matrix& m) {
  Scalar best(0L);
  for (const auto& x : m.data()) {
    Scalar a = abs(x);
    if (a > best) best = a;
  }
  return best;
}

SymmetricEigen symmetric_eigen(const Matrix& input) {
  if (!input.square()) throw std::invalid_argument("eigendecomposition needs a square matrix");
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);

  Scalar scale(0L);
  for (const auto& x : a.data()) scale += square(x);
  const Scalar threshold = Scalar::pow2(-2 * (working_precision() - 8)) * (scale + Scalar(1L));

  for (int sweep = 0; sweep < 100; ++sweep) {
    Scalar off(0L);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += square(a(p, q));
    if (off <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q).is_zero()) continue;
        // Rotation that annihilates a(p,q).
        Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2L) * a(p, q));
        Scalar t = Scalar(theta.sign() >= 0 ? 1L : -1L) / (abs(theta) + sqrt(square(theta) + Scalar(1L)));
        Scalar c = Scalar(1L) / sqrt(square(t) + Scalar(1L));
        Scalar s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          Scalar akp = a(k, p);
          Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          Scalar apk = a(p, k);
          Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          Scalar vkp = v(k, p);
          Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{{}, Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(a(order[k], order[k]));
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace qcfa
