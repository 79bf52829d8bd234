#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <type_traits>

namespace holo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kDefaultTol = 1e-10;

namespace detail {
template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
constexpr T conj_if_complex(const T& v) {
  if constexpr (is_complex<T>::value) {
    return std::conj(v);
  } else {
    return v;
  }
}

template <class T>
double abs2(const T& v) {
  if constexpr (is_complex<T>::value) {
    return std::norm(v);
  } else {
    return v * v;
  }
}
}  // namespace detail

/// Fixed-size column vector.
template <class T, std::size_t N>
using Vector = std::array<T, N>;

using Vec3 = Vector<double, 3>;
using CVector4 = Vector<Complex, 4>;

template <class T, std::size_t N>
constexpr Vector<T, N> operator+(const Vector<T, N>& a, const Vector<T, N>& b) {
  Vector<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + b[i];
  return out;
}

template <class T, std::size_t N>
constexpr Vector<T, N> operator-(const Vector<T, N>& a, const Vector<T, N>& b) {
  Vector<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] - b[i];
  return out;
}

template <class T, std::size_t N, class S>
  requires std::is_arithmetic_v<S> || detail::is_complex<S>::value
constexpr Vector<T, N> operator*(const S& s, const Vector<T, N>& a) {
  Vector<T, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = T(s) * a[i];
  return out;
}

/// Hermitian inner product, conjugate-linear in the first argument.
template <class T, std::size_t N>
constexpr T dot(const Vector<T, N>& a, const Vector<T, N>& b) {
  T acc{};
  for (std::size_t i = 0; i < N; ++i) acc += detail::conj_if_complex(a[i]) * b[i];
  return acc;
}

template <class T, std::size_t N>
double norm(const Vector<T, N>& a) {
  double acc = 0.0;
  for (const auto& v : a) acc += detail::abs2(v);
  return std::sqrt(acc);
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Embeds a real 3-vector into the excited triplet (zero ground component).
inline CVector4 embed(const Vec3& v) { return {Complex(0.0), Complex(v[0]), Complex(v[1]), Complex(v[2])}; }

inline CVector4 basis_vector(std::size_t k) {
  CVector4 e{};
  e.at(k) = 1.0;
  return e;
}

template <class T, std::size_t N>
bool is_normalized(const Vector<T, N>& v, double tol = kDefaultTol) {
  return std::isfinite(norm(v)) && std::abs(norm(v) - 1.0) <= tol;
}

/// Dense row-major N x N matrix.
template <class T, std::size_t N>
class SquareMatrix {
 public:
  using value_type = T;
  static constexpr std::size_t dim = N;

  constexpr SquareMatrix() = default;

  constexpr SquareMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    if (rows.size() != N) throw std::invalid_argument("SquareMatrix: wrong row count");
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != N) throw std::invalid_argument("SquareMatrix: wrong column count");
      std::size_t c = 0;
      for (const auto& v : row) (*this)(r, c++) = v;
      ++r;
    }
  }

  static constexpr SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = T(1);
    return m;
  }
  static constexpr SquareMatrix zero() { return SquareMatrix{}; }

  static SquareMatrix diagonal(const Vector<T, N>& d) {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  constexpr T& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
  constexpr const T& operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

  constexpr SquareMatrix& operator+=(const SquareMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) data_[i] += o.data_[i];
    return *this;
  }
  constexpr SquareMatrix& operator-=(const SquareMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) data_[i] -= o.data_[i];
    return *this;
  }
  constexpr SquareMatrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend constexpr SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend constexpr SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend constexpr SquareMatrix operator-(SquareMatrix a) { return a *= T(-1); }
  friend constexpr SquareMatrix operator*(const T& s, SquareMatrix a) { return a *= s; }
  friend constexpr SquareMatrix operator*(SquareMatrix a, const T& s) { return a *= s; }

  friend constexpr SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = 0; k < N; ++k) {
        const T aik = a(i, k);
        for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  friend constexpr Vector<T, N> operator*(const SquareMatrix& a, const Vector<T, N>& v) {
    Vector<T, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) out[i] += a(i, j) * v[j];
    }
    return out;
  }

  friend constexpr bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

  /// Conjugate transpose (plain transpose for real T).
  constexpr SquareMatrix adjoint() const {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) out(j, i) = detail::conj_if_complex((*this)(i, j));
    }
    return out;
  }

  constexpr T trace() const {
    T acc{};
    for (std::size_t i = 0; i < N; ++i) acc += (*this)(i, i);
    return acc;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (const auto& v : data_) acc += detail::abs2(v);
    return std::sqrt(acc);
  }

  std::span<const T, N * N> data() const { return data_; }

 private:
  std::array<T, N * N> data_{};
};

using Operator4 = SquareMatrix<Complex, 4>;
using Matrix2c = SquareMatrix<Complex, 2>;
using Matrix2 = SquareMatrix<double, 2>;
using Matrix3 = SquareMatrix<double, 3>;

template <class T, std::size_t N>
SquareMatrix<T, N> commutator(const SquareMatrix<T, N>& a, const SquareMatrix<T, N>& b) {
  return a * b - b * a;
}

/// |v><w|
template <class T, std::size_t N>
SquareMatrix<T, N> outer(const Vector<T, N>& v, const Vector<T, N>& w) {
  SquareMatrix<T, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) out(i, j) = v[i] * detail::conj_if_complex(w[j]);
  }
  return out;
}

template <class T, std::size_t N>
double frobenius_distance(const SquareMatrix<T, N>& a, const SquareMatrix<T, N>& b) {
  return (a - b).frobenius_norm();
}

template <class T, std::size_t N>
bool is_unitary(const SquareMatrix<T, N>& m, double tol = kDefaultTol) {
  if (!(tol > 0.0)) throw std::invalid_argument("is_unitary: tol must be positive");
  return frobenius_distance(m.adjoint() * m, SquareMatrix<T, N>::identity()) <= tol;
}

template <class T, std::size_t N>
bool is_hermitian(const SquareMatrix<T, N>& m, double tol = kDefaultTol) {
  return frobenius_distance(m, m.adjoint()) <= tol;
}

/// Real 3x3 block acting on the excited triplet, embedded as 1 (+) block.
inline Operator4 embed_block(const Matrix3& b) {
  Operator4 out = Operator4::identity();
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out(i + 1, j + 1) = b(i, j);
  }
  return out;
}

/// Orthogonal projector sum_k v_k v_k^dagger onto the span of orthonormal vectors.
inline Operator4 projector_from_vectors(std::span<const CVector4> vs, double tol = kDefaultTol) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const Complex g = dot(vs[i], vs[j]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(g - expected) > tol) {
        throw std::invalid_argument("projector_from_vectors: input vectors are not orthonormal");
      }
    }
  }
  Operator4 p;
  for (const auto& v : vs) p += outer(v, v);
  return p;
}

inline Operator4 projector_from_vectors(std::initializer_list<CVector4> vs, double tol = kDefaultTol) {
  return projector_from_vectors(std::span<const CVector4>(vs.begin(), vs.size()), tol);
}

}  // namespace holo
