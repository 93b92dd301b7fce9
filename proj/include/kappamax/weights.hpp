#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kappamax/errors.hpp"

namespace kappamax {

enum class SchemeKind { quadratic, linear, sqrt, identity, custom };

inline const char* scheme_kind_name(SchemeKind k) {
  switch (k) {
    case SchemeKind::quadratic: return "quadratic";
    case SchemeKind::linear: return "linear";
    case SchemeKind::sqrt: return "sqrt";
    case SchemeKind::identity: return "identity";
    case SchemeKind::custom: return "custom";
  }
  return "?";
}

/// Exact representation of a rational scheme: u_ij = num[i*k+j] / den.
/// Enables exact kappa comparison via integer arithmetic (the fiber-constant
/// denominators cancel).
struct RationalForm {
  std::vector<std::int64_t> num;
  std::int64_t den = 1;
};

/// Symmetric matrix of disagreement weights u with zero diagonal and
/// off-diagonal entries in (0, 1]. Agreement weights are w = 1 - u.
/// Construct through the *_scheme builders below.
class DisagreementScheme {
 public:
  /// Internal; prefer the builders. Validation happens there.
  DisagreementScheme(int levels, SchemeKind kind, std::vector<double> u,
                     std::optional<RationalForm> rational)
      : levels_(levels), kind_(kind), u_(std::move(u)),
        rational_(std::move(rational)) {}

  int levels() const { return levels_; }
  SchemeKind kind() const { return kind_; }
  double u(int i, int j) const { return u_[i * levels_ + j]; }
  const std::vector<double>& matrix() const { return u_; }
  const std::optional<RationalForm>& rational_form() const { return rational_; }
  bool is_rational() const { return rational_.has_value(); }
  std::int64_t numerator(int i, int j) const {
    return rational_->num[i * levels_ + j];
  }
  std::int64_t denominator() const { return rational_->den; }

 private:
  int levels_;
  SchemeKind kind_;
  std::vector<double> u_;
  std::optional<RationalForm> rational_;
};

namespace detail {

inline void check_levels(int k) {
  if (k < 2) throw DimensionError("need at least 2 levels");
}

/// Derives the double matrix from the exact form, so the two representations
/// agree elementwise by construction.
inline DisagreementScheme make_rational_scheme(int k, SchemeKind kind,
                                               RationalForm form) {
  std::vector<double> u(form.num.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = static_cast<double>(form.num[i]) / static_cast<double>(form.den);
  }
  return DisagreementScheme(k, kind, std::move(u), std::move(form));
}

}  // namespace detail

/// u_ij = (i-j)^2 / (k-1)^2. A dissimilarity but not a distance for k >= 3.
inline DisagreementScheme quadratic_scheme(int k) {
  detail::check_levels(k);
  RationalForm f;
  f.den = static_cast<std::int64_t>(k - 1) * (k - 1);
  f.num.resize(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      f.num[i * k + j] = static_cast<std::int64_t>(i - j) * (i - j);
    }
  }
  return detail::make_rational_scheme(k, SchemeKind::quadratic, std::move(f));
}

/// u_ij = |i-j| / (k-1). The triangle inequality holds with equality along
/// ordered triples, which is what makes kappa level sets large.
inline DisagreementScheme linear_scheme(int k) {
  detail::check_levels(k);
  RationalForm f;
  f.den = k - 1;
  f.num.resize(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) f.num[i * k + j] = std::abs(i - j);
  }
  return detail::make_rational_scheme(k, SchemeKind::linear, std::move(f));
}

/// u_ij = 1 for i != j: reduces weighted kappa to the unweighted one.
inline DisagreementScheme identity_scheme(int k) {
  detail::check_levels(k);
  RationalForm f;
  f.den = 1;
  f.num.resize(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) f.num[i * k + j] = (i == j) ? 0 : 1;
  }
  return detail::make_rational_scheme(k, SchemeKind::identity, std::move(f));
}

/// u_ij = sqrt(|i-j|) / sqrt(k-1). A distance; no exact rational form.
inline DisagreementScheme sqrt_scheme(int k) {
  detail::check_levels(k);
  std::vector<double> u(static_cast<std::size_t>(k) * k);
  const double root = std::sqrt(static_cast<double>(k - 1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      u[i * k + j] = std::sqrt(static_cast<double>(std::abs(i - j))) / root;
    }
  }
  return DisagreementScheme(k, SchemeKind::sqrt, std::move(u), std::nullopt);
}

/// Validates and wraps a user-supplied square matrix of disagreement weights
/// (zero diagonal, symmetric, off-diagonal in (0, 1]).
inline DisagreementScheme custom_scheme(
    const std::vector<std::vector<double>>& m) {
  const int k = static_cast<int>(m.size());
  detail::check_levels(k);
  std::vector<double> u(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(m[i].size()) != k) {
      throw DimensionError("weight matrix must be square");
    }
    for (int j = 0; j < k; ++j) {
      const double v = m[i][j];
      if (i == j) {
        if (v != 0.0) throw DimensionError("diagonal weights must be zero");
      } else {
        if (!(v > 0.0 && v <= 1.0)) {
          throw DimensionError("off-diagonal weights must lie in (0, 1]");
        }
        if (m[j][i] != v) {
          throw DimensionError("weight matrix must be symmetric");
        }
      }
      u[i * k + j] = v;
    }
  }
  return DisagreementScheme(k, SchemeKind::custom, std::move(u), std::nullopt);
}

/// True iff u satisfies the triangle inequality over all triples. Rational
/// schemes are checked exactly; otherwise a 1e-12 slack absorbs rounding.
inline bool is_distance(const DisagreementScheme& s) {
  const int k = s.levels();
  if (s.is_rational()) {
    for (int i = 0; i < k; ++i) {
      for (int h = 0; h < k; ++h) {
        for (int j = 0; j < k; ++j) {
          if (s.numerator(i, j) > s.numerator(i, h) + s.numerator(h, j)) {
            return false;
          }
        }
      }
    }
    return true;
  }
  for (int i = 0; i < k; ++i) {
    for (int h = 0; h < k; ++h) {
      for (int j = 0; j < k; ++j) {
        if (s.u(i, j) > s.u(i, h) + s.u(h, j) + 1e-12) return false;
      }
    }
  }
  return true;
}

}  // namespace kappamax
