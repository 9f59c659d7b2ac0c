#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <vector>

#include "cnoma/core_model.hpp"

namespace cnoma {

/// normal . p >= offset.
template <typename Scalar>
struct BasicHalfspace {
  Vector4<Scalar> normal = Vector4<Scalar>::Zero();
  Scalar offset = Scalar(0);

  Scalar slack(const Vector4<Scalar>& p) const { return normal.dot(p) - offset; }
};

/// Halfspaces plus the implicit p >= 0 and sum(p) <= power_budget.
template <typename Scalar>
struct BasicHalfspaceSystem {
  std::vector<BasicHalfspace<Scalar>> rows;
  Scalar power_budget = Scalar(1);
};

template <typename Scalar>
struct BasicFeasibility {
  bool feasible = false;
  std::optional<Vector4<Scalar>> witness;

  explicit operator bool() const { return feasible; }
};

using Halfspace = BasicHalfspace<double>;
using HalfspaceSystem = BasicHalfspaceSystem<double>;
using Feasibility = BasicFeasibility<double>;

/// log2(1 + a.p / (b.p + noise)) >= c  <=>  (a - gamma b).p >= gamma noise,
/// gamma = 2^c - 1.
template <typename Scalar>
BasicHalfspace<Scalar> linearize(const Vector4<Scalar>& a, const Vector4<Scalar>& b, Scalar noise,
                                 Scalar c_target) {
  using std::exp2;
  if (!(noise > 0)) throw InvalidArgument("linearize: noise must be positive");
  if (!(c_target >= 0)) throw InvalidArgument("linearize: target rate must be non-negative");
  const Scalar gamma = exp2(c_target) - Scalar(1);
  return {a - gamma * b, gamma * noise};
}

namespace detail {

template <typename Scalar>
class Phase1Simplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  static constexpr Scalar kPivotFloor = Scalar(1e-12);
  static constexpr Scalar kZero = Scalar(1e-15);

  // Equality form A x = b, x >= 0, b >= 0; `basis` gives a starting identity.
  Phase1Simplex(Matrix tableau, std::vector<int> basis, int n_structural)
      : t_(std::move(tableau)), basis_(std::move(basis)), n_(n_structural) {}

  // Minimizes the sum of artificial columns [n_, cols - 1) with Bland's rule.
  Scalar solve(int first_artificial) {
    const int m = static_cast<int>(basis_.size());
    const int rhs = static_cast<int>(t_.cols()) - 1;
    // Objective row: reduced costs of sum(artificials) with artificials basic.
    t_.row(m).setZero();
    for (int c = first_artificial; c < rhs; ++c) t_(m, c) = Scalar(1);
    for (int r = 0; r < m; ++r) {
      if (basis_[r] >= first_artificial) t_.row(m) -= t_.row(r);
    }
    for (int iter = 0; iter < 1000; ++iter) {
      int enter = -1;
      for (int c = 0; c < rhs; ++c) {
        if (t_(m, c) < -kPivotFloor) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return -t_(m, rhs);
      int leave = -1;
      Scalar best = Scalar(0);
      for (int r = 0; r < m; ++r) {
        const Scalar a = t_(r, enter);
        if (a <= kZero) continue;
        const Scalar ratio = t_(r, rhs) / a;
        if (leave < 0 || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return -t_(m, rhs);  // phase-1 objective is bounded below; not reached
      if (t_(leave, enter) < kPivotFloor) {
        throw ConditioningError("simplex pivot below 1e-12; system is ill-conditioned");
      }
      pivot(leave, enter);
    }
    throw ConditioningError("simplex failed to terminate");
  }

  Vector4<Scalar> structural() const {
    Vector4<Scalar> x = Vector4<Scalar>::Zero();
    const int rhs = static_cast<int>(t_.cols()) - 1;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (basis_[r] < n_) x(basis_[r]) = t_(static_cast<int>(r), rhs);
    }
    return x;
  }

 private:
  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int k = 0; k < t_.rows(); ++k) {
      if (k != r && t_(k, c) != Scalar(0)) t_.row(k) -= t_(k, c) * t_.row(r);
    }
    basis_[r] = c;
  }

  Matrix t_;
  std::vector<int> basis_;
  int n_;
};

}  // namespace detail

/// Phase-1 simplex feasibility test. Powers are scaled by the budget and each
/// row by its largest coefficient; the witness satisfies every scaled row to
/// 1e-9 * max(1, P). Throws ConditioningError on a pivot below 1e-12.
template <typename Scalar>
BasicFeasibility<Scalar> feasible(const BasicHalfspaceSystem<Scalar>& sys) {
  using std::abs;
  using std::max;
  using Matrix = typename detail::Phase1Simplex<Scalar>::Matrix;
  const Scalar P = sys.power_budget;
  if (!(P > 0)) throw InvalidArgument("feasible: power budget must be positive");

  // x = p / P: rows a.x >= b, sum(x) <= 1, x >= 0.
  struct Row {
    Vector4<Scalar> a;
    Scalar b;
  };
  std::vector<Row> rows;
  for (const auto& h : sys.rows) {
    if (!h.normal.allFinite() || !std::isfinite(static_cast<double>(h.offset))) {
      throw InvalidArgument("feasible: halfspace coefficients must be finite");
    }
    Vector4<Scalar> a = h.normal * P;
    Scalar b = h.offset;
    const Scalar scale = max(a.cwiseAbs().maxCoeff(), abs(b));
    if (scale == Scalar(0)) continue;  // 0 >= 0
    a /= scale;
    b /= scale;
    if (a.cwiseAbs().maxCoeff() == Scalar(0)) {
      if (b > Scalar(0)) return {};
      continue;
    }
    rows.push_back({a, b});
  }

  // Columns: x (4), surplus per row, budget slack, artificials, rhs.
  const int n = 4;
  const int m_ge = static_cast<int>(rows.size());
  const int m = m_ge + 1;
  std::vector<int> needs_art;
  for (int r = 0; r < m_ge; ++r) {
    if (rows[r].b > Scalar(0)) needs_art.push_back(r);
  }
  const int slack0 = n;
  const int budget_col = n + m_ge;
  const int art0 = budget_col + 1;
  const int cols = art0 + static_cast<int>(needs_art.size()) + 1;
  Matrix t = Matrix::Zero(m + 1, cols);
  std::vector<int> basis(static_cast<std::size_t>(m));
  int art = art0;
  for (int r = 0; r < m_ge; ++r) {
    // a.x - s = b. With b <= 0 negate so the surplus enters with +1 and is basic.
    const bool positive = rows[r].b > Scalar(0);
    const Scalar sign = positive ? Scalar(1) : Scalar(-1);
    t.row(r).head(n) = sign * rows[r].a.transpose();
    t(r, slack0 + r) = -sign;
    t(r, cols - 1) = sign * rows[r].b;
    if (positive) {
      t(r, art) = Scalar(1);
      basis[r] = art++;
    } else {
      basis[r] = slack0 + r;
    }
  }
  t.row(m_ge).head(n).setOnes();
  t(m_ge, budget_col) = Scalar(1);
  t(m_ge, cols - 1) = Scalar(1);
  basis[m_ge] = budget_col;

  detail::Phase1Simplex<Scalar> lp(std::move(t), std::move(basis), n);
  const Scalar infeasibility = lp.solve(art0);
  if (infeasibility > Scalar(1e-10)) return {};

  const Vector4<Scalar> x = lp.structural().cwiseMax(Scalar(0));
  const Scalar tol = Scalar(1e-9) * max(Scalar(1), P);
  for (const Row& row : rows) {
    if (row.a.dot(x) - row.b < -tol) return {};
  }
  if (x.sum() > Scalar(1) + tol) return {};
  return {true, Vector4<Scalar>(x * P)};
}

}  // namespace cnoma
