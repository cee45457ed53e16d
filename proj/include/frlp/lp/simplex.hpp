#ifndef FRLP_LP_SIMPLEX_HPP
#define FRLP_LP_SIMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frlp/errors.hpp"

namespace frlp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { maximize, minimize };
enum class Relation { less_equal, greater_equal, equal };
enum class Status { optimal, infeasible, unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "?";
}

struct Term {
  std::size_t index;
  double coef;
};

struct Row {
  std::vector<Term> terms;  // index = variable
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
  std::string name;
};

struct LinearProgram {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<Row> rows;

  std::size_t num_vars() const noexcept { return objective.size(); }
  std::size_t num_rows() const noexcept { return rows.size(); }

  std::size_t add_variable(double cost, double lo = 0.0, double hi = kInf, std::string name = {}) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    names.push_back(std::move(name));
    return objective.size() - 1;
  }
  std::size_t add_row(std::vector<Term> terms, Relation rel, double rhs, std::string name = {}) {
    rows.push_back({std::move(terms), rel, rhs, std::move(name)});
    return rows.size() - 1;
  }
};

/// A column produced by a ColumnSource (index = row).
struct GeneratedColumn {
  std::vector<Term> terms;
  double cost = 0.0;
  double lower = 0.0;
  double upper = kInf;
};

/// Pricing callback for column generation. Receives the row prices `y` of
/// the internal minimisation and the cost scale (-1 when maximising, +1
/// when minimising, 0 in phase one). Returns a column whose reduced cost
/// scale * cost - y.a is negative, or nothing when none exists.
using ColumnSource = std::function<std::optional<GeneratedColumn>(const std::vector<double>& y, double scale)>;

struct LpSolution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;      // original variables, then generated columns
  std::vector<double> duals;  // shadow prices d(objective)/d(rhs) per row
  std::vector<GeneratedColumn> generated;
  std::size_t iterations = 0;
  bool used_bland = false;
};

struct SimplexOptions {
  std::size_t max_iterations = 5'000'000;
  std::size_t refactor_every = 50;
  /// Degenerate pivots tolerated before switching to Bland's rule; 0 means
  /// 10 * (rows + columns).
  std::size_t bland_after = 0;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
};

namespace detail {

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opt, const ColumnSource* source)
      : lp_(lp), opt_(opt), source_(source), m_(lp.num_rows()) {
    const std::size_t n = lp.num_vars();
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.lower[j] > lp.upper[j]) throw ModelError("variable " + std::to_string(j) + " has lower > upper");
      add_column({}, internal_cost(lp.objective[j]), lp.lower[j], lp.upper[j], Kind::structural);
    }
    for (std::size_t r = 0; r < m_; ++r)
      for (const Term& t : lp.rows[r].terms) {
        if (t.index >= n) throw ModelError("row " + std::to_string(r) + " references a missing variable");
        if (!std::isfinite(t.coef)) throw ModelError("row " + std::to_string(r) + " has a non-finite coefficient");
        cols_[t.index].push_back({r, t.coef});
      }
    for (std::size_t r = 0; r < m_; ++r) {
      const Row& row = lp.rows[r];
      const double lo = row.relation == Relation::less_equal ? -kInf : row.rhs;
      const double hi = row.relation == Relation::greater_equal ? kInf : row.rhs;
      add_column({{r, -1.0}}, 0.0, lo, hi, Kind::logical);
    }
  }

  LpSolution run() {
    LpSolution sol;
    initial_basis();
    bland_limit_ = opt_.bland_after ? opt_.bland_after : 10 * (m_ + cols_.size());

    // Phase one: drive the artificials to zero.
    std::vector<double> saved = cost_;
    for (std::size_t j = 0; j < cols_.size(); ++j) cost_[j] = kind_[j] == Kind::artificial ? 1.0 : 0.0;
    phase_one_ = true;
    if (iterate() != Status::optimal) throw NumericalFailure("phase one did not terminate optimally");
    double infeas = 0.0;
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (kind_[j] == Kind::artificial) infeas += x_[j];
    if (infeas > 1e-7) {
      sol.status = Status::infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (kind_[j] == Kind::artificial) {
        lo_[j] = hi_[j] = 0.0;
        if (pos_[j] < 0) x_[j] = 0.0;
      }
    }
    // Generated columns keep their phase-two cost in `gen_cost_`.
    for (std::size_t j = 0; j < cols_.size(); ++j) cost_[j] = j < saved.size() ? saved[j] : gen_cost_[j];
    phase_one_ = false;
    const Status st = iterate();
    sol.iterations = iterations_;
    sol.used_bland = bland_;
    if (st == Status::unbounded) {
      sol.status = Status::unbounded;
      return sol;
    }
    refactor();
    const auto y = prices();
    sol.status = Status::optimal;
    double obj = 0.0;
    for (std::size_t k = 0; k < out_cols_.size(); ++k) {
      const std::size_t j = out_cols_[k];
      sol.x.push_back(x_[j]);
      obj += (lp_.sense == Sense::maximize ? -cost_[j] : cost_[j]) * x_[j];
    }
    sol.objective = obj;
    sol.duals.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) sol.duals[r] = lp_.sense == Sense::maximize ? -y[r] : y[r];
    sol.generated = std::move(generated_);
    return sol;
  }

 private:
  enum class Kind { structural, logical, artificial };

  double internal_cost(double c) const { return lp_.sense == Sense::maximize ? -c : c; }

  std::size_t add_column(std::vector<Term> terms, double cost, double lo, double hi, Kind kind) {
    cols_.push_back(std::move(terms));
    cost_.push_back(cost);
    gen_cost_.push_back(cost);
    lo_.push_back(lo);
    hi_.push_back(hi);
    kind_.push_back(kind);
    pos_.push_back(-1);
    x_.push_back(0.0);
    if (kind == Kind::structural) out_cols_.push_back(cols_.size() - 1);
    return cols_.size() - 1;
  }

  static double rest_value(double lo, double hi) {
    if (std::isfinite(lo)) return lo;
    if (std::isfinite(hi)) return hi;
    return 0.0;
  }

  void initial_basis() {
    const std::size_t n = lp_.num_vars();
    for (std::size_t j = 0; j < n; ++j) x_[j] = rest_value(lo_[j], hi_[j]);
    std::vector<double> act(m_, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (const Term& t : cols_[j]) act[t.index] += t.coef * x_[j];
    head_.assign(m_, 0);
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t s = n + r;
      if (act[r] >= lo_[s] - opt_.primal_tol && act[r] <= hi_[s] + opt_.primal_tol) {
        x_[s] = act[r];
        set_basic(r, s);
        binv_[r * m_ + r] = -1.0;
      } else {
        const double b = act[r] < lo_[s] ? lo_[s] : hi_[s];
        x_[s] = b;
        const double sigma = b - act[r] > 0 ? 1.0 : -1.0;
        const std::size_t a = add_column({{r, sigma}}, 0.0, 0.0, kInf, Kind::artificial);
        x_[a] = std::abs(b - act[r]);
        set_basic(r, a);
        binv_[r * m_ + r] = sigma;
      }
    }
  }

  void set_basic(std::size_t row, std::size_t j) {
    head_[row] = j;
    pos_[j] = static_cast<long>(row);
  }

  std::vector<double> prices() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double c = cost_[head_[k]];
      if (c == 0.0) continue;
      const double* row = &binv_[k * m_];
      for (std::size_t i = 0; i < m_; ++i) y[i] += c * row[i];
    }
    return y;
  }

  double reduced_cost(std::size_t j, const std::vector<double>& y) const {
    double d = cost_[j];
    for (const Term& t : cols_[j]) d -= y[t.index] * t.coef;
    return d;
  }

  std::vector<double> ftran(std::size_t j) const {
    std::vector<double> w(m_, 0.0);
    for (const Term& t : cols_[j])
      for (std::size_t k = 0; k < m_; ++k) w[k] += binv_[k * m_ + t.index] * t.coef;
    return w;
  }

  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return;
    std::vector<double> b(m_ * m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k)
      for (const Term& t : cols_[head_[k]]) b[t.index * m_ + k] = t.coef;
    // Gauss-Jordan on [B | I].
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m_; ++r)
        if (std::abs(b[r * m_ + c]) > std::abs(b[p * m_ + c])) p = r;
      if (std::abs(b[p * m_ + c]) < 1e-12) throw NumericalFailure("singular basis during refactorization");
      if (p != c)
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b[p * m_ + k], b[c * m_ + k]);
          std::swap(inv[p * m_ + k], inv[c * m_ + k]);
        }
      const double piv = b[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        b[c * m_ + k] /= piv;
        inv[c * m_ + k] /= piv;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = b[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b[r * m_ + k] -= f * b[c * m_ + k];
          inv[r * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    binv_ = std::move(inv);
    // x_B = -B^{-1} N x_N (every row reads a.x - s = 0).
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (pos_[j] < 0 && x_[j] != 0.0)
        for (const Term& t : cols_[j]) rhs[t.index] -= t.coef * x_[j];
    for (std::size_t k = 0; k < m_; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += binv_[k * m_ + i] * rhs[i];
      x_[head_[k]] = v;
    }
  }

  bool movable(std::size_t j) const { return pos_[j] < 0 && lo_[j] < hi_[j]; }

  /// Entering candidate and direction (+1 increase, -1 decrease).
  std::optional<std::pair<std::size_t, int>> price(const std::vector<double>& y) const {
    std::optional<std::pair<std::size_t, int>> best;
    double best_score = opt_.dual_tol;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (!movable(j)) continue;
      const double d = reduced_cost(j, y);
      int dir = 0;
      if (d < -opt_.dual_tol && x_[j] < hi_[j] - opt_.primal_tol) dir = 1;
      else if (d > opt_.dual_tol && x_[j] > lo_[j] + opt_.primal_tol) dir = -1;
      if (dir == 0) continue;
      if (bland_) return std::make_pair(j, dir);
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = std::make_pair(j, dir);
      }
    }
    return best;
  }

  Status iterate() {
    std::size_t degenerate = 0;
    for (;;) {
      if (++iterations_ > opt_.max_iterations) throw NumericalFailure("simplex iteration limit reached");
      if (since_refactor_ >= opt_.refactor_every) refactor();
      const auto y = prices();
      auto entering = price(y);
      if (!entering && source_ && *source_) {
        const double scale = phase_one_ ? 0.0 : (lp_.sense == Sense::maximize ? -1.0 : 1.0);
        if (auto col = (*source_)(y, scale)) {
          const double c = internal_cost(col->cost);
          const std::size_t j = add_column(col->terms, phase_one_ ? 0.0 : c, col->lower, col->upper,
                                           Kind::structural);
          gen_cost_[j] = c;
          x_[j] = rest_value(col->lower, col->upper);
          generated_.push_back(*col);
          const double d = reduced_cost(j, y);
          if (d < -opt_.dual_tol) entering = std::make_pair(j, 1);
          else if (d > opt_.dual_tol && x_[j] > lo_[j]) entering = std::make_pair(j, -1);
        }
      }
      if (!entering) return Status::optimal;
      const auto [q, dir] = *entering;
      const auto w = ftran(q);

      double theta = kInf;
      std::size_t leave = m_;
      double leave_mag = 0.0;
      for (std::size_t k = 0; k < m_; ++k) {
        const double g = -dir * w[k];
        if (std::abs(g) < 1e-9) continue;
        const std::size_t b = head_[k];
        double lim;
        if (g < 0) {
          if (!std::isfinite(lo_[b])) continue;
          lim = (x_[b] - lo_[b]) / -g;
        } else {
          if (!std::isfinite(hi_[b])) continue;
          lim = (hi_[b] - x_[b]) / g;
        }
        lim = std::max(lim, 0.0);
        const bool better = lim < theta - 1e-12 ||
                            (lim <= theta + 1e-12 && leave < m_ &&
                             (bland_ ? b < head_[leave] : std::abs(g) > leave_mag));
        if (better) {
          theta = lim;
          leave = k;
          leave_mag = std::abs(g);
        }
      }
      const double flip = hi_[q] - lo_[q];
      if (!std::isfinite(theta) && !std::isfinite(flip)) return Status::unbounded;

      if (flip <= theta) {
        x_[q] += dir * flip;
        for (std::size_t k = 0; k < m_; ++k) x_[head_[k]] -= dir * flip * w[k];
        x_[q] = dir > 0 ? hi_[q] : lo_[q];
        degenerate = 0;
        continue;
      }

      x_[q] += dir * theta;
      for (std::size_t k = 0; k < m_; ++k) x_[head_[k]] -= dir * theta * w[k];
      const std::size_t out = head_[leave];
      const double g = -dir * w[leave];
      x_[out] = g < 0 ? lo_[out] : hi_[out];
      pos_[out] = -1;
      set_basic(leave, q);

      const double piv = w[leave];
      double* prow = &binv_[leave * m_];
      for (std::size_t i = 0; i < m_; ++i) prow[i] /= piv;
      for (std::size_t k = 0; k < m_; ++k) {
        if (k == leave || w[k] == 0.0) continue;
        double* row = &binv_[k * m_];
        const double f = w[k];
        for (std::size_t i = 0; i < m_; ++i) row[i] -= f * prow[i];
      }
      ++since_refactor_;

      if (theta < 1e-11) {
        if (++degenerate > bland_limit_) bland_ = true;
      } else {
        degenerate = 0;
      }
    }
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  const ColumnSource* source_;
  std::size_t m_;
  std::vector<std::vector<Term>> cols_;  // index = row
  std::vector<double> cost_, gen_cost_, lo_, hi_, x_;
  std::vector<Kind> kind_;
  std::vector<long> pos_;
  std::vector<std::size_t> head_, out_cols_;
  std::vector<double> binv_;
  std::vector<GeneratedColumn> generated_;
  std::size_t iterations_ = 0, since_refactor_ = 0, bland_limit_ = 0;
  bool bland_ = false;
  bool phase_one_ = false;
};

}  // namespace detail

struct LpResiduals {
  double primal = 0.0;         // worst row or bound violation
  double dual = 0.0;           // worst sign violation of reduced costs / row prices
  double complementary = 0.0;  // worst |price * slack|
  double gap = 0.0;            // |primal objective - dual objective|
};

/// Copy of `lp` with the generated columns of `sol` appended as variables.
inline LinearProgram with_generated(const LinearProgram& lp, const LpSolution& sol) {
  LinearProgram out = lp;
  for (const auto& col : sol.generated) {
    const std::size_t j = out.add_variable(col.cost, col.lower, col.upper);
    for (const Term& t : col.terms) out.rows[t.index].terms.push_back({j, t.coef});
  }
  return out;
}

/// Optimality certificate residuals of `sol` recomputed from the LP data.
inline LpResiduals lp_residuals(const LinearProgram& lp, const LpSolution& sol) {
  LpResiduals res;
  const double s = lp.sense == Sense::maximize ? 1.0 : -1.0;  // s * objective is maximised
  std::vector<double> red(lp.num_vars());
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    red[j] = lp.objective[j];
    res.primal = std::max({res.primal, lp.lower[j] - sol.x[j], sol.x[j] - lp.upper[j]});
  }
  double dual_obj = 0.0;
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    const Row& row = lp.rows[r];
    double act = 0.0;
    for (const Term& t : row.terms) {
      act += t.coef * sol.x[t.index];
      red[t.index] -= sol.duals[r] * t.coef;
    }
    const double slack = row.rhs - act;
    const double y = s * sol.duals[r];  // >= 0 on binding <= rows when maximising
    switch (row.relation) {
      case Relation::less_equal:
        res.primal = std::max(res.primal, -slack);
        res.dual = std::max(res.dual, -y);
        break;
      case Relation::greater_equal:
        res.primal = std::max(res.primal, slack);
        res.dual = std::max(res.dual, y);
        break;
      case Relation::equal:
        res.primal = std::max(res.primal, std::abs(slack));
        break;
    }
    res.complementary = std::max(res.complementary, std::abs(sol.duals[r] * slack));
    dual_obj += sol.duals[r] * row.rhs;
  }
  double primal_obj = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    primal_obj += lp.objective[j] * sol.x[j];
    const double r = s * red[j];
    const bool at_lo = sol.x[j] <= lp.lower[j] + 1e-9;
    const bool at_hi = sol.x[j] >= lp.upper[j] - 1e-9;
    if (at_lo && at_hi) {
    } else if (at_lo) {
      res.dual = std::max(res.dual, r);
    } else if (at_hi) {
      res.dual = std::max(res.dual, -r);
    } else {
      res.complementary = std::max(res.complementary, std::abs(r));
    }
    if (at_lo || at_hi) dual_obj += red[j] * sol.x[j];
  }
  res.gap = std::abs(primal_obj - dual_obj);
  return res;
}

/// Optimal basic solution by the bounded revised primal simplex.
inline LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {},
                           const ColumnSource* source = nullptr) {
  LpSolution sol = detail::Simplex(lp, options, source).run();
  if (sol.status != Status::optimal) return sol;
  const LpResiduals res = sol.generated.empty() ? lp_residuals(lp, sol) : lp_residuals(with_generated(lp, sol), sol);
  if (res.primal > 1e-7 || res.dual > 1e-6 || res.complementary > 1e-6)
    throw NumericalFailure("simplex residuals out of tolerance (primal " + std::to_string(res.primal) + ", dual " +
                           std::to_string(res.dual) + ", slackness " + std::to_string(res.complementary) + ")");
  return sol;
}

}  // namespace frlp::lp

#endif  // FRLP_LP_SIMPLEX_HPP
