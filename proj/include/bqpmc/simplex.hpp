#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/rational.hpp"

namespace bqpmc {

struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;  // indexed by VarId
  bool maximize = true;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower, upper;

  LpProblem() = default;
  explicit LpProblem(int n, bool max_sense = true)
      : num_vars(n), objective(n, 0.0), maximize(max_sense), lower(n, 0.0), upper(n, 1.0) {}
};

enum class LpStatus { optimal, infeasible, iteration_limit };

inline const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

template <class T>
struct BasicLpResult {
  LpStatus status = LpStatus::infeasible;
  T value = T(0);
  BasicPoint<T> point;
  std::vector<T> duals;          // per constraint, in the problem's own objective sense
  std::vector<T> reduced_costs;  // per variable
  long iterations = 0;
};

using LpResult = BasicLpResult<double>;
using RationalLpResult = BasicLpResult<Rational>;

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  long iteration_limit = 1'000'000;
  int degenerate_run = 50;  // consecutive degenerate pivots before Bland's rule takes over
  int refactor_every = 400;
};

namespace detail {

template <class T>
inline bool is_zero(const T& v) {
  if constexpr (NumTraits<T>::exact) return sgn(v) == 0;
  else return v == 0.0;
}

template <class T>
inline T abs_of(const T& v) {
  if constexpr (NumTraits<T>::exact) return abs(v);
  else return std::abs(v);
}

}  // namespace detail

// Bounded-variable dual simplex on a condensed (Tucker) tableau. Rows are logical
// variables r = a^T x with bounds from the row sense; every structural is boxed,
// so the slack basis with structurals at their cost-favoured bound is dual
// feasible and no phase one is needed. Rows may be appended between solves.
template <class T>
class DualSimplex {
 public:
  DualSimplex(const LpProblem& prob, LpOptions opt = {}) : n_(prob.num_vars), opt_(opt), maximize_(prob.maximize) {
    if (static_cast<int>(prob.objective.size()) != n_ || static_cast<int>(prob.lower.size()) != n_ ||
        static_cast<int>(prob.upper.size()) != n_)
      throw std::invalid_argument("solve_lp: size mismatch");
    if constexpr (NumTraits<T>::exact) {
      ftol_ = T(0);
      otol_ = T(0);
      ptol_ = T(0);
    } else {
      ftol_ = opt.feasibility_tol;
      otol_ = opt.optimality_tol;
      ptol_ = opt.pivot_tol;
    }
    cost_.resize(n_);
    for (int k = 0; k < n_; ++k) {
      if (!std::isfinite(prob.lower[k]) || !std::isfinite(prob.upper[k]))
        throw std::invalid_argument("solve_lp: variable bounds must be finite");
      if (prob.lower[k] > prob.upper[k]) throw std::invalid_argument("solve_lp: lower bound exceeds upper bound");
      cost_[k] = NumTraits<T>::from(maximize_ ? prob.objective[k] : -prob.objective[k]);
      lo_.push_back(NumTraits<T>::from(prob.lower[k]));
      hi_.push_back(NumTraits<T>::from(prob.upper[k]));
      has_lo_.push_back(1);
      has_hi_.push_back(1);
      nonbasic_.push_back(k);
      pos_.push_back(-(k + 1));
      at_upper_.push_back(cost_[k] > T(0) ? 1 : 0);
      d_.push_back(cost_[k]);
    }
    for (const auto& c : prob.constraints) add_row(c);
  }

  int num_rows() const { return m_; }
  int num_vars() const { return n_; }

  void add_row(const LinearConstraint& c) {
    std::vector<std::pair<int, double>> sparse;
    for (const Term& t : c.terms()) {
      if (t.var.index < 0 || t.var.index >= n_) throw std::out_of_range("solve_lp: constraint variable out of range");
      sparse.emplace_back(t.var.index, t.coef);
    }
    std::vector<T> row(n_, T(0));
    for (auto [k, a] : sparse) {
      T av = NumTraits<T>::from(a);
      int p = pos_[k];
      if (p < 0) {
        row[-p - 1] += av;
      } else {
        const T* src = &tab_[static_cast<std::size_t>(p) * n_];
        for (int col = 0; col < n_; ++col)
          if (!detail::is_zero(src[col])) row[col] += av * src[col];
      }
    }
    T b = NumTraits<T>::from(c.rhs());
    lo_.push_back(b);
    hi_.push_back(b);
    has_lo_.push_back(c.sense() != Sense::LE);
    has_hi_.push_back(c.sense() != Sense::GE);
    at_upper_.push_back(0);
    int var = n_ + m_;
    pos_.push_back(m_);
    basic_.push_back(var);
    T val(0);
    for (int col = 0; col < n_; ++col)
      if (!detail::is_zero(row[col])) val += row[col] * nonbasic_value(col);
    beta_.push_back(val);
    tab_.insert(tab_.end(), row.begin(), row.end());
    rows_.push_back(std::move(sparse));
    ++m_;
  }

  BasicLpResult<T> solve() {
    BasicLpResult<T> res;
    int repairs = 0;
    bool bland = false;
    int degenerate = 0;
    long since_refactor = 0;
    for (;;) {
      if (iterations_ >= opt_.iteration_limit) {
        res.status = LpStatus::iteration_limit;
        break;
      }
      if constexpr (!NumTraits<T>::exact) {
        if (opt_.refactor_every > 0 && since_refactor >= opt_.refactor_every) {
          refactor();
          since_refactor = 0;
        }
      }
      int r = choose_leaving(bland);
      if (r < 0) {
        if constexpr (!NumTraits<T>::exact) {
          if (!primal_check() && repairs < 4) {
            ++repairs;
            refactor();
            since_refactor = 0;
            continue;
          }
        }
        res.status = LpStatus::optimal;
        break;
      }
      int col = choose_entering(r, bland);
      if (col < 0) {
        if constexpr (!NumTraits<T>::exact) {
          if (repairs < 4 && since_refactor > 0) {
            ++repairs;
            refactor();
            since_refactor = 0;
            continue;
          }
        }
        res.status = LpStatus::infeasible;
        break;
      }
      bool degen = detail::abs_of(d_[col]) <= otol_;
      pivot(r, col);
      ++iterations_;
      ++since_refactor;
      if (degen) {
        if (++degenerate >= opt_.degenerate_run) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
    res.iterations = iterations_;
    fill_result(res);
    return res;
  }

 private:
  T nonbasic_value(int col) const {
    int k = nonbasic_[col];
    return at_upper_[k] ? hi_[k] : lo_[k];
  }

  bool fixed(int k) const { return has_lo_[k] && has_hi_[k] && lo_[k] == hi_[k]; }

  // Row of the most infeasible basic variable, or lowest variable index in Bland mode.
  int choose_leaving(bool bland) const {
    int best = -1;
    T best_inf(0);
    int best_var = std::numeric_limits<int>::max();
    for (int r = 0; r < m_; ++r) {
      int k = basic_[r];
      T inf(0);
      if (has_lo_[k] && beta_[r] < lo_[k] - ftol_) inf = lo_[k] - beta_[r];
      else if (has_hi_[k] && beta_[r] > hi_[k] + ftol_) inf = beta_[r] - hi_[k];
      else continue;
      if (bland) {
        if (k < best_var) { best_var = k; best = r; }
      } else if (inf > best_inf) {
        best_inf = inf;
        best = r;
      }
    }
    return best;
  }

  // Dual ratio test. Double mode uses a Harris two-pass test for stability.
  int choose_entering(int r, bool bland) const {
    int k = basic_[r];
    bool increase = has_lo_[k] && beta_[r] < lo_[k] - ftol_;
    const T* row = &tab_[static_cast<std::size_t>(r) * n_];
    auto eligible = [&](int col) {
      int v = nonbasic_[col];
      if (fixed(v)) return false;
      const T& a = row[col];
      if (detail::abs_of(a) <= ptol_) return false;
      bool up = !at_upper_[v];  // direction this nonbasic can move
      bool a_pos = a > T(0);
      return increase ? (up == a_pos) : (up != a_pos);
    };
    auto slack_of = [&](int col) {
      T dv = detail::abs_of(d_[col]);
      // sign-consistent part only; tiny wrong-signed reduced costs count as zero
      int v = nonbasic_[col];
      bool ok = at_upper_[v] ? d_[col] >= T(0) : d_[col] <= T(0);
      return ok ? dv : T(0);
    };
    if constexpr (NumTraits<T>::exact) {
      int best = -1;
      T best_ratio(0);
      for (int col = 0; col < n_; ++col) {
        if (!eligible(col)) continue;
        T ratio = slack_of(col) / detail::abs_of(row[col]);
        if (best < 0 || ratio < best_ratio ||
            (ratio == best_ratio && (bland ? nonbasic_[col] < nonbasic_[best]
                                           : detail::abs_of(row[col]) > detail::abs_of(row[best])))) {
          best = col;
          best_ratio = ratio;
        }
      }
      return best;
    } else {
      double bound = std::numeric_limits<double>::infinity();
      for (int col = 0; col < n_; ++col) {
        if (!eligible(col)) continue;
        bound = std::min(bound, (slack_of(col) + otol_) / std::abs(row[col]));
      }
      if (bound == std::numeric_limits<double>::infinity()) return -1;
      int best = -1;
      double best_ratio = 0.0;
      for (int col = 0; col < n_; ++col) {
        if (!eligible(col)) continue;
        double ratio = slack_of(col) / std::abs(row[col]);
        if (ratio > bound) continue;
        if (best < 0) { best = col; best_ratio = ratio; continue; }
        bool better = bland ? (ratio < best_ratio - 1e-15 ||
                               (ratio <= best_ratio + 1e-15 && nonbasic_[col] < nonbasic_[best]))
                            : std::abs(row[col]) > std::abs(row[best]);
        if (better) { best = col; best_ratio = ratio; }
      }
      return best;
    }
  }

  void pivot(int r, int col) {
    const int leave = basic_[r];
    const int enter = nonbasic_[col];
    T* prow = &tab_[static_cast<std::size_t>(r) * n_];
    const T p = prow[col];
    const bool to_lower = has_lo_[leave] && beta_[r] < lo_[leave];
    const T target = to_lower ? lo_[leave] : hi_[leave];

    // primal update
    const T theta = (target - beta_[r]) / p;
    const T enter_value = nonbasic_value(col) + theta;
    for (int i = 0; i < m_; ++i) {
      const T& f = tab_[static_cast<std::size_t>(i) * n_ + col];
      if (i != r && !detail::is_zero(f)) beta_[i] += f * theta;
    }
    beta_[r] = enter_value;

    // pivot row: x_enter = (x_leave - sum_{k != col} a_k x_k) / p
    std::vector<int> nz;
    for (int k = 0; k < n_; ++k) {
      if (k == col) continue;
      if (!detail::is_zero(prow[k])) {
        prow[k] = -prow[k] / p;
        nz.push_back(k);
      }
    }
    prow[col] = T(1) / p;
    nz.push_back(col);

    auto update = [&](T* row) {
      T f = row[col];
      if (detail::is_zero(f)) return;
      row[col] = T(0);
      for (int k : nz) {
        row[k] += f * prow[k];
        if constexpr (!NumTraits<T>::exact) {
          if (std::abs(row[k]) < 1e-14) row[k] = 0.0;
        }
      }
    };
    for (int i = 0; i < m_; ++i)
      if (i != r) update(&tab_[static_cast<std::size_t>(i) * n_]);
    update(d_.data());

    basic_[r] = enter;
    nonbasic_[col] = leave;
    pos_[enter] = r;
    pos_[leave] = -(col + 1);
    at_upper_[leave] = to_lower ? 0 : 1;
  }

  T var_value(int k) const {
    int p = pos_[k];
    if (p >= 0) return beta_[p];
    return at_upper_[k] ? hi_[k] : lo_[k];
  }

  // Checks the original rows against the current structural values.
  bool primal_check() const {
    for (int i = 0; i < m_; ++i) {
      double act = 0.0;
      for (auto [k, a] : rows_[i]) act += a * to_double(var_value(k));
      int v = n_ + i;
      double tol = 10 * to_double(ftol_) * (1.0 + std::abs(act));
      if (has_lo_[v] && act < to_double(lo_[v]) - tol) return false;
      if (has_hi_[v] && act > to_double(hi_[v]) + tol) return false;
    }
    return true;
  }

  // Rebuilds the tableau from the original rows for the current basis (double mode).
  void refactor() {
    std::vector<int> s_vars, s_rows, r_rows;
    for (int r = 0; r < m_; ++r)
      if (basic_[r] < n_) {
        s_vars.push_back(basic_[r]);
        s_rows.push_back(r);
      }
    for (int i = 0; i < m_; ++i)
      if (pos_[n_ + i] < 0) r_rows.push_back(i);
    const int s = static_cast<int>(s_vars.size());
    if (static_cast<int>(r_rows.size()) != s) throw std::logic_error("simplex: inconsistent basis");
    std::vector<int> s_index(n_, -1);
    for (int b = 0; b < s; ++b) s_index[s_vars[b]] = b;

    // M = A[R, S]; invert by Gauss-Jordan with partial pivoting.
    std::vector<double> M(static_cast<std::size_t>(s) * s, 0.0), inv(static_cast<std::size_t>(s) * s, 0.0);
    for (int a = 0; a < s; ++a) {
      for (auto [k, v] : rows_[r_rows[a]])
        if (s_index[k] >= 0) M[static_cast<std::size_t>(a) * s + s_index[k]] += v;
      inv[static_cast<std::size_t>(a) * s + a] = 1.0;
    }
    for (int c = 0; c < s; ++c) {
      int piv = c;
      for (int a = c + 1; a < s; ++a)
        if (std::abs(M[static_cast<std::size_t>(a) * s + c]) > std::abs(M[static_cast<std::size_t>(piv) * s + c])) piv = a;
      if (std::abs(M[static_cast<std::size_t>(piv) * s + c]) < 1e-12) return;  // keep current tableau
      if (piv != c)
        for (int k = 0; k < s; ++k) {
          std::swap(M[static_cast<std::size_t>(piv) * s + k], M[static_cast<std::size_t>(c) * s + k]);
          std::swap(inv[static_cast<std::size_t>(piv) * s + k], inv[static_cast<std::size_t>(c) * s + k]);
        }
      double pv = M[static_cast<std::size_t>(c) * s + c];
      for (int k = 0; k < s; ++k) {
        M[static_cast<std::size_t>(c) * s + k] /= pv;
        inv[static_cast<std::size_t>(c) * s + k] /= pv;
      }
      for (int a = 0; a < s; ++a) {
        if (a == c) continue;
        double f = M[static_cast<std::size_t>(a) * s + c];
        if (f == 0.0) continue;
        for (int k = 0; k < s; ++k) {
          M[static_cast<std::size_t>(a) * s + k] -= f * M[static_cast<std::size_t>(c) * s + k];
          inv[static_cast<std::size_t>(a) * s + k] -= f * inv[static_cast<std::size_t>(c) * s + k];
        }
      }
    }
    // G = d x_S / d x_N (s x n).
    std::vector<double> G(static_cast<std::size_t>(s) * n_, 0.0);
    std::vector<int> r_index(m_, -1);
    for (int a = 0; a < s; ++a) r_index[r_rows[a]] = a;
    for (int col = 0; col < n_; ++col) {
      int k = nonbasic_[col];
      if (k < n_) {
        // -Minv * A[R, k]
        for (int a = 0; a < s; ++a) {
          double coef = 0.0;
          for (auto [kk, v] : rows_[r_rows[a]])
            if (kk == k) coef += v;
          if (coef == 0.0) continue;
          for (int b = 0; b < s; ++b) G[static_cast<std::size_t>(b) * n_ + col] -= inv[static_cast<std::size_t>(b) * s + a] * coef;
        }
      } else {
        int a = r_index[k - n_];
        for (int b = 0; b < s; ++b) G[static_cast<std::size_t>(b) * n_ + col] = inv[static_cast<std::size_t>(b) * s + a];
      }
    }
    auto express = [&](const std::vector<std::pair<int, double>>& lin, double* out) {
      std::fill(out, out + n_, 0.0);
      for (auto [k, v] : lin) {
        int p = pos_[k];
        if (p < 0) {
          out[-p - 1] += v;
        } else {
          const double* g = &G[static_cast<std::size_t>(s_index[k]) * n_];
          for (int col = 0; col < n_; ++col) out[col] += v * g[col];
        }
      }
      for (int col = 0; col < n_; ++col)
        if (std::abs(out[col]) < 1e-14) out[col] = 0.0;
    };
    for (int r = 0; r < m_; ++r) {
      int k = basic_[r];
      T* out = &tab_[static_cast<std::size_t>(r) * n_];
      if (k < n_) {
        const double* g = &G[static_cast<std::size_t>(s_index[k]) * n_];
        for (int col = 0; col < n_; ++col) out[col] = std::abs(g[col]) < 1e-14 ? 0.0 : g[col];
      } else {
        express(rows_[k - n_], out);
      }
    }
    std::vector<std::pair<int, double>> obj;
    for (int k = 0; k < n_; ++k)
      if (cost_[k] != 0.0) obj.emplace_back(k, cost_[k]);
    express(obj, d_.data());
    // Restore dual feasibility by bound flips where a box allows it.
    for (int col = 0; col < n_; ++col) {
      int k = nonbasic_[col];
      if (fixed(k)) continue;
      if (!at_upper_[k] && d_[col] > otol_ && has_hi_[k]) at_upper_[k] = 1;
      else if (at_upper_[k] && d_[col] < -otol_ && has_lo_[k]) at_upper_[k] = 0;
    }
    for (int r = 0; r < m_; ++r) {
      double v = 0.0;
      const T* row = &tab_[static_cast<std::size_t>(r) * n_];
      for (int col = 0; col < n_; ++col)
        if (row[col] != 0.0) v += row[col] * nonbasic_value(col);
      beta_[r] = v;
    }
  }

  void fill_result(BasicLpResult<T>& res) const {
    res.point.values.assign(n_, T(0));
    T value(0);
    for (int k = 0; k < n_; ++k) {
      res.point.values[k] = var_value(k);
      value += cost_[k] * res.point.values[k];
    }
    res.value = maximize_ ? value : T(-value);
    res.duals.assign(m_, T(0));
    res.reduced_costs.assign(n_, T(0));
    for (int col = 0; col < n_; ++col) {
      int k = nonbasic_[col];
      T dv = maximize_ ? d_[col] : T(-d_[col]);
      if (k < n_) res.reduced_costs[k] = dv;
      else res.duals[k - n_] = dv;
    }
  }

  int n_ = 0;
  int m_ = 0;
  LpOptions opt_;
  bool maximize_ = true;
  T ftol_, otol_, ptol_;
  std::vector<T> cost_;
  std::vector<T> lo_, hi_;
  std::vector<char> has_lo_, has_hi_, at_upper_;
  std::vector<int> basic_, nonbasic_, pos_;
  std::vector<T> tab_, d_, beta_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  long iterations_ = 0;
};

template <class T = double>
BasicLpResult<T> solve_lp(const LpProblem& prob, LpOptions opt = {}) {
  DualSimplex<T> s(prob, opt);
  return s.solve();
}

inline RationalLpResult solve_lp_exact(const LpProblem& prob, LpOptions opt = {}) { return solve_lp<Rational>(prob, opt); }

// Dual objective sum_i y_i * (row activity bound) + sum_k rc_k * (variable bound) at
// the final basis; equals the primal value at optimality.
template <class T>
T dual_objective(const LpProblem& prob, const BasicLpResult<T>& res) {
  T v(0);
  for (std::size_t i = 0; i < prob.constraints.size(); ++i)
    if (!detail::is_zero(res.duals[i])) v += res.duals[i] * NumTraits<T>::from(prob.constraints[i].rhs());
  for (int k = 0; k < prob.num_vars; ++k)
    if (!detail::is_zero(res.reduced_costs[k])) v += res.reduced_costs[k] * res.point.values[k];
  return v;
}

// Standard relaxation: McCormick rows per edge, multiple-choice rows, 0/1 boxes.
inline LpProblem mccormick_relaxation(const Instance& inst, const std::vector<double>& objective) {
  if (static_cast<int>(objective.size()) != inst.num_vars()) throw std::invalid_argument("mccormick_relaxation: objective size");
  LpProblem lp(inst.num_vars(), true);
  lp.objective = objective;
  for (auto [i, j] : inst.edges()) {
    VarId x = inst.x(i), y = inst.y(j), z = inst.z(i, j);
    lp.constraints.push_back(LinearConstraint({{z, 1.0}}, Sense::GE, 0.0, "mccormick"));
    lp.constraints.push_back(LinearConstraint({{x, 1.0}, {y, 1.0}, {z, -1.0}}, Sense::LE, 1.0, "mccormick"));
    lp.constraints.push_back(LinearConstraint({{z, 1.0}, {x, -1.0}}, Sense::LE, 0.0, "mccormick"));
    lp.constraints.push_back(LinearConstraint({{z, 1.0}, {y, -1.0}}, Sense::LE, 0.0, "mccormick"));
  }
  for (const auto& s : inst.subsets()) {
    std::vector<Term> t;
    for (int i : s) t.push_back({inst.x(i), 1.0});
    lp.constraints.push_back(LinearConstraint(std::move(t), Sense::LE, 1.0, "multiple-choice"));
  }
  return lp;
}

}  // namespace bqpmc
