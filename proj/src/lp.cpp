#include "costshare/lp.hpp"

#include <unordered_set>

#include "costshare/error.hpp"

namespace costshare {

int LinearProgram::add_variable(std::string label, Rational objective, bool free) {
  variables_.push_back({std::move(label), std::move(objective), free});
  return num_variables() - 1;
}

int LinearProgram::add_row(std::string label, std::vector<LpTerm> terms, Relation relation,
                           Rational rhs, int owner) {
  rows_.push_back({std::move(label), std::move(terms), relation, std::move(rhs), owner});
  return num_rows() - 1;
}

int LinearProgram::find_variable(const std::string& label) const {
  for (int j = 0; j < num_variables(); ++j) {
    if (variables_[j].label == label) return j;
  }
  return -1;
}

int LinearProgram::find_row(const std::string& label) const {
  for (int i = 0; i < num_rows(); ++i) {
    if (rows_[i].label == label) return i;
  }
  return -1;
}

void LinearProgram::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& v : variables_) {
    if (!seen.insert(v.label).second) {
      throw Error(ErrorCode::kMalformedLp, "duplicate variable label '" + v.label + "'");
    }
  }
  seen.clear();
  for (const auto& row : rows_) {
    if (!seen.insert(row.label).second) {
      throw Error(ErrorCode::kMalformedLp, "duplicate row label '" + row.label + "'");
    }
    for (const auto& t : row.terms) {
      if (t.variable < 0 || t.variable >= num_variables()) {
        throw Error(ErrorCode::kMalformedLp, "row '" + row.label + "' references variable " +
                                                 std::to_string(t.variable));
      }
    }
  }
}

namespace {

// Dense two-phase tableau over the standard form  min c'x, A'x = b', x >= 0,
// b' >= 0. Column layout: structural columns (free variables split into a
// +/- pair), one slack per inequality row, then artificials. Every row owns
// one identity column (its slack when that slack has coefficient +1 after
// normalisation, otherwise an artificial); reduced costs of those columns
// give the duals.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : lp_(lp) {
    const int n = lp.num_variables();
    m_ = lp.num_rows();
    plus_col_.resize(n);
    minus_col_.assign(n, -1);
    for (int j = 0; j < n; ++j) {
      plus_col_[j] = ncols_++;
      if (lp.variables()[j].free) minus_col_[j] = ncols_++;
    }
    slack_col_.assign(m_, -1);
    sign_.assign(m_, 1);
    for (int i = 0; i < m_; ++i) {
      if (lp.rows()[i].relation != Relation::kEqual) slack_col_[i] = ncols_++;
      if (sgn(lp.rows()[i].rhs) < 0) sign_[i] = -1;
    }
    first_artificial_ = ncols_;
    identity_col_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const auto rel = lp.rows()[i].relation;
      const int slack_coef =
          rel == Relation::kLessEqual ? 1 : (rel == Relation::kGreaterEqual ? -1 : 0);
      if (slack_coef * sign_[i] == 1) {
        identity_col_[i] = slack_col_[i];
      } else {
        identity_col_[i] = ncols_++;
      }
    }
    width_ = ncols_ + 1;
    cells_.assign(static_cast<std::size_t>(m_) * width_, Rational(0));
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp.rows()[i];
      for (const auto& t : row.terms) {
        at(i, plus_col_[t.variable]) += sign_[i] * t.coefficient;
        if (minus_col_[t.variable] >= 0) at(i, minus_col_[t.variable]) -= sign_[i] * t.coefficient;
      }
      if (slack_col_[i] >= 0) {
        at(i, slack_col_[i]) = (row.relation == Relation::kLessEqual ? 1 : -1) * sign_[i];
      }
      at(i, identity_col_[i]) = 1;
      rhs(i) = sign_[i] * row.rhs;
      basis_[i] = identity_col_[i];
    }
  }

  LpOutcome solve() {
    LpOutcome out;
    const int n = lp_.num_variables();

    // Phase 1: minimise the sum of artificials.
    phase_cost_.assign(ncols_, Rational(0));
    for (int c = first_artificial_; c < ncols_; ++c) phase_cost_[c] = 1;
    price();
    allow_artificial_entry_ = true;
    run();  // phase 1 is bounded below by 0
    if (sgn(objective_) > 0) {
      out.status = LpStatus::kInfeasible;
      out.farkas.resize(m_);
      for (int i = 0; i < m_; ++i) {
        const int c = identity_col_[i];
        out.farkas[i] = sign_[i] * (phase_cost_[c] - reduced_[c]);
      }
      return out;
    }
    drive_out_artificials();

    // Phase 2.
    phase_cost_.assign(ncols_, Rational(0));
    const int flip = lp_.sense() == Sense::kMaximize ? -1 : 1;
    for (int j = 0; j < n; ++j) {
      phase_cost_[plus_col_[j]] = flip * lp_.variables()[j].objective;
      if (minus_col_[j] >= 0) phase_cost_[minus_col_[j]] = -flip * lp_.variables()[j].objective;
    }
    price();
    allow_artificial_entry_ = false;
    const int unbounded_col = run();

    std::vector<Rational> column_values(ncols_, Rational(0));
    for (int i = 0; i < m_; ++i) column_values[basis_[i]] = rhs(i);
    out.primal.resize(n);
    for (int j = 0; j < n; ++j) {
      out.primal[j] = column_values[plus_col_[j]];
      if (minus_col_[j] >= 0) out.primal[j] -= column_values[minus_col_[j]];
    }

    if (unbounded_col >= 0) {
      out.status = LpStatus::kUnbounded;
      std::vector<Rational> dir(ncols_, Rational(0));
      dir[unbounded_col] = 1;
      for (int i = 0; i < m_; ++i) dir[basis_[i]] = -at(i, unbounded_col);
      out.ray.resize(n);
      for (int j = 0; j < n; ++j) {
        out.ray[j] = dir[plus_col_[j]];
        if (minus_col_[j] >= 0) out.ray[j] -= dir[minus_col_[j]];
      }
      out.objective = objective_value(lp_, out.primal);
      return out;
    }

    out.status = LpStatus::kOptimal;
    out.objective = flip * objective_;
    out.dual.resize(m_);
    for (int i = 0; i < m_; ++i) {
      out.dual[i] = flip * sign_[i] * (-reduced_[identity_col_[i]]);
    }
    return out;
  }

 private:
  Rational& at(int r, int c) { return cells_[static_cast<std::size_t>(r) * width_ + c]; }
  Rational& rhs(int r) { return at(r, ncols_); }

  void price() {
    reduced_ = phase_cost_;
    objective_ = 0;
    for (int i = 0; i < m_; ++i) {
      const Rational& cb = phase_cost_[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (int c = 0; c < ncols_; ++c) {
        const Rational& a = at(i, c);
        if (sgn(a) != 0) reduced_[c] -= cb * a;
      }
      objective_ += cb * rhs(i);
    }
  }

  void pivot(int r, int col) {
    const Rational piv = at(r, col);
    if (piv != 1) {
      for (int c = 0; c <= ncols_; ++c) {
        Rational& a = at(r, c);
        if (sgn(a) != 0) a /= piv;
      }
    }
    std::vector<int> nz;
    nz.reserve(width_);
    for (int c = 0; c <= ncols_; ++c) {
      if (sgn(at(r, c)) != 0) nz.push_back(c);
    }
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Rational factor = at(i, col);
      if (sgn(factor) == 0) continue;
      for (int c : nz) at(i, c) -= factor * at(r, c);
    }
    const Rational factor = reduced_[col];
    if (sgn(factor) != 0) {
      for (int c : nz) {
        if (c == ncols_) {
          objective_ += factor * at(r, c);
        } else {
          reduced_[c] -= factor * at(r, c);
        }
      }
    }
    basis_[r] = col;
  }

  // Bland's rule. Returns -1 at optimality or the entering column of an
  // unbounded ray.
  int run() {
    while (true) {
      int entering = -1;
      for (int c = 0; c < ncols_; ++c) {
        if (!allow_artificial_entry_ && c >= first_artificial_) break;
        if (sgn(reduced_[c]) < 0) {
          entering = c;
          break;
        }
      }
      if (entering < 0) return -1;
      int leaving = -1;
      Rational best_ratio;
      for (int i = 0; i < m_; ++i) {
        const Rational& a = at(i, entering);
        if (sgn(a) <= 0) continue;
        Rational ratio = rhs(i) / a;
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leaving < 0) return entering;
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (int c = 0; c < first_artificial_; ++c) {
        if (sgn(at(i, c)) != 0) {
          pivot(i, c);
          break;
        }
      }
      // A row with no nonzero non-artificial entry is redundant; its
      // artificial stays basic at level zero and never moves again.
    }
  }

  const LinearProgram& lp_;
  int m_ = 0;
  int ncols_ = 0;
  int width_ = 0;
  int first_artificial_ = 0;
  std::vector<int> plus_col_, minus_col_, slack_col_, identity_col_, sign_, basis_;
  std::vector<Rational> cells_;
  std::vector<Rational> phase_cost_, reduced_;
  Rational objective_;
  bool allow_artificial_entry_ = true;
};

Rational row_activity(const LpRow& row, const std::vector<Rational>& x) {
  Rational sum = 0;
  for (const auto& t : row.terms) sum += t.coefficient * x[t.variable];
  return sum;
}

// Column j of A^T y.
std::vector<Rational> transpose_times(const LinearProgram& lp, const std::vector<Rational>& y) {
  std::vector<Rational> out(lp.num_variables(), Rational(0));
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (sgn(y[i]) == 0) continue;
    for (const auto& t : lp.rows()[i].terms) out[t.variable] += t.coefficient * y[i];
  }
  return out;
}

// Sign a dual multiplier must have for `rel` under the sensitivity
// convention of a minimisation (+1: >= 0, -1: <= 0, 0: free).
int dual_sign(Relation rel, Sense sense) {
  int s = rel == Relation::kGreaterEqual ? 1 : (rel == Relation::kLessEqual ? -1 : 0);
  return sense == Sense::kMinimize ? s : -s;
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp) {
  lp.validate();
  Tableau tableau(lp);
  return tableau.solve();
}

Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& values) {
  Rational sum = 0;
  for (int j = 0; j < lp.num_variables(); ++j) sum += lp.variables()[j].objective * values[j];
  return sum;
}

bool primal_feasible(const LinearProgram& lp, const std::vector<Rational>& primal) {
  if (static_cast<int>(primal.size()) != lp.num_variables()) return false;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (!lp.variables()[j].free && sgn(primal[j]) < 0) return false;
  }
  for (const auto& row : lp.rows()) {
    const int cmp = ::cmp(row_activity(row, primal), row.rhs);
    if (row.relation == Relation::kLessEqual && cmp > 0) return false;
    if (row.relation == Relation::kGreaterEqual && cmp < 0) return false;
    if (row.relation == Relation::kEqual && cmp != 0) return false;
  }
  return true;
}

bool dual_feasible(const LinearProgram& lp, const std::vector<Rational>& dual) {
  if (static_cast<int>(dual.size()) != lp.num_rows()) return false;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const int s = dual_sign(lp.rows()[i].relation, lp.sense());
    if (s * sgn(dual[i]) < 0) return false;
  }
  const auto aty = transpose_times(lp, dual);
  for (int j = 0; j < lp.num_variables(); ++j) {
    const Rational reduced = lp.variables()[j].objective - aty[j];
    if (lp.variables()[j].free) {
      if (sgn(reduced) != 0) return false;
    } else if (lp.sense() == Sense::kMinimize ? sgn(reduced) < 0 : sgn(reduced) > 0) {
      return false;
    }
  }
  return true;
}

bool check_complementary_slackness(const LinearProgram& lp, const LpOutcome& out) {
  if (out.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNotOptimal, "complementary slackness needs an OPTIMAL outcome");
  }
  if (!primal_feasible(lp, out.primal) || !dual_feasible(lp, out.dual)) return false;
  const auto aty = transpose_times(lp, out.dual);
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (sgn(out.primal[j]) != 0 && lp.variables()[j].objective != aty[j]) return false;
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (sgn(out.dual[i]) != 0 && row_activity(lp.rows()[i], out.primal) != lp.rows()[i].rhs) {
      return false;
    }
  }
  return true;
}

bool check_farkas(const LinearProgram& lp, const std::vector<Rational>& y) {
  if (static_cast<int>(y.size()) != lp.num_rows()) return false;
  Rational yb = 0;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto rel = lp.rows()[i].relation;
    if (rel == Relation::kLessEqual && sgn(y[i]) > 0) return false;
    if (rel == Relation::kGreaterEqual && sgn(y[i]) < 0) return false;
    yb += y[i] * lp.rows()[i].rhs;
  }
  const auto aty = transpose_times(lp, y);
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (lp.variables()[j].free ? sgn(aty[j]) != 0 : sgn(aty[j]) > 0) return false;
  }
  return sgn(yb) > 0;
}

bool check_ray(const LinearProgram& lp, const std::vector<Rational>& ray) {
  if (static_cast<int>(ray.size()) != lp.num_variables()) return false;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (!lp.variables()[j].free && sgn(ray[j]) < 0) return false;
  }
  for (const auto& row : lp.rows()) {
    const int s = sgn(row_activity(row, ray));
    if (row.relation == Relation::kLessEqual && s > 0) return false;
    if (row.relation == Relation::kGreaterEqual && s < 0) return false;
    if (row.relation == Relation::kEqual && s != 0) return false;
  }
  const int improve = sgn(objective_value(lp, ray));
  return lp.sense() == Sense::kMinimize ? improve < 0 : improve > 0;
}

}  // namespace costshare
