#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "costshare/rational.hpp"

namespace costshare {

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpVariable {
  std::string label;
  Rational objective;
  // Either x >= 0 (the default) or a free variable.
  bool free = false;
};

struct LpTerm {
  int variable;
  Rational coefficient;
};

struct LpRow {
  std::string label;
  std::vector<LpTerm> terms;
  Relation relation = Relation::kGreaterEqual;
  Rational rhs;
  // Player index owning this row, or -1. Lets callers map duals back to
  // players; the solver itself ignores it.
  int owner = -1;
};

class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::kMinimize) : sense_(sense) {}

  int add_variable(std::string label, Rational objective, bool free = false);
  int add_row(std::string label, std::vector<LpTerm> terms, Relation relation, Rational rhs,
              int owner = -1);

  Sense sense() const { return sense_; }
  const std::vector<LpVariable>& variables() const { return variables_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  // Index of the variable with this label, or -1.
  int find_variable(const std::string& label) const;
  int find_row(const std::string& label) const;

  // Throws Error(kMalformedLp) on out-of-range variable references or
  // duplicate labels.
  void validate() const;

 private:
  Sense sense_;
  std::vector<LpVariable> variables_;
  std::vector<LpRow> rows_;
};

// Duals follow the sensitivity convention: dual[i] is the rate of change of
// the optimal objective per unit of rows[i].rhs. For a minimization, >= rows
// carry dual >= 0 and <= rows carry dual <= 0; for a maximization the signs
// flip. Equality rows are free.
struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
  Rational objective;
  // INFEASIBLE: row multipliers y with y^T A <= 0 on x >= 0 columns (= 0 on
  // free ones), sign-compatible with each relation, and y^T b > 0.
  std::vector<Rational> farkas;
  // UNBOUNDED: a feasible direction that strictly improves the objective.
  std::vector<Rational> ray;
};

LpOutcome solve_lp(const LinearProgram& lp);

// Objective value of `values` under lp's objective.
Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& values);

bool primal_feasible(const LinearProgram& lp, const std::vector<Rational>& primal);
bool dual_feasible(const LinearProgram& lp, const std::vector<Rational>& dual);

// True iff the pair is primal and dual feasible and complementary: every
// nonzero primal variable has a tight dual constraint and every nonzero dual
// multiplier has a tight row. Throws Error(kNotOptimal) unless out is OPTIMAL.
bool check_complementary_slackness(const LinearProgram& lp, const LpOutcome& out);

// Exact re-check of an INFEASIBLE certificate.
bool check_farkas(const LinearProgram& lp, const std::vector<Rational>& y);
// Exact re-check of an UNBOUNDED certificate.
bool check_ray(const LinearProgram& lp, const std::vector<Rational>& ray);

}  // namespace costshare
