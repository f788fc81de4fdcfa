#include "gptk/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <utility>

namespace gptk {

void ConstraintSystem::add(Vec coeffs, Rel rel, Rational rhs)
{
    if (coeffs.size() != num_vars_)
        throw std::invalid_argument("ConstraintSystem::add: coefficient length mismatch");
    constraints_.push_back({std::move(coeffs), rel, std::move(rhs)});
}

void ConstraintSystem::mark_nonnegative(std::size_t j)
{
    if (nonneg_.empty())
        nonneg_.assign(num_vars_, 0);
    nonneg_.at(j) = 1;
}

namespace {

bool satisfies_all(const std::vector<LinearConstraint>& cs, const Vec& x,
                   const std::vector<char>& nonneg)
{
    for (std::size_t j = 0; j < nonneg.size(); ++j)
        if (nonneg[j] && x[j] < 0)
            return false;
    for (const auto& c : cs) {
        const Rational v = dot(c.coeffs, x);
        if (c.rel == Rel::Eq && v != c.rhs) return false;
        if (c.rel == Rel::Ge && v < c.rhs) return false;
        if (c.rel == Rel::Le && v > c.rhs) return false;
    }
    return true;
}

void verify_certificate(const std::vector<LinearConstraint>& cs, const Vec& m, std::size_t n,
                        const std::vector<char>& nonneg)
{
    Vec combo(n, Rational(0));
    Rational rhs_combo = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (m[i] == 0)
            continue;
        if (cs[i].rel == Rel::Ge && m[i] < 0)
            throw std::logic_error("lp_feasible: certificate sign error on >= row");
        if (cs[i].rel == Rel::Le && m[i] > 0)
            throw std::logic_error("lp_feasible: certificate sign error on <= row");
        for (std::size_t j = 0; j < n; ++j)
            combo[j] += m[i] * cs[i].coeffs[j];
        rhs_combo += m[i] * cs[i].rhs;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const bool nn = j < nonneg.size() && nonneg[j];
        if ((nn && combo[j] > 0) || (!nn && combo[j] != 0))
            throw std::logic_error("lp_feasible: certificate does not verify");
    }
    if (rhs_combo <= 0)
        throw std::logic_error("lp_feasible: certificate does not verify");
}

/**
 * Fraction-free phase-1 simplex: the tableau holds the integer matrix
 * det(B) * B^{-1} [A | b] together with the positive basis determinant, and
 * pivots use the two-term Bareiss update whose division is exact.  This
 * keeps every operation on integers with no per-entry gcd work.
 */
struct IntTableau {
    std::size_t nrows = 0, ncols = 0;  // ncols excludes the rhs column
    std::vector<Integer> cells;        // nrows x (ncols + 1), rhs last
    std::vector<Integer> costrow;      // phase-1 reduced costs, same scale
    std::vector<std::size_t> basis;
    Integer det = 1;
    std::size_t pivots = 0;

    void init(std::size_t rows, std::size_t cols)
    {
        nrows = rows;
        ncols = cols;
        cells.assign(rows * (cols + 1), Integer(0));
        costrow.assign(cols, Integer(0));
        basis.assign(rows, 0);
    }

    Integer& at(std::size_t i, std::size_t j) { return cells[i * (ncols + 1) + j]; }
    Integer& rhs(std::size_t i) { return cells[i * (ncols + 1) + ncols]; }

    void pivot(std::size_t r, std::size_t c)
    {
        const Integer piv = at(r, c);  // > 0 by the ratio test
        Integer* prow = &cells[r * (ncols + 1)];
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == r)
                continue;
            Integer* row = &cells[i * (ncols + 1)];
            const Integer f = row[c];
            if (f == 0) {
                if (piv != det)
                    for (std::size_t j = 0; j <= ncols; ++j) {
                        if (row[j] == 0)
                            continue;
                        row[j] *= piv;
                        row[j] /= det;
                    }
            } else {
                for (std::size_t j = 0; j <= ncols; ++j) {
                    row[j] = row[j] * piv - f * prow[j];
                    if (row[j] != 0)
                        row[j] /= det;
                }
            }
        }
        {
            const Integer f = costrow[c];
            if (f == 0) {
                if (piv != det)
                    for (std::size_t j = 0; j < ncols; ++j) {
                        if (costrow[j] == 0)
                            continue;
                        costrow[j] *= piv;
                        costrow[j] /= det;
                    }
            } else {
                for (std::size_t j = 0; j < ncols; ++j) {
                    costrow[j] = costrow[j] * piv - f * prow[j];
                    if (costrow[j] != 0)
                        costrow[j] /= det;
                }
            }
        }
        det = piv;
        basis[r] = c;
        ++pivots;
    }

    // Pricing: steepest reduced cost, falling back to Bland's rule after a
    // run of degenerate pivots.  Bland's rule cannot cycle, and any strict
    // improvement resets to the fast rule, so the loop terminates and stays
    // deterministic.
    void run()
    {
        std::size_t degenerate_streak = 0;
        for (;;) {
            const bool bland = degenerate_streak > 24;
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (costrow[j] >= 0)
                    continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (enter == ncols || costrow[j] < costrow[enter])
                    enter = j;
            }
            if (enter == ncols)
                return;
            std::size_t leave = nrows;
            for (std::size_t i = 0; i < nrows; ++i) {
                const Integer& tic = at(i, enter);
                if (tic <= 0)
                    continue;
                if (leave == nrows) {
                    leave = i;
                    continue;
                }
                // Compare rhs_i / t_i? against the incumbent by cross
                // multiplication; both denominators are positive.
                const Integer lhs = rhs(i) * at(leave, enter);
                const Integer rhsv = rhs(leave) * tic;
                if (lhs < rhsv || (lhs == rhsv && basis[i] < basis[leave]))
                    leave = i;
            }
            if (leave == nrows)
                throw std::logic_error("lp_feasible: unbounded phase-1 objective");
            degenerate_streak = rhs(leave) == 0 ? degenerate_streak + 1 : 0;
            pivot(leave, enter);
        }
    }
};

/**
 * A working row during presolve: the constraint in >=/= normal form plus its
 * provenance, the multiplier combination of original rows it equals.  An
 * inequality row's provenance keeps a positive coefficient on its own
 * original row and otherwise touches only equalities, so reduced-system
 * multipliers translate back with the correct signs.
 */
struct WorkRow {
    Vec coef;
    Rational rhs;
    bool is_eq = false;
    Vec combo;  // over original constraint indices
};

// dst -= f * src, in place, skipping zero source entries.
void row_axpy(Vec& dst, const Rational& f, const Vec& src)
{
    for (std::size_t j = 0; j < src.size(); ++j)
        if (src[j] != 0)
            dst[j] -= f * src[j];
}

void row_scale(Vec& v, const Rational& f)
{
    if (f == 1)
        return;
    for (Rational& x : v)
        if (x != 0)
            x *= f;
}

}  // namespace

LpResult lp_feasible(const std::vector<LinearConstraint>& cs, std::size_t n,
                     const std::vector<char>& nonneg)
{
    for (const auto& c : cs)
        if (c.coeffs.size() != n)
            throw std::invalid_argument("lp_feasible: coefficient length mismatch");

    const auto t_start = std::chrono::steady_clock::now();
    auto t_presolved = t_start;
    const std::size_t m0 = cs.size();
    auto is_nn = [&](std::size_t j) { return j < nonneg.size() && nonneg[j]; };

    // Normal form: equalities as-is, inequalities as >= rows.
    std::vector<WorkRow> rows;
    rows.reserve(m0);
    for (std::size_t i = 0; i < m0; ++i) {
        WorkRow r;
        const Rational sign = cs[i].rel == Rel::Le ? -1 : 1;
        r.coef = vec_scale(sign, cs[i].coeffs);
        r.rhs = sign * cs[i].rhs;
        r.is_eq = cs[i].rel == Rel::Eq;
        r.combo.assign(m0, Rational(0));
        r.combo[i] = sign;
        rows.push_back(std::move(r));
    }

    LpResult out;
    auto finish_infeasible = [&](Vec combo) {
        out.feasible = false;
        out.certificate = std::move(combo);
        verify_certificate(cs, out.certificate, n, nonneg);
        return out;
    };

    // Presolve: use equality rows to eliminate free variables (Gauss-Jordan
    // restricted to free columns), so nonnegative variables keep their native
    // single columns in the tableau.
    struct PivotRec {
        std::size_t var;
        WorkRow row;
    };
    std::vector<PivotRec> eliminated;
    {
        std::vector<char> gone(n, 0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_eq || rows[r].coef.empty())
                continue;
            std::size_t pc = n;
            for (std::size_t j = 0; j < n; ++j)
                if (!is_nn(j) && !gone[j] && rows[r].coef[j] != 0) {
                    pc = j;
                    break;
                }
            if (pc == n)
                continue;
            const Rational inv = Rational(1) / rows[r].coef[pc];
            row_scale(rows[r].coef, inv);
            rows[r].rhs *= inv;
            row_scale(rows[r].combo, inv);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == r || rows[i].coef.empty() || rows[i].coef[pc] == 0)
                    continue;
                const Rational f = rows[i].coef[pc];
                row_axpy(rows[i].coef, f, rows[r].coef);
                rows[i].rhs -= f * rows[r].rhs;
                row_axpy(rows[i].combo, f, rows[r].combo);
            }
            gone[pc] = 1;
            eliminated.push_back({pc, std::move(rows[r])});
            rows[r].coef.clear();  // mark consumed
        }
        std::erase_if(rows, [](const WorkRow& r) { return r.coef.empty(); });
    }

    // Drop trivial rows, deduplicate inequality directions, and scale all
    // rows to integer coefficients for the fraction-free tableau.
    {
        std::vector<WorkRow> kept;
        std::map<Vec, std::size_t> seen;  // direction -> index into kept (>= rows)
        for (WorkRow& r : rows) {
            if (is_zero_vec(r.coef)) {
                if ((r.is_eq && r.rhs != 0) || (!r.is_eq && r.rhs > 0))
                    return finish_infeasible(r.rhs < 0 ? vec_scale(Rational(-1), r.combo)
                                                       : std::move(r.combo));
                continue;
            }
            Rational scale = 0;
            for (const Rational& x : r.coef)
                if (x != 0) { scale = Rational(1) / (x < 0 ? -x : x); break; }
            row_scale(r.coef, scale);
            r.rhs *= scale;
            row_scale(r.combo, scale);
            if (r.is_eq) {
                kept.push_back(std::move(r));
                continue;
            }
            auto it = seen.find(r.coef);
            if (it == seen.end()) {
                seen.emplace(r.coef, kept.size());
                kept.push_back(std::move(r));
            } else if (r.rhs > kept[it->second].rhs) {
                kept[it->second] = std::move(r);
            }
        }
        rows = std::move(kept);
        for (WorkRow& r : rows) {
            Integer lcm = 1;
            for (const Rational& x : r.coef)
                if (x != 0)
                    lcm = boost::multiprecision::lcm(lcm, denominator(x));
            lcm = boost::multiprecision::lcm(lcm, denominator(r.rhs));
            if (lcm != 1) {
                const Rational f(lcm);
                row_scale(r.coef, f);
                r.rhs *= f;
                row_scale(r.combo, f);
            }
        }
    }

    std::vector<std::size_t> free_vars, nn_vars;
    {
        std::vector<char> gone(n, 0);
        for (const auto& p : eliminated)
            gone[p.var] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (gone[j])
                continue;
            (is_nn(j) ? nn_vars : free_vars).push_back(j);
        }
    }

    t_presolved = std::chrono::steady_clock::now();
    Vec x(n, Rational(0));
    Vec reduced_mult(rows.size(), Rational(0));
    bool feasible = true;

    if (!rows.empty()) {
        const std::size_t m = rows.size();
        const std::size_t nf = free_vars.size(), nn = nn_vars.size();
        std::vector<std::size_t> colmap(n, SIZE_MAX);
        for (std::size_t k = 0; k < nf; ++k)
            colmap[free_vars[k]] = k;  // plus column; minus column at nf + k
        for (std::size_t k = 0; k < nn; ++k)
            colmap[nn_vars[k]] = 2 * nf + k;
        const std::size_t slack0 = 2 * nf + nn;

        std::size_t n_art = 0;
        std::vector<int> sigma(m);
        std::vector<char> slack_start(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            // Rows are = or >=.  The slack can start basic on a >= row with a
            // nonpositive right side; flips keep the basic column at +1.
            slack_start[i] = !rows[i].is_eq && rows[i].rhs <= 0;
            sigma[i] = slack_start[i] || rows[i].rhs < 0 ? -1 : 1;
            if (!slack_start[i])
                ++n_art;
        }

        IntTableau t;
        t.init(m, slack0 + m + n_art);
        std::size_t next_art = slack0 + m;
        std::vector<std::size_t> art_col(m, SIZE_MAX);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (colmap[j] == SIZE_MAX || rows[i].coef[j] == 0)
                    continue;
                t.at(i, colmap[j]) = sigma[i] * numerator(rows[i].coef[j]);
                if (!is_nn(j))
                    t.at(i, nf + colmap[j]) = -t.at(i, colmap[j]);
            }
            if (!rows[i].is_eq)
                t.at(i, slack0 + i) = -sigma[i];  // surplus of coef.x - s = rhs
            t.rhs(i) = sigma[i] * numerator(rows[i].rhs);
            if (slack_start[i]) {
                t.basis[i] = slack0 + i;
            } else {
                art_col[i] = next_art++;
                t.at(i, art_col[i]) = 1;
                t.basis[i] = art_col[i];
                for (std::size_t j = 0; j < t.ncols; ++j)
                    if (j != art_col[i])
                        t.costrow[j] -= t.at(i, j);
            }
        }
        t.run();
        if (std::getenv("GPTK_LP_STATS") != nullptr)
            std::fprintf(stderr,
                         "[lp] rows=%zu cols=%zu free=%zu nn=%zu pivots=%zu presolve=%.3fs "
                         "simplex=%.3fs\n",
                         m, t.ncols, nf, nn, t.pivots,
                         std::chrono::duration<double>(t_presolved - t_start).count(),
                         std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                       t_presolved)
                             .count());

        for (std::size_t i = 0; i < m && feasible; ++i)
            if (t.basis[i] >= slack0 + m && t.rhs(i) != 0)
                feasible = false;

        if (feasible) {
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t b = t.basis[i];
                const Rational val = Rational(t.rhs(i), t.det);
                if (b < nf)
                    x[free_vars[b]] += val;
                else if (b < 2 * nf)
                    x[free_vars[b - nf]] -= val;
                else if (b < slack0)
                    x[nn_vars[b - 2 * nf]] += val;
            }
        } else {
            // Simplex multipliers, via artificial or slack reduced costs.
            for (std::size_t i = 0; i < m; ++i) {
                Rational yhat;
                if (art_col[i] != SIZE_MAX)
                    yhat = Rational(1) - Rational(t.costrow[art_col[i]], t.det);
                else
                    yhat = Rational(t.costrow[slack0 + i], t.det) / sigma[i];
                reduced_mult[i] = Rational(sigma[i]) * yhat;
            }
        }
    }

    if (!feasible) {
        Vec combo(m0, Rational(0));
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (reduced_mult[i] != 0)
                row_axpy(combo, -reduced_mult[i], rows[i].combo);
        return finish_infeasible(std::move(combo));
    }

    // Back-substitute the eliminated free variables.
    for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it) {
        Rational v = it->row.rhs;
        for (std::size_t j = 0; j < n; ++j)
            if (j != it->var && it->row.coef[j] != 0)
                v -= it->row.coef[j] * x[j];
        x[it->var] = v;
    }
    out.feasible = true;
    out.witness = std::move(x);
    if (!satisfies_all(cs, out.witness, nonneg))
        throw std::logic_error("lp_feasible: witness does not verify");
    return out;
}

}  // namespace gptk
