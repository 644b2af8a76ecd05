"""Dense total-variation-minimising linear program.

Given columns v_1..v_N and a target t, solve

    minimise   sum_k |a_k|   subject to   sum_k a_k v_k = t

via the split a = a+ - a- and a two-phase dense revised simplex on
min 1.(a+ + a-) s.t. [V, -V](a+; a-) = t, a+- >= 0.  Solutions carry the
dual vector y, which at optimality is a certificate: |v_k . y| <= 1 for
every column and t . y equals the objective.  Infeasible systems return
a Farkas certificate y with t . y > 0 and v_k . y <= 0 for all k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FEASIBILITY_TOL = 1e-9
REDUCED_COST_TOL = 1e-9
_PIVOT_TOL = 1e-11
_REFACTOR_EVERY = 256


@dataclass
class LPSolution:
    weights: np.ndarray      # signed weights a_k, length N
    objective: float         # sum |a_k| (math.inf when infeasible)
    dual: np.ndarray         # length-d dual vector / Farkas certificate
    status: str              # 'optimal' | 'infeasible' | 'iteration-limit'
    iterations: int = 0


class _Tableau:
    """Revised simplex state with an explicitly maintained basis inverse."""

    def __init__(self, A, b):
        self.A = A
        self.b = b
        d = A.shape[0]
        self.basis = list(range(A.shape[1] - d, A.shape[1]))  # artificials
        self.binv = np.eye(d)
        self.xb = b.copy()
        self.pivots = 0

    def refactor(self):
        B = self.A[:, self.basis]
        try:
            self.binv = np.linalg.solve(B, np.eye(len(self.basis)))
        except np.linalg.LinAlgError:
            # drifted into a numerically singular basis; keep going with the
            # pseudo-inverse until pivoting replaces the offending column
            self.binv = np.linalg.pinv(B)
        self.xb = self.binv @ self.b
        self.xb[np.abs(self.xb) < 1e-13] = 0.0

    def pivot(self, j, row):
        u = self.binv @ self.A[:, j]
        piv = u[row]
        self.binv[row] /= piv
        for i in range(len(u)):
            if i != row and u[i] != 0.0:
                self.binv[i] -= u[i] * self.binv[row]
        self.basis[row] = j
        self.xb = self.binv @ self.b
        self.xb[(self.xb < 0) & (self.xb > -1e-9)] = 0.0
        self.pivots += 1
        if self.pivots % _REFACTOR_EVERY == 0:
            self.refactor()


def _run_phase(tab: _Tableau, costs, enterable, is_artificial, max_iters, bland_after):
    """Iterate to optimality of the given cost vector.  Returns (status, iters)."""
    d = len(tab.xb)
    iters = 0
    degenerate = 0
    bland = False
    blocked: set[int] = set()  # columns whose pivots were numerically unusable
    idx_all = np.arange(tab.A.shape[1])
    while iters < max_iters:
        y = tab.binv.T @ costs[tab.basis]
        reduced = costs - y @ tab.A
        mask = enterable.copy()
        mask[tab.basis] = False
        for bj in blocked:
            mask[bj] = False
        candidates = idx_all[mask & (reduced < -REDUCED_COST_TOL)]
        if candidates.size == 0:
            return "optimal", iters
        if bland:
            j = int(candidates[0])
        else:
            j = int(candidates[np.argmin(reduced[candidates])])
        u = tab.binv @ tab.A[:, j]
        basis_arr = np.asarray(tab.basis)
        art_rows = np.flatnonzero(is_artificial[basis_arr] & (np.abs(u) > _PIVOT_TOL)
                                  & (tab.xb <= 1e-10))
        if art_rows.size:
            # a zero-valued artificial touched by the entering column must leave
            row = int(art_rows[0])
            theta = 0.0
        else:
            pos = u > _PIVOT_TOL
            if not pos.any():
                raise RuntimeError("unbounded simplex direction in a bounded program")
            ratios = np.full(d, np.inf)
            ratios[pos] = tab.xb[pos] / u[pos]
            theta = float(ratios.min())
            ties = np.flatnonzero(ratios <= theta + 1e-12)
            art_ties = ties[is_artificial[basis_arr[ties]]]
            if art_ties.size:
                row = int(art_ties[0])
            elif bland:
                row = int(ties[np.argmin(basis_arr[ties])])
            else:
                row = int(ties[np.argmax(np.abs(u[ties]))])
        if abs(u[row]) < 1e-9:
            # pivot too small to be trustworthy: rebuild the inverse and
            # set the column aside until the basis changes
            tab.refactor()
            blocked.add(j)
            iters += 1
            continue
        if theta <= 1e-12:
            degenerate += 1
            if degenerate > bland_after:
                bland = True
        tab.pivot(j, row)
        blocked.clear()
        iters += 1
    return "iteration-limit", iters


def solve_min_tv(columns, target, tol: float = FEASIBILITY_TOL,
                 max_iters: int | None = None) -> LPSolution:
    """Minimise sum |a_k| subject to sum a_k v_k = target."""
    cols = np.asarray(columns, dtype=float)
    if cols.ndim != 2 or cols.shape[0] == 0:
        raise ValueError("at least one column of equal dimension is required")
    V = cols.T
    d, n_cols = V.shape
    b0 = np.asarray(target, dtype=float)
    if b0.shape != (d,):
        raise ValueError(f"target dimension {b0.shape} does not match columns ({d},)")
    if not np.any(b0):
        return LPSolution(np.zeros(n_cols), 0.0, np.zeros(d), "optimal", 0)

    sign = np.where(b0 < 0, -1.0, 1.0)
    A_real = np.hstack([V, -V]) * sign[:, None]
    A = np.hstack([A_real, np.eye(d)])
    b = b0 * sign
    n_real = 2 * n_cols
    is_artificial = np.zeros(A.shape[1], dtype=bool)
    is_artificial[n_real:] = True
    enterable = ~is_artificial
    if max_iters is None:
        max_iters = max(2000, 40 * (d + n_cols))
    bland_after = 10 * d

    tab = _Tableau(A, b)
    c1 = np.concatenate([np.zeros(n_real), np.ones(d)])
    status, it1 = _run_phase(tab, c1, enterable, is_artificial, max_iters, bland_after)
    art_level = float(sum(tab.xb[i] for i in range(d) if tab.basis[i] >= n_real))
    if status == "optimal" and art_level > max(tol, tol * float(np.abs(b).max())):
        y = tab.binv.T @ c1[np.asarray(tab.basis)]
        farkas = sign * y
        return LPSolution(np.zeros(n_cols), math.inf, farkas, "infeasible", it1)

    c2 = np.concatenate([np.ones(n_real), np.zeros(d)])
    status2, it2 = _run_phase(tab, c2, enterable, is_artificial, max_iters, bland_after)

    x = np.zeros(A.shape[1])
    x[np.asarray(tab.basis)] = tab.xb
    weights = x[:n_cols] - x[n_cols:n_real]
    y = sign * (tab.binv.T @ c2[np.asarray(tab.basis)])
    objective = float(np.abs(weights).sum())
    status_out = "optimal" if status == "optimal" and status2 == "optimal" else "iteration-limit"
    return LPSolution(weights, objective, y, status_out, it1 + it2)


def verify_solution(columns, target, sol: LPSolution, tol: float = 1e-7) -> dict:
    """Recompute residual, dual feasibility, duality gap and slackness checks."""
    V = np.asarray(columns, dtype=float).T
    t = np.asarray(target, dtype=float)
    y = np.asarray(sol.dual, dtype=float)
    if sol.status == "infeasible":
        col_dual = V.T @ y
        ok = float(t @ y) > tol and float(col_dual.max(initial=-math.inf)) <= tol
        return {"status": sol.status, "farkas_ok": bool(ok), "all_ok": bool(ok)}

    a = np.asarray(sol.weights, dtype=float)
    residual = float(np.abs(V @ a - t).max())
    col_dual = np.abs(V.T @ y)
    dual_feas = float(col_dual.max())
    objective = float(np.abs(a).sum())
    gap = abs(objective - float(t @ y))
    active = np.abs(a) > 1e-9
    slack = float(np.abs(col_dual[active] - 1.0).max()) if active.any() else 0.0
    checks = {
        "residual": residual,
        "feasible": residual <= tol,
        "max_abs_col_dual": dual_feas,
        "dual_feasible": dual_feas <= 1.0 + tol,
        "duality_gap": gap,
        "gap_ok": gap <= tol * max(1.0, objective),
        "complementary_slackness": slack,
        "complementary_ok": slack <= 10 * tol,
        "status": sol.status,
    }
    checks["all_ok"] = bool(checks["feasible"] and checks["dual_feasible"]
                            and checks["gap_ok"] and checks["complementary_ok"])
    return checks
