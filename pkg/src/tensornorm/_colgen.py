"""Generic column generation for certified norm brackets.

A *generator family* supplies candidate vectors (or vector pairs) whose
columns the master LP may combine, plus a pricing oracle that maximises
|<y, column(p)>| over the whole continuous family.  Each solve yields

  upper  -- the LP objective, the cost of an explicit decomposition;
  lower  -- (target . y) / max(M, 1), where M is the oracle maximum of the
            dual functional; dividing by M makes the functional feasible
            for the continuum problem, so the bound is certified whenever
            the oracle is exact (and grid+polish accurate otherwise).

Iteration stops once the pricing violation and the implied bracket gap
are both below tolerance, or after ``max_rounds`` rounds (``converged``
is then False and the best bracket so far is returned).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lp_engine
from .tensor_core import SignedPowerCombination


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-7            # absolute bracket-gap target
    pricing_tol: float = 1e-7    # admissible dual violation max|p_y| - 1
    max_rounds: int = 200
    grid_resolution: int = 64    # simplex pricing grid (dim >= 3 families)
    grid_budget: int = 30000     # cap on pricing/seed grid size
    lp_tol: float = 1e-9
    prune_tol: float = 1e-10
    seed: int = 20240 + 1        # reserved for randomised grids; lattices are deterministic


@dataclass
class NormBounds:
    """Certified interval for a norm value with primal/dual witnesses."""

    lower: float
    upper: float
    primal: SignedPowerCombination | None
    dual: list[float] | None
    iterations: int
    converged: bool
    primal_pairs: list[tuple[float, tuple, tuple]] | None = None

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def gap(self) -> float:
        return self.upper - self.lower

    def to_json_dict(self) -> dict:
        out = {
            "lower": self.lower,
            "upper": self.upper,
            "converged": self.converged,
            "iterations": self.iterations,
            "primal": self.primal.to_json_dict()["terms"] if self.primal else None,
            "dual": list(self.dual) if self.dual is not None else None,
        }
        if self.primal_pairs is not None:
            out["primal_pairs"] = [{"w": w, "x1": list(x1), "x2": list(x2)}
                                   for w, x1, x2 in self.primal_pairs]
        return out


def run_column_generation(target, family, opts: SolverOptions | None = None) -> NormBounds:
    opts = opts or SolverOptions()
    target = np.asarray(target, dtype=float)
    params: list = []
    keys: set = set()
    cols: list = []

    def add(p) -> bool:
        k = family.key(p)
        if k in keys:
            return False
        keys.add(k)
        params.append(p)
        cols.append(family.column(p))
        return True

    for p in family.seeds():
        add(p)

    sol = None
    y = None
    oracle_max = 1.0
    rounds = 0
    converged = False
    while rounds < opts.max_rounds:
        rounds += 1
        sol = lp_engine.solve_min_tv(cols, target, tol=opts.lp_tol)
        if sol.status == "infeasible":
            # price on the Farkas certificate until the target enters the span
            p_star, m_star, extras = family.oracle(sol.dual)
            if m_star <= 1e-12:
                break
            added = add(p_star)
            for q in extras:
                added = add(q) or added
            if not added:
                break
            continue
        y = sol.dual
        p_star, oracle_max, extras = family.oracle(y)
        violation = oracle_max - 1.0
        gap = max(0.0, sol.objective * violation)
        if violation <= opts.pricing_tol and gap <= opts.tol:
            converged = True
            break
        added = add(p_star)
        for q in extras:
            added = add(q) or added
        if not added:
            break  # dual-degenerate stall: maximiser already priced in

    if sol is None or sol.status == "infeasible":
        dual = list(sol.dual) if sol is not None else None
        return NormBounds(0.0, math.inf, None, None, rounds, False, None)

    upper = sol.objective
    if y is None:
        lower = 0.0
        dual_scaled = None
    else:
        scale = max(oracle_max, 1.0)
        lower = min(float(target @ y) / scale, upper)
        dual_scaled = (np.asarray(y) / scale).tolist()
    primal, pairs = family.primal(params, sol.weights, opts.prune_tol)
    return NormBounds(lower, upper, primal, dual_scaled, rounds, converged, pairs)
