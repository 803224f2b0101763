"""Dense two-phase simplex method with Bland's anti-cycling rule.

Solves ``min c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq``,
``x >= 0``.  Intended for the small, well-scaled programs that arise from
angle-structure feasibility (a few hundred columns at most).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = ["LPStatus", "LPResult", "linprog"]


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass
class LPResult:
    status: LPStatus
    x: np.ndarray | None
    fun: float
    iterations: int


class _IterationLimit(Exception):
    pass


class _Unbounded(Exception):
    pass


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factor = T[:, col].copy()
    factor[row] = 0.0
    T -= np.outer(factor, T[row])


def _run(T: np.ndarray, basis: list[int], allowed: np.ndarray, max_iter: int,
         used: int, tol: float) -> int:
    """Minimize over tableau ``T`` whose last row holds reduced costs.

    ``allowed`` masks columns that may enter.  Returns the pivot count.
    """
    m = T.shape[0] - 1
    it = used
    while True:
        cost = T[-1, :-1]
        cand = np.flatnonzero((cost < -tol) & allowed)
        if cand.size == 0:
            return it
        if it >= max_iter:
            raise _IterationLimit
        col = int(cand[0])  # Bland: smallest index
        colv = T[:m, col]
        pos = colv > tol
        if not pos.any():
            raise _Unbounded
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / colv[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, row, col)
        basis[row] = col
        it += 1


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
            max_iter: int = 20000, tol: float = 1e-10) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # columns: x (n) | slacks (m_ub) | artificials (m) ; last column rhs
    n_slack = m_ub
    n_cols = n + n_slack + m
    T = np.zeros((m + 1, n_cols + 1))
    T[:m_ub, :n] = A_ub
    T[:m_ub, n:n + n_slack] = np.eye(m_ub)
    T[:m_ub, -1] = b_ub
    T[m_ub:m, :n] = A_eq
    T[m_ub:m, -1] = b_eq
    neg = T[:m, -1] < 0
    T[:m][neg] *= -1.0

    basis: list[int] = []
    art_rows = []
    for r in range(m):
        if r < m_ub and not neg[r]:
            basis.append(n + r)
        else:
            basis.append(n + n_slack + r)
            art_rows.append(r)
            T[r, n + n_slack + r] = 1.0
    art_cols = np.zeros(n_cols, dtype=bool)
    art_cols[n + n_slack + np.array(art_rows, dtype=int)] = True

    it = 0
    try:
        # phase 1: minimize the sum of artificials
        if art_rows:
            T[-1, :] = 0.0
            T[-1, art_cols.nonzero()[0]] = 1.0
            for r in art_rows:
                T[-1] -= T[r]
            it = _run(T, basis, np.ones(n_cols, dtype=bool), max_iter, it, tol)
            if -T[-1, -1] > 1e-9 * max(1.0, np.abs(T[:m, -1]).max(initial=0.0)):
                return LPResult(LPStatus.INFEASIBLE, None, np.nan, it)
            # drive remaining artificials out of the basis
            keep = np.ones(m, dtype=bool)
            for r in range(m):
                if not art_cols[basis[r]]:
                    continue
                row = T[r, :n + n_slack]
                nz = np.flatnonzero(np.abs(row) > tol)
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
                else:
                    keep[r] = False  # redundant equality
            if not keep.all():
                T = np.vstack([T[:m][keep], T[-1:]])
                basis = [b for b, k in zip(basis, keep) if k]
                m = len(basis)

        # phase 2
        T[-1, :] = 0.0
        T[-1, :n] = c
        for r, b in enumerate(basis):
            if T[-1, b] != 0.0:
                T[-1] -= T[-1, b] * T[r]
        it = _run(T, basis, ~art_cols, max_iter, it, tol)
    except _IterationLimit:
        return LPResult(LPStatus.ITERATION_LIMIT, None, np.nan, it)
    except _Unbounded:
        return LPResult(LPStatus.UNBOUNDED, None, -np.inf, it)

    x = np.zeros(n_cols)
    for r, b in enumerate(basis):
        x[b] = T[r, -1]
    return LPResult(LPStatus.OPTIMAL, x[:n], float(c @ x[:n]), it)
