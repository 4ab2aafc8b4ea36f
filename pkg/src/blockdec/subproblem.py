"""Exact block subproblem solves by support-pattern enumeration.

Given a working set B of size k, the block update minimizes

    F(z) + (theta/2) ||z - x||^2   subject to   z agreeing with x outside B

by enumerating all 2^k on/off patterns for the coordinates in B and solving
a small positive-definite linear system for each pattern.  The minimum over
patterns is the global optimum of the (NP-hard) block problem.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import (
    DegenerateSystemError,
    DimensionMismatchError,
    InvalidParameterError,
    NumericalError,
)
from .problem import Cardinality, L0Penalty

# exhaustive enumeration cap: 2^k patterns per call
MAX_BLOCK_SIZE = 30

# objective ties closer than this are broken by sparsity, then pattern mask
TIE_TOL = 1e-12


class WorkingSet:
    """An ascending tuple of distinct coordinate indices."""

    def __init__(self, indices):
        idx = sorted(int(i) for i in indices)
        if len(idx) == 0:
            raise InvalidParameterError("working set must be nonempty")
        if any(i < 0 for i in idx):
            raise InvalidParameterError("working set indices must be nonnegative")
        if any(a == b for a, b in zip(idx, idx[1:])):
            raise InvalidParameterError(f"working set indices must be distinct: {idx}")
        self.indices = tuple(idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __eq__(self, other):
        return isinstance(other, WorkingSet) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"WorkingSet({list(self.indices)})"


@dataclass
class BlockSolveResult:
    """Outcome of one block solve.

    ``objective`` is the optimal value of F(z) + (theta/2)||z - x||^2;
    ``composite_delta`` is the exact change F(x_next) - F(x) computed in
    block-local arithmetic (non-positive by construction), which lets the
    caller maintain an exactly monotone objective sequence.
    """

    x_next: np.ndarray
    pattern: int
    objective: float
    patterns_evaluated: int
    composite_delta: float = 0.0


def _solve_spd(M, rhs, allow_ridge):
    """Solve M z = rhs for symmetric positive (semi)definite M."""
    try:
        z = cho_solve(cho_factor(M, lower=True), rhs)
    except np.linalg.LinAlgError:
        if not allow_ridge:
            raise DegenerateSystemError("degenerate restricted system")
        ridge = 1e-12 * np.trace(M) / M.shape[0]
        if ridge <= 0:
            raise DegenerateSystemError("degenerate restricted system")
        try:
            z = cho_solve(cho_factor(M + ridge * np.eye(M.shape[0]), lower=True), rhs)
        except np.linalg.LinAlgError:
            raise DegenerateSystemError("degenerate restricted system") from None
    res = rhs - M @ z
    bound = 1e-10 * (1.0 + np.linalg.norm(rhs))
    if np.linalg.norm(res) > bound:
        # one pass of iterative refinement before giving up
        try:
            z = z + cho_solve(cho_factor(M, lower=True), res)
        except np.linalg.LinAlgError:
            pass
        res = rhs - M @ z
        if np.linalg.norm(res) > bound:
            raise NumericalError("restricted system solve exceeded residual tolerance")
    return z


def restricted_minimize(prob, S, x_fixed, anchor, theta):
    """Minimize f(z) + (theta/2)||z - anchor||^2 over the coordinates in S.

    Coordinates outside S are held at ``x_fixed`` (entries of ``x_fixed``
    inside S are ignored; coordinates meant to be pinned at zero must be
    zero there).  Returns the optimal values for the S coordinates, i.e. the
    solution of (Q_SS + theta I) z_S = theta*anchor_S - p_S - Q_{S,R} x_R.
    """
    S = [int(i) for i in S]
    if len(S) == 0:
        raise InvalidParameterError("restricted solve needs a nonempty index set")
    obj = prob.objective
    x_fixed = np.asarray(x_fixed, dtype=float)
    anchor = np.asarray(anchor, dtype=float)
    if x_fixed.shape != (obj.n,) or anchor.shape != (obj.n,):
        raise DimensionMismatchError("x_fixed and anchor must have the problem dimension")
    if theta < 0:
        raise InvalidParameterError(f"theta must be nonnegative, got {theta}")
    masked = x_fixed.copy()
    masked[S] = 0.0
    cross = obj.matvec(masked)[S]
    rhs = theta * anchor[S] - obj.linear_term(S) - cross
    M = obj.gram_submatrix(S) + theta * np.eye(len(S))
    return _solve_spd(M, rhs, allow_ridge=(theta == 0.0))


def solve_block(prob, x, B, theta, f_of_x=None):
    """Globally solve the block subproblem on working set B.

    Enumerates every support pattern inside B (pruned to the remaining
    cardinality budget under a Cardinality term), solves the restricted
    quadratic for each, and returns the best candidate.  Ties within
    ``TIE_TOL`` go to the candidate with fewer nonzeros, then to the
    lexicographically smaller pattern mask (bit j of the mask corresponds to
    B's j-th index).
    """
    if not isinstance(prob.term, (Cardinality, L0Penalty)):
        raise InvalidParameterError(
            f"block decomposition requires an l0 term, got {prob.term!r}")
    if not isinstance(B, WorkingSet):
        B = WorkingSet(B)
    k = len(B)
    if k > MAX_BLOCK_SIZE:
        raise InvalidParameterError(
            f"block too large for exhaustive enumeration (k = {k} > {MAX_BLOCK_SIZE})")
    obj = prob.objective
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.n,):
        raise DimensionMismatchError(f"x has shape {x.shape}, expected ({obj.n},)")
    if B.indices[-1] >= obj.n:
        raise DimensionMismatchError(f"working set {B!r} out of range for n = {obj.n}")
    if theta < 0:
        raise InvalidParameterError(f"theta must be nonnegative, got {theta}")

    cardinality = isinstance(prob.term, Cardinality)
    idx = np.asarray(B.indices, dtype=int)
    x_B = x[idx]
    nnz_out = int(np.count_nonzero(x)) - int(np.count_nonzero(x_B))
    if cardinality:
        budget = prob.term.s - nnz_out
        if budget < 0:
            raise InvalidParameterError("x is infeasible for the cardinality bound")
    else:
        budget = k
        lam = prob.term.lam

    # block-local data: gradient at x, the B-block of Q, and the coupling of
    # the outside coordinates folded into a rhs offset
    g_B = obj.matvec(x)[idx] + obj.linear_term(idx)
    Q_BB = obj.gram_submatrix(idx)
    p_B = obj.linear_term(idx)
    w = g_B - p_B - Q_BB @ x_B  # = Q[B, outside] @ x_outside

    nnz_x_B = int(np.count_nonzero(x_B))
    best_delta = 0.0  # the stay-put candidate z = x is always admissible
    best_nnz = nnz_x_B
    best_mask = None
    best_zB = x_B
    evaluated = 0

    for mask in range(1 << k):
        r = mask.bit_count()
        if r > budget:
            continue
        evaluated += 1
        if r == 0:
            z_B = np.zeros(k)
        else:
            T = [j for j in range(k) if (mask >> j) & 1]
            M = Q_BB[np.ix_(T, T)] + theta * np.eye(r)
            rhs = theta * x_B[T] - p_B[T] - w[T]
            z_B = np.zeros(k)
            z_B[T] = _solve_spd(M, rhs, allow_ridge=(theta == 0.0))
        d = z_B - x_B
        fdiff = float(g_B @ d + 0.5 * d @ (Q_BB @ d))
        znnz = int(np.count_nonzero(z_B))
        hdiff = 0.0 if cardinality else lam * (znnz - nnz_x_B)
        delta = fdiff + hdiff + 0.5 * theta * float(d @ d)
        if delta < best_delta - TIE_TOL:
            best_delta, best_nnz, best_mask, best_zB = delta, znnz, mask, z_B
        elif delta <= best_delta + TIE_TOL and best_mask is not None:
            if znnz < best_nnz:
                best_delta = min(best_delta, delta)
                best_nnz, best_mask, best_zB = znnz, mask, z_B

    if f_of_x is None:
        f_of_x = obj.value(x)
    h_of_x = 0.0 if cardinality else lam * (nnz_x_B + nnz_out)
    F_of_x = f_of_x + h_of_x

    if best_mask is None:
        # no pattern beat staying put; return x unchanged
        current_mask = sum(1 << j for j in range(k) if x_B[j] != 0.0)
        return BlockSolveResult(
            x_next=x.copy(), pattern=current_mask, objective=F_of_x,
            patterns_evaluated=evaluated, composite_delta=0.0)

    x_next = x.copy()
    x_next[idx] = best_zB
    d = best_zB - x_B
    prox_term = 0.5 * theta * float(d @ d)
    composite_delta = best_delta - prox_term
    return BlockSolveResult(
        x_next=x_next, pattern=best_mask, objective=F_of_x + best_delta,
        patterns_evaluated=evaluated, composite_delta=composite_delta)
