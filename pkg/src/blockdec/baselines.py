"""Reference solvers: proximal gradient, its accelerated variant, orthogonal
matching pursuit, and an l1 sweep with debiasing.

All gradient-type methods use the fixed step 1/L (L the spectral norm of the
quadratic's matrix) and the same windowed stopping rule as the decomposition
solver, so traces are directly comparable.
"""

import numpy as np

from .dec import IterationRecord, SolveTrace, relative_drop, stopping_rule
from .errors import InvalidParameterError
from .problem import (INFEASIBLE, Cardinality, CompositeProblem, L1Penalty,
                      QuadraticObjective, composite_value)
from .prox import hard_threshold_topk, proximal_step


def _start_value(prob, x):
    f = composite_value(prob, x)
    if f is INFEASIBLE:
        raise InvalidParameterError("infeasible start for the constrained problem")
    return f


def _step_size(prob):
    L = prob.objective.lipschitz_global()
    if not L > 0:
        raise InvalidParameterError("zero quadratic: no meaningful step size 1/L")
    return 1.0 / L


def pgm(prob, x0, max_iters=1000, epsilon=1e-5, window=50):
    """Proximal-gradient method with fixed step 1/L; returns (x, trace)."""
    beta = _step_size(prob)
    x = np.array(x0, dtype=float)
    f = _start_value(prob, x)
    trace = SolveTrace()
    drops = []
    for t in range(max_iters):
        x_new = proximal_step(prob, x, beta)
        f_new = composite_value(prob, x_new)
        step = float(np.linalg.norm(x_new - x))
        trace.records.append(IterationRecord(
            iteration=t, objective=f, step_norm=step, working_set=(), elapsed=0.0))
        drops.append(relative_drop(f, f_new))
        x, f = x_new, f_new
        if stopping_rule(drops, window, epsilon):
            trace.status = "converged"
            break
    else:
        trace.status = "max_iters"
    trace.final_objective = f
    return x, trace


def apgm(prob, x0, max_iters=1000, epsilon=1e-5, window=50):
    """Accelerated proximal gradient (Nesterov extrapolation, no restarts).

    The objective sequence need not be monotone; the stopping rule uses the
    signed relative drops as-is.
    """
    beta = _step_size(prob)
    x = np.array(x0, dtype=float)
    y = x.copy()
    tau = 1.0
    f = _start_value(prob, x)
    trace = SolveTrace()
    drops = []
    for t in range(max_iters):
        x_new = proximal_step(prob, y, beta)
        tau_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * tau * tau))
        y = x_new + ((tau - 1.0) / tau_new) * (x_new - x)
        f_new = composite_value(prob, x_new)
        if f_new is INFEASIBLE:  # cannot happen: the prox output is feasible
            raise AssertionError("proximal step produced an infeasible point")
        step = float(np.linalg.norm(x_new - x))
        trace.records.append(IterationRecord(
            iteration=t, objective=f, step_norm=step, working_set=(), elapsed=0.0))
        drops.append(relative_drop(f, f_new))
        x, f, tau = x_new, f_new, tau_new
        if stopping_rule(drops, window, epsilon):
            trace.status = "converged"
            break
    else:
        trace.status = "max_iters"
    trace.final_objective = f
    return x, trace


def omp(A, b, s):
    """Orthogonal matching pursuit: greedy column selection with refitting.

    Each round adds the column most correlated with the residual (ties go to
    the lowest index) and refits by least squares on the support.  Stops
    early if the residual is numerically zero.  Returns the n-vector.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise InvalidParameterError(
            f"incompatible shapes A {A.shape}, b {b.shape}")
    m, n = A.shape
    if int(s) != s or not 0 <= s <= n:
        raise InvalidParameterError(f"sparsity level {s} outside [0, {n}]")
    col_norms = np.linalg.norm(A, axis=0)
    if np.any(col_norms == 0.0):
        raise InvalidParameterError("matrix has a zero column")

    support = []
    x = np.zeros(n)
    r = b.copy()
    for _ in range(int(s)):
        if np.linalg.norm(r) <= 1e-14 * max(1.0, np.linalg.norm(b)):
            break
        corr = np.abs(A.T @ r)
        corr[support] = -1.0  # already-selected columns are orthogonal anyway
        j = int(np.argmax(corr))  # first maximum: ties break to lowest index
        support.append(j)
        cols = A[:, support]
        coef = np.linalg.lstsq(cols, b, rcond=None)[0]
        r = b - cols @ coef
    x[support] = coef if support else 0.0
    return x


DEFAULT_L1_GRID = tuple(2.0 ** j for j in range(-10, 11, 2))


def cvx_l1_sweep(A, b, s, grid=DEFAULT_L1_GRID, max_iters=1000,
                 epsilon=1e-5, window=50):
    """Convex surrogate: l1 sweep, truncate to s terms, debias by refitting.

    For each weight in the grid, solves the l1-penalized least squares by
    proximal gradient from zero, keeps the s largest-magnitude coordinates,
    refits those by least squares, and returns the refit with the smallest
    residual objective 1/2||Ax - b||^2 (ties to the earliest grid entry).
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if int(s) != s or not 0 <= s <= n:
        raise InvalidParameterError(f"sparsity level {s} outside [0, {n}]")
    obj = QuadraticObjective(A=A, b=b)
    best_x, best_f = np.zeros(n), 0.5 * float(b @ b)
    for lam in grid:
        relax = CompositeProblem(obj, L1Penalty(lam))
        xr, _ = pgm(relax, np.zeros(n), max_iters=max_iters,
                    epsilon=epsilon, window=window)
        xs = hard_threshold_topk(xr, int(s))
        supp = np.flatnonzero(xs)
        x = np.zeros(n)
        if supp.size:
            coef = np.linalg.lstsq(A[:, supp], b, rcond=None)[0]
            x[supp] = coef
        r = A @ x - b
        f = 0.5 * float(r @ r)
        if f < best_f - 1e-12:
            best_x, best_f = x, f
    return best_x


def iht(prob, x0, **kwargs):
    """Iterative hard thresholding is proximal gradient on an l0 term."""
    if not isinstance(prob.term, Cardinality):
        raise InvalidParameterError("iterative hard thresholding needs a cardinality term")
    return pgm(prob, x0, **kwargs)
