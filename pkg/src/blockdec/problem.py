"""Quadratic objectives, sparsity terms, and the composite objective F = f + h.

The smooth part f is a convex quadratic given either directly by its Gram data
(Q, p), meaning f(x) = 1/2 x'Qx + p'x, or in factored least-squares form
(A, b), meaning f(x) = 1/2 ||Ax - b||^2.  The two forms agree up to the
constant 1/2 ||b||^2 when Q = A'A and p = -A'b.

The nonsmooth part h is one of four sparsity terms: a hard cardinality cap,
a count penalty, or one of two separable relaxations (l1 and l1/2) used by
the gradient-type baseline solvers.
"""

import numpy as np

from . import prox
from .errors import DimensionMismatchError, InvalidParameterError, NumericalError


class _InfeasibleValue:
    """Sentinel for the objective value of an infeasible point.

    Ordered strictly above every real number so that argmin-style comparisons
    work; any attempt to do arithmetic with it is a programming error and
    trips an assertion rather than propagating a NaN.
    """

    _singleton = None

    def __new__(cls):
        if cls._singleton is None:
            cls._singleton = super().__new__(cls)
        return cls._singleton

    def __repr__(self):
        return "INFEASIBLE"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("blockdec-infeasible")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def _no_arithmetic(self, *args):
        raise AssertionError("arithmetic with the infeasible sentinel is forbidden")

    __add__ = __radd__ = __sub__ = __rsub__ = _no_arithmetic
    __mul__ = __rmul__ = __truediv__ = __rtruediv__ = _no_arithmetic
    __neg__ = __abs__ = __float__ = _no_arithmetic


INFEASIBLE = _InfeasibleValue()


def _as_vector(x, n, name="x"):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatchError(f"{name} has shape {x.shape}, expected ({n},)")
    return x


# ---------------------------------------------------------------------------
# sparsity terms


class Cardinality:
    """Indicator of the cardinality ball: h(x) = 0 if ||x||_0 <= s, else +inf."""

    def __init__(self, s):
        if int(s) != s or s < 1:
            raise InvalidParameterError(f"cardinality bound must be a positive integer, got {s}")
        self.s = int(s)

    def __repr__(self):
        return f"Cardinality(s={self.s})"

    def feasible(self, x):
        return int(np.count_nonzero(x)) <= self.s

    def value(self, x):
        return 0.0 if self.feasible(x) else INFEASIBLE

    def prox(self, a, step):
        # the indicator's proximal map is projection: keep the s largest
        return prox.hard_threshold_topk(a, self.s)


class L0Penalty:
    """Count penalty h(x) = lam * ||x||_0."""

    def __init__(self, lam):
        if not lam > 0:
            raise InvalidParameterError(f"penalty weight must be positive, got {lam}")
        self.lam = float(lam)

    def __repr__(self):
        return f"L0Penalty(lam={self.lam})"

    def value(self, x):
        return self.lam * int(np.count_nonzero(x))

    def prox(self, a, step):
        return prox.prox_l0_penalty(a, step, self.lam)


class L1Penalty:
    """Convex relaxation h(x) = lam * ||x||_1."""

    def __init__(self, lam):
        if not lam >= 0:
            raise InvalidParameterError(f"penalty weight must be nonnegative, got {lam}")
        self.lam = float(lam)

    def __repr__(self):
        return f"L1Penalty(lam={self.lam})"

    def value(self, x):
        return self.lam * float(np.sum(np.abs(x)))

    def prox(self, a, step):
        return prox.soft_threshold(a, step * self.lam)


class HalfPenalty:
    """Nonconvex relaxation h(x) = lam * sum_i |x_i|^(1/2)."""

    def __init__(self, lam):
        if not lam > 0:
            raise InvalidParameterError(f"penalty weight must be positive, got {lam}")
        self.lam = float(lam)

    def __repr__(self):
        return f"HalfPenalty(lam={self.lam})"

    def value(self, x):
        return self.lam * float(np.sum(np.sqrt(np.abs(x))))

    def prox(self, a, step):
        return prox.half_threshold(a, step * self.lam)


#: terms the combinatorial solver can handle (exact l0 structure)
L0_TERMS = (Cardinality, L0Penalty)
#: every term a proximal-gradient solver can handle
ALL_TERMS = (Cardinality, L0Penalty, L1Penalty, HalfPenalty)


# ---------------------------------------------------------------------------
# smooth quadratic objective


# Factored instances at or below this dimension cache the Gram data; the
# block subproblem extracts many small Q submatrices and the cache makes
# that a plain slice.
_GRAM_CACHE_LIMIT = 4096

# Dense eigensolve is cheap up to this size; beyond it the spectral norm is
# estimated iteratively.
_DENSE_EIG_LIMIT = 64


class QuadraticObjective:
    """Convex quadratic f in Gram form (Q, p) or factored form (A, b).

    Use the ``from_gram`` / ``from_factored`` constructors.  Instances are
    immutable after construction and safe to share across threads; the only
    mutation is a one-time fill of the lazily computed Gram cache and
    spectral-norm estimate.
    """

    def __init__(self, *, Q=None, p=None, A=None, b=None):
        if (Q is None) == (A is None):
            raise InvalidParameterError("provide exactly one of Gram (Q, p) or factored (A, b) data")
        if Q is not None:
            Q = np.asarray(Q, dtype=float)
            if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
                raise DimensionMismatchError(f"Q must be square, got shape {Q.shape}")
            scale = np.max(np.abs(Q)) if Q.size else 0.0
            if scale > 0 and np.max(np.abs(Q - Q.T)) > 1e-12 * scale:
                raise InvalidParameterError("Q must be symmetric (1e-12 relative)")
            if np.any(np.diag(Q) < 0):
                raise InvalidParameterError("Q has a negative diagonal entry")
            p = _as_vector(p, Q.shape[0], "p")
            self.n = Q.shape[0]
            self.m = None
            self._Q = 0.5 * (Q + Q.T)
            self._p = p.copy()
            self._A = None
            self._b = None
        else:
            A = np.asarray(A, dtype=float)
            if A.ndim != 2:
                raise DimensionMismatchError(f"A must be a matrix, got shape {A.shape}")
            b = _as_vector(b, A.shape[0], "b")
            self.n = A.shape[1]
            self.m = A.shape[0]
            self._A = A.copy()
            self._b = b.copy()
            self._Q = None
            self._p = None
        self._lip = None

    @classmethod
    def from_gram(cls, Q, p):
        return cls(Q=Q, p=p)

    @classmethod
    def from_factored(cls, A, b):
        return cls(A=A, b=b)

    @property
    def is_factored(self):
        return self._A is not None

    def __repr__(self):
        form = f"factored {self.m}x{self.n}" if self.is_factored else f"gram {self.n}x{self.n}"
        return f"QuadraticObjective({form})"

    # -- evaluation ---------------------------------------------------------

    def value(self, x):
        x = _as_vector(x, self.n)
        if self.is_factored:
            r = self._A @ x - self._b
            return 0.5 * float(r @ r)
        return 0.5 * float(x @ (self._Q @ x)) + float(self._p @ x)

    def gradient(self, x):
        x = _as_vector(x, self.n)
        if self.is_factored:
            return self._A.T @ (self._A @ x - self._b)
        return self._Q @ x + self._p

    # -- Gram access (used by the block subproblem) -------------------------

    def _ensure_gram(self):
        if self._Q is None:
            self._Q = self._A.T @ self._A
            self._p = -(self._A.T @ self._b)

    def gram_matrix(self):
        """Full Q (cached for factored instances up to the cache limit)."""
        if self._Q is None and self.n > _GRAM_CACHE_LIMIT:
            raise InvalidParameterError(
                f"dense Gram matrix not materialized for n = {self.n} > {_GRAM_CACHE_LIMIT}")
        self._ensure_gram()
        return self._Q

    def gram_submatrix(self, idx):
        """Q[idx, idx] as a dense square block."""
        idx = np.asarray(idx, dtype=int)
        if self._Q is None and self.n > _GRAM_CACHE_LIMIT:
            cols = self._A[:, idx]
            return cols.T @ cols
        self._ensure_gram()
        return self._Q[np.ix_(idx, idx)]

    def linear_term(self, idx=None):
        """p (or p[idx]); for factored data p = -A'b."""
        if self._p is None:
            if self.n > _GRAM_CACHE_LIMIT:
                p_idx = -(self._A[:, idx].T @ self._b) if idx is not None else -(self._A.T @ self._b)
                return p_idx
            self._ensure_gram()
        return self._p if idx is None else self._p[idx]

    def matvec(self, v):
        """Q @ v without forming Q when operating column-wise."""
        v = _as_vector(v, self.n, "v")
        if self._Q is not None:
            return self._Q @ v
        if self.n <= _GRAM_CACHE_LIMIT:
            self._ensure_gram()
            return self._Q @ v
        return self._A.T @ (self._A @ v)

    # -- curvature ----------------------------------------------------------

    def coordinate_lipschitz(self):
        """Per-coordinate gradient Lipschitz constants: the diagonal of Q."""
        if self.is_factored and self._Q is None:
            return np.einsum("ij,ij->j", self._A, self._A)
        self._ensure_gram()
        return np.diag(self._Q).copy()

    def lipschitz_global(self):
        """The spectral norm of Q (largest eigenvalue), cached."""
        if self._lip is None:
            self._lip = self._spectral_norm()
        return self._lip

    def _spectral_norm(self):
        if self.n <= _DENSE_EIG_LIMIT:
            evals = np.linalg.eigvalsh(self.gram_matrix())
            return float(max(evals[-1], 0.0))
        # power iteration with a fixed, seeded start vector; falls back to a
        # Lanczos eigensolve if 200 iterations cannot certify convergence
        rng = np.random.Generator(np.random.PCG64(0))
        v = rng.standard_normal(self.n)
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(200):
            w = self.matvec(v)
            norm = np.linalg.norm(w)
            if norm == 0.0:
                return 0.0
            lam_new = float(v @ w)
            v = w / norm
            if abs(lam_new - lam) <= 1e-10 * max(1.0, abs(lam_new)):
                return lam_new
            lam = lam_new
        try:
            from scipy.sparse.linalg import LinearOperator, eigsh

            op = LinearOperator((self.n, self.n), matvec=self.matvec, dtype=float)
            val = eigsh(op, k=1, which="LA", v0=v, return_eigenvectors=False)
            return float(max(val[0], lam))
        except Exception as exc:  # pragma: no cover - only on solver breakdown
            raise NumericalError(f"spectral norm estimate did not converge: {exc}") from exc


# ---------------------------------------------------------------------------
# composite problem


class CompositeProblem:
    """The composite objective F(x) = f(x) + h(x)."""

    def __init__(self, objective, term):
        if not isinstance(objective, QuadraticObjective):
            raise InvalidParameterError("objective must be a QuadraticObjective")
        if not isinstance(term, ALL_TERMS):
            raise InvalidParameterError(f"unsupported sparsity term {term!r}")
        if isinstance(term, Cardinality) and term.s > objective.n:
            raise InvalidParameterError(
                f"cardinality bound {term.s} exceeds dimension {objective.n}")
        self.objective = objective
        self.term = term

    @property
    def n(self):
        return self.objective.n

    def __repr__(self):
        return f"CompositeProblem({self.objective!r}, {self.term!r})"

    def value(self, x):
        return composite_value(self, x)


def composite_value(prob, x):
    """F(x) = f(x) + h(x); the infeasible sentinel for an over-budget point.

    The nonzero count uses exact comparison against 0.0 -- no epsilon.
    """
    x = _as_vector(x, prob.n)
    h = prob.term.value(x)
    if h is INFEASIBLE:
        return INFEASIBLE
    return prob.objective.value(x) + h
