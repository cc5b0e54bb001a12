"""Soft-margin SVM with a squared-slack penalty.

The primal problem is::

    minimize    1/2 |w|^2 + C * sum_i xi_i^2
    subject to  y_i (w . phi(x_i) + b) >= 1 - xi_i,   xi_i >= 0

Eliminating the slacks gives the hard-margin dual with the shifted kernel
``K(x_i, x_j) + delta_ij / (2 C)``::

    maximize    sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j (K_ij + delta_ij / (2C))
    subject to  a_i >= 0,  sum_i a_i y_i = 0

and the slacks are recovered as ``xi_i = a_i / (2 C)``.  The shifted kernel
is strictly positive definite, so the dual optimum is unique.  It is found
with pairwise coordinate ascent (SMO with second-order working-set
selection) followed by an active-set refinement that solves the KKT system
on the support exactly.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import unique_labels
from sklearn.utils.validation import check_is_fitted

from .base import check_labeled, check_point, check_points, to_examples
from .exceptions import ConvergenceFailure, DataError, SingleClassInput
from .kernels import KernelConfig

# SMO phase stops here; the active-set refinement takes over.
_SMO_WARM_TOL = 1e-3


@dataclass(frozen=True)
class SolverConfig:
    """Numerical settings of :func:`solve_soft_margin`.

    Parameters
    ----------
    C : float, default=1.0
        Penalty on the squared slacks.
    kkt_tolerance : float, default=1e-8
        Largest admissible KKT violation (maximal violating pair gap).
    sv_tolerance : float, default=1e-6
        Tolerance of the support-vector tests, both the residual of the
        margin constraint and the ``alpha > sv_tolerance`` test.
    max_iterations : int, default=100000
        Budget of pairwise updates.
    """

    C: float = 1.0
    kkt_tolerance: float = 1e-8
    sv_tolerance: float = 1e-6
    max_iterations: int = 100_000

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if not (self.kkt_tolerance > 0 and self.sv_tolerance > 0):
            raise ValueError("tolerances must be positive")
        if int(self.max_iterations) < 1:
            raise ValueError("max_iterations must be a positive integer")


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SvmSolution:
    """Optimum of the squared-slack soft-margin problem.

    All per-example arrays are aligned with the input order of ``X``/``y``.
    """

    alphas: np.ndarray
    bias: float
    slacks: np.ndarray
    objective: float
    sv_indices: tuple
    X: np.ndarray
    y: np.ndarray
    kernel: KernelConfig
    solver: SolverConfig
    n_iter: int = 0
    kkt_violation: float = 0.0
    margins: np.ndarray = field(default=None, repr=False)

    @property
    def C(self):
        return self.solver.C

    @property
    def examples(self):
        return to_examples(self.X, self.y)

    @property
    def n_features(self):
        return self.X.shape[1]

    @property
    def alpha_support(self):
        """Indices with ``alpha_i > sv_tolerance``, the multiplier-based SV set."""
        return tuple(int(i) for i in np.flatnonzero(self.alphas > self.solver.sv_tolerance))

    def decision_function(self, X):
        """``sum_i alpha_i y_i K(x_i, x) + b`` for every row of ``X``."""
        X = check_points(X, self.n_features)
        return self.kernel.gram(X, self.X) @ (self.alphas * self.y) + self.bias


def _canonical_order(X, y):
    # lexicographic on (features..., label): the solve becomes a function of
    # the example set, independent of the presentation order
    Z = np.column_stack([X, y])
    return np.lexsort(Z.T[::-1])


def _smo(Q, y, alpha, G, tol, max_iter):
    """Pairwise coordinate descent on ``1/2 a'Qa - 1'a``; updates in place."""
    diag = np.diag(Q).copy()
    gap = np.inf
    for it in range(max_iter):
        v = -y * G
        active = alpha > 0
        up = (y > 0) | active
        low = (y < 0) | active
        v_up = np.where(up, v, -np.inf)
        i = int(np.argmax(v_up))
        m_val = v_up[i]
        gap = m_val - np.min(np.where(low, v, np.inf))
        if gap <= tol:
            return it, gap
        b = m_val - v
        a = np.maximum(diag[i] + diag - 2.0 * y[i] * y * Q[i], 1e-15)
        score = np.where(low & (b > 0), -(b * b) / a, np.inf)
        j = int(np.argmin(score))
        lam = b[j] / a[j]
        if y[i] < 0:
            lam = min(lam, alpha[i])
        if y[j] > 0:
            lam = min(lam, alpha[j])
        alpha[i] += y[i] * lam
        alpha[j] -= y[j] * lam
        G += lam * (y[i] * Q[:, i] - y[j] * Q[:, j])
    return max_iter, gap


def _kkt_gap(G, y, alpha):
    v = -y * G
    active = alpha > 0
    return np.max(v[(y > 0) | active]) - np.min(v[(y < 0) | active])


def _refine(Q, y, alpha):
    """Active-set refinement: solve the KKT equalities on the support.

    Returns the refined multipliers, or None if the active set does not
    settle (the caller then keeps iterating SMO).
    """
    m = len(y)
    support = alpha > 0
    for _ in range(2 * m + 10):
        idx = np.flatnonzero(support)
        k = len(idx)
        if k == 0:
            return None
        A = np.zeros((k + 1, k + 1))
        A[:k, :k] = Q[np.ix_(idx, idx)]
        A[:k, k] = y[idx]
        A[k, :k] = y[idx]
        rhs = np.zeros(k + 1)
        rhs[:k] = 1.0
        try:
            sol = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            return None
        a_s, b = sol[:k], sol[k]
        if np.any(a_s <= 0):
            support[idx[np.argmin(a_s)]] = False
            continue
        trial = np.zeros(m)
        trial[idx] = a_s
        # outside the support: y_i f(x_i) >= 1  <=>  G_i + y_i b >= 0
        slack = Q @ trial - 1.0 + y * b
        slack[idx] = np.inf
        worst = int(np.argmin(slack))
        if slack[worst] < -1e-12 * max(1.0, np.max(np.abs(Q))):
            support[worst] = True
            continue
        return trial
    return None


def _solve_dual(K, y, C, tol, max_iter):
    yf = y.astype(float)
    Q = np.outer(yf, yf) * (K + np.eye(len(y)) / (2.0 * C))
    alpha = np.zeros(len(y))
    G = -np.ones(len(y))
    n_iter, gap = _smo(Q, yf, alpha, G, max(tol, _SMO_WARM_TOL), max_iter)
    refined = _refine(Q, yf, alpha)
    if refined is not None:
        G_ref = Q @ refined - 1.0
        gap_ref = _kkt_gap(G_ref, yf, refined)
        if gap_ref <= tol:
            return refined, n_iter, gap_ref
        if gap_ref < gap:
            alpha, G = refined, G_ref
    if gap > tol:
        more, gap = _smo(Q, yf, alpha, G, tol, max_iter - n_iter)
        n_iter += more
    if gap > tol:
        raise ConvergenceFailure(
            f"KKT violation {gap:.3e} above tolerance {tol:.1e} after {n_iter} iterations"
        )
    return alpha, n_iter, gap


def solve_soft_margin(X, y=None, kernel=None, solver=None):
    """Solve the squared-slack soft-margin SVM.

    Parameters
    ----------
    X : array-like of shape (m, n) or sequence of LabeledExample
    y : array-like of shape (m,), labels in {-1, +1}
        Omitted when ``X`` holds :class:`LabeledExample` objects.
    kernel : KernelConfig, default=linear
    solver : SolverConfig, default=SolverConfig()

    Returns
    -------
    SvmSolution

    Raises
    ------
    SingleClassInput
        If only one label is present (the optimum is then not unique).
    DimensionMismatch
    ConvergenceFailure
    """
    X, y = check_labeled(X, y)
    kernel = kernel if kernel is not None else KernelConfig()
    solver = solver if solver is not None else SolverConfig()
    C = float(solver.C)

    order = _canonical_order(X, y)
    Xs, ys = X[order], y[order]
    K = kernel.gram(Xs)
    alpha, n_iter, gap = _solve_dual(K, ys, C, solver.kkt_tolerance, int(solver.max_iterations))

    slacks = alpha / (2.0 * C)
    ay = alpha * ys
    f_no_bias = K @ ay
    sv_alpha = alpha > solver.sv_tolerance
    if np.any(sv_alpha):
        bias = float(np.mean(ys[sv_alpha] * (1.0 - slacks[sv_alpha]) - f_no_bias[sv_alpha]))
    else:
        v = ys * (1.0 - slacks) - f_no_bias
        bias = float(0.5 * (np.max(v[ys > 0]) + np.min(v[ys < 0])))
    objective = float(0.5 * ay @ f_no_bias + C * np.sum(slacks * slacks))
    margins_s = ys * (f_no_bias + bias)
    on_margin = np.abs(margins_s - (1.0 - slacks)) <= solver.sv_tolerance

    inverse = np.empty_like(order)
    inverse[order] = np.arange(len(order))
    return SvmSolution(
        alphas=_frozen(alpha[inverse]),
        bias=bias,
        slacks=_frozen(slacks[inverse]),
        objective=objective,
        sv_indices=tuple(int(i) for i in np.flatnonzero(on_margin[inverse])),
        X=_frozen(X),
        y=_frozen(y),
        kernel=kernel,
        solver=solver,
        n_iter=n_iter,
        kkt_violation=float(gap),
        margins=_frozen(margins_s[inverse]),
    )


def support_vector_set(solution):
    """Indices whose margin constraint holds with equality.

    Recomputed from the decision values: ``|y_i f(x_i) - (1 - xi_i)| <=
    sv_tolerance``.
    """
    f = solution.decision_function(solution.X)
    resid = np.abs(solution.y * f - (1.0 - solution.slacks))
    return tuple(int(i) for i in np.flatnonzero(resid <= solution.solver.sv_tolerance))


def decision_value(solution, x):
    """Decision value ``(w . x) + b`` of a single point via the dual expansion."""
    x = check_point(x, solution.n_features)
    return float(solution.decision_function(x[None, :])[0])


def is_essential_support_vector(X, y=None, kernel=None, solver=None, j=0):
    """Whether deleting example ``j`` leaves the optimal value unchanged.

    Deleting the term ``xi_j^2`` and the constraints of example ``j`` is the
    same as dropping the example, so the problem is re-solved on the
    remaining ``m - 1`` examples and the objectives are compared with a
    relative tolerance of ``kkt_tolerance``.

    Raises
    ------
    SingleClassInput
        If the deletion leaves a single class.
    """
    X, y = check_labeled(X, y)
    solver = solver if solver is not None else SolverConfig()
    if not 0 <= j < len(y):
        raise IndexError(f"example index {j} out of range for {len(y)} examples")
    keep = np.arange(len(y)) != j
    if len(np.unique(y[keep])) < 2:
        raise SingleClassInput(f"deleting example {j} leaves a single class")
    full = solve_soft_margin(X, y, kernel, solver).objective
    reduced = solve_soft_margin(X[keep], y[keep], kernel, solver).objective
    return abs(full - reduced) <= solver.kkt_tolerance * (1.0 + abs(full))


class L2SoftMarginSVC(ClassifierMixin, BaseEstimator):
    """Binary SVM classifier with squared slacks (inductive use).

    Parameters
    ----------
    C : float, default=1.0
    kernel : {'linear', 'poly', 'rbf'}, default='linear'
    degree : int, default=2
    coef0 : float, default=1.0
    gamma : float, default=1.0
    kkt_tol : float, default=1e-8
    sv_tol : float, default=1e-6
    max_iter : int, default=100000

    Attributes
    ----------
    classes_ : ndarray of shape (2,)
        ``classes_[0]`` is encoded as -1 and ``classes_[1]`` as +1.
    solution_ : SvmSolution
    support_ : ndarray
        Indices whose margin constraint is tight.
    dual_coef_ : ndarray of shape (n_samples,)
        ``alpha_i * y_i``.
    intercept_ : float
    """

    def __init__(self, C=1.0, kernel="linear", degree=2, coef0=1.0, gamma=1.0,
                 kkt_tol=1e-8, sv_tol=1e-6, max_iter=100_000):
        self.C = C
        self.kernel = kernel
        self.degree = degree
        self.coef0 = coef0
        self.gamma = gamma
        self.kkt_tol = kkt_tol
        self.sv_tol = sv_tol
        self.max_iter = max_iter

    def _configs(self):
        return (
            KernelConfig(self.kernel, self.degree, self.coef0, self.gamma),
            SolverConfig(self.C, self.kkt_tol, self.sv_tol, self.max_iter),
        )

    def _encode(self, y):
        y = np.asarray(y)
        self.classes_ = unique_labels(y)
        if len(self.classes_) != 2:
            if len(self.classes_) < 2:
                raise SingleClassInput("both classes must be present")
            raise DataError(f"binary problems only, got {len(self.classes_)} classes")
        return np.where(y == self.classes_[1], 1, -1)

    def fit(self, X, y):
        y_pm = self._encode(y)
        kernel, solver = self._configs()
        self.solution_ = solve_soft_margin(X, y_pm, kernel, solver)
        self.n_features_in_ = self.solution_.n_features
        self.support_ = np.asarray(self.solution_.sv_indices, dtype=int)
        self.dual_coef_ = self.solution_.alphas * self.solution_.y
        self.intercept_ = self.solution_.bias
        return self

    @property
    def coef_(self):
        check_is_fitted(self)
        if self.kernel != "linear":
            raise AttributeError("coef_ is only available for the linear kernel")
        return self.dual_coef_ @ self.solution_.X

    def decision_function(self, X):
        check_is_fitted(self)
        return self.solution_.decision_function(X)

    def predict(self, X):
        return self.classes_[(self.decision_function(X) > 0).astype(int)]
