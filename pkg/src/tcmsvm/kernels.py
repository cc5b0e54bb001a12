"""Kernel functions and Gram matrices."""

from dataclasses import dataclass

import numpy as np

KERNEL_KINDS = ("linear", "polynomial", "rbf")


@dataclass(frozen=True)
class KernelConfig:
    """Kernel specification.

    Parameters
    ----------
    kind : {'linear', 'polynomial', 'rbf'}
        ``'poly'`` is accepted as an alias of ``'polynomial'``.
    degree : int, default=2
        Polynomial degree, ``(x . x' + coef0) ** degree``.
    coef0 : float, default=1.0
        Polynomial offset.
    gamma : float, default=1.0
        RBF width, ``exp(-gamma * |x - x'|**2)``.
    """

    kind: str = "linear"
    degree: int = 2
    coef0: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        kind = "polynomial" if self.kind == "poly" else self.kind
        object.__setattr__(self, "kind", kind)
        if kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if kind == "polynomial" and (int(self.degree) != self.degree or self.degree < 1):
            raise ValueError(f"polynomial degree must be a positive integer, got {self.degree}")
        if kind == "rbf" and not self.gamma > 0:
            raise ValueError(f"rbf gamma must be positive, got {self.gamma}")

    def gram(self, A, B=None):
        """Kernel matrix between the rows of ``A`` and ``B`` (``B=A`` if omitted)."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        B = A if B is None else np.atleast_2d(np.asarray(B, dtype=float))
        if self.kind == "linear":
            return A @ B.T
        if self.kind == "polynomial":
            return (A @ B.T + self.coef0) ** int(self.degree)
        sq = (
            np.sum(A * A, axis=1)[:, None]
            + np.sum(B * B, axis=1)[None, :]
            - 2.0 * (A @ B.T)
        )
        return np.exp(-self.gamma * np.maximum(sq, 0.0))

    def __call__(self, x, z):
        return float(self.gram(np.asarray(x, dtype=float)[None, :], np.asarray(z, dtype=float)[None, :])[0, 0])
