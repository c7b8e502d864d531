"""Freundlich sorption isotherm and the total-concentration map.

The dissolved concentration u and the sorbed concentration Psi(u) = a*u**p
add up to the conserved total F(u) = u + a*u**p. For 0 < p < 1 the
derivative F'(u) blows up at u = 0, which is the regime where fronts
self-sharpen; p > 1 gives the opposite behavior. All schemes work on the
conserved variable and recover u through `invert`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, NewtonError, RangeViolationError


@dataclass(frozen=True)
class NewtonConfig:
    """Tolerances of the scalar Newton solves.

    abs_tol is an absolute residual tolerance on F(X) + gamma*X - R.
    reg_floor caps F' near u = 0 for p < 1 (the exact derivative is
    unbounded there); the capped value is only used to size Newton steps,
    never in the scheme itself.
    """

    abs_tol: float = 1e-12
    max_iter: int = 50
    reg_floor: float = 1e-6

    def __post_init__(self) -> None:
        if not self.abs_tol > 0.0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be at least 1, got {self.max_iter}")
        if not self.reg_floor > 0.0:
            raise DomainError(f"reg_floor must be positive, got {self.reg_floor}")


DEFAULT_NEWTON = NewtonConfig()

# converged cell values this far below zero are treated as roundoff
CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class IsothermSpec:
    """Freundlich isotherm with coefficient a and exponent p."""

    a: float = 1.0
    p: float = 0.5

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise DomainError(f"isotherm coefficient a must be positive, got {self.a}")
        if not self.p > 0.0:
            raise DomainError(f"isotherm exponent p must be positive, got {self.p}")

    def F(self, u):
        """Total concentration u + a*u**p for u >= 0."""
        u = np.asarray(u, dtype=np.float64)
        if np.any(u < 0.0):
            raise DomainError(
                f"concentration must be nonnegative, got minimum {float(np.min(u))}")
        return u + self.a * u ** self.p

    def dF(self, u, reg_floor: float = DEFAULT_NEWTON.reg_floor):
        """Regularized derivative 1 + p*a*max(|u|, reg_floor)**(p-1).

        Never raises: out-of-range inputs (negative round-off, overshoot of
        an unstable explicit run) are evaluated at |u|, which keeps the
        schemes' slope corrections finite.
        """
        u = np.asarray(u, dtype=np.float64)
        au = np.maximum(np.abs(u), reg_floor)
        return 1.0 + self.p * self.a * au ** (self.p - 1.0)

    def invert(self, q, u0=None, newton: NewtonConfig = DEFAULT_NEWTON):
        """Solve F(u) = q elementwise.

        The root is bracketed by [min(q, 0), max(q, 0)] since F is strictly
        increasing with F(0) = 0. The starting guess defaults to q itself
        (exact when q = 0, an overestimate otherwise); Newton steps leaving
        the bracket fall back to its midpoint. Converged values in
        (-1e-10, 0) are clamped to zero; anything below that raises
        RangeViolationError.
        """
        q = np.asarray(q, dtype=np.float64)
        scalar = q.ndim == 0
        qf = np.atleast_1d(q).astype(np.float64).ravel()
        if u0 is None:
            uf = qf.copy()
        else:
            uf = np.broadcast_to(np.asarray(u0, dtype=np.float64), q.shape)
            uf = np.atleast_1d(uf).astype(np.float64).ravel().copy()
        iters, ok = kernels.invert_range(uf, qf, self.a, self.p, 0, qf.shape[0],
                                         newton.abs_tol, newton.max_iter,
                                         newton.reg_floor)
        if not ok:
            res = uf + self.a * np.sign(uf) * np.abs(uf) ** self.p - qf
            worst = int(np.argmax(np.abs(res)))
            raise NewtonError(
                f"isotherm inversion did not converge in {newton.max_iter} iterations",
                last_iterate=float(uf[worst]),
                residual=float(res[worst]),
            )
        neg = uf < 0.0
        if np.any(neg):
            floor = float(uf.min())
            if floor <= -CLAMP_TOL:
                raise RangeViolationError(
                    f"inverted concentration {floor} is below the clamp tolerance"
                )
            uf[neg] = 0.0
        out = uf.reshape(np.atleast_1d(q).shape)
        if scalar:
            return float(out[0])
        return out
