"""Delta-potential chains: boundary matrices, coupling corrections, determinants.

The chain solution needs nothing beyond the free kernel evaluated at the wall
positions: the corrected Green's function is

    g(x, x') = g0(x, x') - u^T W Lambda^{-1} v,
    Lambda = I + G0 W,  W = diag(weight(a_i) * lambda_i),

and the strong-coupling (impenetrable wall) limit replaces W Lambda^{-1} with
G0^{-1}.  Everything goes through LU with partial pivoting; determinants are
accumulated as SignLog so they survive any magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, NearPoleError, SingularMatrixError
from .greens import FreeGreens, Geometry, NATURAL_UNITS, UnitSystem, weight
from .specfun import SignLog

_MAX_WALLS = 64
_PIVOT_FLOOR = 1e-300
_NEAR_POLE_RATIO = 1e-12


class _AllInfinite:
    """Singleton marker: every coupling is infinite (impenetrable walls)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ALL_INFINITE"


ALL_INFINITE = _AllInfinite()


@dataclass(frozen=True)
class DeltaChain:
    """Ordered delta-potential walls with rescaled couplings.

    `lambdas` stores the rescaled couplings 2 m mu / hbar^2 (or the
    ALL_INFINITE marker); use :meth:`from_couplings` to build a chain from
    the raw physical strengths mu_j.  Negative couplings are accepted: the
    single-wall algebra is coupling-sign agnostic and an attractive wall is
    how the bound-state pole is probed.
    """

    geometry: Geometry
    positions: tuple
    lambdas: Union[tuple, _AllInfinite]
    units: UnitSystem = NATURAL_UNITS

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        positions = tuple(float(p) for p in self.positions)
        object.__setattr__(self, "positions", positions)
        if len(positions) < 1:
            raise DomainError("DeltaChain needs at least one wall")
        if len(positions) > _MAX_WALLS:
            raise DomainError(f"DeltaChain supports at most {_MAX_WALLS} walls")
        for lo, hi in zip(positions, positions[1:]):
            if not lo < hi:
                raise DomainError(
                    "wall positions must be strictly increasing (coincident walls "
                    "make the boundary matrix singular)"
                )
        if self.geometry in (Geometry.CYLINDRICAL, Geometry.SPHERICAL):
            if positions[0] <= 0.0:
                raise DomainError(f"{self.geometry.value} wall positions must be positive")
        if self.lambdas is not ALL_INFINITE:
            lams = tuple(float(l) for l in self.lambdas)
            if len(lams) != len(positions):
                raise DomainError("one coupling per wall is required")
            if not all(math.isfinite(l) for l in lams):
                raise DomainError(
                    "couplings must all be finite; use ALL_INFINITE for the "
                    "strong-coupling limit (mixed chains are rejected)"
                )
            object.__setattr__(self, "lambdas", lams)

    @classmethod
    def from_couplings(cls, geometry, positions: Sequence[float],
                       couplings, units: UnitSystem = NATURAL_UNITS) -> "DeltaChain":
        """Build a chain from raw delta strengths mu_j (rescaled to 2 m mu / hbar^2)."""
        if couplings is ALL_INFINITE:
            lams = ALL_INFINITE
        else:
            scale = 2.0 * units.mass / (units.hbar * units.hbar)
            lams = tuple(scale * float(mu) for mu in couplings)
        return cls(geometry, tuple(positions), lams, units)

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def is_strong(self) -> bool:
        return self.lambdas is ALL_INFINITE


@dataclass(frozen=True)
class BoundaryMatrix:
    """g0 evaluated at all wall pairs; its determinant is the characteristic function."""

    entries: np.ndarray
    param: float


@dataclass(frozen=True)
class LambdaMatrix:
    """I + G0 W with W = diag(weight(a_i) * lambda_i), column-scaled."""

    entries: np.ndarray
    w_lambda: np.ndarray


@dataclass(frozen=True)
class LUFactors:
    """Partial-pivoting LU of a small dense matrix.

    `lu` packs L (unit diagonal, below) and U (on and above); `perm` maps
    factored row -> original row; `parity` is the permutation sign.
    """

    lu: np.ndarray
    perm: np.ndarray
    parity: int
    norm: float
    min_pivot: float

    @property
    def n(self) -> int:
        return self.lu.shape[0]


def boundary_matrix(chain: DeltaChain, g0: FreeGreens, param: float) -> BoundaryMatrix:
    """Evaluate g0 at every unordered wall pair (symmetric by construction)."""
    n = chain.n
    entries = np.empty((n, n), dtype=float)
    for i in range(n):
        for j in range(i, n):
            val = g0.evaluate(chain.positions[i], chain.positions[j], param)
            entries[i, j] = val
            entries[j, i] = val
        if not math.isfinite(entries[i, i]):
            raise DomainError(
                f"g0 is not finite at coincidence for wall {i}; the chain "
                "algebra requires finite diagonal entries"
            )
    return BoundaryMatrix(entries=entries, param=param)


def lambda_matrix(G0: BoundaryMatrix, chain: DeltaChain,
                  weight_fn: Optional[Callable[[float], float]] = None) -> LambdaMatrix:
    """Finite-coupling system matrix I + G0 W.

    The coupling of column j is scaled by the measure weight of wall j
    (Lambda_ij = delta_ij + w_j lambda_j g0(a_i, a_j)); `weight_fn` overrides
    the geometry dispatch for custom kernels.
    """
    if chain.is_strong:
        raise DomainError(
            "an all-infinite chain has no finite Lambda matrix; use the "
            "strong-coupling path"
        )
    if weight_fn is None:
        weight_fn = lambda a: weight(chain.geometry, a)
    w_lambda = np.array(
        [weight_fn(a) * lam for a, lam in zip(chain.positions, chain.lambdas)], dtype=float
    )
    entries = np.eye(chain.n) + G0.entries * w_lambda[np.newaxis, :]
    return LambdaMatrix(entries=entries, w_lambda=w_lambda)


def lu(A: np.ndarray) -> LUFactors:
    """LU with partial pivoting for matrices up to 64x64.

    Raises SingularMatrixError when a pivot collapses below 1e-300; solves
    additionally refuse factors whose smallest pivot is within 1e-12 of the
    matrix norm (see :func:`solve`).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"lu expects a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n > _MAX_WALLS:
        raise DomainError(f"lu supports at most {_MAX_WALLS} rows")
    norm = float(np.abs(A).sum(axis=1).max())
    packed = A.copy()
    perm = np.arange(n)
    parity = 1
    min_pivot = math.inf
    for k in range(n):
        p = k + int(np.argmax(np.abs(packed[k:, k])))
        if p != k:
            packed[[k, p], :] = packed[[p, k], :]
            perm[[k, p]] = perm[[p, k]]
            parity = -parity
        pivot = packed[k, k]
        if abs(pivot) < _PIVOT_FLOOR:
            raise SingularMatrixError(f"singular matrix: pivot {pivot} at column {k}")
        min_pivot = min(min_pivot, abs(pivot))
        if k + 1 < n:
            packed[k + 1:, k] /= pivot
            packed[k + 1:, k + 1:] -= np.outer(packed[k + 1:, k], packed[k, k + 1:])
    return LUFactors(lu=packed, perm=perm, parity=parity, norm=norm, min_pivot=min_pivot)


def solve(factors: LUFactors, rhs: np.ndarray) -> np.ndarray:
    """Solve A x = rhs from the LU factors.

    Refuses near-singular factors (min pivot < 1e-12 * ||A||): for
    characteristic matrices that means the spectral parameter sits on a pole
    of the corrected Green's function.
    """
    if factors.min_pivot < _NEAR_POLE_RATIO * factors.norm:
        raise NearPoleError(
            "matrix is numerically singular (pivot below 1e-12 of the norm); "
            "the parameter sits on or near a characteristic root"
        )
    rhs = np.asarray(rhs, dtype=float)
    x = rhs[factors.perm].astype(float)
    n = factors.n
    packed = factors.lu
    for i in range(1, n):
        x[i] -= packed[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= packed[i, i + 1:] @ x[i + 1:]
        x[i] /= packed[i, i]
    return x


def det(factors: LUFactors) -> SignLog:
    """Determinant as a SignLog: product of pivots times the permutation sign."""
    out = SignLog(factors.parity, 0.0)
    for d in np.diagonal(factors.lu):
        out = out * SignLog.from_value(float(d))
    return out


def _wall_vectors(chain: DeltaChain, g0: FreeGreens, x: float, xp: float, param: float):
    u = np.array([g0.evaluate(x, a, param) for a in chain.positions])
    v = np.array([g0.evaluate(a, xp, param) for a in chain.positions])
    return u, v


def greens_finite(chain: DeltaChain, g0: FreeGreens, x: float, xp: float,
                  param: float) -> float:
    """Corrected Green's function for finite couplings: g0 - u^T W Lambda^{-1} v."""
    if chain.is_strong:
        raise DomainError("chain has infinite couplings; use greens_strong")
    G0 = boundary_matrix(chain, g0, param)
    lam = lambda_matrix(G0, chain, weight_fn=g0.weight)
    factors = lu(lam.entries)
    u, v = _wall_vectors(chain, g0, x, xp, param)
    t = solve(factors, v)
    return g0.evaluate(x, xp, param) - float(u @ (lam.w_lambda * t))


def greens_strong(chain: DeltaChain, g0: FreeGreens, x: float, xp: float,
                  param: float) -> float:
    """Impenetrable-wall Green's function: g0 - u^T G0^{-1} v (couplings ignored)."""
    G0 = boundary_matrix(chain, g0, param)
    factors = lu(G0.entries)
    u, v = _wall_vectors(chain, g0, x, xp, param)
    t = solve(factors, v)
    return g0.evaluate(x, xp, param) - float(u @ t)


def char_func(chain: DeltaChain, g0: FreeGreens, param: float) -> SignLog:
    """Characteristic function det[g0(a_i, a_j)] at the given parameter."""
    G0 = boundary_matrix(chain, g0, param)
    return det(lu(G0.entries))
