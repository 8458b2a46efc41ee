"""Free-space reduced Green's functions for the four concrete geometries.

Each kernel solves its 1D radial/axial operator with a unit delta source and
decaying (or regular/recessive) boundary behaviour, in the evanescent regime
where the spectral parameter k0 is real and positive:

* rectangular:  exp(-k0 |z - z'|) / (2 k0)
* cylindrical:  I_m(k0 r_<) K_m(k0 r_>)
* spherical:    (2 k0 / pi) i_l(k0 r_<) k_l(k0 r_>)
* oscillator:   (1/2) sqrt(hbar/(pi m w0)) Gamma(-v) D_v(-y_<) D_v(y_>),
                y = sqrt(2 m w0 / hbar) (z - center)

All prefactors are fixed by the unit jump condition of the measure-weighted
radial derivative at coincidence (equivalently by the Wronskian of the two
homogeneous solutions), so every kernel here feeds the same chain algebra
without per-geometry rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

from . import specfun
from .errors import DomainError


class Geometry(str, Enum):
    RECTANGULAR = "rectangular"
    CYLINDRICAL = "cylindrical"
    SPHERICAL = "spherical"
    OSCILLATOR = "oscillator"
    CUSTOM = "custom"


@dataclass(frozen=True)
class UnitSystem:
    """Physical constants of the problem; defaults are natural units."""

    hbar: float = 1.0
    mass: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega0"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"UnitSystem.{name} must be positive")


NATURAL_UNITS = UnitSystem()


@dataclass(frozen=True)
class Wavenumber:
    """Evanescent-regime spectral parameter k0 > 0 with its provenance.

    The classmethods build k0 from the frequency and the transverse/axial
    wavenumbers of each geometry and reject parameter combinations with
    k0^2 <= 0 (those belong to the oscillatory continuation handled by the
    spectrum module).
    """

    k0: float
    omega: Optional[float] = None
    provenance: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.k0 > 0.0:
            raise DomainError(f"Wavenumber k0 must be positive, got {self.k0}")

    @classmethod
    def rectangular(cls, kx: float, ky: float, omega: float,
                    units: UnitSystem = NATURAL_UNITS) -> "Wavenumber":
        k0sq = kx * kx + ky * ky - 2.0 * units.mass * omega / units.hbar
        return cls._from_square(k0sq, omega, (kx, ky))

    @classmethod
    def cylindrical(cls, kz: float, omega: float,
                    units: UnitSystem = NATURAL_UNITS) -> "Wavenumber":
        k0sq = kz * kz - 2.0 * units.mass * omega / units.hbar
        return cls._from_square(k0sq, omega, (kz,))

    @classmethod
    def spherical(cls, omega: float, units: UnitSystem = NATURAL_UNITS) -> "Wavenumber":
        k0sq = -2.0 * units.mass * omega / units.hbar
        return cls._from_square(k0sq, omega, ())

    @classmethod
    def _from_square(cls, k0sq, omega, provenance):
        if k0sq <= 0.0:
            raise DomainError(
                f"k0^2 = {k0sq} is not positive; this regime is outside the "
                "evanescent-kernel domain"
            )
        return cls(math.sqrt(k0sq), omega, provenance)


def _k0_value(k0) -> float:
    k = k0.k0 if isinstance(k0, Wavenumber) else float(k0)
    if not k > 0.0:
        raise DomainError(f"k0 must be positive, got {k}")
    return k


def weight(geometry, position: float) -> float:
    """Measure weight multiplying the coupling in the Lambda matrix: 1, rho or r^2."""
    g = Geometry(geometry)
    if g is Geometry.CYLINDRICAL:
        if not position > 0.0:
            raise DomainError(f"cylindrical position must be positive, got {position}")
        return position
    if g is Geometry.SPHERICAL:
        if not position > 0.0:
            raise DomainError(f"spherical position must be positive, got {position}")
        return position * position
    return 1.0


def g0_rect(z: float, zp: float, k0) -> float:
    """Rectangular free kernel exp(-k0 |z - z'|) / (2 k0)."""
    k = _k0_value(k0)
    return math.exp(-k * abs(z - zp)) / (2.0 * k)


def g0_cyl(rho: float, rhop: float, k0, mode: int = 0) -> float:
    """Cylindrical free kernel I_m(k0 rho_<) K_m(k0 rho_>) for azimuthal order `mode`."""
    k = _k0_value(k0)
    if not (rho > 0.0 and rhop > 0.0):
        raise DomainError(f"cylindrical radii must be positive, got ({rho}, {rhop})")
    lo, hi = (rho, rhop) if rho <= rhop else (rhop, rho)
    return specfun.bessel_i(mode, k * lo) * specfun.bessel_k(mode, k * hi)


def g0_sph(r: float, rp: float, k0, mode: int = 0) -> float:
    """Spherical free kernel (2 k0/pi) i_l(k0 r_<) k_l(k0 r_>) for angular order `mode`.

    The 2 k0/pi prefactor and overall sign are pinned by the jump condition
    r'^2 [d_r g]_{r'-}^{r'+} = -1 for the -delta(r - r')/r^2 source in the
    i_l/k_l convention of :mod:`greenchain.specfun`.
    """
    k = _k0_value(k0)
    if not (r > 0.0 and rp > 0.0):
        raise DomainError(f"spherical radii must be positive, got ({r}, {rp})")
    lo, hi = (r, rp) if r <= rp else (rp, r)
    il, _ = specfun.sph_modified(mode, k * lo)
    _, kl = specfun.sph_modified(mode, k * hi)
    return (2.0 * k / math.pi) * il * kl


def g0_osc_signlog(z: float, zp: float, v: float,
                   units: UnitSystem = NATURAL_UNITS, center: float = 0.0) -> specfun.SignLog:
    """Unconstrained-oscillator kernel as a SignLog (overflow-safe for large v)."""
    beta = math.sqrt(2.0 * units.mass * units.omega0 / units.hbar)
    y1 = beta * (z - center)
    y2 = beta * (zp - center)
    ylo, yhi = (y1, y2) if y1 <= y2 else (y2, y1)
    pref = 0.5 * math.sqrt(units.hbar / (math.pi * units.mass * units.omega0))
    sl = specfun.gamma_signlog(-v) * specfun.pcf_d_signlog(v, -ylo) * specfun.pcf_d_signlog(v, yhi)
    return sl.scaled(pref)


def g0_osc(z: float, zp: float, v: float,
           units: UnitSystem = NATURAL_UNITS, center: float = 0.0) -> float:
    """Unconstrained harmonic oscillator kernel at energy E = (v + 1/2) hbar w0.

    Finite at coincidence; Gamma(-v) makes non-negative integer v a pole of
    the kernel (DomainError).  The prefactor (1/2) sqrt(hbar/(pi m w0)) gives
    the unit derivative jump that the chain algebra assumes.
    """
    return g0_osc_signlog(z, zp, v, units, center).value()


@dataclass(frozen=True)
class FreeGreens:
    """Pluggable family of free kernels g0(x, x'; param) plus the measure weight.

    `evaluate(x, xp, param)` must be symmetric in (x, xp) and finite at
    coincidence; `weight(position)` is the factor multiplying the coupling in
    the Lambda matrix (1, rho, or r^2 for the concrete geometries).  Any
    linear Hermitian 1D operator with those properties plugs into the chain
    algebra through this type.
    """

    geometry: Geometry
    evaluate: Callable[[float, float, float], float]
    weight: Callable[[float], float]
    domain: Tuple[float, float] = (-math.inf, math.inf)
    mode: Optional[int] = None

    def check_position(self, x: float) -> None:
        lo, hi = self.domain
        if not (lo < x < hi):
            raise DomainError(f"position {x} outside the kernel domain ({lo}, {hi})")

    def bound(self, param: float) -> Callable[[float, float], float]:
        """Two-argument view g0(x, x') at a frozen spectral parameter."""
        return lambda x, xp: self.evaluate(x, xp, param)


def rect_free_greens() -> FreeGreens:
    return FreeGreens(
        geometry=Geometry.RECTANGULAR,
        evaluate=lambda z, zp, k0: g0_rect(z, zp, k0),
        weight=lambda a: 1.0,
    )


def cyl_free_greens(mode: int = 0) -> FreeGreens:
    return FreeGreens(
        geometry=Geometry.CYLINDRICAL,
        evaluate=lambda r, rp, k0, _m=mode: g0_cyl(r, rp, k0, _m),
        weight=lambda a: weight(Geometry.CYLINDRICAL, a),
        domain=(0.0, math.inf),
        mode=mode,
    )


def sph_free_greens(mode: int = 0) -> FreeGreens:
    return FreeGreens(
        geometry=Geometry.SPHERICAL,
        evaluate=lambda r, rp, k0, _m=mode: g0_sph(r, rp, k0, _m),
        weight=lambda a: weight(Geometry.SPHERICAL, a),
        domain=(0.0, math.inf),
        mode=mode,
    )


def osc_free_greens(units: UnitSystem = NATURAL_UNITS, center: float = 0.0) -> FreeGreens:
    return FreeGreens(
        geometry=Geometry.OSCILLATOR,
        evaluate=lambda z, zp, v, _u=units, _c=center: g0_osc(z, zp, v, _u, _c),
        weight=lambda a: 1.0,
    )


def custom_free_greens(evaluate: Callable[[float, float, float], float],
                       weight_fn: Optional[Callable[[float], float]] = None,
                       domain: Tuple[float, float] = (-math.inf, math.inf),
                       mode: Optional[int] = None) -> FreeGreens:
    """Wrap an arbitrary-operator kernel for use with the chain algebra."""
    return FreeGreens(
        geometry=Geometry.CUSTOM,
        evaluate=evaluate,
        weight=weight_fn if weight_fn is not None else (lambda a: 1.0),
        domain=domain,
        mode=mode,
    )


def free_greens_for(geometry, mode: int = 0,
                    units: UnitSystem = NATURAL_UNITS, center: float = 0.0) -> FreeGreens:
    """Factory dispatching on the geometry tag."""
    g = Geometry(geometry)
    if g is Geometry.RECTANGULAR:
        return rect_free_greens()
    if g is Geometry.CYLINDRICAL:
        return cyl_free_greens(mode)
    if g is Geometry.SPHERICAL:
        return sph_free_greens(mode)
    if g is Geometry.OSCILLATOR:
        return osc_free_greens(units, center)
    raise DomainError("custom geometry needs an explicit evaluator; use custom_free_greens")
