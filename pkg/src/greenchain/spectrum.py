"""Root finding for characteristic functions and the spectra built from them.

The boxed-oscillator characteristic determinant factors as

    Delta(v) = (m / pi hbar w0) Gamma(-v)^2 D_v(alpha)^2
               [D_v(-alpha)^2 - D_v(alpha)^2]

with alpha the dimensionless half-box width.  Scanning the sign of the
bounded ratio r(v) = [D_v(-alpha)^2 - D_v(alpha)^2] / [D_v(-alpha)^2 +
D_v(alpha)^2] avoids both the Gamma poles and the D_v^2 overflow, but r(v)
also crosses zero at every non-negative integer v: there the two solutions
D_v(+-y) degenerate into one (their Wronskian sqrt(2pi)/Gamma(-v) vanishes),
so the determinant zero does not correspond to a two-wall Dirichlet state.
The spectrum therefore scans the even/odd wall-value factors

    even: M(-v/2, 1/2, alpha^2/2)      odd: M((1-v)/2, 3/2, alpha^2/2)

whose zeros are exactly the physical levels (the even/odd solutions of the
oscillator equation vanishing at both walls); every root of either factor is
also a sign change of r(v).
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import ConfigError, DomainError, GreenChainError, NumericError, RangeError
from .greens import NATURAL_UNITS, UnitSystem
from .specfun import SignLog, bessel_jy, kummer_m, gamma_signlog, pcf_d_signlog, sph_ordinary

_EPS = 2.220446049250313e-16
_V_MAX = 200.0  # validated parabolic-cylinder order range
_LOG_MAX = 709.0


class RootKind(str, Enum):
    NODE_FACTOR = "node_factor"
    EVEN_BRACKET = "even_bracket"
    ODD_BRACKET = "odd_bracket"
    GENERIC = "generic"


@dataclass(frozen=True)
class Bracket:
    """Sign-change interval: f(lo) and f(hi) have strictly opposite signs."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket endpoints must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if not (self.f_lo < 0.0 < self.f_hi or self.f_hi < 0.0 < self.f_lo):
            raise DomainError("bracket endpoint values must have opposite signs")


@dataclass(frozen=True)
class Root:
    """Refined root with its residual, source bracket and iteration count."""

    value: float
    residual: float
    bracket: Bracket
    iterations: int
    classification: RootKind = RootKind.GENERIC

    def __post_init__(self):
        if not self.bracket.lo <= self.value <= self.bracket.hi:
            raise DomainError("refined root left its bracket")


@dataclass(frozen=True)
class SpectrumLine:
    """One spectral level: the refined root plus the energy it encodes."""

    root: Root
    energy: float


@dataclass(frozen=True)
class OscillatorProblem:
    """Harmonic oscillator confined to a box of length `box_length`.

    Walls sit at z = 0 and z = box_length with the oscillator centered
    between them; `alpha` is the dimensionless half-box width
    sqrt(2 m w0 / hbar) * box_length / 2.
    """

    box_length: float
    units: UnitSystem = NATURAL_UNITS

    def __post_init__(self):
        if not self.box_length > 0.0:
            raise DomainError(f"box_length must be positive, got {self.box_length}")

    @cached_property
    def alpha(self) -> float:
        u = self.units
        return math.sqrt(2.0 * u.mass * u.omega0 / u.hbar) * self.box_length / 2.0

    def energy_of(self, v: float) -> float:
        return (v + 0.5) * self.units.hbar * self.units.omega0


# ----------------------------------------------------------------------
# Grid scanning and Brent refinement
# ----------------------------------------------------------------------

def _max_workers() -> int:
    """Worker cap for grid scans, from GREENCHAIN_THREADS.

    The built-in kernels are pure Python and hold the GIL, so extra threads
    only slow them down; the pool is therefore engaged only when the caller
    raises the cap explicitly (worthwhile for custom GIL-releasing
    evaluators).  Unset means one worker.
    """
    raw = os.environ.get("GREENCHAIN_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"GREENCHAIN_THREADS must be an integer >= 1, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"GREENCHAIN_THREADS must be >= 1, got {n}")
    return n


def _grid_eval(f: Callable[[float], float], xs: Sequence[float]) -> list:
    """Evaluate f over an ordered grid, optionally with threads.

    Results come back in grid order regardless of worker count, as
    (ok, value_or_exception) pairs, so everything downstream is a
    deterministic ordered reduction.
    """

    def one(x):
        try:
            return True, f(x)
        except GreenChainError as exc:
            return False, exc

    workers = _max_workers()
    if workers <= 1 or len(xs) < 256:
        return [one(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, xs, chunksize=max(1, len(xs) // (4 * workers))))


def scan_sign_changes(f: Callable[[float], float], lo: float, hi: float,
                      n_grid: int) -> List[Bracket]:
    """Brackets around every sign change of f on a uniform n_grid-point grid.

    Grid points where f raises or returns a non-finite value are skipped
    with a warning; a grid point where f is exactly zero is bracketed
    between its nearest non-zero neighbours.
    """
    if n_grid < 2:
        raise DomainError(f"scan needs n_grid >= 2, got {n_grid}")
    if not lo < hi:
        raise DomainError(f"scan needs lo < hi, got [{lo}, {hi}]")
    step = (hi - lo) / (n_grid - 1)
    xs = [lo + i * step for i in range(n_grid)]
    xs[-1] = hi
    results = _grid_eval(f, xs)
    brackets: List[Bracket] = []
    prev: Optional[Tuple[float, float]] = None
    for x, (ok, val) in zip(xs, results):
        if not ok or not math.isfinite(val):
            warnings.warn(f"scan: skipping grid point {x} ({val if ok else 'evaluation error'})")
            continue
        if val == 0.0:
            continue  # the root lands between the surrounding non-zero points
        if prev is not None:
            x0, f0 = prev
            if (f0 < 0.0 < val) or (val < 0.0 < f0):
                brackets.append(Bracket(x0, x, f0, val))
        prev = (x, val)
    return brackets


def brent(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-10,
          max_iter: int = 200) -> Root:
    """Brent root refinement (inverse quadratic / secant / bisection hybrid).

    Stops once the bracket width falls below `tol` plus machine-epsilon
    padding; never steps outside the original bracket.
    """
    if tol <= 0.0:
        raise DomainError(f"brent tolerance must be positive, got {tol}")
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    c, fc = a, fa
    d = e = b - a
    for it in range(1, max_iter + 1):
        if (fb > 0.0 and fc > 0.0) or (fb < 0.0 and fc < 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            value = min(max(b, bracket.lo), bracket.hi)
            return Root(value=value, residual=abs(fb), bracket=bracket, iterations=it)
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += tol1 if xm > 0.0 else -tol1
        fb = f(b)
    best = Root(value=min(max(b, bracket.lo), bracket.hi), residual=abs(fb),
                bracket=bracket, iterations=max_iter)
    raise NumericError(f"brent did not converge within {max_iter} iterations", best=best)


# ----------------------------------------------------------------------
# Boxed-oscillator characteristic functions
# ----------------------------------------------------------------------

def _dv_pair(v: float, alpha: float) -> Tuple[SignLog, SignLog]:
    return pcf_d_signlog(v, -alpha), pcf_d_signlog(v, alpha)


def oscillator_char_full(v: float, prob: OscillatorProblem) -> float:
    """Determinant Delta(v) of the two-wall oscillator boundary matrix.

    Evaluated through SignLog and exponentiated at the end; diverges at the
    Gamma(-v) poles (DomainError at non-negative integer v) and overflows
    double range once v is large (RangeError suggesting the reduced form).
    """
    u = prob.units
    dm, dp = _dv_pair(v, prob.alpha)
    g = gamma_signlog(-v)
    dm2, dp2 = dm * dm, dp * dp
    # bracket = D_v(-a)^2 - D_v(a)^2, rescaled by the larger square
    lead = max(dm2.log_mag if dm2.sign else -math.inf,
               dp2.log_mag if dp2.sign else -math.inf)
    diff = 0.0
    if dm2.sign:
        diff += math.exp(dm2.log_mag - lead)
    if dp2.sign:
        diff -= math.exp(dp2.log_mag - lead)
    bracket = SignLog.from_value(diff)
    if bracket.sign:
        bracket = SignLog(bracket.sign, bracket.log_mag + lead)
    total = g * g * dp2 * bracket
    total = total.scaled(u.mass / (math.pi * u.hbar * u.omega0))
    if total.sign and total.log_mag > _LOG_MAX:
        raise RangeError(
            f"Delta({v}) overflows double range; use oscillator_char_reduced "
            "for scans at large v"
        )
    return total.value()


def oscillator_char_reduced(v: float, prob: OscillatorProblem) -> float:
    """Bounded reduced ratio r(v) in [-1, 1] sharing the sign of Delta(v).

    Computed from SignLog squares rescaled by their common maximum, so it is
    overflow-free across the whole validated order range.  Note r(v) also
    vanishes at every non-negative integer v, where the two parabolic
    cylinder solutions degenerate; those crossings are not spectrum points
    (see oscillator_spectrum).
    """
    dm, dp = _dv_pair(v, prob.alpha)
    lm = 2.0 * dm.log_mag if dm.sign else -math.inf
    lp = 2.0 * dp.log_mag if dp.sign else -math.inf
    lead = max(lm, lp)
    em = math.exp(lm - lead) if dm.sign else 0.0
    ep = math.exp(lp - lead) if dp.sign else 0.0
    return (em - ep) / (em + ep)


def even_wall_value(v: float, prob: OscillatorProblem) -> float:
    """Wall value of the even-parity oscillator solution, M(-v/2, 1/2, alpha^2/2).

    Proportional to D_v(-alpha) + D_v(alpha) with a factor that never
    vanishes at non-integer v; its zeros are exactly the even levels of the
    boxed oscillator.
    """
    a2 = prob.alpha * prob.alpha
    return kummer_m(-0.5 * v, 0.5, 0.5 * a2)


def odd_wall_value(v: float, prob: OscillatorProblem) -> float:
    """Wall value of the odd-parity oscillator solution, M((1-v)/2, 3/2, alpha^2/2).

    Proportional to D_v(-alpha) - D_v(alpha); its zeros are the odd levels.
    """
    a2 = prob.alpha * prob.alpha
    return kummer_m(0.5 * (1.0 - v), 1.5, 0.5 * a2)


def _node_factor_roots(prob: OscillatorProblem, v_hi: float, step: float,
                       tol: float) -> List[Root]:
    """Zeros of the node factor D_v(alpha) in v, refined on a rescaled surrogate."""
    alpha = prob.alpha

    def signlog_at(v: float) -> SignLog:
        return pcf_d_signlog(v, alpha)

    n_grid = max(2, int(round(v_hi / step)) + 1)
    step_v = v_hi / (n_grid - 1)
    roots: List[Root] = []
    prev: Optional[Tuple[float, SignLog]] = None
    for i in range(n_grid):
        v = i * step_v
        sl = signlog_at(v)
        if prev is not None and sl.sign and prev[1].sign and sl.sign != prev[1].sign:
            v0, sl0 = prev
            lead = max(sl0.log_mag, sl.log_mag)

            def surrogate(x, _lead=lead):
                s = signlog_at(x)
                if s.sign == 0:
                    return 0.0
                return s.sign * math.exp(min(s.log_mag - _lead, 0.0))

            br = Bracket(v0, v, surrogate(v0), surrogate(v))
            root = brent(surrogate, br, tol=tol)
            roots.append(replace(root, classification=RootKind.NODE_FACTOR))
        prev = (v, sl)
    return roots


def oscillator_spectrum(prob: OscillatorProblem, n_roots: int, tol: float = 1e-10,
                        step: float = 0.01,
                        include_node_factor: bool = False) -> List[SpectrumLine]:
    """First `n_roots` levels of the boxed oscillator, energies attached.

    Scans the even/odd wall-value factors for sign changes (default step
    0.01 in v), refines each with Brent, and classifies the root by the
    factor that produced it.  The degenerate integer-v zeros of the reduced
    ratio never enter because the wall-value factors do not vanish there;
    node-factor zeros (D_v(alpha) = 0) are excluded from the default list
    and reported flagged when `include_node_factor` is set.

    Fewer than `n_roots` levels are returned when the validated order range
    v <= 200 is exhausted first.
    """
    if not 1 <= n_roots <= 12:
        raise DomainError(f"n_roots must be in [1, 12], got {n_roots}")
    if step <= 0.0:
        raise DomainError(f"step must be positive, got {step}")

    factors = (
        (lambda v: even_wall_value(v, prob), RootKind.EVEN_BRACKET),
        (lambda v: odd_wall_value(v, prob), RootKind.ODD_BRACKET),
    )
    roots: List[Root] = []
    chunk = 20.0
    lo = 0.0
    while lo < _V_MAX and len(roots) < n_roots:
        hi = min(lo + chunk, _V_MAX)
        n_grid = int(round((hi - lo) / step)) + 1
        for f, kind in factors:
            for br in scan_sign_changes(f, lo, hi, n_grid):
                try:
                    refined = brent(f, br, tol=tol)
                except NumericError as exc:
                    roots.sort(key=lambda r: r.value)
                    exc.partial = [SpectrumLine(root=r, energy=prob.energy_of(r.value))
                                   for r in roots[:n_roots]]
                    raise
                roots.append(replace(refined, classification=kind))
        roots.sort(key=lambda r: r.value)
        lo = hi
    roots = roots[:n_roots]
    lines = [SpectrumLine(root=r, energy=prob.energy_of(r.value)) for r in roots]
    if include_node_factor:
        v_hi = roots[-1].value + 1.0 if roots else _V_MAX
        for r in _node_factor_roots(prob, min(v_hi, _V_MAX), step, tol):
            lines.append(SpectrumLine(root=r, energy=prob.energy_of(r.value)))
        lines.sort(key=lambda line: line.root.value)
    return lines


# ----------------------------------------------------------------------
# Dirichlet spectra from the oscillatory continuation
# ----------------------------------------------------------------------

def _kappa_spectrum(f: Callable[[float], float], lo: float, hi: float, step: float,
                    n_roots: int, tol: float, energy_of) -> List[SpectrumLine]:
    n_grid = int(round((hi - lo) / step)) + 1
    brackets = scan_sign_changes(f, lo, hi, n_grid)
    lines: List[SpectrumLine] = []
    for br in brackets[:n_roots]:
        try:
            root = brent(f, br, tol=tol)
        except NumericError as exc:
            exc.partial = lines  # completed levels survive a mid-list failure
            raise
        lines.append(SpectrumLine(root=root, energy=energy_of(root.value)))
    return lines


def box_spectrum_rect(a: float, n: int, units: UnitSystem = NATURAL_UNITS,
                      tol: float = 1e-12) -> List[SpectrumLine]:
    """Dirichlet box levels from the continued rectangular characteristic function.

    Under k0 -> i kappa the two-wall determinant (1 - e^{-2 k0 a})/(4 k0^2)
    becomes sin(kappa a)/kappa up to constant factors; its positive roots
    kappa_j = j pi / a carry energies hbar^2 kappa^2 / (2 m).
    """
    if not a > 0.0:
        raise DomainError(f"box length must be positive, got {a}")
    if n < 1:
        raise DomainError(f"need n >= 1 roots, got {n}")

    def f(kappa: float) -> float:
        return math.sin(kappa * a) / kappa

    step = math.pi / (8.0 * a)
    lo = 0.25 * step
    hi = (n + 0.75) * math.pi / a
    hb2m = units.hbar * units.hbar / (2.0 * units.mass)
    return _kappa_spectrum(f, lo, hi, step, n, tol, lambda k: hb2m * k * k)


def cyl_dirichlet_spectrum(b: float, mode: int, n: int,
                           units: UnitSystem = NATURAL_UNITS,
                           tol: float = 1e-12) -> List[SpectrumLine]:
    """First n roots of J_mode(kappa b): the Dirichlet disk spectrum."""
    if not b > 0.0:
        raise DomainError(f"radius must be positive, got {b}")

    def f(kappa: float) -> float:
        return bessel_jy(mode, kappa * b)[0]

    step = 0.3 / b
    lo = 0.25 * step
    hi = ((n + 1.25) * math.pi + mode + 2.0) / b
    hb2m = units.hbar * units.hbar / (2.0 * units.mass)
    return _kappa_spectrum(f, lo, hi, step, n, tol, lambda k: hb2m * k * k)


def sph_dirichlet_spectrum(c: float, mode: int, n: int,
                           units: UnitSystem = NATURAL_UNITS,
                           tol: float = 1e-12) -> List[SpectrumLine]:
    """First n roots of j_mode(kappa c): the Dirichlet ball spectrum."""
    if not c > 0.0:
        raise DomainError(f"radius must be positive, got {c}")

    def f(kappa: float) -> float:
        return sph_ordinary(mode, kappa * c)[0]

    step = 0.3 / c
    lo = 0.25 * step
    hi = ((n + 1.25) * math.pi + mode + 2.0) / c
    hb2m = units.hbar * units.hbar / (2.0 * units.mass)
    return _kappa_spectrum(f, lo, hi, step, n, tol, lambda k: hb2m * k * k)


def cyl_annulus_spectrum(b1: float, b2: float, mode: int, n: int,
                         units: UnitSystem = NATURAL_UNITS,
                         tol: float = 1e-12) -> List[SpectrumLine]:
    """Annulus Dirichlet spectrum from the J/Y cross product.

    Roots of J_m(k b1) Y_m(k b2) - J_m(k b2) Y_m(k b1), the oscillatory
    continuation of the two-wall cylindrical characteristic determinant.
    """
    if not 0.0 < b1 < b2:
        raise DomainError(f"annulus radii must satisfy 0 < b1 < b2, got ({b1}, {b2})")

    def f(kappa: float) -> float:
        j1v, y1v = bessel_jy(mode, kappa * b1)
        j2v, y2v = bessel_jy(mode, kappa * b2)
        return j1v * y2v - j2v * y1v

    gap = b2 - b1
    step = math.pi / (8.0 * gap)
    lo = 0.25 * step
    hi = (n + 1.5) * math.pi / gap
    hb2m = units.hbar * units.hbar / (2.0 * units.mass)
    return _kappa_spectrum(f, lo, hi, step, n, tol, lambda k: hb2m * k * k)


def sph_shell_spectrum(c1: float, c2: float, mode: int, n: int,
                       units: UnitSystem = NATURAL_UNITS,
                       tol: float = 1e-12) -> List[SpectrumLine]:
    """Spherical-shell Dirichlet spectrum from the j/y cross product."""
    if not 0.0 < c1 < c2:
        raise DomainError(f"shell radii must satisfy 0 < c1 < c2, got ({c1}, {c2})")

    def f(kappa: float) -> float:
        j1v, y1v = sph_ordinary(mode, kappa * c1)
        j2v, y2v = sph_ordinary(mode, kappa * c2)
        return j1v * y2v - j2v * y1v

    gap = c2 - c1
    step = math.pi / (8.0 * gap)
    lo = 0.25 * step
    hi = (n + 1.5) * math.pi / gap
    hb2m = units.hbar * units.hbar / (2.0 * units.mass)
    return _kappa_spectrum(f, lo, hi, step, n, tol, lambda k: hb2m * k * k)


def delta_well_bound_state(mu: float, units: UnitSystem = NATURAL_UNITS) -> Optional[SpectrumLine]:
    """Bound state of a single attractive delta well at the pole of 1 + lambda/(2 k0).

    Returns None for repulsive (or zero) coupling: the corrected kernel has
    no pole on the positive k0 axis then.  The pole sits at k0 = -lambda/2
    and carries energy -hbar^2 k0^2 / (2 m) = -m mu^2 / (2 hbar^2).
    """
    if mu >= 0.0:
        return None
    lam = 2.0 * units.mass * mu / (units.hbar * units.hbar)

    def f(k0: float) -> float:
        return 1.0 + lam / (2.0 * k0)

    lo = abs(lam) * 1e-9
    hi = abs(lam)
    br = Bracket(lo, hi, f(lo), f(hi))
    root = brent(f, br, tol=1e-13 * abs(lam))
    k_star = root.value
    energy = -units.hbar * units.hbar * k_star * k_star / (2.0 * units.mass)
    return SpectrumLine(root=root, energy=energy)


def char_scan_table(f: Callable[[float], float], lo: float, hi: float,
                    step: float) -> List[Tuple[float, Optional[float], Optional[int]]]:
    """Deterministic (param, |f|, sign) rows for CSV emission.

    Rows where f raises or returns a non-finite value carry None cells.
    An empty range (lo == hi) yields no rows.
    """
    if step <= 0.0:
        raise DomainError(f"step must be positive, got {step}")
    if hi < lo:
        raise DomainError(f"scan range needs lo <= hi, got [{lo}, {hi}]")
    if hi == lo:
        return []
    n = int(round((hi - lo) / step))
    xs = [lo + i * step for i in range(n + 1)]
    results = _grid_eval(f, xs)
    rows: List[Tuple[float, Optional[float], Optional[int]]] = []
    for x, (ok, val) in zip(xs, results):
        if ok and math.isfinite(val):
            sign = 0 if val == 0.0 else (1 if val > 0.0 else -1)
            rows.append((x, abs(val), sign))
        else:
            rows.append((x, None, None))
    return rows
