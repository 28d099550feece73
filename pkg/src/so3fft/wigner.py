"""Wigner d- and D-functions.

The convention used throughout:

    d^l_{m,m'}(beta) = (-1)^(m+m') * sqrt( (l+m')! (l-m')! / ((l+m)! (l-m)!) )
                       * sin(beta/2)^(m'-m) * cos(beta/2)^(m+m')
                       * P_{l-m'}^{(m'-m, m+m')}(cos beta)

valid for m' >= |m| (other order pairs are reached through exact symmetry
relations), with P the Jacobi polynomial, and

    D^l_{m,m'}(alpha, beta, gamma) = exp(-i m alpha) d^l_{m,m'}(beta) exp(-i m' gamma).

Under this convention d^1_{1,0}(beta) = +sin(beta)/sqrt(2) and
d^1_{0,1}(beta) = -sin(beta)/sqrt(2).

Two independent evaluation routes are provided and kept separate on purpose:

* ``wigner_d_direct`` - closed form above (canonicalisation + Jacobi
  polynomial), used as the reference route;
* ``wigner_d_column`` - degree seed at l = max(|m|, |m'|) followed by the
  three-term recurrence in l, used by the fast transforms.

Eight symmetry relations (identity plus seven non-trivial ones) map a base
column to every member of its orbit; relations with ``reflect`` set evaluate
the base at pi - beta, which on the sampling grid is exactly the reversed
column order (beta_{2B-1-j} = pi - beta_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lgamma

import numpy as np

from .core import validate_bandwidth

_BETA_SLACK = 1e-12


def jacobi_poly(n: int, a: float, b: float, x):
    """Jacobi polynomial P_n^(a,b)(x) by the standard three-term recurrence.

    ``x`` may be a scalar or an ndarray with |x| <= 1; ``a, b > -1``.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"degree n must be a nonnegative integer, got {n!r}")
    if a <= -1.0 or b <= -1.0:
        raise ValueError(f"Jacobi exponents must exceed -1, got a={a}, b={b}")
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(arr) > 1.0 + _BETA_SLACK):
        raise ValueError("Jacobi argument outside [-1, 1]")
    scalar = arr.ndim == 0

    p_prev = np.ones_like(arr)
    if n == 0:
        return float(p_prev) if scalar else p_prev
    p_cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * arr
    for k in range(2, n + 1):
        s = 2.0 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * s * (s - 2.0)
        c3 = (s - 1.0) * (a * a - b * b)
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p_cur, p_prev = ((c2 * arr + c3) * p_cur - c4 * p_prev) / c1, p_cur
    return float(p_cur) if scalar else p_cur


def _check_beta(beta) -> tuple[np.ndarray, bool]:
    arr = np.asarray(beta, dtype=np.float64)
    if np.any(arr < -_BETA_SLACK) or np.any(arr > math.pi + _BETA_SLACK):
        raise ValueError("beta outside [0, pi]")
    return arr, arr.ndim == 0


def _closed_form(l: int, mu: int, mup: int, beta: np.ndarray) -> np.ndarray:
    """Closed form for the canonical domain m' >= |m|."""
    a = mup - mu
    b = mu + mup
    n = l - mup
    log_ratio = 0.5 * (
        lgamma(l + mup + 1) + lgamma(l - mup + 1)
        - lgamma(l + mu + 1) - lgamma(l - mu + 1)
    )
    prefactor = (-1.0) ** (mu + mup) * math.exp(log_ratio)
    half = 0.5 * beta
    return prefactor * np.sin(half) ** a * np.cos(half) ** b * jacobi_poly(n, a, b, np.cos(beta))


def wigner_d_direct(l: int, m: int, mp: int, beta):
    """d^l_{m,m'}(beta) from the closed form; reference route.

    Any order pair is first mapped onto the canonical domain m' >= |m| by one
    of four exact relations (identity, order negation, order swap, or both),
    so the Jacobi parameters a = m'-m, b = m+m' and degree n = l-m' are all
    nonnegative.  ``beta`` may be a scalar or an ndarray in [0, pi].
    """
    if l < 0 or abs(m) > l or abs(mp) > l:
        raise ValueError(f"invalid orders (l={l}, m={m}, m'={mp})")
    arr, scalar = _check_beta(beta)

    if mp >= abs(m):
        sign, mu, mup = 1.0, m, mp
    elif -mp >= abs(m):
        sign, mu, mup = (-1.0) ** (m - mp), -m, -mp
    elif m >= abs(mp):
        sign, mu, mup = (-1.0) ** (m - mp), mp, m
    else:  # -m >= |mp|
        sign, mu, mup = 1.0, -mp, -m

    values = sign * _closed_form(l, mu, mup, arr)
    return float(values) if scalar else values


def wigner_d_seed(m: int, mp: int, beta):
    """d^L_{m,m'}(beta) at the lowest degree L = max(|m|, |m'|), closed product form."""
    arr, scalar = _check_beta(beta)
    half = 0.5 * arr
    c, s = np.cos(half), np.sin(half)
    if abs(m) >= abs(mp):
        big = abs(m)
        norm = math.exp(0.5 * (lgamma(2 * big + 1) - lgamma(big + mp + 1) - lgamma(big - mp + 1)))
        if m >= 0:
            values = norm * c ** (big + mp) * s ** (big - mp)
        else:
            values = norm * c ** (big - mp) * (-s) ** (big + mp)
    else:
        big = abs(mp)
        norm = math.exp(0.5 * (lgamma(2 * big + 1) - lgamma(big + m + 1) - lgamma(big - m + 1)))
        if mp >= 0:
            values = norm * c ** (big + m) * (-s) ** (big - m)
        else:
            values = norm * c ** (big - m) * s ** (big + m)
    return float(values) if scalar else values


def wigner_d_rows(m: int, mp: int, betas: np.ndarray, bandwidth: int) -> np.ndarray:
    """Table d^l_{m,m'}(beta) for l = L..B-1 over a vector of angles.

    Row 0 is the degree seed; each further row applies the three-term
    recurrence in l

        d^{l+1} = A_l (cos beta - m m'/(l(l+1))) d^l - C_l d^{l-1}

    with A_l = (l+1)(2l+1)/sqrt(((l+1)^2-m^2)((l+1)^2-m'^2)) and
    C_l = (l+1) sqrt((l^2-m^2)(l^2-m'^2)) / (l sqrt(((l+1)^2-m^2)((l+1)^2-m'^2))).
    Returns an array of shape (B - L, len(betas)).
    """
    b = validate_bandwidth(bandwidth)
    low = max(abs(m), abs(mp))
    if low >= b:
        raise ValueError(f"order pair (m={m}, m'={mp}) has no degrees below B={b}")
    arr, _ = _check_beta(np.atleast_1d(betas))

    rows = np.empty((b - low, arr.shape[0]), dtype=np.float64)
    rows[0] = wigner_d_seed(m, mp, arr)
    if b - low == 1:
        return rows

    cosb = np.cos(arr)
    prev = np.zeros_like(cosb)
    cur = rows[0]
    for l in range(low, b - 1):
        lp = l + 1
        denom = math.sqrt((lp * lp - m * m) * (lp * lp - mp * mp))
        a_l = lp * (2 * l + 1) / denom
        if l > 0:
            shift = (m * mp) / (l * lp)
            c_l = lp * math.sqrt((l * l - m * m) * (l * l - mp * mp)) / (l * denom)
        else:
            shift = 0.0
            c_l = 0.0
        nxt = a_l * (cosb - shift) * cur - c_l * prev
        rows[lp - low] = nxt
        prev, cur = cur, nxt
    return rows


@dataclass(frozen=True, eq=False)
class WignerColumn:
    """Values d^l_{m,m'}(beta) for l = max(|m|,|m'|) .. B-1 at a single angle."""

    m: int
    mp: int
    beta: float
    bandwidth: int
    values: np.ndarray

    def __post_init__(self) -> None:
        low = max(abs(self.m), abs(self.mp))
        if self.values.shape != (self.bandwidth - low,):
            raise ValueError(
                f"column for (m={self.m}, m'={self.mp}) at B={self.bandwidth} "
                f"must have {self.bandwidth - low} entries, got {self.values.shape}"
            )

    @property
    def lowest_degree(self) -> int:
        return max(abs(self.m), abs(self.mp))


def wigner_d_column(m: int, mp: int, beta: float, bandwidth: int) -> WignerColumn:
    """Recurrence route: seed at l = L then the three-term recurrence up to B-1."""
    values = wigner_d_rows(m, mp, np.asarray([beta], dtype=np.float64), bandwidth)[:, 0]
    return WignerColumn(m, mp, float(beta), validate_bandwidth(bandwidth), values)


@dataclass(frozen=True)
class SymmetryRelation:
    """One member of the order-pair symmetry group, as a derivation rule.

    The member at ``target(m, m')`` is obtained from base values at (m, m'):

        d^l_{target}(beta) = sign(l, m, m') * d^l_{m,m'}(pi - beta if reflect else beta)

    The target map is linear, (m, m') -> (tm_m*m + tm_mp*m', tp_m*m + tp_mp*m'),
    and the sign is (-1)^(sl*l + sm*m + smp*m').
    """

    tag: str
    reflect: bool
    sl: int
    sm: int
    smp: int
    tm_m: int
    tm_mp: int
    tp_m: int
    tp_mp: int

    def target(self, m: int, mp: int) -> tuple[int, int]:
        return (self.tm_m * m + self.tm_mp * mp, self.tp_m * m + self.tp_mp * mp)

    def sign(self, l: int, m: int, mp: int) -> float:
        return 1.0 - 2.0 * ((self.sl * l + self.sm * m + self.smp * mp) % 2)

    def sign_column(self, m: int, mp: int, bandwidth: int) -> np.ndarray:
        """Signs for l = max(|m|,|m'|) .. B-1."""
        ls = np.arange(max(abs(m), abs(mp)), bandwidth)
        return 1.0 - 2.0 * ((self.sl * ls + self.sm * m + self.smp * mp) % 2)


SYMMETRY_RELATIONS: dict[str, SymmetryRelation] = {
    rel.tag: rel
    for rel in (
        SymmetryRelation("identity", False, 0, 0, 0, 1, 0, 0, 1),
        SymmetryRelation("negate_both", False, 0, 1, 1, -1, 0, 0, -1),
        SymmetryRelation("swap", False, 0, 1, 1, 0, 1, 1, 0),
        SymmetryRelation("swap_negate_both", False, 0, 0, 0, 0, -1, -1, 0),
        SymmetryRelation("negate_m", True, 1, 0, 1, -1, 0, 0, 1),
        SymmetryRelation("negate_mp", True, 1, 1, 0, 1, 0, 0, -1),
        SymmetryRelation("swap_negate_m", True, 1, 0, 1, 0, -1, 1, 0),
        SymmetryRelation("swap_negate_mp", True, 1, 1, 0, 0, 1, -1, 0),
    )
}


def apply_symmetry(column: WignerColumn, relation: SymmetryRelation) -> WignerColumn:
    """Derive the related order pair's column from a base column."""
    new_m, new_mp = relation.target(column.m, column.mp)
    signs = relation.sign_column(column.m, column.mp, column.bandwidth)
    beta = math.pi - column.beta if relation.reflect else column.beta
    return WignerColumn(new_m, new_mp, beta, column.bandwidth, signs * column.values)


def wigner_D(l: int, m: int, mp: int, alpha: float, beta: float, gamma: float) -> complex:
    """Matrix element D^l_{m,m'} = exp(-i m alpha) d^l_{m,m'}(beta) exp(-i m' gamma)."""
    d = wigner_d_direct(l, m, mp, beta)
    return complex(np.exp(-1j * m * alpha) * d * np.exp(-1j * mp * gamma))
