"""Rational lattices, the beta = 1 reduction, and perturbation sequences.

A lattice (alpha, beta) is reduced to (alpha*beta, 1) by the dilation
g_beta(x) = beta^{-1/2} g(x/beta); the reduced alpha = p/q is kept as an
exact fraction.  The perturbation selector picks, per residue class mod p,
a point of x + alpha*Z inside the admissible interval around the Zak zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


class LatticeError(ValueError):
    """Invalid lattice parameters or perturbation preconditions."""


def as_fraction(value, max_denominator: int = 10 ** 6) -> Fraction:
    """Parse 'p/q' strings, ints, floats, or Fractions into a Fraction.

    Floats are rationalized with denominator <= max_denominator; callers
    should warn, since the theory covers rational alpha*beta only.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(s).limit_denominator(max_denominator)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(max_denominator)
    raise LatticeError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class RationalLattice:
    """Reduced lattice: alpha = p/q in lowest terms, beta = 1.

    ``beta_original`` records the dilation factor needed to rescale the
    window when the caller started from a beta != 1 lattice.
    """

    p: int
    q: int
    beta_original: Fraction = Fraction(1)

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0:
            raise LatticeError("p and q must be positive")
        if math.gcd(self.p, self.q) != 1:
            raise LatticeError("p and q must be coprime")

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def alpha_float(self) -> float:
        return self.p / self.q

    def require_frame_candidate(self):
        """Density theorem guard: frame candidacy needs alpha < 1."""
        if self.p >= self.q:
            raise LatticeError(
                f"alpha = {self.p}/{self.q} >= 1: excluded by the density theorem")


def reduce(alpha, beta=1) -> RationalLattice:
    """Reduce (alpha, beta) to the equivalent (alpha*beta, 1) lattice."""
    a = as_fraction(alpha)
    b = as_fraction(beta)
    if a <= 0 or b <= 0:
        raise LatticeError("alpha and beta must be positive")
    ab = a * b
    return RationalLattice(p=ab.numerator, q=ab.denominator, beta_original=b)


def choose_M(x0: float) -> int:
    """M placing the admissible interval [x0+M-1+eps, x0+M-eps] closest to 0.

    Minimizes |x0 + M - 1/2| (the interval center), ties toward smaller M.
    """
    if not 0.0 <= x0 < 1.0:
        raise LatticeError("x0 must lie in [0, 1)")
    return min((-1, 0, 1), key=lambda M: (abs(x0 + M - 0.5), M))


@dataclass(frozen=True)
class PerturbationSeq:
    """One period of the p-periodic perturbation delta_k.

    delta_k lies in [x0+M-1+eps, x0+M-eps] and k + delta_k is a point of
    x + alpha*Z.  ``js`` records the selected lattice indices j_l with
    x + alpha*j_l = l + delta_l.
    """

    deltas: Sequence[float]
    M: int
    eps: float
    x: float
    x0: float
    js: Sequence[int] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        if self.js is not None:
            object.__setattr__(self, "js", tuple(int(j) for j in self.js))
        if not self.deltas:
            raise LatticeError("need at least one delta per period")

    @property
    def p(self) -> int:
        return len(self.deltas)

    def delta(self, k: int) -> float:
        """p-periodic extension delta_{k + n p} = delta_k."""
        return self.deltas[k % self.p]

    def interval(self):
        lo = self.x0 + self.M - 1 + self.eps
        return (lo, self.x0 + self.M - self.eps)


def select_perturbation(lat: RationalLattice, x: float, x0: float,
                        eps: float = None, M: int = None) -> PerturbationSeq:
    """Select the p-periodic perturbation by admissible-interval membership.

    For each residue l = 0..p-1 finds j with x + (p/q) j in
    [l + x0 + M - 1 + eps, l + x0 + M - eps] and sets delta_l = x + (p/q) j - l.
    eps defaults to (1-alpha)/4, M to the choice centering the interval at 0.
    """
    lat.require_frame_candidate()
    alpha = lat.alpha_float
    if eps is None:
        eps = (1.0 - alpha) / 4.0
    if not 0.0 < eps < (1.0 - alpha) / 2.0:
        raise LatticeError(
            f"eps = {eps:g} outside (0, (1-alpha)/2) = (0, {(1 - alpha) / 2:g})")
    if M is None:
        M = choose_M(x0 % 1.0)
    p, q = lat.p, lat.q
    a = Fraction(p, q)
    deltas, js = [], []
    for l in range(p):
        lo = l + x0 + M - 1 + eps
        hi = l + x0 + M - eps
        jmin = math.ceil((lo - x) / alpha - 1e-12)
        jmax = math.floor((hi - x) / alpha + 1e-12)
        if jmax < jmin:
            raise LatticeError(
                "no admissible lattice point; interval length 1-2*eps > alpha "
                "should guarantee one (implementation bug)")
        center = 0.5 * (lo + hi)
        j = min(range(jmin, jmax + 1), key=lambda jj: (abs(x + alpha * jj - center), jj))
        point = x + float(a * j)
        if not (lo - 1e-12 <= point <= hi + 1e-12):
            raise LatticeError("selected point escaped the admissible interval")
        deltas.append(point - l)
        js.append(j)
    if any(js[i + 1] <= js[i] for i in range(p - 1)) or (p > 1 and js[-1] - js[0] >= q):
        raise LatticeError("selected indices j_l not strictly increasing within "
                           "one q-window (implementation bug)")
    return PerturbationSeq(deltas=deltas, M=M, eps=eps, x=x, x0=x0, js=js)
