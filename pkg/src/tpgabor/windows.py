"""Totally positive window families with certified decay envelopes.

Every window evaluates pointwise on the real line, is real-valued, and
carries a :class:`DecayProfile` that dominates it.  The envelope is what
all series truncations in the rest of the package are certified against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import quad


class WindowError(ValueError):
    """Invalid window parameters."""


@dataclass(frozen=True)
class DecayProfile:
    """Pointwise envelope C*exp(-rate*|t|) or C*(1+|t|)^(-rate).

    ``kind`` is "exp" or "poly"; for "poly" the rate must exceed 1 so that
    lattice sums of the envelope converge.
    """

    C: float
    rate: float
    kind: str = "exp"

    def __post_init__(self):
        if self.C <= 0 or self.rate <= 0:
            raise WindowError("envelope constants must be positive")
        if self.kind not in ("exp", "poly"):
            raise WindowError(f"unknown envelope kind {self.kind!r}")
        if self.kind == "poly" and self.rate <= 1:
            raise WindowError("polynomial envelope needs rate > 1")

    def envelope(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        if self.kind == "exp":
            return self.C * np.exp(-self.rate * t)
        return self.C * (1.0 + t) ** (-self.rate)

    def tail_radius(self, tol: float) -> int:
        """Smallest certified R with sum_{|k|>R} sup_{x in [0,1]} env(x-k) < tol."""
        if tol <= 0:
            raise WindowError("tol must be positive")
        if self.kind == "exp":
            lam = self.rate
            # sum_{k>R} C e^{-lam(k-1)} + sum_{k<-R} C e^{-lam k} <= 2C e^{-lam R}/(1-e^{-lam})
            r = math.log(2.0 * self.C / ((1.0 - math.exp(-lam)) * tol)) / lam
            return max(1, math.ceil(r))
        sig = self.rate
        # integral tail bound, both sides
        r = 1.0 + (2.0 * self.C / ((sig - 1.0) * tol)) ** (1.0 / (sig - 1.0))
        return max(1, math.ceil(r))

    def tail_sum(self, R: int) -> float:
        """Certified upper bound for the tail sum beyond radius R."""
        if self.kind == "exp":
            lam = self.rate
            return 2.0 * self.C * math.exp(-lam * R) / (1.0 - math.exp(-lam))
        sig = self.rate
        return 2.0 * self.C * (R - 1.0) ** (1.0 - sig) / (sig - 1.0) if R > 1 else math.inf


class TPWindow:
    """Base class: a real-valued totally positive window."""

    decay: DecayProfile

    def __call__(self, t):
        raise NotImplementedError

    def config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Gaussian(TPWindow):
    """g(t) = exp(-gamma t^2), gamma > 0."""

    gamma: float = math.pi
    decay: DecayProfile = field(init=False)

    def __post_init__(self):
        if self.gamma <= 0:
            raise WindowError("Gaussian needs gamma > 0")
        lam = 2.0 * self.gamma
        # sup_t exp(lam|t| - gamma t^2) = exp(lam^2/(4 gamma)) = exp(gamma)
        object.__setattr__(self, "decay", DecayProfile(C=math.exp(self.gamma), rate=lam))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-self.gamma * t * t)

    def config(self):
        return {"kind": "gaussian", "gamma": self.gamma}


@dataclass(frozen=True)
class OneSidedExp(TPWindow):
    """g(t) = exp(-gamma t) on {gamma t >= 0}, zero elsewhere; gamma != 0."""

    gamma: float = 1.0
    decay: DecayProfile = field(init=False)

    def __post_init__(self):
        if self.gamma == 0:
            raise WindowError("OneSidedExp needs gamma != 0")
        object.__setattr__(self, "decay", DecayProfile(C=1.0, rate=abs(self.gamma)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = self.gamma * t
        return np.where(u >= 0.0, np.exp(-np.abs(u)), 0.0)

    def config(self):
        return {"kind": "one_sided_exp", "gamma": self.gamma}


@dataclass(frozen=True)
class HyperbolicSecant(TPWindow):
    """g(t) = 1 / (exp(a t) + exp(-a t)), a > 0."""

    a: float = 1.0
    decay: DecayProfile = field(init=False)

    def __post_init__(self):
        if self.a <= 0:
            raise WindowError("HyperbolicSecant needs a > 0")
        object.__setattr__(self, "decay", DecayProfile(C=1.0, rate=self.a))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = np.exp(-self.a * np.abs(t))
        return u / (1.0 + u * u)

    def config(self):
        return {"kind": "sech", "a": self.a}


@dataclass(frozen=True)
class FiniteProduct(TPWindow):
    """Window whose Fourier transform is the finite factorization

        ghat(xi) = c * exp(-gamma xi^2) * exp(2 pi i nu xi)
                     * prod_j (1 + 2 pi i nu_j xi)^{-1} exp(-2 pi i nu_j xi).

    With gamma = 0 and pairwise-distinct nu_j the time-domain window is an
    exact combination of one-sided exponentials (partial fractions); with a
    Gaussian factor or repeated nu_j it is evaluated by oscillatory-weight
    inverse Fourier quadrature.
    """

    gamma: float = 0.0
    nus: Sequence[float] = ()
    nu: float = 0.0
    c: float = 1.0
    decay: DecayProfile = field(init=False)
    _pf: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nus = tuple(float(v) for v in self.nus)
        object.__setattr__(self, "nus", nus)
        if self.gamma < 0:
            raise WindowError("FiniteProduct needs gamma >= 0")
        if self.c <= 0:
            raise WindowError("FiniteProduct needs c > 0")
        if len(nus) == 0:
            raise WindowError("FiniteProduct needs at least one factor "
                              "(use Gaussian for a pure Gaussian window)")
        if self.gamma + sum(v * v for v in nus) <= 0:
            raise WindowError("FiniteProduct needs gamma + sum(nu_j^2) > 0")
        if any(v == 0.0 for v in nus):
            raise WindowError("FiniteProduct factors need nu_j != 0")
        object.__setattr__(self, "_pf", self._partial_fractions())
        object.__setattr__(self, "decay", self._build_decay())

    # time shift carried by the phase factors of ghat
    @property
    def _shift(self) -> float:
        return sum(self.nus) - self.nu

    @property
    def has_closed_form(self) -> bool:
        return self.gamma == 0.0 and self._pf is not None

    def _partial_fractions(self):
        """Residues A_j of prod 1/(1+nu_j s) for simple poles, else None."""
        nus = self.nus
        if not nus:
            return None
        for i in range(len(nus)):
            for j in range(i + 1, len(nus)):
                if abs(nus[i] - nus[j]) <= 1e-12 * max(abs(nus[i]), abs(nus[j])):
                    return None
        coeffs = []
        for j, vj in enumerate(nus):
            a = 1.0
            for k, vk in enumerate(nus):
                if k != j:
                    a *= vj / (vj - vk)
            coeffs.append(a)
        return tuple(coeffs)

    def _build_decay(self) -> DecayProfile:
        rates = [1.0 / abs(v) for v in self.nus] if self.nus else []
        tau = abs(self._shift)
        if self.has_closed_form and self.gamma == 0.0:
            lam = min(rates)
            C = self.c * sum(abs(a) / abs(v) for a, v in zip(self._pf, self.nus))
            return DecayProfile(C=C * math.exp(lam * tau), rate=lam)
        # convolution bound: each extra exponential factor costs 2/(lam_i - lam)
        lam = 0.9 * min(rates)
        C = self.c / abs(self.nus[0])
        for r, v in zip(rates[1:], self.nus[1:]):
            C *= (1.0 / abs(v)) * 2.0 / (r - lam)
        if self.gamma > 0:
            # Gaussian factor: amplitude sqrt(pi/gamma), mass of env * e^{lam|s|}
            a = math.pi ** 2 / self.gamma
            C *= math.sqrt(math.pi / self.gamma) \
                * 2.0 * math.exp(lam * lam / (4.0 * a)) * math.sqrt(math.pi / a)
        return DecayProfile(C=C * math.exp(lam * tau), rate=lam)

    def fourier_transform(self, xi):
        xi = np.asarray(xi, dtype=complex)
        out = self.c * np.exp(-self.gamma * xi * xi) * np.exp(2j * math.pi * self.nu * xi)
        for v in self.nus:
            out = out / (1.0 + 2j * math.pi * v * xi) * np.exp(-2j * math.pi * v * xi)
        return out

    def _eval_closed(self, t):
        t = np.asarray(t, dtype=float)
        u = t - self._shift
        out = np.zeros_like(u)
        # u = 0 belongs to exactly one side, else the kink point double-counts
        zero_side = 1.0 if any(v > 0 for v in self.nus) else -1.0
        for a, v in zip(self._pf, self.nus):
            on = (u / v > 0.0) | ((u == 0.0) & (v * zero_side > 0))
            out = out + np.where(on, (a / abs(v)) * np.exp(-np.abs(u) / abs(v)), 0.0)
        return self.c * out

    def _eval_quad_scalar(self, t: float) -> float:
        def re_part(xi):
            return self.fourier_transform(xi).real

        def im_part(xi):
            return self.fourier_transform(xi).imag

        if self.gamma > 0:
            # integrand damped by exp(-gamma xi^2); finite cutoff suffices
            X = math.sqrt(math.log(max(self.c, 1.0) / 1e-18) / self.gamma) + 2.0
            w = 2.0 * math.pi * t
            rc, _ = quad(lambda x: re_part(x) * math.cos(w * x), 0.0, X,
                         epsabs=1e-13, epsrel=1e-13, limit=800)
            rs, _ = quad(lambda x: im_part(x) * math.sin(w * x), 0.0, X,
                         epsabs=1e-13, epsrel=1e-13, limit=800)
            return 2.0 * (rc - rs)
        if abs(t) < 1e-9:
            rc, _ = quad(re_part, 0.0, np.inf, epsabs=1e-13, limit=800)
            return 2.0 * rc
        w = 2.0 * math.pi * abs(t)
        rc, _ = quad(re_part, 0.0, np.inf, weight="cos", wvar=w,
                     epsabs=1e-12, limlst=400, limit=800)
        rs, _ = quad(im_part, 0.0, np.inf, weight="sin", wvar=w,
                     epsabs=1e-12, limlst=400, limit=800)
        return 2.0 * (rc - math.copysign(1.0, t) * rs)

    def evaluate_by_quadrature(self, t):
        t = np.asarray(t, dtype=float)
        flat = [self._eval_quad_scalar(float(v)) for v in np.atleast_1d(t).ravel()]
        out = np.array(flat).reshape(np.atleast_1d(t).shape)
        return out if t.ndim else float(out[()] if out.shape == () else out[0])

    def __call__(self, t):
        if self.has_closed_form:
            return self._eval_closed(t)
        return self.evaluate_by_quadrature(t)

    def config(self):
        return {"kind": "finite_product", "gamma": self.gamma,
                "nus": list(self.nus), "nu": self.nu, "c": self.c}


@dataclass(frozen=True)
class Dilated(TPWindow):
    """L^2-normalized dilation b^{-1/2} g(t/b); totally positive with g."""

    base: TPWindow
    b: float
    decay: DecayProfile = field(init=False)

    def __post_init__(self):
        if self.b <= 0:
            raise WindowError("dilation factor must be positive")
        d = self.base.decay
        object.__setattr__(
            self, "decay",
            DecayProfile(C=d.C / math.sqrt(self.b),
                         rate=d.rate / self.b if d.kind == "exp" else d.rate,
                         kind=d.kind))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.base(t / self.b) / math.sqrt(self.b)

    def config(self):
        return {"kind": "dilated", "b": self.b, "base": self.base.config()}


def two_sided_exponential(rate: float = 1.0) -> FiniteProduct:
    """The window exp(-rate*|t|) realized as a two-factor product."""
    if rate <= 0:
        raise WindowError("rate must be positive")
    return FiniteProduct(gamma=0.0, nus=(1.0 / rate, -1.0 / rate), c=2.0 / rate)


_KINDS = {"gaussian", "one_sided_exp", "sech", "finite_product",
          "two_sided_exp", "dilated"}


def window_from_config(cfg: dict) -> TPWindow:
    """Build a window from its JSON-style description.

    Schemas:
        {"kind": "gaussian", "gamma": 3.14159}
        {"kind": "one_sided_exp", "gamma": 1.0}
        {"kind": "sech", "a": 1.0}
        {"kind": "two_sided_exp", "rate": 1.0}
        {"kind": "finite_product", "gamma": 0.0, "nus": [1.0, -1.0],
         "nu": 0.0, "c": 1.0}
    """
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise WindowError("window config must be a dict with a 'kind' key")
    kind = cfg["kind"]
    if kind not in _KINDS:
        raise WindowError(f"unknown window kind {kind!r}")
    if kind == "gaussian":
        return Gaussian(gamma=float(cfg.get("gamma", math.pi)))
    if kind == "one_sided_exp":
        return OneSidedExp(gamma=float(cfg.get("gamma", 1.0)))
    if kind == "sech":
        return HyperbolicSecant(a=float(cfg.get("a", 1.0)))
    if kind == "two_sided_exp":
        return two_sided_exponential(rate=float(cfg.get("rate", 1.0)))
    if kind == "dilated":
        return Dilated(base=window_from_config(cfg["base"]), b=float(cfg["b"]))
    return FiniteProduct(gamma=float(cfg.get("gamma", 0.0)),
                         nus=tuple(cfg.get("nus", ())),
                         nu=float(cfg.get("nu", 0.0)),
                         c=float(cfg.get("c", 1.0)))


def evaluate(w: TPWindow, t):
    """Evaluate the window at t (scalar or array)."""
    return w(t)


def truncation_radius(w: TPWindow, tol: float) -> int:
    """Radius R with sum_{|k|>R} envelope(x-k) < tol for every x in [0,1]."""
    return w.decay.tail_radius(tol)


def tp_samples_matrix(w: TPWindow, xs, ys) -> np.ndarray:
    """Sample matrix (g(x_j - y_k)) for strictly increasing nodes, n <= 12."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1 or len(xs) != len(ys):
        raise WindowError("xs and ys must be 1-D of equal length")
    if len(xs) > 12:
        raise WindowError("minor tests are capped at n <= 12")
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
        raise WindowError("xs and ys must be strictly increasing")
    return w(xs[:, None] - ys[None, :])
