"""Finite sections of the perturbed pre-Gramian sub-matrix G and its checks.

G_{kl} = g(k + delta_k - l) with a p-periodic perturbation delta.  The
operations here verify, at truncation scale, the properties the theory
asserts for the infinite matrix: total positivity of minors, the
uniformly alternating image vector, shift commutation, and off-diagonal
decay of the inverse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import PerturbationSeq
from .windows import DecayProfile, TPWindow, truncation_radius
from .zak import zak_on_half_line


class TPMatrixError(RuntimeError):
    """A finite-section property check failed."""


@dataclass(frozen=True)
class MatrixSection:
    """Dense finite section of an infinite matrix with index offsets.

    Row k of ``entries`` corresponds to infinite-matrix row k + row_offset;
    same for columns.  ``row_points``/``col_points`` give the real sample
    points behind each index so entries can be re-derived.
    """

    entries: np.ndarray
    row_offset: int
    col_offset: int
    row_points: np.ndarray
    col_points: np.ndarray
    decay_cert: DecayProfile
    description: str = ""

    @property
    def shape(self):
        return self.entries.shape


@dataclass(frozen=True)
class AlternatingWitness:
    """Finite section of u = Gc for c_l = (-1)^l."""

    u: np.ndarray
    nu: float
    sign_pattern_ok: bool
    ks: np.ndarray = field(default=None)


@dataclass(frozen=True)
class MinorAuditReport:
    trials: int
    n_max: int
    min_det: float
    min_scaled_det: float
    passed: bool


@dataclass(frozen=True)
class InverseDecayFit:
    C: float
    sigma: float
    cond: float
    distances: np.ndarray
    profile: np.ndarray


def build_G(w: TPWindow, pert: PerturbationSeq, K: int,
            tail_tol: float = 1e-10) -> MatrixSection:
    """(2K+1) x (2K+1) section of G_{kl} = g(k + delta_k - l), k,l in [-K,K]."""
    if K < pert.p:
        raise TPMatrixError("section must cover at least one period: K >= p")
    ks = np.arange(-K, K + 1)
    deltas = np.array([pert.delta(int(k)) for k in ks])
    rows = ks + deltas
    cols = ks.astype(float)
    # argument built as exact integer difference plus delta, so that shifted
    # index pairs (k+p, l+p) evaluate through bitwise-identical floats
    entries = w((ks[:, None] - ks[None, :]).astype(float) + deltas[:, None])
    return MatrixSection(entries=entries, row_offset=-K, col_offset=-K,
                         row_points=rows, col_points=cols,
                         decay_cert=w.decay,
                         description="G_{kl} = g(k + delta_k - l)")


def alternating_witness(w: TPWindow, pert: PerturbationSeq, K: int,
                        tail_tol: float = 1e-10,
                        nu_floor: float = None) -> AlternatingWitness:
    """Compute u_k = sum_l (-1)^l g(k + delta_k - l) for k in [-K, K].

    The column range is extended by the truncation radius so every reported
    u_k is interior.  Verifies the identity u_k = (-1)^k Zg(delta_k, 1/2)
    to 10*tail_tol and that u is uniformly alternating.
    """
    if nu_floor is None:
        nu_floor = 1000.0 * tail_tol
    R = truncation_radius(w, tail_tol)
    ks = np.arange(-K, K + 1)
    deltas = np.array([pert.delta(int(k)) for k in ks])
    ls = np.arange(-K - R - 1, K + R + 2)
    gmat = w((ks + deltas)[:, None] - ls[None, :])
    u = gmat @ ((-1.0) ** ls)

    zvals = np.array([zak_on_half_line(w, pert.delta(r), tail_tol)
                      for r in range(pert.p)])
    expected = ((-1.0) ** ks) * zvals[ks % pert.p]
    dev = np.max(np.abs(u - expected))
    if dev >= 10.0 * tail_tol:
        raise TPMatrixError(
            f"witness identity u_k = (-1)^k Zg(delta_k, 1/2) violated "
            f"by {dev:.3g} (>= {10 * tail_tol:g})")

    nu = float(np.min(np.abs(u)))
    sign_ok = bool(np.all(u[:-1] * u[1:] < 0.0))
    if not sign_ok or nu < nu_floor:
        raise TPMatrixError(
            f"witness degenerate: nu = {nu:.3g}, alternating = {sign_ok}; "
            "delta too close to the Zak zero or window hypothesis failure")
    return AlternatingWitness(u=u, nu=nu, sign_pattern_ok=sign_ok, ks=ks)


def tp_minor_audit(section: MatrixSection, n_max: int = 6,
                   trials: int = 10000, seed: int = 0,
                   tol: float = 1e-10) -> MinorAuditReport:
    """Randomized minor test: sampled minors must be >= -tol * scale^n.

    Samples ``trials`` increasing row/column subsets of size <= n_max and
    evaluates their determinants; the pass criterion normalizes by the
    largest entry magnitude of each submatrix.
    """
    if n_max > 8:
        raise TPMatrixError("minor audit is capped at n_max <= 8")
    A = section.entries
    m, n = A.shape
    rng = np.random.default_rng(seed)
    min_det = math.inf
    min_scaled = math.inf
    for _ in range(trials):
        k = int(rng.integers(1, n_max + 1))
        rows = np.sort(rng.choice(m, size=min(k, m), replace=False))
        cols = np.sort(rng.choice(n, size=min(k, n), replace=False))
        sub = A[np.ix_(rows, cols)]
        d = float(np.linalg.det(sub))
        scale = float(np.max(np.abs(sub)))
        denom = scale ** len(rows)
        scaled = d / denom if denom > 1e-280 else 0.0
        min_det = min(min_det, d)
        min_scaled = min(min_scaled, scaled)
    return MinorAuditReport(trials=trials, n_max=n_max, min_det=min_det,
                            min_scaled_det=min_scaled,
                            passed=bool(min_scaled >= -tol))


def inverse_decay_profile(section: MatrixSection, d_max: int = 12,
                          cond_cap: float = 1e12,
                          tail_tol: float = 1e-10) -> InverseDecayFit:
    """Invert the section and fit |G^{-1}_{kl}| <= C (1+|k-l|)^{-sigma}.

    Only interior rows/columns (at least one truncation radius from the
    section edge) enter the fit; the profile is the per-distance maximum
    of |G^{-1}|, regressed log-log against 1 + distance.
    """
    A = section.entries
    if A.shape[0] != A.shape[1]:
        raise TPMatrixError("inverse decay needs a square section")
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > cond_cap:
        raise TPMatrixError(f"section too ill-conditioned: cond = {cond:.3g}")
    inv = np.linalg.inv(A)
    n = A.shape[0]
    R = section.decay_cert.tail_radius(tail_tol)
    trim = min(R, (n - 1) // 3)
    core = inv[trim:n - trim, trim:n - trim]
    m = core.shape[0]
    idx = np.arange(m)
    dist = np.abs(idx[:, None] - idx[None, :])
    d_hi = min(d_max, m - 1)
    ds, prof = [], []
    for d in range(1, d_hi + 1):
        vals = np.abs(core[dist == d])
        v = float(np.max(vals))
        if v > 1e-300:
            ds.append(d)
            prof.append(v)
    if len(ds) < 3:
        raise TPMatrixError("not enough off-diagonal distances for a decay fit")
    ds = np.array(ds, dtype=float)
    prof = np.array(prof)
    X = np.log1p(ds)
    Y = np.log(prof)
    slope, intercept = np.polyfit(X, Y, 1)
    return InverseDecayFit(C=float(np.exp(intercept)), sigma=float(-slope),
                           cond=cond, distances=ds, profile=prof)
