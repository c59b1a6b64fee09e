"""Synthetic distribution families with exact regression functions.

Each family knows its marginal, regression function, noise channel and the
local density proxy ``omega`` used by the minimal-mass, tail and
quantitative-range conditions.  Atomic families (finite support) also expose
their atoms so that excess risk and the distributional assumptions can be
evaluated exactly.

Families:

* :class:`FourPointFamily` -- four atoms ``a, b, c, d``; the two-hypothesis
  construction behind the unknown-noise lower bound.
* :class:`HypercubeFamily` -- bitstrings of length ``l`` plus two anchors; the
  ``(m, v, Delta)``-hypercube behind the noise-free lower bound.
* :class:`LaplaceLogisticFamily` -- standard Laplace marginal on the real
  line with a logistic regression function of slope ``tau``.
* :class:`TableFamily` -- any finite metric space given explicitly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, fields, replace
from typing import Callable, NamedTuple

import numpy as np

from . import rng as rngmod
from .errors import ParameterError
from .metric import (
    ANCHOR_ONE,
    ANCHOR_ZERO,
    BITS,
    MAX_BITS,
    REAL,
    SYMBOL,
    Dataset,
    DiscreteTable,
    Euclidean,
    HypercubeUltrametric,
)

GAMMA_FIELDS = (
    "nu_max", "d", "alpha", "C_alpha", "beta", "C_beta",
    "gamma", "t_gamma", "C_gamma", "tau", "t_tau", "C_tau",
)


@dataclass(frozen=True)
class GammaParams:
    """Exponents and constants describing a distribution class.

    ``certified`` names the fields a family provably satisfies; the rest are
    nominal (reported for rate formulas only).
    """

    nu_max: float = 0.5
    d: float = 1.0
    alpha: float = 1.0
    C_alpha: float = 1.0
    beta: float = 1.0
    C_beta: float = 1.0
    gamma: float = 1.0
    t_gamma: float = 0.5
    C_gamma: float = 1.0
    tau: float = 1.0
    t_tau: float = 0.5
    C_tau: float = 1.0
    certified: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        checks = [
            (0 < self.nu_max < 1, "nu_max in (0,1)"),
            (self.d > 0, "d > 0"),
            (self.alpha >= 0, "alpha >= 0"),
            (self.C_alpha >= 1, "C_alpha >= 1"),
            (0 < self.beta <= 1, "beta in (0,1]"),
            (self.C_beta >= 1, "C_beta >= 1"),
            (self.gamma > 0, "gamma > 0"),
            (0 < self.t_gamma < 1, "t_gamma in (0,1)"),
            (self.C_gamma >= 1, "C_gamma >= 1"),
            (self.tau > 0, "tau > 0"),
            (0 < self.t_tau < 1, "t_tau in (0,1)"),
            (self.C_tau >= 1, "C_tau >= 1"),
        ]
        for ok, what in checks:
            if not ok:
                raise ParameterError(f"GammaParams violates {what}")
        unknown = set(self.certified) - set(GAMMA_FIELDS)
        if unknown:
            raise ParameterError(f"unknown certified fields: {sorted(unknown)}")
        object.__setattr__(self, "certified", frozenset(self.certified))

    def flags(self) -> dict:
        return {f: ("certified" if f in self.certified else "nominal") for f in GAMMA_FIELDS}

    def as_dict(self) -> dict:
        return {f: getattr(self, f) for f in GAMMA_FIELDS}

    @classmethod
    def from_dict(cls, data: dict) -> "GammaParams":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ParameterError(f"unknown Gamma fields: {sorted(extra)}")
        kwargs = dict(data)
        if "certified" in kwargs:
            kwargs["certified"] = frozenset(kwargs["certified"])
        return cls(**kwargs)


@dataclass(frozen=True)
class NoiseSpec:
    pi0: float = 0.0
    pi1: float = 0.0

    def __post_init__(self):
        if not (0 <= self.pi0 < 1 and 0 <= self.pi1 < 1 and self.pi0 + self.pi1 < 1):
            raise ParameterError(
                f"noise rates need pi0, pi1 in [0,1) with pi0 + pi1 < 1, got {self.pi0}, {self.pi1}"
            )


def corrupt(eta, pi0: float, pi1: float):
    """Corrupted regression function ``(1 - pi0 - pi1) * eta + pi0``."""
    return (1.0 - pi0 - pi1) * np.asarray(eta, dtype=np.float64) + pi0


def _logistic(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


class ExcessRisk(NamedTuple):
    value: float
    stderr: float  # 0 in exact mode


class DistributionSpec:
    """Common sampling and evaluation machinery.

    Subclasses provide ``kind``, ``metric``, ``noise``, ``gamma`` and the
    vectorised ``eta_encoded``, ``omega_encoded`` and ``sample_x``.
    """

    kind: str
    nbits: int | None = None
    labels: tuple | None = None
    is_atomic = False

    # --- to implement -------------------------------------------------
    def eta_encoded(self, points) -> np.ndarray:
        raise NotImplementedError

    def omega_encoded(self, points) -> np.ndarray:
        raise NotImplementedError

    def sample_x(self, n: int, seed: int, stream: int = rngmod.STREAM_X) -> np.ndarray:
        raise NotImplementedError

    # --- derived --------------------------------------------------------
    @property
    def pi0(self) -> float:
        return self.noise.pi0

    @property
    def pi1(self) -> float:
        return self.noise.pi1

    def eta_tilde_encoded(self, points) -> np.ndarray:
        return corrupt(self.eta_encoded(points), self.pi0, self.pi1)

    def bayes_encoded(self, points) -> np.ndarray:
        return (self.eta_encoded(points) >= 0.5).astype(np.int64)

    def encode(self, x):
        return self._probe_dataset().encode(x, self.metric)

    def _probe_dataset(self) -> Dataset:
        if self.kind == REAL:
            return Dataset(np.zeros((1, 1)), [0.0], REAL)
        if self.kind == SYMBOL:
            return Dataset([0], [0.0], SYMBOL, labels=self.labels)
        return Dataset([ANCHOR_ZERO], [0.0], BITS, nbits=self.nbits)

    def _one(self, fn, x) -> float:
        enc = self.encode(x)
        arr = np.asarray([enc]) if self.kind != REAL else np.asarray(enc).reshape(1, -1)
        return float(fn(arr)[0])

    def eta(self, x) -> float:
        return self._one(self.eta_encoded, x)

    def eta_tilde(self, x) -> float:
        return self._one(self.eta_tilde_encoded, x)

    def bayes(self, x) -> int:
        return int(self._one(self.bayes_encoded, x))

    def omega(self, x) -> float:
        return self._one(self.omega_encoded, x)

    @property
    def true_sup_eta_tilde(self) -> float:
        """``1 - pi1``: the supremum of the corrupted regression function."""
        return 1.0 - self.pi1

    @property
    def true_inf_eta_tilde(self) -> float:
        return self.pi0

    def _dataset(self, x, z) -> Dataset:
        return Dataset(x, z, self.kind, self.nbits, self.labels)

    def _draw(self, n: int, seed: int):
        if n < 1:
            raise ParameterError(f"sample size must be >= 1, got {n}")
        x = self.sample_x(n, seed)
        u_y = rngmod.generator(seed, rngmod.STREAM_Y).random(n)
        y = (u_y < self.eta_encoded(x)).astype(np.float64)
        u_f = rngmod.generator(seed, rngmod.STREAM_FLIP).random(n)
        flip_prob = np.where(y == 1.0, self.pi1, self.pi0)
        y_tilde = np.where(u_f < flip_prob, 1.0 - y, y)
        return x, y, y_tilde

    def sample_clean(self, n: int, seed: int) -> Dataset:
        x, y, _ = self._draw(n, seed)
        return self._dataset(x, y)

    def sample_corrupted(self, n: int, seed: int) -> Dataset:
        x, _, y_tilde = self._draw(n, seed)
        return self._dataset(x, y_tilde)

    def sample_both(self, n: int, seed: int) -> tuple[Dataset, np.ndarray]:
        """Corrupted dataset plus the clean labels of the same draw."""
        x, y, y_tilde = self._draw(n, seed)
        return self._dataset(x, y_tilde), y

    def describe(self) -> dict:
        raise NotImplementedError


class AtomicSpec(DistributionSpec):
    """Finite support: atoms with exact masses."""

    is_atomic = True

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """Encoded atom points and their masses."""
        raise NotImplementedError

    def sample_x(self, n: int, seed: int, stream: int = rngmod.STREAM_X) -> np.ndarray:
        pts, mass = self.atoms()
        cum = np.cumsum(mass)
        u = rngmod.generator(seed, stream).random(n) * cum[-1]
        idx = np.minimum(np.searchsorted(cum, u, side="right"), len(pts) - 1)
        return pts[idx]

    def range_extremes(self) -> tuple[float, float]:
        """Exact (inf, sup) of eta_tilde over atoms with positive mass."""
        pts, mass = self.atoms()
        et = self.eta_tilde_encoded(pts[mass > 0])
        return float(et.min()), float(et.max())


# ---------------------------------------------------------------------------
# four-point construction

FOUR_POINT_LABELS = ("a", "b", "c", "d")


@dataclass(frozen=True, eq=False)
class FourPointFamily(AtomicSpec):
    iota: int
    Delta: float
    r: float
    u: float
    v: float
    w: float
    nu_max: float
    gamma: GammaParams = field(default_factory=GammaParams)

    kind = SYMBOL
    labels = FOUR_POINT_LABELS

    def __post_init__(self):
        if self.iota not in (0, 1):
            raise ParameterError(f"iota must be 0 or 1, got {self.iota}")
        for name in ("Delta", "r", "u", "v", "w"):
            val = getattr(self, name)
            if not 0 < val < 1 / 6:
                raise ParameterError(f"{name} = {val} outside (0, 1/6)")
        if not 0 < self.nu_max < 1:
            raise ParameterError(f"nu_max must lie in (0,1), got {self.nu_max}")
        mat = np.ones((4, 4)) - np.eye(4)
        mat[0, 1] = mat[1, 0] = self.r
        object.__setattr__(self, "metric", DiscreteTable(mat, FOUR_POINT_LABELS))
        pi1 = self.nu_max / 4 if self.iota == 0 else self.Delta + (self.nu_max / 4) * (1 - self.Delta)
        object.__setattr__(self, "noise", NoiseSpec(0.0, pi1))

    def masses(self) -> np.ndarray:
        return np.array([self.u, 1 / 3, self.v, 2 / 3 - self.u - self.v])

    def eta_values(self) -> np.ndarray:
        D = self.Delta
        if self.iota == 0:
            return np.array([1.0, 1.0 - D, (1.0 - D) / (2.0 - D), 0.0])
        return np.array([1.0, 1.0, 1.0 / (2.0 - D), 0.0])

    def omega_values(self) -> np.ndarray:
        return np.array([self.w, 1 / 3, self.v, 1 / 3])

    def atoms(self):
        return np.arange(4, dtype=np.int64), self.masses()

    def eta_encoded(self, points):
        return self.eta_values()[np.asarray(points, dtype=np.int64)]

    def omega_encoded(self, points):
        return self.omega_values()[np.asarray(points, dtype=np.int64)]

    def describe(self) -> dict:
        return {
            "family": "four_point", "iota": self.iota, "Delta": self.Delta, "r": self.r,
            "u": self.u, "v": self.v, "w": self.w, "nu_max": self.nu_max,
            "gamma": self.gamma.as_dict(),
        }


# ---------------------------------------------------------------------------
# hypercube construction


@dataclass(frozen=True, eq=False)
class HypercubeFamily(AtomicSpec):
    l: int
    w: float
    Delta: float
    m: int
    d: float
    signs: tuple
    gamma: GammaParams = field(default_factory=GammaParams)

    kind = BITS

    def __post_init__(self):
        if not 2 <= self.l <= MAX_BITS:
            raise ParameterError(f"l must lie in [2, {MAX_BITS}], got {self.l}")
        if not 0 < self.w <= 1 / 3:
            raise ParameterError(f"w must lie in (0, 1/3], got {self.w}")
        if not 0 <= self.Delta <= 1:
            raise ParameterError(f"Delta must lie in [0, 1], got {self.Delta}")
        if not 1 <= self.m <= 2 ** (self.l - 1):
            raise ParameterError(f"m = {self.m} violates 1 <= m <= 2^(l-1) = {2 ** (self.l - 1)}")
        if len(self.signs) != self.m or any(s not in (-1, 1) for s in self.signs):
            raise ParameterError("signs must be a +-1 vector of length m")
        object.__setattr__(self, "nbits", self.l)
        object.__setattr__(self, "metric", HypercubeUltrametric(self.d))
        object.__setattr__(self, "noise", NoiseSpec(0.0, 0.0))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))

    @property
    def v(self) -> float:
        return self.w * 2.0 ** (-self.l)

    @property
    def sharp_codes(self) -> np.ndarray:
        # lexicographically first m strings ending in 1
        return 2 * np.arange(self.m, dtype=np.int64) + 1

    def _sign_lookup(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=np.int64)
        g = np.zeros(len(p))
        sharp = (p >= 0) & (p % 2 == 1) & ((p - 1) // 2 < self.m)
        g[sharp] = np.asarray(self.signs, dtype=np.float64)[(p[sharp] - 1) // 2]
        return g, sharp

    def atoms(self):
        size = 1 << self.l
        pts = np.concatenate([[ANCHOR_ZERO, ANCHOR_ONE], np.arange(size, dtype=np.int64)])
        rest = (1.0 - 3.0 * self.m * self.v) / (3.0 * (size - self.m))
        mass = np.full(len(pts), rest)
        mass[:2] = 1.0 / 3.0
        mass[2 + self.sharp_codes] = self.v
        return pts, mass

    def eta_encoded(self, points):
        p = np.asarray(points, dtype=np.int64)
        g, sharp = self._sign_lookup(p)
        out = np.full(len(p), 0.5)
        out[sharp] = (1.0 + self.Delta * g[sharp]) / 2.0
        out[p == ANCHOR_ZERO] = 0.0
        out[p == ANCHOR_ONE] = 1.0
        return out

    def omega_encoded(self, points):
        p = np.asarray(points, dtype=np.int64)
        _, sharp = self._sign_lookup(p)
        out = np.full(len(p), 1.0 / 24.0)
        out[sharp] = self.w / 8.0
        out[p < 0] = 1.0 / 3.0
        return out

    def describe(self) -> dict:
        return {
            "family": "hypercube", "l": self.l, "w": self.w, "Delta": self.Delta, "m": self.m,
            "d": self.d, "signs": list(self.signs), "gamma": self.gamma.as_dict(),
        }


# ---------------------------------------------------------------------------
# Laplace marginal, logistic regression function


@dataclass(frozen=True, eq=False)
class LaplaceLogisticFamily(DistributionSpec):
    tau: float
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    gamma: GammaParams = field(default_factory=GammaParams)

    kind = REAL

    def __post_init__(self):
        if not self.tau > 0:
            raise ParameterError(f"tau must be positive, got {self.tau}")
        object.__setattr__(self, "metric", Euclidean())

    @staticmethod
    def density(x):
        return 0.5 * np.exp(-np.abs(np.asarray(x, dtype=np.float64)))

    def eta_encoded(self, points):
        x = np.asarray(points, dtype=np.float64).reshape(-1)
        return _logistic(self.tau * x)

    def omega_encoded(self, points):
        # omega taken equal to the density; never reaches 1
        return np.minimum(self.density(np.asarray(points).reshape(-1)), 0.5)

    def sample_x(self, n: int, seed: int, stream: int = rngmod.STREAM_X) -> np.ndarray:
        return rngmod.generator(seed, stream).laplace(0.0, 1.0, size=n).reshape(-1, 1)

    def describe(self) -> dict:
        return {
            "family": "laplace_logistic", "tau": self.tau,
            "pi0": self.noise.pi0, "pi1": self.noise.pi1, "gamma": self.gamma.as_dict(),
        }


# ---------------------------------------------------------------------------
# explicit finite table


@dataclass(frozen=True, eq=False)
class TableFamily(AtomicSpec):
    symbols: tuple
    distances: np.ndarray
    masses_: np.ndarray
    eta_: np.ndarray
    omega_: np.ndarray
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    gamma: GammaParams = field(default_factory=GammaParams)

    kind = SYMBOL

    def __post_init__(self):
        labels = tuple(str(s) for s in self.symbols)
        object.__setattr__(self, "symbols", labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "metric", DiscreteTable(self.distances, labels))
        k = len(labels)
        arrays = {}
        for name in ("masses_", "eta_", "omega_"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (k,):
                raise ParameterError(f"{name.rstrip('_')} needs one value per atom")
            arrays[name] = arr
            object.__setattr__(self, name, arr)
        mass = arrays["masses_"]
        if np.any(mass < 0) or abs(mass.sum() - 1.0) > 1e-12:
            raise ParameterError("atom masses must be nonnegative and sum to 1")
        if np.any((arrays["eta_"] < 0) | (arrays["eta_"] > 1)):
            raise ParameterError("eta values must lie in [0, 1]")
        if np.any((arrays["omega_"] <= 0) | (arrays["omega_"] >= 1)):
            raise ParameterError("omega values must lie in (0, 1)")

    def atoms(self):
        return np.arange(len(self.labels), dtype=np.int64), self.masses_

    def eta_encoded(self, points):
        return self.eta_[np.asarray(points, dtype=np.int64)]

    def omega_encoded(self, points):
        return self.omega_[np.asarray(points, dtype=np.int64)]

    def describe(self) -> dict:
        return {
            "family": "table", "labels": list(self.labels),
            "distances": self.metric.matrix.tolist(), "masses": self.masses_.tolist(),
            "eta": self.eta_.tolist(), "omega": self.omega_.tolist(),
            "pi0": self.noise.pi0, "pi1": self.noise.pi1, "gamma": self.gamma.as_dict(),
        }


# ---------------------------------------------------------------------------
# excess risk


def excess_risk(spec: DistributionSpec, rule: Callable, mc_n: int | None = None,
                seed: int = 0) -> ExcessRisk:
    """Excess risk ``integral of |2 eta - 1| 1{rule != bayes} d mu``.

    ``rule`` maps an array of encoded points to 0/1 labels.  With
    ``mc_n=None`` the integral is an exact sum over atoms (atomic families
    only); otherwise it is a Monte-Carlo average over ``mc_n`` fresh draws.
    """
    if mc_n is None:
        if not spec.is_atomic:
            raise ParameterError("exact excess risk needs a finite-support family")
        pts, mass = spec.atoms()
        gap = np.abs(2.0 * spec.eta_encoded(pts) - 1.0)
        wrong = np.asarray(rule(pts)) != spec.bayes_encoded(pts)
        return ExcessRisk(float(np.sum(gap * wrong * mass)), 0.0)
    if mc_n < 2:
        raise ParameterError("Monte-Carlo excess risk needs mc_n >= 2")
    x = spec.sample_x(mc_n, seed, stream=rngmod.STREAM_EVAL)
    gap = np.abs(2.0 * spec.eta_encoded(x) - 1.0)
    loss = gap * (np.asarray(rule(x)) != spec.bayes_encoded(x))
    return ExcessRisk(float(loss.mean()), float(loss.std(ddof=1) / math.sqrt(mc_n)))


# ---------------------------------------------------------------------------
# lower-bound parameter schedules


def _require(ok: bool, constraint: str):
    if not ok:
        raise ParameterError(f"violated constraint: {constraint}")


def lb_parameters_unknown_noise(n: int, g: GammaParams) -> tuple[FourPointFamily, FourPointFamily]:
    """The pair of four-point families used for the unknown-noise lower bound."""
    _require(n >= 1, "n >= 1")
    _require(g.alpha > 0, "alpha > 0 (alpha = 0 forces v = 1)")
    _require(g.d >= g.alpha * g.beta, "d >= alpha * beta")
    _require(g.gamma <= 1, "gamma <= 1")
    _require(g.C_alpha >= 4 ** g.alpha, "C_alpha >= 4^alpha")
    _require(g.t_gamma < 1 / 24, "t_gamma < 1/24")
    _require(g.t_tau < 1 / 3, "t_tau < 1/3")
    a, b, d, tau = g.alpha, g.beta, g.d, g.tau
    expo = tau * b / (tau * (2 * b + d) + b)
    Delta = 6.0 ** (-(1 + 1 / a + tau)) * g.nu_max * (2.0 * n) ** (-expo)
    params = dict(
        Delta=Delta,
        r=Delta ** (1 / b),
        u=Delta ** ((b + tau * d) / (tau * b)),
        v=Delta ** a,
        w=Delta ** (1 / tau),
    )
    for name, val in params.items():
        _require(0 < val < 1 / 6, f"{name} in (0, 1/6) (got {val!r})")
    # tail condition just above max{w, v}, where atoms a and c both fall below epsilon
    top = max(params["w"], params["v"])
    _require(top >= g.t_gamma or params["u"] + params["v"] <= g.C_gamma * top ** g.gamma,
             "u + v <= C_gamma max{w, v}^gamma (tail; C_gamma >= 2 always suffices)")
    cert = frozenset(GAMMA_FIELDS)
    gc = replace(g, certified=cert)
    return (FourPointFamily(0, nu_max=g.nu_max, gamma=gc, **params),
            FourPointFamily(1, nu_max=g.nu_max, gamma=gc, **params))


def lb_parameters_hypercube(n: int, g: GammaParams, seed: int = 0) -> HypercubeFamily:
    """The hypercube family used for the noise-free lower bound.

    The sign vector is drawn uniformly from {-1, +1}^m under ``seed``.
    """
    _require(n >= 1, "n >= 1")
    a, b, d, gam = g.alpha, g.beta, g.d, g.gamma
    _require(a * b <= d, "alpha * beta <= d")
    _require(g.t_gamma < 1 / 24, "t_gamma < 1/24")
    _require(g.t_tau < 1 / 3, "t_tau < 1/3")
    l = math.ceil(d * gam / (gam * (2 * b + d) + a * b) * math.log(2 * n) / math.log(2)) + 1
    _require(l <= MAX_BITS, f"l <= {MAX_BITS} (got {l})")
    Delta = (2.0 ** (-l)) ** (b / d)
    w = Delta ** (a / gam) / 3.0
    m = math.floor(
        min(0.5, 2.0 ** (-a), 24.0 ** (-gam)) * Delta ** (-(a * b + gam * (d - a * b)) / (gam * b))
    )
    _require(m >= 1, f"m >= 1 (got m = {m}; n too small)")
    _require(m <= 2 ** (l - 1), f"m <= 2^(l-1) (got m = {m}, l = {l})")
    # margin just above 1/2, where the two anchors join the sharp atoms
    v = w * 2.0 ** (-l)
    _require(2 / 3 + m * v <= g.C_alpha * 2.0 ** (-a),
             "2/3 + m v <= C_alpha 2^-alpha (margin; C_alpha >= 2^alpha always suffices)")
    signs = rngmod.generator(seed, rngmod.STREAM_SIGNS).choice([-1, 1], size=m)
    gc = replace(g, certified=frozenset(GAMMA_FIELDS))
    return HypercubeFamily(l=l, w=w, Delta=Delta, m=m, d=d, signs=tuple(signs.tolist()), gamma=gc)


# ---------------------------------------------------------------------------
# minimax exponent

NOISE_LIMITED = "noise-limited"
CLASSIFICATION_LIMITED = "classification-limited"
TIE = "tie"


class RateExponent(NamedTuple):
    exponent: float
    branch: str
    classification_exponent: float
    noise_exponent: float


def rate_exponent(g: GammaParams) -> RateExponent:
    """Minimax excess-risk exponent: the minimum of the two branches.

    The noise branch is active exactly when ``tau * alpha < gamma``.
    """
    a, b, d, gam, tau = g.alpha, g.beta, g.d, g.gamma, g.tau
    if gam <= b / (2 * b + d):
        warnings.warn(
            f"gamma = {gam} <= beta/(2 beta + d); the upper bound does not apply",
            stacklevel=2,
        )
    e_cls = gam * b * (a + 1) / (gam * (2 * b + d) + a * b)
    e_noise = tau * b * (a + 1) / (tau * (2 * b + d) + b)
    if tau * a < gam:
        branch = NOISE_LIMITED
    elif tau * a > gam:
        branch = CLASSIFICATION_LIMITED
    else:
        branch = TIE
    return RateExponent(min(e_cls, e_noise), branch, e_cls, e_noise)
