"""Executable checks of the distributional assumptions.

Two kinds of audit are provided.

*Lemma audits* (:func:`audit_four_point`, :func:`audit_hypercube`) check the
finite sufficient conditions under which the lower-bound constructions belong
to the class described by a :class:`GammaParams`.

*Direct audits* (:func:`audit_atomic`) evaluate the assumptions themselves on
an atomic family by exhausting the finitely many breakpoints of each
condition.  They do not rely on any lemma and can therefore catch a lemma
whose sufficient conditions are too weak.

Several conditions hold with equality under the lower-bound schedules, so
comparisons use a small relative slack ``rtol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import AtomicSpec, FourPointFamily, GammaParams, HypercubeFamily

NOISE = "noise"
MARGIN = "margin"
HOLDER = "holder"
MINIMAL_MASS = "minimal_mass"
TAIL = "tail"
RANGE = "quantitative_range"
ASSUMPTIONS = (NOISE, MARGIN, HOLDER, MINIMAL_MASS, TAIL, RANGE)

DEFAULT_RTOL = 1e-9


def _le(lhs: float, rhs: float, rtol: float) -> bool:
    return lhs <= rhs + rtol * max(abs(rhs), abs(lhs)) + 1e-300


@dataclass
class AuditReport:
    """Named boolean checks plus a human-readable note for each failure."""

    checks: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, note: str = ""):
        ok = bool(ok)
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok and note:
            self.notes.setdefault(name, note)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": dict(self.checks), "notes": dict(self.notes)}


# ---------------------------------------------------------------------------
# lemma audits


def audit_four_point(fam: FourPointFamily, g: GammaParams | None = None, n: int | None = None,
                     rtol: float = DEFAULT_RTOL) -> AuditReport:
    g = fam.gamma if g is None else g
    D, r, u, v, w = fam.Delta, fam.r, fam.u, fam.v, fam.w
    rep = AuditReport()
    rep.add("parameters_in_range", all(0 < p < 1 / 6 for p in (D, r, u, v, w)),
            "(Delta, r, u, v, w) must lie in (0, 1/6)")
    rep.add("mass_normalisation", abs(fam.masses().sum() - 1.0) <= 1e-12)
    pi_sum = fam.pi0 + fam.pi1
    rep.add(NOISE, _le(D, g.nu_max / 2, rtol) and pi_sum < g.nu_max,
            f"Delta <= nu_max/2 and pi0 + pi1 = {pi_sum!r} < nu_max")
    rep.add(MARGIN, g.C_alpha >= 4 ** g.alpha and _le(v, D ** g.alpha, rtol),
            "C_alpha >= 4^alpha and v <= Delta^alpha")
    rep.add(HOLDER, _le(D, g.C_beta * r ** g.beta, rtol), "Delta <= C_beta r^beta")
    rep.add(MINIMAL_MASS, _le(w * r ** g.d, u, rtol), "u >= w r^d")
    top = max(w, v)
    rep.add(TAIL, g.gamma <= 1 and g.t_gamma <= 1 / 3 and _le(u, w, rtol)
            and (top >= g.t_gamma or _le(u + v, g.C_gamma * top ** g.gamma, rtol)),
            "gamma <= 1, t_gamma <= 1/3, u <= w and u + v <= C_gamma max{w, v}^gamma")
    rep.add(RANGE, g.t_tau <= 1 / 3 and _le(D, g.C_tau * w ** g.tau, rtol),
            "t_tau <= 1/3 and Delta <= C_tau w^tau")
    if n is not None:
        rep.add("kl_budget", _le(8 * n * u * D * D, g.nu_max, rtol), "8 n u Delta^2 <= nu_max")
    return rep


def audit_hypercube(fam: HypercubeFamily, g: GammaParams | None = None, n: int | None = None,
                    rtol: float = DEFAULT_RTOL) -> AuditReport:
    g = fam.gamma if g is None else g
    l, m, w, D = fam.l, fam.m, fam.w, fam.Delta
    rep = AuditReport()
    _, mass = fam.atoms()
    rep.add("mass_normalisation", abs(mass.sum() - 1.0) <= 1e-12 and np.all(mass >= 0))
    rep.add("m_le_half_cube", 1 <= m <= 2 ** (l - 1), f"1 <= m = {m} <= 2^(l-1)")
    sharp = fam.sharp_codes
    rep.add("sharp_last_bit_one", bool(np.all(sharp % 2 == 1)) and len(set(sharp.tolist())) == m)
    rest = mass[2:][np.setdiff1d(np.arange(1 << l), sharp)]
    rep.add("rest_mass_floor", _le(2.0 ** (-l) / 6, float(rest.min()), rtol),
            "atoms off A-sharp carry at least 2^-l / 6")
    rep.add(NOISE, True)
    rep.add(MARGIN, _le(m * w * 2.0 ** (-l), g.C_alpha * (D / 2) ** g.alpha, rtol)
            and _le(2 / 3 + m * fam.v, g.C_alpha * 0.5 ** g.alpha, rtol),
            "m w 2^-l <= C_alpha (Delta/2)^alpha and 2/3 + m v <= C_alpha 2^-alpha")
    rep.add(HOLDER, _le(D, g.C_beta * 2.0 ** (-(l - 1) * g.beta / fam.d), rtol),
            "Delta <= C_beta 2^(-(l-1) beta/d)")
    rep.add(MINIMAL_MASS, True)
    rep.add(TAIL, g.t_gamma <= 1 / 24 and _le(m * w * 2.0 ** (-l), g.C_gamma * (w / 8) ** g.gamma, rtol),
            "t_gamma <= 1/24 and m w 2^-l <= C_gamma (w/8)^gamma")
    rep.add(RANGE, g.t_tau <= 1 / 3, "t_tau <= 1/3")
    a, b, d, gam = g.alpha, g.beta, g.d, g.gamma
    rep.add("v_identity", math.isclose(fam.v, D ** ((a * b + gam * d) / (gam * b)) / 3, rel_tol=1e-9))
    if n is not None:
        e = b * gam / (gam * (2 * b + d) + a * b)
        hi = (2.0 * n) ** (-e)
        rep.add("delta_bracket", _le(4.0 ** (-b / d) * hi, D, rtol) and _le(D, hi, rtol),
                "4^(-beta/d) (2n)^-e <= Delta <= (2n)^-e")
    return rep


# ---------------------------------------------------------------------------
# direct audits


def _pairwise_rows(spec: AtomicSpec, pts: np.ndarray):
    for i in range(len(pts)):
        yield i, spec.metric.distances(pts, pts[i], spec.nbits)


def audit_atomic(spec: AtomicSpec, g: GammaParams | None = None,
                 rtol: float = DEFAULT_RTOL, max_atoms: int = 5000) -> AuditReport:
    """Check every assumption directly on the atoms of ``spec``.

    Each condition is piecewise constant in its free variable, so checking
    the supremum of every piece is exhaustive.
    """
    g = spec.gamma if g is None else g
    pts, mass = spec.atoms()
    keep = mass > 0
    pts, mass = pts[keep], mass[keep]
    if len(pts) > max_atoms:
        raise ValueError(f"direct audit limited to {max_atoms} atoms, got {len(pts)}")
    eta = spec.eta_encoded(pts)
    omega = spec.omega_encoded(pts)
    rep = AuditReport()

    rep.add(NOISE, spec.pi0 + spec.pi1 < g.nu_max, "pi0 + pi1 < nu_max")

    # margin: worst xi is just above each positive gap
    gap = np.abs(eta - 0.5)
    pos = gap > 0
    order = np.argsort(gap[pos], kind="stable")
    gs, ms = gap[pos][order], np.cumsum(mass[pos][order])
    for j in range(len(gs)):
        if j + 1 < len(gs) and gs[j + 1] == gs[j]:
            continue
        if gs[j] < 1:
            rep.add(MARGIN, _le(ms[j], g.C_alpha * gs[j] ** g.alpha, rtol),
                    f"mass {ms[j]!r} with gap <= {gs[j]!r}")

    rep.add(HOLDER, True)
    rep.add(MINIMAL_MASS, True)
    for i, dist in _pairwise_rows(spec, pts):
        near = (dist > 0) & (dist < 1)
        if np.any(near):
            diff = np.abs(eta[near] - eta[i])
            bound = g.C_beta * dist[near] ** g.beta
            bad = ~np.array([_le(x, y, rtol) for x, y in zip(diff, bound)])
            rep.add(HOLDER, not bad.any(), f"atom {i}: eta gap exceeds C_beta rho^beta")
        # minimal mass: ball mass constant on (rho_k, rho_{k+1}], worst r at the right end
        radii, inv = np.unique(dist, return_inverse=True)
        ball = np.cumsum(np.bincount(inv, weights=mass))
        for k in range(len(radii)):
            if radii[k] >= 1:
                break
            r_hi = min(radii[k + 1], 1.0) if k + 1 < len(radii) else 1.0
            rep.add(MINIMAL_MASS, _le(omega[i] * r_hi ** g.d, ball[k], rtol),
                    f"atom {i}: ball mass {ball[k]!r} below omega r^d at r={r_hi!r}")

    # tail: worst epsilon is just above each omega level below t_gamma
    levels = np.unique(omega)
    for lev in levels:
        if lev >= g.t_gamma:
            break
        below = float(mass[omega <= lev].sum())
        rep.add(TAIL, _le(below, g.C_gamma * lev ** g.gamma, rtol),
                f"mass {below!r} with omega <= {lev!r} exceeds C_gamma omega^gamma")
    rep.add(TAIL, True)

    # quantitative range: worst epsilon is the left end of each piece
    rep.add(RANGE, True)
    for left in np.concatenate([[0.0], levels]):
        if left >= g.t_tau:
            break
        sel = omega > left
        if not sel.any():
            rep.add(RANGE, False, f"no atom with omega > {left!r}")
            continue
        lhs = max(float(eta[sel].min()), float((1.0 - eta[sel]).min()))
        rhs = g.C_tau * left ** g.tau if left > 0 else 0.0
        rep.add(RANGE, _le(lhs, rhs, rtol), f"range gap {lhs!r} at epsilon {left!r}")
    return rep
