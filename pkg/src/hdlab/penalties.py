"""Sparsity penalty family: values, derivatives, and scalar prox operators.

Four penalties on the coefficient magnitude t >= 0, each scaled by lam:

  soft  lam * t
  hard  lam*t - t^2/2 below lam, flat lam^2/2 beyond (mcp with gamma = 1)
  scad  linear below lam, quadratic blend up to gamma*lam, then flat
  mcp   lam*t - t^2/(2*gamma) below gamma*lam, then flat

All are folded over sign: P(t) = P(|t|). Derivatives are reported for the
magnitude (one-sided at 0), are nonincreasing, and stay within [0, lam].
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError

FAMILIES = ("soft", "hard", "scad", "mcp")

# Relative slack when picking among prox candidates with (near-)equal
# objective; ties resolve toward the larger magnitude.
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family plus its parameters.

    gamma is required for scad (> 2) and mcp (>= 1) and ignored otherwise.
    """

    family: str
    lam: float
    gamma: float = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(
                "unknown penalty family %r (choose from %s)" % (self.family, "|".join(FAMILIES))
            )
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ConfigurationError("lam must be finite and > 0")
        if self.family == "scad":
            if self.gamma is None or not np.isfinite(self.gamma) or self.gamma <= 2:
                raise ConfigurationError("scad needs gamma > 2")
        elif self.family == "mcp":
            if self.gamma is None or not np.isfinite(self.gamma) or self.gamma < 1:
                raise ConfigurationError("mcp needs gamma >= 1")

    def label(self):
        if self.family in ("soft", "hard"):
            return self.family
        return "%s(%g)" % (self.family, self.gamma)


def parse_penalty(text, lam, gamma=None):
    """Parse the CLI form soft | hard | scad:GAMMA | mcp:GAMMA.

    An explicit :GAMMA wins over the gamma argument; when both are absent the
    conventional defaults 3.7 (scad) and 3.0 (mcp) apply.
    """
    parts = str(text).split(":")
    family = parts[0].strip().lower()
    if len(parts) > 2:
        raise ConfigurationError("bad penalty %r, expected family[:gamma]" % text)
    if len(parts) == 2:
        try:
            gamma = float(parts[1])
        except ValueError:
            raise ConfigurationError("bad gamma in penalty %r" % text)
    if gamma is None:
        gamma = {"scad": 3.7, "mcp": 3.0}.get(family)
    return PenaltySpec(family, lam, gamma)


def _magnitudes(t):
    t = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(t)):
        raise ValidationError("penalty input contains non-finite values")
    return t


def penalty_value(spec, t):
    """P(|t|) evaluated elementwise; scalar in, scalar out."""
    t = _magnitudes(t)
    a = np.abs(t)
    lam = spec.lam
    if spec.family == "soft":
        out = lam * a
    elif spec.family == "hard":
        out = np.where(a <= lam, lam * a - 0.5 * a * a, 0.5 * lam * lam)
    elif spec.family == "mcp":
        g = spec.gamma
        out = np.where(a <= g * lam, lam * a - a * a / (2.0 * g), 0.5 * g * lam * lam)
    else:  # scad
        g = spec.gamma
        mid = (2.0 * g * lam * a - a * a - lam * lam) / (2.0 * (g - 1.0))
        out = np.where(a <= lam, lam * a, np.where(a <= g * lam, mid, 0.5 * (g + 1.0) * lam * lam))
    return float(out) if np.isscalar(t) or t.ndim == 0 else out


def penalty_derivative(spec, t):
    """dP/dt on the magnitude axis, defined for t >= 0 only."""
    t = _magnitudes(t)
    if np.any(t < 0):
        raise ValidationError("penalty_derivative is defined for t >= 0")
    lam = spec.lam
    if spec.family == "soft":
        out = np.full_like(t, lam, dtype=np.float64) if t.ndim else lam
        return out if t.ndim else float(out)
    if spec.family == "hard":
        out = np.maximum(lam - t, 0.0)
    elif spec.family == "mcp":
        out = np.maximum(lam - t / spec.gamma, 0.0)
    else:  # scad
        g = spec.gamma
        out = np.where(t <= lam, lam, np.maximum(g * lam - t, 0.0) / (g - 1.0))
    return float(out) if t.ndim == 0 else out


def prox(spec, z, step):
    """argmin_b 0.5*(b - z)^2 + step * P(|b|), elementwise over z.

    Solved by evaluating the objective at every per-piece stationary point
    (clipped to its piece) together with all piece endpoints; exact for every
    family and step, including the nonconvex pieces where the curvature flips
    once step exceeds gamma (mcp) or gamma - 1 (scad). Ties resolve toward the
    larger magnitude, keeping the sign of z.
    """
    if not (np.isfinite(step) and step > 0):
        raise ValidationError("step must be finite and > 0")
    z = _magnitudes(z)
    scalar = z.ndim == 0
    a = np.abs(np.atleast_1d(z))
    sgn = np.sign(np.atleast_1d(z))
    lam = spec.lam
    s = step

    if spec.family == "soft":
        b = np.maximum(a - s * lam, 0.0)
        out = sgn * b
        return float(out[0]) if scalar else out.reshape(z.shape)

    cands = [np.zeros_like(a)]
    if spec.family == "hard":
        top = lam
        if s != 1.0:
            cands.append(np.clip((a - s * lam) / (1.0 - s), 0.0, lam))
        cands.append(np.full_like(a, lam))
    elif spec.family == "mcp":
        g = spec.gamma
        top = g * lam
        if g != s:
            cands.append(np.clip(g * (a - s * lam) / (g - s), 0.0, top))
        cands.append(np.full_like(a, top))
    else:  # scad
        g = spec.gamma
        top = g * lam
        cands.append(np.clip(a - s * lam, 0.0, lam))
        if g - 1.0 != s:
            cands.append(np.clip((a * (g - 1.0) - s * top) / (g - 1.0 - s), lam, top))
        cands.append(np.full_like(a, lam))
        cands.append(np.full_like(a, top))
    cands.append(np.maximum(a, top))

    C = np.stack(cands)
    G = 0.5 * (C - a) ** 2 + s * penalty_value(spec, C)
    gmin = G.min(axis=0)
    ok = G <= gmin + _TIE_EPS * (1.0 + np.abs(gmin))
    b = np.where(ok, C, -np.inf).max(axis=0)
    out = sgn * b
    return float(out[0]) if scalar else out.reshape(z.shape)
