"""Rank-one large-argument behaviour of E_k and the short-time heat-kernel ratio.

With w_k(x) = 2^k |x|^{2k} the limit constant has two independent forms:

    A = Gamma(2k+1) / (2^k Gamma(k+1))        (large-argument 1F1 expansion)
    B = c_k / (c_0 2^k)                        (v_e = i^{-k} c_k / c_0)

with c_k, c_0 taken from quadrature.  The probes compare against B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ConfigurationError
from .quadrature import gaussian_wk_rule
from .reports import Report
from .roots import rank_one
from .scalars import Q, to_exact
from .special import hyp1f1, rank_one_kernel_imag, rank_one_kernel_scaled


def constant_from_expansion(k: float) -> float:
    return math.exp(math.lgamma(2 * k + 1) - k * math.log(2) - math.lgamma(k + 1))


def constant_from_normalization(k: float, nodes: int = 80) -> float:
    ck = gaussian_wk_rule(rank_one(_exact(k)), nodes).total()
    c0 = gaussian_wk_rule(rank_one(0), nodes).total()
    return ck / (c0 * 2 ** k)


def _exact(k):
    return to_exact(k)


@dataclass
class AsymptoticProbe:
    k: float
    ck: float
    c0: float

    @classmethod
    def build(cls, k, nodes: int = 80):
        kq = _exact(k)
        if kq < 0:
            raise ConfigurationError("asymptotic probes need k >= 0")
        ck = gaussian_wk_rule(rank_one(kq), nodes).total()
        c0 = gaussian_wk_rule(rank_one(0), nodes).total()
        return cls(float(kq), ck, c0)

    def weight(self, x: float) -> float:
        return 2 ** self.k * abs(x) ** (2 * self.k)

    def v_e(self) -> complex:
        return (1j) ** (-self.k) * self.ck / self.c0

    def ray_target(self, x, y) -> complex:
        return self.v_e() / math.sqrt(self.weight(x) * self.weight(y))

    def half_plane_target(self, x, y) -> complex:
        return (1j) ** self.k * self.ray_target(x, y)


def _same_chamber(x, y):
    if not (x > 0 and y > 0 or x < 0 and y < 0):
        raise ConfigurationError("x and y must lie in the same open chamber")


def ray_limit_probe(probe: AsymptoticProbe, x: float, y: float, t_values) -> list:
    """Rows (t, t^k e^{-itxy} E_k(itx, y), target, |error|)."""
    _same_chamber(x, y)
    target = probe.ray_target(x, y)
    rows = []
    for t in t_values:
        s = t * x * y
        value = complex(t ** probe.k * np.exp(-1j * s) * rank_one_kernel_imag(probe.k, s))
        rows.append((t, value, target, abs(value - target)))
    return rows


def half_plane_limit_probe(probe: AsymptoticProbe, x: float, y: float, radii=(50, 100, 200),
                           arc_points: int = 41) -> list:
    """Rows (|z|, worst value, target, max error over the arc |arg z| <= pi/2 - 0.1)."""
    _same_chamber(x, y)
    target = probe.half_plane_target(x, y)
    rows = []
    for R in radii:
        worst, at = -1.0, None
        for th in np.linspace(-math.pi / 2 + 0.1, math.pi / 2 - 0.1, arc_points):
            z = R * complex(math.cos(th), math.sin(th))
            # z^k e^{-zxy} E_k(zx, y) = z^k 1F1(k, 2k+1, -2zxy)
            value = z ** probe.k * complex(hyp1f1(probe.k, 2 * probe.k + 1, -2 * z * x * y))
            err = abs(value - target)
            if err > worst:
                worst, at = err, value
        rows.append((R, at, target, worst))
    return rows


def heat_ratio(probe: AsymptoticProbe, t: float, x: float, y: float) -> float:
    """sqrt(w_k(x) w_k(y)) Gamma_k(t,x,y) / Gamma_0(t,x,y), formed in logs."""
    k = probe.k
    u = x * y / (2 * t)
    scaled = float(rank_one_kernel_scaled(k, u))
    if scaled > 1e-300:
        log_e = math.log(scaled)
    else:
        # e^{-|u|} E_k(u) underflowed (u << 0): use E_k(u) = e^u 1F1(k, 2k+1, -2u) in logs
        log_e = u - abs(u) + float(mpmath.log(mpmath.hyp1f1(k, 2 * k + 1, -2 * u)))
    log_k = (-k - 0.5) * math.log(2 * t) - math.log(probe.ck) - (abs(x) - abs(y)) ** 2 / (4 * t) + log_e
    log_0 = -0.5 * math.log(2 * t) - math.log(probe.c0) - (x - y) ** 2 / (4 * t)
    log_w = 0.5 * (math.log(probe.weight(x)) + math.log(probe.weight(y)))
    try:
        return math.exp(log_w + log_k - log_0)
    except OverflowError:
        return math.inf


def short_time_heat_ratio(probe: AsymptoticProbe, x: float, y: float, t_values) -> list:
    """Rows (t, ratio, 1, |ratio - 1|)."""
    return [(t, r, 1.0, abs(r - 1)) for t in t_values for r in [heat_ratio(probe, t, x, y)]]


ROUNDING_FLOOR = 1e-12


def _strictly_decreasing(errors):
    # k = 0 is exact: errors already at rounding level count as converged
    return all(b < a or max(a, b) <= ROUNDING_FLOOR for a, b in zip(errors, errors[1:]))


# -- checks -----------------------------------------------------------------

def check_constants(ks=("1/4", "1/2", "1", "3/2"), tol=1e-8) -> Report:
    rep = Report("limit constant, two routes")
    for k in ks:
        kf = float(Q(k))
        a, b = constant_from_expansion(kf), constant_from_normalization(kf)
        err = abs(a - b) / a
        rep.add(f"k={k}: Gamma(2k+1)/(2^k Gamma(k+1)) = c_k/(c_0 2^k)", "limit constant",
                err <= tol, f"{a:.15g} vs {b:.15g}", error=err, tolerance=tol)
    return rep


def check_ray(probe: AsymptoticProbe, x=1.0, y=1.0, t_values=(50, 100, 200, 400)) -> Report:
    rep = Report("ray limit")
    rows = ray_limit_probe(probe, x, y, t_values)
    errs = [r[3] for r in rows]
    rep.add(f"k={probe.k:g}: t^k e^(-itxy) E_k(itx,y) -> v_e/sqrt(w_k(x)w_k(y))", "ray limit",
            _strictly_decreasing(errs), "errors " + ", ".join(f"t={t:g}:{e:.3e}" for t, e in zip(t_values, errs)))
    return rep


def check_half_plane(probe: AsymptoticProbe, x=1.0, y=1.0, radii=(50, 100, 200)) -> Report:
    rep = Report("half-plane limit")
    rows = half_plane_limit_probe(probe, x, y, radii)
    errs = [r[3] for r in rows]
    rep.add(f"k={probe.k:g}: z^k e^(-zxy) E_k(zx,y) -> i^k v_e/sqrt(w_k(x)w_k(y))", "half-plane limit",
            _strictly_decreasing(errs), "max errors " + ", ".join(f"|z|={R}:{e:.3e}" for R, e in zip(radii, errs)))
    return rep


def check_heat_ratio(probe: AsymptoticProbe, x=1.0, y=1.0, t_values=(1e-1, 1e-2, 1e-3), tol=5e-2) -> Report:
    rep = Report("short-time heat ratio")
    rows = short_time_heat_ratio(probe, x, y, t_values)
    errs = [r[3] for r in rows]
    ok = _strictly_decreasing(errs) and errs[-1] <= tol
    rep.add(f"k={probe.k:g}: sqrt(w_k(x)w_k(y)) Gamma_k/Gamma_0 -> 1", "short-time heat ratio", ok,
            "ratios " + ", ".join(f"t={t:g}:{r[1]:.6f}" for t, r in zip(t_values, rows)),
            error=errs[-1], tolerance=tol)
    return rep


def opposite_chamber_ratios(probe: AsymptoticProbe, x=1.0, t_values=(1e-1, 1e-2, 1e-3)) -> list:
    """Logged only: for y = -x the ratio leaves every neighbourhood of 1."""
    return [heat_ratio(probe, t, x, -x) for t in t_values]
