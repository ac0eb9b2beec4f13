"""
Transparency-dip detection on absorption spectra.

A dip is a local minimum of the absorption channel. Its depth is measured
against the lower of the two flanking maxima (topographic prominence divided
by that envelope) and its width at the half-depth level, interpolating
linearly between samples.

Two control resonances at the same frequency but with different widths do not
produce two minima: the narrow dip sits at the bottom of the broad one. Such
nested dips show up as a shoulder on each flank, a point where the flank
flattens out before steepening again. With ``nested=True`` (the default)
:func:`detect_dips` splits a dip with a shoulder on both flanks into an outer
dip (envelope down to the shoulder level) and an inner dip (shoulder level
down to the floor).
"""

from dataclasses import dataclass, field
import json
import math

import numpy as np
from scipy.signal import find_peaks, peak_widths

from .circuits import equivalent_caps

__all__ = ["make_grid", "Dip", "DipReport", "DipMatch", "detect_dips",
           "classify", "resonance_frequency", "compare_dip_positions"]

DEFAULT_PROMINENCE = 0.05
# a flank slope relaxing below this fraction of its neighbouring steepness is a shoulder
SHOULDER_RATIO = 0.75
MIN_SAMPLES_PER_DIP = 3


def make_grid(start, stop, n, scale="lin"):
    """Frequency grid of ``n`` points including both end points."""
    if not (0 < start < stop):
        raise ValueError(f"need 0 < start < stop, got start={start}, stop={stop}")
    if int(n) != n or n < 2:
        raise ValueError(f"need an integer n >= 2, got {n}")
    n = int(n)
    if scale == "lin":
        g = np.linspace(start, stop, n)
    elif scale == "log":
        g = np.geomspace(start, stop, n)
    else:
        raise ValueError(f"unknown scale {scale!r}")
    g[0], g[-1] = start, stop
    return g


@dataclass(frozen=True)
class Dip:
    omega: float
    depth: float
    fwhm: float
    nested: bool = False


@dataclass(frozen=True)
class DipReport:
    dips: tuple
    classification: str
    warnings: tuple = ()

    @property
    def count(self):
        return len(self.dips)

    @property
    def centers(self):
        return np.array([d.omega for d in self.dips])

    def to_dict(self):
        d = {
            "classification": self.classification,
            "dips": [{"omega": x.omega, "depth": x.depth, "fwhm": x.fwhm} for x in self.dips],
        }
        if self.warnings:
            d["warnings"] = list(self.warnings)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1)


def classify(n):
    return {0: "NoEIT", 1: "SingleEIT", 2: "DoubleEIT"}.get(n, f"Other({n})")


def _at(omegas, pos):
    """Angular frequency at a fractional sample index."""
    return float(np.interp(pos, np.arange(len(omegas)), omegas))


def _crossing(y, level, start, stop):
    """Fractional index where ``y`` first crosses ``level`` walking start -> stop."""
    step = 1 if stop > start else -1
    i = start
    while i != stop:
        j = i + step
        if (y[i] - level) * (y[j] - level) <= 0 and y[i] != y[j]:
            return i + step * (level - y[i]) / (y[j] - y[i])
        i = j
    return float(stop)


def _shoulder(slope, lo, hi, falling):
    """Most pronounced shoulder index in ``slope[lo:hi]`` or None.

    On a falling flank the slope is negative and a shoulder is a local
    maximum of the slope; on a rising flank a local minimum.
    """
    s = -slope[lo:hi] if falling else slope[lo:hi]
    best, best_ratio = None, SHOULDER_RATIO
    for i in range(1, len(s) - 1):
        if not (s[i] > 0 and s[i] <= s[i - 1] and s[i] < s[i + 1]):
            continue
        if falling:
            outer, inner = s[:i].max(), s[i + 1:].max()
        else:
            outer, inner = s[i + 1:].max(), s[:i].max()
        ratio = s[i] / min(outer, inner)
        if ratio <= best_ratio:
            best, best_ratio = lo + i, ratio
    return best


def _split_nested(w, y, m, lb, rb, prominence):
    slope = np.diff(y) / np.diff(w)
    sl = _shoulder(slope, lb, m, falling=True)
    sr = _shoulder(slope, m, rb, falling=False)
    if sl is None or sr is None:
        return None
    lev_l = 0.5 * (y[sl] + y[sl + 1])
    lev_r = 0.5 * (y[sr] + y[sr + 1])
    env_out = min(y[lb], y[rb])
    env_in, floor_out = min(lev_l, lev_r), max(lev_l, lev_r)
    floor_in = y[m]
    if env_in <= 0 or env_out <= 0:
        return None
    depth_in = (env_in - floor_in) / env_in
    depth_out = (env_out - floor_out) / env_out
    if depth_in <= prominence or depth_out <= prominence:
        return None
    half_in = floor_in + 0.5 * (env_in - floor_in)
    li = _crossing(y, half_in, m, sl)
    ri = _crossing(y, half_in, m, sr + 1)
    inner = Dip(float(w[m]), float(depth_in), _at(w, ri) - _at(w, li), True)
    half_out = floor_out + 0.5 * (env_out - floor_out)
    lo = _crossing(y, half_out, sl, lb)
    ro = _crossing(y, half_out, sr + 1, rb)
    wl, wr = _at(w, lo), _at(w, ro)
    outer = Dip(0.5 * (wl + wr), float(depth_out), wr - wl, True)
    return outer, inner, (ri - li, ro - lo)


def detect_dips(spectrum, prominence=DEFAULT_PROMINENCE, nested=True):
    """Find transparency dips in ``spectrum.absorption``.

    Returns a :class:`DipReport` with dips sorted by centre frequency.
    Dips narrower than three grid samples are kept but flagged in
    ``warnings``.
    """
    w = np.asarray(spectrum.omegas, dtype=float)
    y = np.asarray(spectrum.absorption, dtype=float)
    if len(w) < 5:
        raise ValueError("dip detection needs at least 5 samples")
    if not (0 < prominence < 1):
        raise ValueError("prominence must lie in (0, 1)")
    idx, props = find_peaks(-y, prominence=(None, None))
    dips, warnings = [], []
    if len(idx):
        halfw = peak_widths(-y, idx, rel_height=0.5,
                            prominence_data=(props["prominences"], props["left_bases"],
                                             props["right_bases"]))
    for k, m in enumerate(idx):
        lb, rb = props["left_bases"][k], props["right_bases"][k]
        env = min(y[lb], y[rb])
        if env <= 0:
            continue
        depth = props["prominences"][k] / env
        if depth <= prominence:
            continue
        found = _split_nested(w, y, m, lb, rb, prominence) if nested else None
        if found:
            outer, inner, widths = found
            new = [outer, inner]
        else:
            fw = _at(w, halfw[3][k]) - _at(w, halfw[2][k])
            new = [Dip(float(w[m]), float(min(depth, 1.0)), fw)]
            widths = (halfw[0][k],)
        dips.extend(new)
        if min(widths) < MIN_SAMPLES_PER_DIP:
            warnings.append(f"dip near omega={w[m]!r} spans fewer than "
                            f"{MIN_SAMPLES_PER_DIP} grid samples; refine the grid")
    dips.sort(key=lambda d: (d.omega, -d.fwhm))
    return DipReport(tuple(dips), classify(len(dips)), tuple(warnings))


def resonance_frequency(p, coupling_caps=None):
    """Natural frequency ``1/sqrt(L1 Ce1)`` of the driven loop.

    ``coupling_caps`` defaults to the circuit's own topology (2 with loop 3,
    1 without).
    """
    if not (p.L1 > 0 and p.C1 > 0 and p.C > 0):
        raise ValueError("loop-1 values must be positive")
    return 1.0 / math.sqrt(p.L1 * equivalent_caps(p, coupling_caps).Ce1)


@dataclass(frozen=True)
class DipMatch:
    pairs: tuple
    max_discrepancy: float
    count_mismatch: bool
    tol: float
    unmatched: tuple = field(default=())

    @property
    def ok(self):
        return not self.count_mismatch and self.max_discrepancy <= self.tol


def compare_dip_positions(a, b, tol):
    """Greedily pair dips of two reports by closest centre frequency."""
    ca, cb = list(a.centers), list(b.centers)
    cand = sorted((abs(x - y), i, j) for i, x in enumerate(ca) for j, y in enumerate(cb))
    used_a, used_b, pairs = set(), set(), []
    for d, i, j in cand:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        pairs.append((ca[i], cb[j]))
    pairs.sort()
    worst = max((abs(x - y) for x, y in pairs), default=0.0)
    unmatched = tuple(c for i, c in enumerate(ca) if i not in used_a) + \
        tuple(c for j, c in enumerate(cb) if j not in used_b)
    return DipMatch(tuple(pairs), float(worst), len(ca) != len(cb), tol, unmatched)
