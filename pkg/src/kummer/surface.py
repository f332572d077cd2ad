"""Kummer sphere meshes and the orbit curves {|mu| = r, h(mu) = h0} on su(2)*."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import KummerError
from .reduction import DualFunction

log = logging.getLogger(__name__)


class EmptyIntersection(KummerError):
    """The level set of h does not meet the sphere."""


def sphere_mesh(r: float, n_lat: int = 24, n_lon: int = 48) -> Tuple[np.ndarray, List[Tuple[int, ...]]]:
    """Latitude-longitude mesh of the sphere of radius ``r``.

    Returns vertices ``(V, 3)`` and faces as 0-based index tuples (triangles
    at the poles, quads elsewhere).
    """
    if n_lat < 2 or n_lon < 3:
        raise ValueError("mesh needs n_lat >= 2 and n_lon >= 3")
    verts = [np.array([0.0, 0.0, r])]
    for i in range(1, n_lat):
        theta = np.pi * i / n_lat
        for j in range(n_lon):
            phi = 2 * np.pi * j / n_lon
            verts.append(r * np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]))
    verts.append(np.array([0.0, 0.0, -r]))
    V = np.array(verts)

    def ring(i, j):
        return 1 + (i - 1) * n_lon + (j % n_lon)

    south = len(V) - 1
    faces = []
    for j in range(n_lon):
        faces.append((0, ring(1, j), ring(1, j + 1)))
    for i in range(1, n_lat - 1):
        for j in range(n_lon):
            faces.append((ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), ring(i, j + 1)))
    for j in range(n_lon):
        faces.append((ring(n_lat - 1, j), south, ring(n_lat - 1, j + 1)))
    return V, faces


def _spherical(r, theta, phi):
    return r * np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


@dataclass
class LevelCurve:
    r: float
    h0: float
    components: List[np.ndarray]

    @property
    def points(self) -> np.ndarray:
        return np.vstack(self.components) if self.components else np.empty((0, 3))

    def residuals(self, h: DualFunction) -> Tuple[np.ndarray, np.ndarray]:
        pts = self.points
        return (np.abs(np.linalg.norm(pts, axis=1) - self.r),
                np.abs(np.array([h(p) for p in pts]) - self.h0))


class _Level:
    def __init__(self, h, r, h0):
        self.h, self.r, self.h0 = h, r, h0

    def g(self, mu) -> float:
        try:
            return self.h(mu) - self.h0
        except KummerError:
            return np.nan

    def tangential_grad(self, mu) -> np.ndarray:
        grad = self.h.gradient(mu)
        n = mu / np.linalg.norm(mu)
        return grad - (grad @ n) * n

    def correct(self, mu, tol, max_iter=30) -> Optional[np.ndarray]:
        """Newton projection onto {|mu| = r, h = h0}; None on failure."""
        mu = self.r * mu / np.linalg.norm(mu)
        for _ in range(max_iter):
            try:
                val = self.h(mu) - self.h0
                if abs(val) <= tol:
                    return mu
                gt = self.tangential_grad(mu)
            except KummerError:
                return None
            gg = gt @ gt
            if not gg > 0:
                return None
            mu = mu - val * gt / gg
            mu = self.r * mu / np.linalg.norm(mu)
        return None


def _seeds(level: _Level, n_scan: int, xtol: float) -> List[np.ndarray]:
    """Roots of h - h0 along latitude circles and meridians."""
    r = level.r
    seeds = []
    thetas = np.pi * (np.arange(1, n_scan) / n_scan)
    phis = np.linspace(0.0, 2 * np.pi, 2 * n_scan + 1)

    def scan(param, fixed_fn, grid):
        vals = np.array([level.g(fixed_fn(param, s)) for s in grid])
        for k in range(len(grid) - 1):
            v0, v1 = vals[k], vals[k + 1]
            if not (np.isfinite(v0) and np.isfinite(v1)):
                continue
            if v0 == 0.0:
                seeds.append(fixed_fn(param, grid[k]))
            elif v0 * v1 < 0:
                s = brentq(lambda t: level.g(fixed_fn(param, t)), grid[k], grid[k + 1], xtol=xtol)
                seeds.append(fixed_fn(param, s))

    for th in thetas:
        scan(th, lambda t, p: _spherical(r, t, p), phis)
    merid = np.linspace(0.0, np.pi, n_scan + 1)[1:-1]
    for ph in phis[:-1]:
        scan(ph, lambda p, t: _spherical(r, t, p), merid)
    return seeds


def trace_level_curve(h: DualFunction, r: float, h0: float, n_scan: int = 90,
                      step: Optional[float] = None, tol: float = 1e-12,
                      max_points: int = 20000) -> LevelCurve:
    """Trace every component of {|mu| = r, h(mu) = h0} by predictor-corrector marching.

    Seeds come from root-finding along latitude and meridian circles; each
    component is marched in both directions until it closes or runs into the
    boundary of the domain of ``h``.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    level = _Level(h, r, h0)
    ds = step if step is not None else 2 * np.pi * r / 360
    seeds = [level.correct(s, tol) for s in _seeds(level, n_scan, xtol=1e-15 * max(1.0, r))]
    seeds = [s for s in seeds if s is not None]
    if not seeds:
        raise EmptyIntersection(f"no points with |mu| = {r} and h = {h0}")

    components: List[np.ndarray] = []
    for seed in seeds:
        if components and min(np.min(np.linalg.norm(c - seed, axis=1)) for c in components) < 2 * ds:
            continue
        branches = []
        closed = False
        for direction in (1.0, -1.0):
            pts, closed = _march(level, seed, direction, ds, tol, max_points)
            branches.append(pts)
            if closed:
                break
        if closed:
            comp = np.array([seed] + branches[0])
        else:
            comp = np.array(branches[1][::-1] + [seed] + branches[0])
        components.append(comp)
    return LevelCurve(r, h0, components)


def _march(level: _Level, start, direction, ds, tol, max_points):
    pts = []
    p = start
    prev_t = None
    for i in range(max_points):
        try:
            gt = level.tangential_grad(p)
        except KummerError:
            break
        n = p / level.r
        t = np.cross(n, gt)
        nt = np.linalg.norm(t)
        if not nt > 1e-12:
            break
        t = direction * t / nt if prev_t is None else np.sign(t @ prev_t) * t / nt
        h_step = ds
        q = None
        while h_step > ds * 1e-4:
            q = level.correct(p + h_step * t, tol)
            if q is not None and np.linalg.norm(q - p) < 2 * h_step:
                break
            q = None
            h_step *= 0.5
        if q is None:
            break
        if i > 2 and np.linalg.norm(q - start) < ds:
            return pts, True
        prev_t = t
        pts.append(q)
        p = q
    return pts, False


def write_obj(path, vertices: np.ndarray, faces) -> None:
    with open(path, "w") as fh:
        fh.write("# sphere mesh\n")
        for v in vertices:
            fh.write("v {:.17g} {:.17g} {:.17g}\n".format(*v))
        for f in faces:
            fh.write("f " + " ".join(str(i + 1) for i in f) + "\n")
