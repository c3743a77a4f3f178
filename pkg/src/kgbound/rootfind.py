"""Root location and refinement for the quantization residual.

The residual is scanned on a uniform energy grid over the physical window;
sign changes between adjacent valid nodes become brackets, except where the
quantization denominator changes sign inside the pair (a pole, not a root).
Brackets are refined with a secant method that falls back to bisection
whenever the secant step leaves the bracket or stalls.  Converged roots are
deduplicated and classified into the lower/upper spectral lines of each
(n, l) cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import _kernels, quantization
from .errors import ConvergenceError, DomainError
from .model import (CouplingMode, ParticleSpec, PhysicalConstants,
                    PotentialSpec, QuantumNumbers, parse_branch)
from .quantization import ResidualSpec, SpectrumEntry, build_residual_spec

DEDUP_FACTOR = 10.0


@dataclass(frozen=True)
class SolverConfig:
    grid_points: int = 4000
    tol_energy: float = 1e-9     # MeV
    tol_residual: float = 1e-8   # MeV
    max_iter: int = 200
    window_margin: float = quantization.DEFAULT_WINDOW_MARGIN  # MeV

    def __post_init__(self):
        if not (isinstance(self.grid_points, int) and self.grid_points >= 100):
            raise DomainError(f"grid_points must be an integer >= 100, got {self.grid_points!r}")
        for name in ("tol_energy", "tol_residual", "window_margin"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite, got {v}")
        if not (isinstance(self.max_iter, int) and self.max_iter >= 8):
            raise DomainError(f"max_iter must be an integer >= 8, got {self.max_iter!r}")


@dataclass(frozen=True)
class RefineResult:
    energy: float
    residual: float
    iterations: int


def energy_grid(spec: ResidualSpec, config: SolverConfig) -> np.ndarray:
    lo, hi = spec.window
    return np.linspace(lo, hi, config.grid_points)


def bracket_scan(spec: ResidualSpec, config: SolverConfig) -> List[Tuple[float, float]]:
    """Sign-change brackets of the residual on the scan grid.

    Pairs whose denominator changes sign are discarded: the residual jumps
    through a pole there instead of crossing zero.  A node where the
    residual vanishes exactly yields a degenerate (E, E) bracket.
    """
    E = energy_grid(spec, config)
    res, _, den, status = quantization.evaluate_grid(spec, E)
    ok = status == _kernels.STATUS_OK
    pair_ok = ok[:-1] & ok[1:] & (den[:-1] * den[1:] > 0.0)
    crossing = pair_ok & (res[:-1] * res[1:] < 0.0)
    brackets = [(float(E[i]), float(E[i + 1])) for i in np.nonzero(crossing)[0]]
    for i in np.nonzero(ok & (res == 0.0))[0]:
        brackets.append((float(E[i]), float(E[i])))
    brackets.sort(key=lambda ab: ab[0] + ab[1])
    return brackets


def locate_poles(spec: ResidualSpec, config: SolverConfig) -> List[float]:
    """Energies where the quantization denominator n + eta + 1 vanishes,
    found by bisecting denominator sign changes on the scan grid."""
    E = energy_grid(spec, config)
    _, _, den, status = quantization.evaluate_grid(spec, E)
    usable = np.isfinite(den)
    poles = []
    for i in np.nonzero(usable[:-1] & usable[1:] & (den[:-1] * den[1:] < 0.0))[0]:
        a, b = float(E[i]), float(E[i + 1])
        da = float(den[i])
        while b - a > config.tol_energy:
            mid = 0.5 * (a + b)
            dm = quantization.evaluate(spec, mid)[2]
            if not math.isfinite(dm):
                break
            if da * dm <= 0.0:
                b = mid
            else:
                a, da = mid, dm
        poles.append(0.5 * (a + b))
    return poles


def secant_refine(f: Callable[[float], float], bracket: Tuple[float, float],
                  config: SolverConfig) -> RefineResult:
    """Refine a sign-change bracket to a root of f.

    Secant steps are used while they stay inside the current bracket and
    keep making progress; otherwise the step is a bisection.  Convergence
    requires both the energy and the residual tolerance.
    """
    a, b = bracket
    if a > b:
        a, b = b, a
    if a == b:
        fa = f(a)
        if abs(fa) <= config.tol_residual:
            return RefineResult(energy=a, residual=fa, iterations=0)
        raise ConvergenceError(f"degenerate bracket at E={a} has residual {fa}",
                               best_energy=a, best_residual=fa, iterations=0)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return RefineResult(energy=a, residual=fa, iterations=0)
    if fb == 0.0:
        return RefineResult(energy=b, residual=fb, iterations=0)
    if fa * fb > 0.0:
        raise DomainError(f"no sign change on [{a}, {b}]")

    x0, f0, x1, f1 = a, fa, b, fb
    best_x, best_f = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    force_bisect = False
    for it in range(1, config.max_iter + 1):
        x = None
        if not force_bisect and f1 != f0:
            x = x1 - f1 * (x1 - x0) / (f1 - f0)
            if not (a < x < b):
                x = None
        if x is None:
            x = 0.5 * (a + b)
        fx = f(x)
        if abs(fx) < abs(best_f):
            best_x, best_f = x, fx
        step = abs(x - x1)
        x0, f0, x1, f1 = x1, f1, x, fx
        if fx == 0.0:
            return RefineResult(energy=x, residual=fx, iterations=it)
        if fa * fx < 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
        width = b - a
        if abs(fx) <= config.tol_residual and (step <= config.tol_energy
                                               or width <= config.tol_energy):
            return RefineResult(energy=x, residual=fx, iterations=it)
        # A stalled secant (tiny step, residual still too large) must not
        # spin in place; take a bisection next.
        force_bisect = step <= config.tol_energy
    raise ConvergenceError(
        f"no convergence after {config.max_iter} iterations on [{bracket[0]}, {bracket[1]}]",
        best_energy=best_x, best_residual=best_f, iterations=config.max_iter)


def _dedup(roots: List[RefineResult], tol_energy: float) -> List[RefineResult]:
    if not roots:
        return []
    roots = sorted(roots, key=lambda r: r.energy)
    merged = [roots[0]]
    for r in roots[1:]:
        if r.energy - merged[-1].energy <= DEDUP_FACTOR * tol_energy:
            if abs(r.residual) < abs(merged[-1].residual):
                merged[-1] = r
        else:
            merged.append(r)
    return merged


@dataclass(frozen=True)
class CellResult:
    """All spectral lines found for one (n, l) cell."""

    n: int
    l: int
    lower: SpectrumEntry
    upper: SpectrumEntry
    extras: tuple = ()

    @property
    def entries(self) -> tuple:
        return (self.lower, self.upper) + self.extras


def _absent(spec: ResidualSpec, line: str, detail: str) -> SpectrumEntry:
    return SpectrumEntry(n=spec.n, l=spec.l, line=line,
                         branch=spec.describe_branch(), energy=None,
                         residual_at_root=None, iterations=0,
                         status="absent", detail=detail)


def _converged(spec: ResidualSpec, line: str, r: RefineResult) -> SpectrumEntry:
    return SpectrumEntry(n=spec.n, l=spec.l, line=line,
                         branch=spec.describe_branch(), energy=r.energy,
                         residual_at_root=r.residual, iterations=r.iterations,
                         status="converged")


def _failed(spec: ResidualSpec, line: str, err: ConvergenceError) -> SpectrumEntry:
    return SpectrumEntry(n=spec.n, l=spec.l, line=line,
                         branch=spec.describe_branch(), energy=None,
                         residual_at_root=err.best_residual,
                         iterations=err.iterations, status="failed",
                         detail=str(err))


def absence_reason(spec: ResidualSpec, config: SolverConfig) -> str:
    """Short diagnostic for a cell with no root on the scan grid."""
    E = energy_grid(spec, config)
    res, rhs, _, status = quantization.evaluate_grid(spec, E)
    ok = status == _kernels.STATUS_OK
    if not ok.any():
        if (status == _kernels.STATUS_COMPLEX_ETA).all():
            return "eta complex over the whole window"
        return "no valid evaluation point in the window"
    if (rhs[ok] < 0.0).all():
        return "quantization RHS negative over the window"
    return "no sign change of the residual on the scan grid"


def solve_cell(spec: ResidualSpec, config: SolverConfig = SolverConfig()) -> CellResult:
    """Scan, refine, deduplicate, and classify the roots of one cell.

    Classification: two or more roots put the smallest on the lower line
    and the largest on the upper line; a single root goes to the lower
    line when negative, the upper line otherwise.
    """
    def f(E: float) -> float:
        return quantization.residual(spec, E)

    roots: List[RefineResult] = []
    failures: List[ConvergenceError] = []
    for bracket in bracket_scan(spec, config):
        try:
            r = secant_refine(f, bracket, config)
        except ConvergenceError as err:
            failures.append(err)
            continue
        if quantization.sign_validity(spec, r.energy):
            roots.append(r)
    roots = _dedup(roots, config.tol_energy)

    extras: List[SpectrumEntry] = []
    if not roots:
        reason = absence_reason(spec, config)
        lower = _absent(spec, "lower", reason)
        upper = _absent(spec, "upper", reason)
    elif len(roots) == 1:
        r = roots[0]
        if r.energy < 0.0:
            lower = _converged(spec, "lower", r)
            upper = _absent(spec, "upper", "single root, negative")
        else:
            lower = _absent(spec, "lower", "single root, non-negative")
            upper = _converged(spec, "upper", r)
    else:
        lower = _converged(spec, "lower", roots[0])
        upper = _converged(spec, "upper", roots[-1])
        for r in roots[1:-1]:
            line = "lower" if r.energy < 0.0 else "upper"
            e = _converged(spec, line, r)
            extras.append(replace(e, detail="unclassified extra root"))
    for err in failures:
        line = "lower" if (err.best_energy is not None
                           and err.best_energy < 0.0) else "upper"
        extras.append(_failed(spec, line, err))
    return CellResult(n=spec.n, l=spec.l, lower=lower, upper=upper,
                      extras=tuple(extras))


@dataclass(frozen=True)
class SpectrumTable:
    """Solved spectrum over a set of (n, l) cells, with input echo."""

    mode: CouplingMode
    hbar_c: float
    m0c2: float
    lam: float
    A: float
    delta: float
    lambda_b: float
    branch: str
    n_max: int
    l_max: Optional[int]
    cells: tuple = field(default_factory=tuple)

    def cell(self, n: int, l: int) -> CellResult:
        for c in self.cells:
            if c.n == n and c.l == l:
                return c
        raise KeyError(f"cell (n={n}, l={l}) not in table")

    def energy(self, n: int, l: int, line: str) -> Optional[float]:
        c = self.cell(n, l)
        entry = c.lower if line == "lower" else c.upper
        return entry.energy

    @property
    def entries(self) -> tuple:
        out = []
        for c in self.cells:
            out.extend(c.entries)
        return tuple(out)

    def to_payload(self) -> dict:
        return {
            "mode": self.mode.value,
            "hbar_c": self.hbar_c,
            "m0c2": self.m0c2,
            "lambda": self.lam,
            "A": self.A,
            "delta": self.delta,
            "lambda_b": self.lambda_b,
            "branch": self.branch,
            "n_max": self.n_max,
            "l_max": self.l_max,
            "cells": [
                {
                    "n": c.n,
                    "l": c.l,
                    "entries": [
                        {
                            "n": e.n, "l": e.l, "line": e.line,
                            "branch": e.branch, "energy": e.energy,
                            "residual_at_root": e.residual_at_root,
                            "iterations": e.iterations, "status": e.status,
                            "detail": e.detail,
                        }
                        for e in c.entries
                    ],
                }
                for c in self.cells
            ],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "SpectrumTable":
        def entry(d):
            return SpectrumEntry(n=d["n"], l=d["l"], line=d["line"],
                                 branch=d["branch"], energy=d["energy"],
                                 residual_at_root=d["residual_at_root"],
                                 iterations=d["iterations"], status=d["status"],
                                 detail=d.get("detail", ""))
        cells = []
        for c in payload["cells"]:
            entries = [entry(d) for d in c["entries"]]
            lower = next(e for e in entries if e.line == "lower")
            upper = next(e for e in entries if e.line == "upper")
            extras = tuple(e for e in entries if e is not lower and e is not upper)
            cells.append(CellResult(n=c["n"], l=c["l"], lower=lower,
                                    upper=upper, extras=extras))
        return cls(mode=CouplingMode.parse(payload["mode"]),
                   hbar_c=payload["hbar_c"], m0c2=payload["m0c2"],
                   lam=payload["lambda"], A=payload["A"],
                   delta=payload["delta"], lambda_b=payload["lambda_b"],
                   branch=payload["branch"], n_max=payload["n_max"],
                   l_max=payload["l_max"], cells=tuple(cells))


def spectrum_cells(n_max: int, l_max: Optional[int]) -> List[Tuple[int, int]]:
    """Triangular cell list l <= min(n, l_max), the tabulated layout."""
    if not (isinstance(n_max, int) and n_max >= 0):
        raise DomainError(f"n_max must be a non-negative integer, got {n_max!r}")
    if l_max is not None and not (isinstance(l_max, int) and l_max >= 0):
        raise DomainError(f"l_max must be a non-negative integer, got {l_max!r}")
    cells = []
    for n in range(n_max + 1):
        top = n if l_max is None else min(n, l_max)
        for l in range(top + 1):
            cells.append((n, l))
    return cells


def solve_spectrum(constants: PhysicalConstants, particle: ParticleSpec,
                   pot: PotentialSpec, n_max: int, l_max: Optional[int] = None,
                   branch: str = "plus",
                   config: SolverConfig = SolverConfig()) -> SpectrumTable:
    """Solve every (n, l) cell and collect the classified lines."""
    branch_name = "plus" if parse_branch(branch) > 0.0 else "minus"
    cells = []
    for n, l in spectrum_cells(n_max, l_max):
        spec = build_residual_spec(constants, particle, pot,
                                   QuantumNumbers(n=n, l=l), branch=branch,
                                   window_margin=config.window_margin)
        cells.append(solve_cell(spec, config))
    return SpectrumTable(mode=pot.mode, hbar_c=constants.hbar_c,
                         m0c2=particle.m0c2, lam=particle.lam, A=pot.A,
                         delta=pot.delta, lambda_b=pot.lambda_b(particle),
                         branch=branch_name, n_max=n_max, l_max=l_max,
                         cells=tuple(cells))
