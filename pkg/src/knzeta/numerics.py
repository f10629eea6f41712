"""Floating-point checks: Gamma, Selberg and Mehta closed forms, and Monte
Carlo evaluation of the KN integral (phi = 1) over bounded domains."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

import numpy as np

from . import ratpoly
from .arrangement import SVariable, kn_variables
from .errors import MalformedInputError, RegionError, UnsupportedDomainError
from .zeta import ConvergenceCondition, Domain, polar_report

RealParams = Mapping[SVariable, float]

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x: float) -> float:
    """Gamma via the Lanczos series (g = 7, 9 terms) and reflection below 1/2."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (x + k)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def beta_fn(a: float, b: float) -> float:
    return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b)


def selberg(N: int, alpha: float, beta: float, gamma: float) -> float:
    """Closed form of the Selberg integral S_N(alpha, beta, gamma)."""
    if N < 1:
        raise MalformedInputError("N must be >= 1")
    if alpha <= 0 or beta <= 0:
        raise RegionError("Selberg needs alpha > 0 and beta > 0")
    lim = 1.0 / N if N == 1 else min(1.0 / N, alpha / (N - 1), beta / (N - 1))
    if gamma <= -lim:
        raise RegionError(f"Selberg needs gamma > {-lim}")
    out = 1.0
    for j in range(N):
        out *= (gamma_fn(alpha + j * gamma) * gamma_fn(beta + j * gamma)
                * gamma_fn(1 + (j + 1) * gamma))
        out /= gamma_fn(alpha + beta + (N + j - 1) * gamma) * gamma_fn(1 + gamma)
    return out


def mehta(N: int, gamma: float) -> float:
    """Mehta's integral F_N(gamma) = prod_{j=1..N} Gamma(1 + j gamma) / Gamma(1 + gamma),
    normalised by the standard Gaussian weight. The product runs to N."""
    if N < 1:
        raise MalformedInputError("N must be >= 1")
    if gamma <= -1.0 / N:
        raise RegionError(f"Mehta needs gamma > {-1.0 / N}")
    out = 1.0
    for j in range(1, N + 1):
        out *= gamma_fn(1 + j * gamma) / gamma_fn(1 + gamma)
    return out


def selberg_params(N: int, alpha: float, beta: float, gamma: float) -> dict[SVariable, float]:
    """KN exponents turning the cube integral into S_N(alpha, beta, gamma)."""
    out = {}
    for v in kn_variables(N):
        if v.kind == "zero":
            out[v] = alpha - 1
        elif v.kind == "one":
            out[v] = beta - 1
        else:
            out[v] = 2 * gamma
    return out


# -- Monte Carlo ------------------------------------------------------------------

@dataclass(frozen=True)
class EvalResult:
    estimate: float
    stderr: float
    samples: int
    seed: int


def _streams(seed: int, count: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


def _generator(ss: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(ss))


def _combine(parts: Sequence[tuple[int, float, float]], seed: int) -> EvalResult:
    """Merge per-chunk (count, mean, M2) in a fixed order."""
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        if nb == 0:
            continue
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    stderr = math.sqrt(m2 / (n - 1) / n) if n > 1 else float("inf")
    return EvalResult(float(mean), float(stderr), n, seed)


def _chunk_stats(w: np.ndarray) -> tuple[int, float, float]:
    mean = float(w.mean())
    return len(w), mean, float(((w - mean) ** 2).sum())


def _run_chunks(fn: Callable[[np.random.Generator, int], np.ndarray], samples: int,
                seed: int, chunk: int, workers: int) -> EvalResult:
    if samples < 2:
        raise MalformedInputError("need at least two samples")
    sizes = [chunk] * (samples // chunk)
    if samples % chunk:
        sizes.append(samples % chunk)
    jobs = list(zip(_streams(seed, len(sizes)), sizes))

    def one(job):
        ss, size = job
        return _chunk_stats(fn(_generator(ss), size))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, jobs))
    else:
        parts = [one(j) for j in jobs]
    return _combine(parts, seed)


def check_region(N: int, D: Domain, s: RealParams) -> list[ConvergenceCondition]:
    """Region of convergence over D; raises RegionError naming a violated condition."""
    missing = [v for v in kn_variables(N) if v not in s]
    if missing:
        raise MalformedInputError(f"parameters missing for {', '.join(map(str, missing))}")
    exact = {v: Fraction(float(s[v])) for v in kn_variables(N)}
    region = polar_report(N, D).region()
    for c in region:
        if not c.holds(exact):
            raise RegionError(f"parameters violate {c}", c)
    return region


class _KNIntegrand:
    """Beta importance sampler for the KN integrand over a bounded domain."""

    def __init__(self, N: int, D: Domain, s: RealParams):
        box = ratpoly.coordinate_bounds(D.polyhedron)
        if box is None:
            raise UnsupportedDomainError("Monte Carlo needs a bounded domain")
        self.N = N
        self.lo = np.array([float(lo) for lo, _ in box])
        self.width = np.array([float(hi - lo) for lo, hi in box])
        self.lo_at = [lo for lo, _ in box]
        self.hi_at = [hi for _, hi in box]
        self.s0 = np.array([float(s[SVariable.zero(i)]) for i in range(1, N + 1)])
        self.s1 = np.array([float(s[SVariable.one(i, N)]) for i in range(1, N + 1)])
        self.pairs = [(i, j, float(s[SVariable.diag(i + 1, j + 1)]))
                      for i, j in combinations(range(N), 2)]
        self.ineq = np.array([[float(c) for c in f.coeffs] for f in D.polyhedron.inequalities]
                             ).reshape(-1, N)
        self.ineq_c = np.array([float(f.constant) for f in D.polyhedron.inequalities])
        a, b = [], []
        for i in range(N):
            a.append(self._shape(i, self.lo_at[i]))
            b.append(self._shape(i, self.hi_at[i]))
        self.a = np.array(a)
        self.b = np.array(b)
        self.log_norm = sum(math.log(beta_fn(ai, bi)) + math.log(wi)
                            for ai, bi, wi in zip(self.a, self.b, self.width))

    def _exponent_at(self, i: int, end: Fraction) -> float | None:
        if end == 0:
            return self.s0[i]
        if end == 1:
            return self.s1[i]
        return None

    def _shape(self, i: int, end: Fraction) -> float:
        e = self._exponent_at(i, end)
        if e is None or e <= -1:
            return 1.0
        return 1.0 + e

    def __call__(self, rng: np.random.Generator, size: int) -> np.ndarray:
        N = self.N
        u = rng.beta(self.a, self.b, size=(size, N))
        u = np.clip(u, np.finfo(float).tiny, 1.0 - np.finfo(float).epsneg)
        x = self.lo + self.width * u
        log_u, log_1mu = np.log(u), np.log1p(-u)
        logw = np.full(size, self.log_norm)
        for i in range(N):
            cu = -(self.a[i] - 1.0)
            cv = -(self.b[i] - 1.0)
            # |x_i|^s0 and |1 - x_i|^s1, folded into log u / log(1-u) where
            # the box endpoint sits exactly on the singular hyperplane
            for expo, end, sing in ((self.s0[i], 0, 0.0), (self.s1[i], 1, 1.0)):
                if expo == 0:
                    continue
                if self.lo_at[i] == end:
                    cu += expo
                    logw += expo * math.log(self.width[i])
                elif self.hi_at[i] == end:
                    cv += expo
                    logw += expo * math.log(self.width[i])
                else:
                    logw += expo * np.log(np.abs(x[:, i] - sing))
            if cu != 0:
                logw += cu * log_u[:, i]
            if cv != 0:
                logw += cv * log_1mu[:, i]
        for i, j, expo in self.pairs:
            if expo != 0:
                logw += expo * np.log(np.abs(x[:, i] - x[:, j]))
        w = np.exp(logw)
        if len(self.ineq_c):
            inside = np.all(x @ self.ineq.T + self.ineq_c >= 0, axis=1)
            w = np.where(inside, w, 0.0)
        return w


def eval_zeta_mc(N: int, D: Domain, s: RealParams, samples: int = 10**6, seed: int = 0,
                 chunk: int = 1 << 16, workers: int = 1) -> EvalResult:
    """Monte Carlo estimate of the KN integral over a bounded D at real s."""
    if not D.bounded:
        raise UnsupportedDomainError("Monte Carlo needs a bounded domain")
    check_region(N, D, s)
    return _run_chunks(_KNIntegrand(N, D, s), samples, seed, chunk, workers)


def mehta_mc(N: int, gamma: float, samples: int = 10**6, seed: int = 0,
             chunk: int = 1 << 16, workers: int = 1) -> EvalResult:
    """Mehta's integral as a Gaussian expectation of prod |t_i - t_j|^(2 gamma)."""
    if gamma <= -1.0 / N:
        raise RegionError(f"Mehta needs gamma > {-1.0 / N}")

    def draw(rng, size):
        t = rng.standard_normal((size, N))
        logw = np.zeros(size)
        for i, j in combinations(range(N), 2):
            logw += 2 * gamma * np.log(np.abs(t[:, i] - t[:, j]))
        return np.exp(logw)

    return _run_chunks(draw, samples, seed, chunk, workers)


# -- divergence probes ----------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    condition: ConvergenceCondition
    eps: tuple[float, ...]
    results: tuple[EvalResult, ...]

    @property
    def estimates(self) -> list[float]:
        return [r.estimate for r in self.results]

    @property
    def ratios(self) -> list[float]:
        e = self.estimates
        return [b / a for a, b in zip(e, e[1:])]

    @property
    def growth(self) -> float:
        return self.results[-1].estimate / self.results[0].estimate

    @property
    def diverging(self) -> bool:
        return self.growth >= 10.0


def boundary_path(condition: ConvergenceCondition, base: RealParams) -> Callable[[float], dict]:
    """eps -> base shifted evenly on the support so the condition's linear
    form sits eps inside its boundary."""
    support = condition.sorted_support()
    current = sum(float(base[v]) for v in support)
    sign = 1.0 if condition.sense == "greater" else -1.0

    def path(eps: float) -> dict:
        shift = (condition.bound + sign * eps - current) / len(support)
        out = dict(base)
        for v in support:
            out[v] = float(base[v]) + shift
        return out

    return path


def divergence_probe(N: int, D: Domain, condition: ConvergenceCondition,
                     path: Callable[[float], RealParams], eps0: float = 0.5,
                     halvings: int = 4, samples: int = 200_000, seed: int = 0) -> ProbeResult:
    """Estimates at eps0, eps0/2, ... along a path approaching the boundary of
    ``condition`` from inside."""
    eps = tuple(eps0 / 2 ** k for k in range(halvings + 1))
    results = []
    prev_gap = math.inf
    for e in eps:
        s = path(e)
        exact = {v: Fraction(float(s[v])) for v in kn_variables(N)}
        if not condition.holds(exact):
            raise RegionError(f"path leaves the side of {condition} it should approach", condition)
        gap = abs(float(condition.value(exact)) - condition.bound)
        if gap >= prev_gap:
            raise RegionError(f"path does not approach the boundary of {condition}", condition)
        prev_gap = gap
        try:
            results.append(eval_zeta_mc(N, D, s, samples=samples, seed=seed))
        except RegionError as exc:
            raise RegionError(f"path exits the convergence region: {exc}", exc.condition) from exc
    return ProbeResult(condition, eps, tuple(results))


__all__ = [
    "EvalResult", "ProbeResult", "RealParams", "beta_fn", "boundary_path",
    "check_region", "divergence_probe", "eval_zeta_mc", "gamma_fn", "mehta",
    "mehta_mc", "selberg", "selberg_params",
]
