"""
Numerical search for hypercomplex structures on su(2)^4

Candidates are conjugates P (I0, J0, K0) P^-1 of the standard quaternion
triple, so the algebraic axioms hold by construction and only
integrability is measured. Corroboration only: nothing here proves anything.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple
import asyncio
import logging
import math
import os

import numpy as np
import sympy

from .acstruct import abelian_quaternion_triple
from .config import settings
from .errors import DimensionMismatchError
from .liealg import LieAlgebra, su2_power
from .models import OracleReport, SearchReport
from .nonexistence.decomposition import coefficient_name
from .nonexistence.symbolic import symbolic_system
from .scalarpoly import Polynomial, variable_key

logger = logging.getLogger(__name__)

MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class CandidateTriple:
    I: np.ndarray
    J: np.ndarray
    K: np.ndarray
    P: np.ndarray
    seed: str

    @property
    def matrices(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.I, self.J, self.K

    def axiom_defect(self) -> float:
        """Largest entry of I^2+id, J^2+id, K^2+id, IJ-K and the three anticommutators"""
        return axiom_defect(self.I, self.J, self.K)


@dataclass(frozen=True)
class TrialResult:
    index: int
    seed: str
    residual: float
    optimized: bool = False


def axiom_defect(I: np.ndarray, J: np.ndarray, K: np.ndarray) -> float:
    n = I.shape[0]
    eye = np.eye(n)
    defects = [
        I @ I + eye, J @ J + eye, K @ K + eye, I @ J - K,
        I @ J + J @ I, I @ K + K @ I, J @ K + K @ J,
    ]
    return max(float(np.max(np.abs(d))) for d in defects)


def structure_tensor(g: LieAlgebra) -> np.ndarray:
    """C[i, j, k] with [e_i, e_j] = sum_k C[i, j, k] e_k"""
    C = np.zeros((g.dim, g.dim, g.dim))
    for (i, j), entries in g.structure.items():
        for k, c in entries:
            C[i, j, k] = float(c)
    return C


def nijenhuis_tensor(C: np.ndarray, J: np.ndarray) -> np.ndarray:
    """N[a, b, :] = N_J(e_a, e_b) in the column-action convention"""
    T1 = np.einsum("ia,ibk->abk", J, C)          # [J e_a, e_b]
    T2 = np.einsum("jb,ajk->abk", J, C)          # [e_a, J e_b]
    T3 = np.einsum("ia,jb,ijk->abk", J, J, C)    # [J e_a, J e_b]
    return np.einsum("kl,abl->abk", J, T1 + T2) + C - T3


def residual_from_tensor(C: np.ndarray, matrices: Sequence[np.ndarray]) -> float:
    total = 0.0
    for A in matrices:
        N = nijenhuis_tensor(C, A)
        # N is antisymmetric in (a, b); half the full sum covers pairs a < b
        total += 0.5 * float(np.sum(N * N))
    return total


def residual(g: LieAlgebra, t: CandidateTriple) -> float:
    """Sum over basis pairs and the three structures of |N(e_a, e_b)|^2"""
    if t.I.shape != (g.dim, g.dim):
        raise DimensionMismatchError(f"{t.I.shape} matrices on a {g.dim}-dim algebra")
    return residual_from_tensor(structure_tensor(g), t.matrices)


def quaternion_base(dim: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return tuple(np.array(A.matrix.to_rows(), dtype=float) for A in abelian_quaternion_triple(dim))


def conjugate(P: np.ndarray, base: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    P_inv = np.linalg.inv(P)
    return tuple(P @ A @ P_inv for A in base)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator of trial index; equal to the index-th child of SeedSequence(seed).spawn"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_candidate(
    rng: np.random.Generator,
    dim: int = 12,
    token: str = "",
    condition_cap: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> CandidateTriple:
    """
    Draw Gaussian P until cond(P) <= condition_cap and the conjugated triple
    meets the axiom tolerance
    """
    cap = condition_cap if condition_cap is not None else settings.HCX_CONDITION_CAP
    tol = tolerance if tolerance is not None else settings.HCX_AXIOM_TOLERANCE
    base = quaternion_base(dim)
    for attempt in range(1, MAX_RESAMPLES + 1):
        P = rng.standard_normal((dim, dim))
        cond = np.linalg.cond(P)
        if not np.isfinite(cond) or cond > cap:
            logger.debug(f"trial {token}: resampling P with condition number {cond:.3g}")
            continue
        I, J, K = conjugate(P, base)
        if axiom_defect(I, J, K) >= tol:
            logger.warning(f"trial {token}: conjugated triple misses the axiom tolerance, resampling")
            continue
        if attempt > 10:
            logger.warning(f"trial {token}: needed {attempt} draws to meet the condition cap {cap}")
        return CandidateTriple(I, J, K, P, token)
    raise RuntimeError(f"no admissible P after {MAX_RESAMPLES} draws (cap {cap})")


def pattern_search(
    objective: Callable[[np.ndarray], float],
    x0: np.ndarray,
    steps: int,
    h: float = 0.1,
    shrink: float = 0.5,
) -> Tuple[np.ndarray, float]:
    """
    Coordinate-wise pattern search: each step probes one coordinate at +h
    and -h and keeps an improvement; h shrinks after a full sweep without one
    """
    x = x0.copy()
    best = objective(x)
    flat = x.reshape(-1)
    n = flat.size
    improved_in_sweep = False
    for step in range(steps):
        i = step % n
        if i == 0 and step > 0:
            if not improved_in_sweep:
                h *= shrink
            improved_in_sweep = False
        for delta in (h, -h):
            old = flat[i]
            flat[i] = old + delta
            value = objective(x)
            if value < best:
                best = value
                improved_in_sweep = True
                break
            flat[i] = old
    return x, best


def run_trial(
    index: int,
    seed: int,
    C: np.ndarray,
    optimize: bool = False,
    steps: Optional[int] = None,
    condition_cap: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> TrialResult:
    token = f"{seed}/{index}"
    cap = condition_cap if condition_cap is not None else settings.HCX_CONDITION_CAP
    dim = C.shape[0]
    candidate = sample_candidate(trial_rng(seed, index), dim, token, cap, tolerance)
    value = residual_from_tensor(C, candidate.matrices)
    if not optimize:
        return TrialResult(index, token, value)
    base = quaternion_base(dim)

    def objective(P: np.ndarray) -> float:
        if np.linalg.cond(P) > cap:
            return math.inf
        return residual_from_tensor(C, conjugate(P, base))

    _, best = pattern_search(objective, candidate.P, steps or settings.HCX_DESCENT_STEPS)
    return TrialResult(index, token, min(value, best), optimized=True)


def thread_count() -> int:
    if settings.HCX_THREADS:
        return max(1, settings.HCX_THREADS)
    return min(4, os.cpu_count() or 1)


async def _gather_trials(fn: Callable[[int], TrialResult], indices: Sequence[int], workers: int) -> List[TrialResult]:
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(await asyncio.gather(*(loop.run_in_executor(pool, fn, i) for i in indices)))


def run_trials(
    trials: int,
    seed: int,
    optimize: bool = False,
    steps: Optional[int] = None,
    g: Optional[LieAlgebra] = None,
    threads: Optional[int] = None,
) -> List[TrialResult]:
    """Independent trials with per-trial generators derived from seed; sorted by index"""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    g = g or su2_power(settings.HCX_DEFAULT_FACTORS)
    C = structure_tensor(g)
    workers = threads or thread_count()
    logger.info(f"running {trials} trials (seed {seed}, optimize={optimize}) on {workers} threads")

    def fn(i: int) -> TrialResult:
        return run_trial(i, seed, C, optimize, steps)

    if workers == 1:
        results = [fn(i) for i in range(trials)]
    else:
        results = asyncio.run(_gather_trials(fn, range(trials), workers))
    return sorted(results, key=lambda r: r.index)


def histogram(values: Sequence[float]) -> List[Tuple[float, float, int]]:
    """Decade buckets [10^d, 10^(d+1), count]; exact zeros go to [0, 0, count]"""
    counts = {}
    for v in values:
        key = None if v <= 0 else math.floor(math.log10(v))
        counts[key] = counts.get(key, 0) + 1
    buckets = []
    if None in counts:
        buckets.append((0.0, 0.0, counts.pop(None)))
    for d in sorted(counts):
        buckets.append((10.0 ** d, 10.0 ** (d + 1), counts[d]))
    return buckets


def summarize(results: Sequence[TrialResult], seed: int = 0, optimize: bool = False) -> SearchReport:
    """Order-independent merge: the best trial is the lowest residual, ties to the lowest index"""
    best = min(results, key=lambda r: (r.residual, r.index))
    return SearchReport(
        trials=len(results),
        best_residual=best.residual,
        best_seed=best.seed,
        histogram=histogram([r.residual for r in results]),
        optimize=optimize,
        seed=seed,
    )


def run_search(trials: int, seed: int, optimize: bool = False, steps: Optional[int] = None, threads: Optional[int] = None) -> SearchReport:
    results = run_trials(trials, seed, optimize, steps, threads=threads)
    report = summarize(results, seed, optimize)
    logger.info(f"best residual {report.best_residual:.6g} at trial {report.best_seed}")
    return report


# Coefficient-system oracle -----------------------------------------------------

def reduced_system(factor="j") -> Tuple[List[str], List[Polynomial]]:
    """
    The nine scalar equations with b1 = a2, c2 = b3, c1 = a3 substituted

    Returns:
        (variables in canonical order, polynomials)
    """
    system = symbolic_system(factor)

    def name(short: str) -> str:
        return coefficient_name(short[0], int(short[1]), factor)

    bindings = {
        name("b1"): Polynomial.var(name("a2")),
        name("c2"): Polynomial.var(name("b3")),
        name("c1"): Polynomial.var(name("a3")),
    }
    polys = [p.substitute(bindings) for p in system.scalar_equations]
    names = sorted({v for p in polys for v in p.variables()}, key=variable_key)
    return names, polys


def system_objective(names: Sequence[str], polys: Sequence[Polynomial]) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized sum of squares over rows of an (n_starts, n_vars) array"""
    symbols = [sympy.Symbol(n) for n in names]
    fn = sympy.lambdify(symbols, [p.to_sympy() for p in polys], "numpy")

    def objective(x: np.ndarray) -> np.ndarray:
        values = fn(*x.T)
        total = np.zeros(x.shape[0])
        for v in values:
            total += np.broadcast_to(np.asarray(v, dtype=float), total.shape) ** 2
        return total

    return objective


def batch_pattern_search(
    objective: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    steps: int,
    h: float = 0.1,
    shrink: float = 0.5,
) -> Tuple[np.ndarray, np.ndarray]:
    """pattern_search run on every row of x0 at once, each row with its own step size"""
    x = x0.copy()
    best = objective(x)
    rows, n = x.shape
    sizes = np.full(rows, h)
    improved = np.zeros(rows, dtype=bool)
    for step in range(steps):
        i = step % n
        if i == 0 and step > 0:
            sizes = np.where(improved, sizes, sizes * shrink)
            improved[:] = False
        moved = np.zeros(rows, dtype=bool)
        for sign in (1.0, -1.0):
            trial = x.copy()
            trial[:, i] += sign * sizes
            values = objective(trial)
            # rows that moved at +h skip the -h probe
            better = (values < best) & ~moved
            moved |= better
            x[better] = trial[better]
            best[better] = values[better]
            improved |= better
    return x, best


def system_oracle(starts: Optional[int] = None, seed: int = 0, steps: Optional[int] = None, factor="j") -> OracleReport:
    """
    Random-restart descent on the sum of squares of the reduced coefficient
    system; a real solution would drive the minimum to zero
    """
    starts = settings.HCX_ORACLE_STARTS if starts is None else starts
    steps = settings.HCX_ORACLE_STEPS if steps is None else steps
    if starts < 1:
        raise ValueError("starts must be at least 1")
    names, polys = reduced_system(factor)
    objective = system_objective(names, polys)
    rng = np.random.default_rng(seed)
    x, values = batch_pattern_search(objective, rng.standard_normal((starts, len(names))), steps)
    best = int(np.argmin(values))
    logger.info(f"system oracle: minimum {values[best]:.6g} over {starts} starts")
    return OracleReport(
        starts=starts,
        steps=steps,
        seed=seed,
        minimum=float(values[best]),
        argmin={n: float(v) for n, v in zip(names, x[best])},
    )
