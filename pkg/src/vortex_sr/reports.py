"""Harmonic-sum result container and the shared series driver."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergenceError

__all__ = ["FluxReport", "harmonic_series", "default_harmonic_cap", "thread_count"]


@dataclass
class FluxReport:
    """Per-harmonic integrated rates and their totals.

    ``flux``, ``power`` and ``emission`` have shape ``(n_harmonics, n_pol)``
    with columns labelled by ``polarizations`` (``("+", "-")`` or
    ``("sum",)``).  ``power`` or ``emission`` is None when the channel does
    not provide it.
    """

    harmonics: np.ndarray
    flux: np.ndarray
    polarizations: tuple
    power: np.ndarray = None
    emission: np.ndarray = None
    tail_estimate: float = 0.0
    converged: bool = True
    spin_mode: str = "n/a"
    channel: str = ""
    quad_error: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def flux_per_harmonic(self):
        return self.flux.sum(axis=1)

    @property
    def power_per_harmonic(self):
        return None if self.power is None else self.power.sum(axis=1)

    @property
    def total_flux(self):
        return float(np.sum(self.flux_per_harmonic))

    @property
    def total_power(self):
        return None if self.power is None else float(np.sum(self.power_per_harmonic))

    @property
    def total_emission(self):
        return None if self.emission is None else float(np.sum(self.emission))

    def total(self, polarization):
        """Flux summed over harmonics for one polarization column."""
        return float(np.sum(self.flux[:, self.polarizations.index(polarization)]))


def default_harmonic_cap(beta_perp, n_levels=None):
    """max(20, ceil(10 / (1 - beta)^3)) capped at 1e5 and at `n_levels`."""
    cap = max(20, int(np.ceil(10.0 / (1.0 - beta_perp) ** 3)))
    cap = min(cap, 100_000)
    if n_levels is not None:
        cap = min(cap, n_levels)
    return cap


def thread_count():
    """Worker count from ``VORTEX_SR_THREADS`` (default 1)."""
    raw = os.environ.get("VORTEX_SR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _tail(sizes):
    """Geometric remainder estimate from the last three term sizes."""
    if len(sizes) < 3:
        return np.inf
    t2, t1, t0 = sizes[-3:]
    if t0 == 0.0 and t1 == 0.0:
        return 0.0
    if t1 == 0.0 or t2 == 0.0:
        return np.inf
    ratio = max(t0 / t1, t1 / t2)
    if ratio >= 1.0:
        return np.inf
    return t0 * ratio / (1.0 - ratio)


def harmonic_series(term, size, tol, nu_max, *, exhaustive=False, nu_min=3, what="harmonic sum"):
    """Sum ``term(nu)`` for nu = 1, 2, ... until the tail is below tolerance.

    Parameters
    ----------
    term : callable
        ``term(nu) -> result`` for one harmonic.
    size : callable
        ``size(result) -> float`` nonnegative magnitude used for the tail test.
    tol : float
        Relative tolerance on the geometric tail estimate.
    nu_max : int
        Last harmonic that may be computed.
    exhaustive : bool
        True when harmonics beyond `nu_max` do not exist (quantum case with
        nu_max = n); reaching it then means an exact sum with zero tail.

    Returns
    -------
    (list of results, tail estimate)

    Raises
    ------
    NonConvergenceError
        The cap was reached with the tail still above tolerance.
    """
    workers = thread_count()
    results, sizes = [], []
    total = 0.0
    nu = 1
    tail = np.inf
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while nu <= nu_max:
            batch = list(range(nu, min(nu + workers, nu_max + 1)))
            # ordered reduction keeps sums bit-reproducible for any worker count
            outs = list(pool.map(term, batch)) if pool else [term(batch[0])]
            for r in outs:
                results.append(r)
                sizes.append(float(size(r)))
                total += sizes[-1]
            nu = batch[-1] + 1
            if len(results) >= nu_min:
                tail = _tail(sizes)
                if tail <= tol * total:
                    return results, float(tail)
    finally:
        if pool:
            pool.shutdown()
    if exhaustive:
        return results, 0.0
    if total == 0.0:
        return results, 0.0
    raise NonConvergenceError(
        f"{what} not converged after {nu_max} harmonics (tail estimate {tail:.3e}, total {total:.6e})",
        tail_estimate=float(tail),
        total=total,
    )
