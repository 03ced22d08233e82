"""Bounded continuous minimization with a global-best particle swarm.

The swarm moves under the standard velocity rule: each particle keeps an
inertia-weighted share of its previous velocity and is pulled toward its
own best visited point and toward the best point any particle has found,
with independent uniform random factors on both pulls.  Velocities are
clamped to a fraction of the search-box span and positions that leave the
box are clamped to the violated bound with that velocity component zeroed,
so every particle stays inside the box after every step.

Reproducibility: the master seed is split into one independent sub-stream
per particle (``numpy.random.SeedSequence.spawn``).  Particle *i* draws its
initial position, initial velocity, and all of its per-step random factors
from stream *i* only, and best-update reduction always runs in particle
index order, so results do not depend on evaluation order or worker count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, DegenerateObjectiveError

__all__ = [
    "SearchBounds",
    "SwarmConfig",
    "Particle",
    "SwarmState",
    "OptimizationResult",
    "initialize_swarm",
    "step",
    "optimize",
    "write_trace_csv",
]

Objective = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class SearchBounds:
    """Axis-aligned search box, one (lower, upper) pair per dimension.

    Parameters
    ----------
    lower, upper : array_like
        Per-dimension bounds.  Must have equal length >= 1 and satisfy
        ``lower < upper`` strictly in every dimension.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or upper.ndim != 1:
            raise ConfigurationError("bounds must be one-dimensional arrays")
        if lower.size != upper.size:
            raise ConfigurationError(
                f"lower and upper must have the same length, got {lower.size} and {upper.size}"
            )
        if lower.size < 1:
            raise ConfigurationError("bounds need at least one dimension")
        if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
            raise ConfigurationError("bounds must be finite")
        if not (lower < upper).all():
            bad = int(np.argmin(upper - lower))
            raise ConfigurationError(
                f"lower must be strictly below upper in every dimension "
                f"(dimension {bad}: lower={lower[bad]}, upper={upper[bad]})"
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        """True if every component of ``x`` lies inside the box (inclusive)."""
        x = np.asarray(x, dtype=float)
        return bool((x >= self.lower).all() and (x <= self.upper).all())


@dataclass(frozen=True)
class SwarmConfig:
    """Tunables for one swarm run.

    Defaults (50 particles, 500 iterations, inertia 0.7, both attraction
    coefficients 1.5, velocity cap at 20% of the box span) are stable
    general-purpose settings; all are overridable.
    """

    particle_count: int = 50
    iteration_count: int = 500
    inertia_weight: float = 0.7
    cognitive_coeff: float = 1.5
    social_coeff: float = 1.5
    seed: int = 0
    velocity_cap_fraction: float = 0.2

    def __post_init__(self):
        if int(self.particle_count) != self.particle_count or self.particle_count < 2:
            raise ConfigurationError(
                f"particle_count must be an integer >= 2, got {self.particle_count}"
            )
        if int(self.iteration_count) != self.iteration_count or self.iteration_count < 1:
            raise ConfigurationError(
                f"iteration_count must be an integer >= 1, got {self.iteration_count}"
            )
        for name in ("inertia_weight", "cognitive_coeff", "social_coeff"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ConfigurationError(f"{name} must be finite and >= 0, got {value}")
        if int(self.seed) != self.seed or self.seed < 0 or self.seed >= 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not (0.0 < self.velocity_cap_fraction <= 1.0):
            raise ConfigurationError(
                f"velocity_cap_fraction must lie in (0, 1], got {self.velocity_cap_fraction}"
            )


@dataclass(frozen=True)
class Particle:
    """Read-only snapshot of one swarm member."""

    position: np.ndarray
    velocity: np.ndarray
    personal_best_position: np.ndarray
    personal_best_value: float


@dataclass
class SwarmState:
    """Mutable state of a running swarm.

    Positions, velocities, and personal bests are stacked row-per-particle;
    ``best_value_trace`` gains one entry per completed step.
    """

    bounds: SearchBounds
    positions: np.ndarray
    velocities: np.ndarray
    personal_best_positions: np.ndarray
    personal_best_values: np.ndarray
    best_position: np.ndarray
    best_value: float
    best_value_trace: list = field(default_factory=list)
    evaluations: int = 0
    _streams: tuple = ()

    @property
    def particle_count(self) -> int:
        return self.positions.shape[0]

    def particle(self, i: int) -> Particle:
        return Particle(
            position=self.positions[i].copy(),
            velocity=self.velocities[i].copy(),
            personal_best_position=self.personal_best_positions[i].copy(),
            personal_best_value=float(self.personal_best_values[i]),
        )


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of :func:`optimize`.

    ``best_value_trace`` holds the global best after each iteration and is
    monotonically non-increasing; ``best_value`` equals its last entry.
    ``evaluations`` counts every objective call, including initialization.
    """

    best_position: np.ndarray
    best_value: float
    best_value_trace: np.ndarray
    evaluations: int


def _evaluate(objective: Objective, positions: np.ndarray, pool: ThreadPoolExecutor | None) -> np.ndarray:
    """Evaluate the objective at each row of ``positions``, in row order.

    Non-finite results are mapped to +inf so they can never be adopted as a
    best.  Rows are passed as copies, so objectives may not corrupt state.
    """
    rows = [positions[i].copy() for i in range(positions.shape[0])]
    if pool is None:
        raw = [objective(row) for row in rows]
    else:
        raw = list(pool.map(objective, rows))
    values = np.asarray([float(v) for v in raw], dtype=float)
    values[~np.isfinite(values)] = np.inf
    return values


def initialize_swarm(
    objective: Objective,
    bounds: SearchBounds,
    config: SwarmConfig,
    *,
    workers: int = 1,
) -> SwarmState:
    """Draw the initial swarm and evaluate it.

    Positions are uniform inside the box; velocities are uniform in
    +/- ``velocity_cap_fraction`` times the span.  Personal bests start at
    the initial positions and the global best is their minimum.
    """
    if not isinstance(bounds, SearchBounds):
        bounds = SearchBounds(*bounds)
    streams = tuple(
        np.random.default_rng(s)
        for s in np.random.SeedSequence(config.seed).spawn(config.particle_count)
    )
    dim = bounds.dimension
    vmax = config.velocity_cap_fraction * bounds.span
    positions = np.empty((config.particle_count, dim))
    velocities = np.empty((config.particle_count, dim))
    for i, rng in enumerate(streams):
        positions[i] = bounds.lower + rng.random(dim) * bounds.span
        velocities[i] = -vmax + rng.random(dim) * (2.0 * vmax)

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        values = _evaluate(objective, positions, pool)
    finally:
        if pool is not None:
            pool.shutdown()

    best_index = int(np.argmin(values))
    return SwarmState(
        bounds=bounds,
        positions=positions,
        velocities=velocities,
        personal_best_positions=positions.copy(),
        personal_best_values=values,
        best_position=positions[best_index].copy(),
        best_value=float(values[best_index]),
        best_value_trace=[],
        evaluations=config.particle_count,
        _streams=streams,
    )


def _advance_kinematics(state: SwarmState, config: SwarmConfig) -> None:
    """Apply the velocity and position updates in place.

    Random pull factors are drawn per particle per dimension, each particle
    from its own sub-stream.  Velocity components are clamped to the cap;
    out-of-box position components are clamped to the violated bound with
    the corresponding velocity component set to zero.
    """
    n, dim = state.positions.shape
    r1 = np.empty((n, dim))
    r2 = np.empty((n, dim))
    for i, rng in enumerate(state._streams):
        r1[i] = rng.random(dim)
        r2[i] = rng.random(dim)

    v = (
        config.inertia_weight * state.velocities
        + config.cognitive_coeff * r1 * (state.personal_best_positions - state.positions)
        + config.social_coeff * r2 * (state.best_position - state.positions)
    )
    vmax = config.velocity_cap_fraction * state.bounds.span
    np.clip(v, -vmax, vmax, out=v)

    x = state.positions + v
    low = x < state.bounds.lower
    high = x > state.bounds.upper
    x[low] = np.broadcast_to(state.bounds.lower, x.shape)[low]
    x[high] = np.broadcast_to(state.bounds.upper, x.shape)[high]
    v[low | high] = 0.0

    state.velocities = v
    state.positions = x


def _absorb_values(state: SwarmState, values: np.ndarray) -> None:
    """Fold one iteration's objective values into the bests (index order).

    Updates are by strict improvement only, so ties keep the incumbent.
    """
    if not np.isfinite(values).any():
        raise DegenerateObjectiveError(
            "all objective evaluations in this iteration were non-finite"
        )
    improved = values < state.personal_best_values
    state.personal_best_positions[improved] = state.positions[improved]
    state.personal_best_values[improved] = values[improved]

    candidate = int(np.argmin(state.personal_best_values))
    if state.personal_best_values[candidate] < state.best_value:
        state.best_value = float(state.personal_best_values[candidate])
        state.best_position = state.personal_best_positions[candidate].copy()

    state.evaluations += values.size
    state.best_value_trace.append(state.best_value)


def step(
    state: SwarmState,
    objective: Objective,
    config: SwarmConfig,
    *,
    workers: int = 1,
) -> SwarmState:
    """Advance the swarm by one iteration, in place, and return it.

    Raises
    ------
    DegenerateObjectiveError
        If every evaluation in this iteration is non-finite.
    """
    _advance_kinematics(state, config)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        values = _evaluate(objective, state.positions, pool)
    finally:
        if pool is not None:
            pool.shutdown()
    _absorb_values(state, values)
    return state


def optimize(
    objective: Objective,
    bounds: SearchBounds,
    config: SwarmConfig | None = None,
    *,
    workers: int = 1,
) -> OptimizationResult:
    """Minimize ``objective`` over ``bounds``.

    Runs initialization plus ``config.iteration_count`` steps, for a total
    of ``particle_count * (iteration_count + 1)`` objective evaluations.
    Identical configuration (seed included) gives an identical result for
    any ``workers`` value; the objective must be pure and thread-safe when
    ``workers > 1``.

    Parameters
    ----------
    objective : callable
        Maps a position vector to a float.  Non-finite returns are treated
        as +inf.
    bounds : SearchBounds
        Search box; the result position always lies inside it.
    config : SwarmConfig, optional
        Tunables; defaults apply when omitted.
    workers : int
        Number of threads used to evaluate one iteration's candidates.

    Returns
    -------
    OptimizationResult
    """
    if config is None:
        config = SwarmConfig()
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        state = initialize_swarm(objective, bounds, config, workers=workers)
        for _ in range(config.iteration_count):
            _advance_kinematics(state, config)
            values = _evaluate(objective, state.positions, pool)
            _absorb_values(state, values)
    finally:
        if pool is not None:
            pool.shutdown()
    return OptimizationResult(
        best_position=state.best_position.copy(),
        best_value=state.best_value,
        best_value_trace=np.asarray(state.best_value_trace),
        evaluations=state.evaluations,
    )


def write_trace_csv(trace: Sequence[float], path) -> None:
    """Dump a best-value trace as ``iteration,best_value`` CSV."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "best_value"])
        for i, value in enumerate(trace):
            writer.writerow([i, repr(float(value))])
