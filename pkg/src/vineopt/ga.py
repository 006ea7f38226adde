"""Rank-driven genetic algorithm: binary tournaments on rank, blend
crossover with obstacle-aware sequential angle generation, row-regeneration
mutation, and elitist survival by re-ranking parents and offspring together.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .avoid import allowed_angle_ranges, sample_uniform
from .fitness import DEFAULT_PENALTY, EvaluationResult, ObjectiveVector, evaluate
from .geometry import Point2
from .model import Solution, Task, generate_angle_row, random_solution
from .ranking import BinSizes, FitnessRecord, rank_partition

MUTATION_SCOPES = ("configuration", "individual")


@dataclass
class GaParams:
    """Run configuration. The defaults are the library's reference operating
    point: population 500 for 150 generations, crossover 0.9, mutation 0.4,
    blend width 0.5, penalty weights (10, 10, 10, 10, 100)."""

    population_size: int = 500
    generations: int = 150
    crossover_prob: float = 0.9
    mutation_prob: float = 0.4
    alpha: float = 0.5
    bins: BinSizes = field(default_factory=BinSizes)
    penalty: tuple[float, float, float, float, float] = DEFAULT_PENALTY
    avoidance: bool = True
    seed: int = 0
    mutation_scope: str = "configuration"
    maximize_straight_links: bool = False
    workers: int = 1

    def validate(self) -> None:
        if self.population_size < 2:
            raise ValueError("population size must be at least 2")
        if self.generations < 1:
            raise ValueError("need at least one generation")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.alpha <= 0.0:
            raise ValueError("blend width alpha must be positive")
        if self.mutation_scope not in MUTATION_SCOPES:
            raise ValueError(f"mutation scope must be one of {MUTATION_SCOPES}")
        if self.workers < 1:
            raise ValueError("worker count must be at least 1")


@dataclass
class RankedPopulation:
    """Population stored in rank order: members[i] holds rank i+1 and
    records[i].pop_ref == i. evaluations[i] is members[i]'s full evaluation."""

    members: list[Solution]
    records: list[FitnessRecord]
    evaluations: list[EvaluationResult]
    generation: int


@dataclass
class GenerationStats:
    generation: int
    best_penalized_f12: float
    best_objectives: ObjectiveVector
    collisions_per_individual: float


@dataclass
class GaResult:
    population: RankedPopulation
    history: list[GenerationStats]


def _record_of(result: EvaluationResult, pop_ref: int) -> FitnessRecord:
    obj = result.objectives
    return FitnessRecord(
        f12_binned=0.0,
        f31a=obj.f31a,
        f33=obj.f33,
        f31b=obj.f31b,
        f32_binned=0.0,
        f12_raw=result.penalized_f12,
        f32_raw=obj.f32,
        pop_ref=pop_ref,
    )


def _evaluate_one(args) -> EvaluationResult:
    solution, task, penalty, maximize = args
    return evaluate(solution, task, penalty, maximize)


def _evaluate_batch(
    solutions: Sequence[Solution],
    task: Task,
    params: GaParams,
    executor: Optional[ProcessPoolExecutor],
) -> list[EvaluationResult]:
    jobs = [
        (s, task, params.penalty, params.maximize_straight_links) for s in solutions
    ]
    if executor is None:
        return [_evaluate_one(job) for job in jobs]
    results = list(executor.map(_evaluate_one, jobs, chunksize=64))
    # The workers evaluated pickled copies; graft their completions back onto
    # the caller's objects so parallel runs are indistinguishable from serial.
    for original, result in zip(solutions, results):
        original.completions = result.solution.completions
        result.solution = original
    return results


def _ranked(
    members: list[Solution],
    evaluations: list[EvaluationResult],
    bins: BinSizes,
    generation: int,
    keep: Optional[int] = None,
) -> RankedPopulation:
    records = [_record_of(e, i) for i, e in enumerate(evaluations)]
    ordered = rank_partition(records, bins)
    if keep is not None:
        ordered = ordered[:keep]
    new_members = [members[r.pop_ref] for r in ordered]
    new_evals = [evaluations[r.pop_ref] for r in ordered]
    for i, record in enumerate(ordered):
        record.pop_ref = i
        record.rank = i + 1
    return RankedPopulation(new_members, ordered, new_evals, generation)


def binary_tournament(pop: RankedPopulation, rng) -> list[Solution]:
    """N independent tournaments; each draws two members uniformly (with
    replacement) and keeps the better-ranked one. Because members are stored
    in rank order, the winner is simply the lower index."""
    n = len(pop.members)
    pool = []
    for _ in range(n):
        a = int(rng.integers(n))
        b = int(rng.integers(n))
        pool.append(pop.members[min(a, b)])
    return pool


def _blx_interval(a: float, b: float, alpha: float) -> tuple[float, float]:
    lo, hi = (a, b) if a <= b else (b, a)
    spread = alpha * (hi - lo)
    return lo - spread, hi + spread


def _child(
    p1: Solution,
    p2: Solution,
    alpha: float,
    task: Task,
    avoidance: bool,
    rng,
) -> Solution:
    b = task.bounds
    llo, lhi = b.length_range
    lengths: list[float] = []
    for g1, g2 in zip(p1.lengths, p2.lengths):
        lo, hi = _blx_interval(g1, g2, alpha)
        lengths.append(float(rng.uniform(max(lo, llo), min(hi, lhi))))
    angles: list[list[float]] = []
    for row1, row2 in zip(p1.angles, p2.angles):
        row: list[float] = []
        x, y = task.home.position
        heading = task.home.orientation
        for j in range(1, b.n_max + 1):
            dlo, dhi = b.joint_domain(j)
            lo, hi = _blx_interval(row1[j - 1], row2[j - 1], alpha)
            lo = max(lo, dlo)
            hi = min(hi, dhi)
            if lo == hi:
                theta = lo
            elif avoidance and task.obstacles:
                allowed = allowed_angle_ranges(
                    Point2(x, y),
                    Point2(math.cos(heading), math.sin(heading)),
                    lengths[j - 1],
                    task.obstacles,
                    (lo, hi),
                )
                if allowed.is_empty():
                    theta = float(rng.uniform(lo, hi))
                else:
                    theta = sample_uniform(allowed, rng)
            else:
                theta = float(rng.uniform(lo, hi))
            row.append(theta)
            heading += theta
            x += lengths[j - 1] * math.cos(heading)
            y += lengths[j - 1] * math.sin(heading)
        angles.append(row)
    return Solution(angles, lengths)


def blx_crossover(
    p1: Solution,
    p2: Solution,
    alpha: float,
    task: Task,
    avoidance: bool,
    rng,
) -> tuple[Solution, Solution]:
    """Two blend-crossover offspring.

    Length genes are drawn first (uniform over the blended interval clamped
    to the length bounds). Each configuration's angle row is then generated
    sequentially along the child's own chain: the blended interval for joint
    j, clamped to that joint's domain, is thinned by the collision-free arcs
    at the partially built node when avoidance is on; an empty intersection
    falls back to the clamped blend interval."""
    return (
        _child(p1, p2, alpha, task, avoidance, rng),
        _child(p1, p2, alpha, task, avoidance, rng),
    )


def mutate(ind: Solution, prob: float, task: Task, avoidance: bool, rng,
           scope: str = "configuration") -> Solution:
    """With probability ``prob``, regenerate one uniformly chosen
    configuration's angle row from scratch (lengths untouched); under scope
    "individual" the whole genotype is redrawn instead. Otherwise identity.
    Always returns the same object it was given (mutation is in-place on the
    offspring buffer)."""
    if rng.random() >= prob:
        return ind
    if scope == "individual":
        fresh = random_solution(task, rng, avoidance)
        ind.angles = fresh.angles
        ind.lengths = fresh.lengths
        ind.completions = None
        return ind
    which = int(rng.integers(len(ind.angles)))
    ind.angles[which] = generate_angle_row(task, ind.lengths, rng, avoidance)
    ind.completions = None
    return ind


def survive(
    parents: RankedPopulation,
    offspring: list[Solution],
    offspring_evals: list[EvaluationResult],
    task: Task,
    params: GaParams,
) -> RankedPopulation:
    """Elitist replacement: rank parents and offspring together (parents
    first, so ties keep the incumbent) and keep the best N."""
    members = parents.members + offspring
    evaluations = parents.evaluations + offspring_evals
    return _ranked(
        members,
        evaluations,
        params.bins,
        parents.generation + 1,
        keep=params.population_size,
    )


def _stats(pop_records, pop_evals, generation, batch_evals) -> GenerationStats:
    best = pop_records[0]
    best_eval = pop_evals[best.pop_ref]
    collisions = sum(e.violations.v[4] for e in batch_evals) / len(batch_evals)
    return GenerationStats(
        generation=generation,
        best_penalized_f12=best.f12_raw,
        best_objectives=best_eval.objectives,
        collisions_per_individual=collisions,
    )


def run(task: Task, params: GaParams) -> GaResult:
    """Full optimization loop.

    Seeded initialization, then per generation: tournament selection, paired
    blend crossover (probability per pair; unpicked pairs pass clones),
    mutation, batch evaluation (optionally across processes — evaluation is
    pure, so parallelism cannot change results), and elitist survival. The
    history has one row per generation including the initial population,
    with the collision metric averaged over that generation's newly
    generated individuals."""
    params.validate()
    rng = np.random.default_rng(params.seed)
    n = params.population_size
    executor = (
        ProcessPoolExecutor(max_workers=params.workers)
        if params.workers > 1
        else None
    )
    try:
        members = [random_solution(task, rng, params.avoidance) for _ in range(n)]
        evaluations = _evaluate_batch(members, task, params, executor)
        pop = _ranked(members, evaluations, params.bins, 0)
        history = [_stats(pop.records, pop.evaluations, 0, evaluations)]
        for gen in range(1, params.generations + 1):
            pool = binary_tournament(pop, rng)
            offspring: list[Solution] = []
            for k in range(0, len(pool) - 1, 2):
                if rng.random() < params.crossover_prob:
                    c1, c2 = blx_crossover(
                        pool[k], pool[k + 1], params.alpha, task,
                        params.avoidance, rng,
                    )
                else:
                    c1, c2 = pool[k].copy(), pool[k + 1].copy()
                offspring.extend((c1, c2))
            if len(pool) % 2 == 1:
                offspring.append(pool[-1].copy())
            for child in offspring:
                mutate(child, params.mutation_prob, task, params.avoidance,
                       rng, params.mutation_scope)
            off_evals = _evaluate_batch(offspring, task, params, executor)
            pop = survive(pop, offspring, off_evals, task, params)
            # The union's rank-1 always survives, so the survivors' head is
            # exactly the post-evaluation best of this generation.
            history.append(_stats(pop.records, pop.evaluations, gen, off_evals))
        return GaResult(pop, history)
    finally:
        if executor is not None:
            executor.shutdown()
