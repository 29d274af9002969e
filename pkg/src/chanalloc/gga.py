"""Grouping genetic algorithm baseline over the same province/resource
encoding, objectives and repair heuristic as GICA."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gica import (
    Country,
    IcaParams,
    RunHistory,
    RunResult,
    init_population,
    inject_groups,
    revolve,
)
from .model import Assignment, Objective, PathLossParams, cost as objective_cost
from .netgen import ConflictGraph

__all__ = ["GgaParams", "tournament", "crossover", "mutate", "gga_run"]


@dataclass(frozen=True)
class GgaParams:
    population: int = 50
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    tournament_size: int = 2
    max_iterations: int = 200
    objective: Objective = "multi"
    seed: int | None = None
    stall_iterations: int | None = None

    def __post_init__(self):
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")
        if self.objective not in ("single", "multi"):
            raise ValueError(f"unknown objective {self.objective!r}")


def tournament(pop: list[Country], size: int, rng: np.random.Generator) -> Country:
    picks = rng.integers(len(pop), size=size).tolist()
    best = pop[picks[0]]
    for i in picks[1:]:
        if pop[i].cost < best.cost:
            best = pop[i]
    return best


def crossover(a: Assignment, b: Assignment, g: ConflictGraph, rng: np.random.Generator) -> Assignment:
    """Child of ``a`` carrying a random contiguous run of ``b``'s groups."""
    i, j = sorted(rng.integers(len(b.resource), size=2).tolist())
    return inject_groups(a, b, b.resource[i:j + 1], g)


def mutate(a: Assignment, g: ConflictGraph, rng: np.random.Generator) -> Assignment:
    """Delete one random channel group and repair its clusters."""
    return revolve(a, "remove", g, a.n_available, rng)


def gga_run(g: ConflictGraph, n_available: int, params: GgaParams = GgaParams(),
            pathloss: PathLossParams | None = None) -> RunResult:
    """Generational GGA with tournament selection and a single elite.

    Runs ``max_iterations`` generations; setting ``stall_iterations`` stops
    early once the best cost has not improved for that many generations.
    """
    if n_available < 1:
        raise ValueError("n_available must be >= 1")
    rng = np.random.default_rng(params.seed)

    def evaluate(x: Assignment) -> Country:
        return Country(x, objective_cost(x, g, params.objective))

    init = IcaParams(n_countries=params.population, n_imperialists=1, objective=params.objective)
    pop = init_population(g, n_available, init, rng)
    best = min(pop, key=lambda c: c.cost)
    history = RunHistory()
    history.record(0, best, g, pathloss)
    last_gain = 0

    for it in range(1, params.max_iterations + 1):
        children = [best]
        while len(children) < params.population:
            p1 = tournament(pop, params.tournament_size, rng)
            if rng.random() < params.crossover_rate:
                p2 = tournament(pop, params.tournament_size, rng)
                child = crossover(p1.assignment, p2.assignment, g, rng)
            else:
                child = p1.assignment
            if rng.random() < params.mutation_rate:
                child = mutate(child, g, rng)
            children.append(evaluate(child) if child is not p1.assignment else p1)
        pop = children
        gen_best = min(pop, key=lambda c: c.cost)
        if gen_best.cost < best.cost:
            best, last_gain = gen_best, it
        history.record(it, best, g, pathloss)
        if params.stall_iterations is not None and it - last_gain >= params.stall_iterations:
            break

    return RunResult(best, history)
