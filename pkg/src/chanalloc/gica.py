"""Grouping imperialist competitive algorithm (GICA) for channel allocation.

Each country is an :class:`~chanalloc.model.Assignment`: a province part
(one channel per cluster) plus a resource part (the ordered set of channels
in use). Operators act on the resource part and then rearrange the province
part so the two stay consistent.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .model import (
    Assignment,
    Objective,
    PathLossParams,
    conflict_edges,
    cost as objective_cost,
    mean_interference_power,
)
from .netgen import ConflictGraph

log = logging.getLogger(__name__)

__all__ = [
    "Country",
    "Empire",
    "IcaParams",
    "RunHistory",
    "RunResult",
    "init_population",
    "power",
    "form_empires",
    "repair",
    "inject_groups",
    "assimilate",
    "revolve",
    "exchange",
    "empire_total_costs",
    "selection_probabilities",
    "compete",
    "run",
]


@dataclass(frozen=True)
class Country:
    assignment: Assignment
    cost: float


@dataclass
class Empire:
    imperialist: Country
    colonies: list[Country] = field(default_factory=list)

    def __len__(self):
        return 1 + len(self.colonies)


STAGNATION_WINDOW = 20


@dataclass(frozen=True)
class IcaParams:
    n_countries: int = 50
    n_imperialists: int = 6
    max_iterations: int = 200
    revolution_rate: float = 0.3
    objective: Objective = "multi"
    seed: int | None = None
    # "standard": max(cost) - cost; "paper": cost - min(cost), kept for ablation
    power_form: Literal["standard", "paper"] = "standard"
    assimilate: Literal["weakest", "all"] = "weakest"
    zeta: float = 0.1
    stall_iterations: int = STAGNATION_WINDOW

    def __post_init__(self):
        if not 1 <= self.n_imperialists < self.n_countries:
            raise ValueError("need 1 <= n_imperialists < n_countries")
        if not 0.0 <= self.revolution_rate <= 1.0:
            raise ValueError("revolution_rate must lie in [0, 1]")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.objective not in ("single", "multi"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.power_form not in ("standard", "paper"):
            raise ValueError(f"unknown power_form {self.power_form!r}")
        if self.assimilate not in ("weakest", "all"):
            raise ValueError(f"unknown assimilate mode {self.assimilate!r}")


HISTORY_FIELDS = ("iteration", "best_cost", "used_channels", "conflicts", "mean_power_dbm")


@dataclass
class RunHistory:
    """Per-iteration trace of the best solution found so far.

    Row 0 describes the initial population.
    """

    iteration: list[int] = field(default_factory=list)
    best_cost: list[float] = field(default_factory=list)
    used_channels: list[int] = field(default_factory=list)
    conflicts: list[int] = field(default_factory=list)
    mean_power_dbm: list[float] = field(default_factory=list)
    _last: Country | None = field(default=None, repr=False, compare=False)

    def record(self, it: int, best: Country, g: ConflictGraph, pl: PathLossParams | None = None):
        a = best.assignment
        self.iteration.append(it)
        self.best_cost.append(best.cost)
        if len(self.iteration) > 1 and best is self._last:
            for col in (self.used_channels, self.conflicts, self.mean_power_dbm):
                col.append(col[-1])
            return
        self._last = best
        self.used_channels.append(a.used_channels)
        self.conflicts.append(conflict_edges(a, g))
        self.mean_power_dbm.append(
            mean_interference_power(a, g, params=pl) if g.positions is not None else float("nan")
        )

    def __len__(self):
        return len(self.iteration)

    @property
    def last_improvement(self) -> int:
        """First iteration at which the best cost reached its final value."""
        if not self.best_cost:
            return 0
        final = self.best_cost[-1]
        return next(it for it, c in zip(self.iteration, self.best_cost) if c == final)

    def iterations_to_stagnation(self, window: int = STAGNATION_WINDOW) -> int:
        """Iteration of the last improvement before the best cost first stays
        flat for ``window`` iterations (the last improvement if it never does)."""
        last = 0
        for it, prev, cur in zip(self.iteration[1:], self.best_cost, self.best_cost[1:]):
            if cur < prev:
                last = it
            elif it - last >= window:
                break
        return last

    @property
    def iterations_to_converge(self) -> int:
        return self.iterations_to_stagnation()

    def rows(self):
        return zip(self.iteration, self.best_cost, self.used_channels, self.conflicts,
                   self.mean_power_dbm)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HISTORY_FIELDS)
        for it, c, u, k, p in self.rows():
            w.writerow([it, repr(c), u, k, repr(p)])


@dataclass
class RunResult:
    best: Country
    history: RunHistory

    @property
    def assignment(self) -> Assignment:
        return self.best.assignment


# --- population ----------------------------------------------------------------

def random_assignment(n_clusters: int, n_available: int, rng: np.random.Generator) -> Assignment:
    m = int(rng.integers(1, n_available + 1))
    channels = (rng.permutation(n_available)[:m] + 1).tolist()
    province = [channels[i] for i in rng.integers(0, m, size=n_clusters)]
    used = set(province)
    return Assignment(tuple(province), tuple(c for c in channels if c in used), n_available)


def init_population(g: ConflictGraph, n_available: int, params: IcaParams,
                    rng: np.random.Generator) -> list[Country]:
    """Random countries: ``m ~ U{1..n_available}`` distinct channels, each
    cluster given one of them uniformly; unused channels are pruned."""
    if n_available < 1:
        raise ValueError("n_available must be >= 1")
    if params.n_countries < 1:
        raise ValueError("n_countries must be >= 1")
    out = []
    for _ in range(params.n_countries):
        a = random_assignment(g.n_clusters, n_available, rng)
        out.append(Country(a, objective_cost(a, g, params.objective)))
    return out


def power(costs: Sequence[float], form: str = "standard") -> np.ndarray:
    """Normalized power of each country; lower cost means higher power.

    ``form="paper"`` uses ``cost - min(cost)`` literally, which rewards the
    worst countries; it exists for ablation only.
    """
    c = np.asarray(costs, dtype=float)
    if c.size == 0:
        raise ValueError("need at least one cost")
    norm = c - c.min() if form == "paper" else c.max() - c
    total = norm.sum()
    if total <= 0:
        return np.full(c.size, 1.0 / c.size)
    return norm / total


def form_empires(countries: Sequence[Country], params: IcaParams,
                 rng: np.random.Generator) -> list[Empire]:
    n_imp = params.n_imperialists
    if len(countries) < n_imp + 1:
        raise ValueError(f"need at least {n_imp + 1} countries, got {len(countries)}")
    order = sorted(range(len(countries)), key=lambda i: countries[i].cost)
    imps = [countries[i] for i in order[:n_imp]]
    cols = [countries[i] for i in order[n_imp:]]
    p = power([c.cost for c in imps], params.power_form)
    counts = np.round(p * len(cols)).astype(int)
    # remainders go to the strongest, deficits come off the weakest
    by_strength = np.argsort(-p, kind="stable")
    diff = len(cols) - counts.sum()
    k = 0
    while diff > 0:
        counts[by_strength[k % n_imp]] += 1
        diff -= 1
        k += 1
    for i in by_strength[::-1]:
        take = min(counts[i], -diff)
        counts[i] -= take
        diff += take
        if diff == 0:
            break
    perm = rng.permutation(len(cols))
    empires, start = [], 0
    for imp, n in zip(imps, counts):
        empires.append(Empire(imp, [cols[j] for j in perm[start:start + n]]))
        start += n
    return empires


# --- operators -----------------------------------------------------------------

def repair(province: Sequence[int], resource: Sequence[int], g: ConflictGraph) -> list[int]:
    """Reassign every cluster labelled 0 (unassigned).

    Clusters are visited in ascending order; each takes the resource channel
    with the fewest same-channel neighbors among the labels already set,
    ties going to the lowest channel index.
    """
    if not resource:
        raise ValueError("resource must be nonempty")
    prov = list(province)
    choices = sorted(resource)
    nbrs = g.neighbors
    for q, c in enumerate(prov):
        if c:
            continue
        clash = {}
        for v in nbrs[q]:
            cv = prov[v]
            if cv:
                clash[cv] = clash.get(cv, 0) + 1
        prov[q] = min(choices, key=lambda ch: (clash.get(ch, 0), ch))
    return prov


def _prune(prov: Sequence[int], resource: Iterable[int]) -> list[int]:
    used = set(prov)
    return [r for r in resource if r in used]


def inject_groups(target: Assignment, donor: Assignment, channels: Sequence[int],
                  g: ConflictGraph) -> Assignment:
    """Copy the donor's groups for ``channels`` into ``target``.

    The channels go to the front of the resource part; every cluster the
    donor gives one of them takes it over. Target clusters that held one of
    those channels outside the donor's group lose it, channels left without
    clusters drop out of the resource part, and the displaced clusters are
    repaired.
    """
    inject = list(dict.fromkeys(channels))
    s = set(inject)
    dprov = donor.province
    prov = [0 if (c in s and dprov[q] != c) else c for q, c in enumerate(target.province)]
    for q, c in enumerate(dprov):
        if c in s:
            prov[q] = c
    resource = inject + [r for r in target.resource if r not in s]
    resource = _prune([c for c in prov if c], resource)
    if 0 in prov:
        prov = repair(prov, resource, g)
    return Assignment(tuple(prov), tuple(resource), target.n_available)


def assimilate(imp: Assignment, col: Assignment, g: ConflictGraph,
               rng: np.random.Generator) -> Assignment:
    """Pull a colony toward its imperialist by injecting one random channel
    group of the imperialist at the front of the colony's resource part."""
    ch = imp.resource[int(rng.integers(len(imp.resource)))]
    return inject_groups(col, imp, [ch], g)


def _clashes(q: int, ch: int, prov: Sequence[int], nbrs) -> int:
    return sum(1 for v in nbrs[q] if prov[v] == ch)


def revolve(a: Assignment, mode: Literal["remove", "add"], g: ConflictGraph,
            n_available: int, rng: np.random.Generator) -> Assignment:
    if mode == "remove":
        if len(a.resource) < 2:
            log.debug("revolve(remove) skipped: only one channel in use")
            return a
        gone = a.resource[int(rng.integers(len(a.resource)))]
        resource = [r for r in a.resource if r != gone]
        prov = repair([0 if c == gone else c for c in a.province], resource, g)
        return Assignment(tuple(prov), tuple(resource), a.n_available)

    if mode == "add":
        if len(a.resource) >= n_available:
            log.debug("revolve(add) skipped: every channel already in use")
            return a
        used = set(a.resource)
        free = [c for c in range(1, n_available + 1) if c not in used]
        new = free[int(rng.integers(len(free)))]
        prov = list(a.province)
        nbrs = g.neighbors
        for q in range(len(prov)):
            here = _clashes(q, prov[q], prov, nbrs)
            if here and _clashes(q, new, prov, nbrs) < here:
                prov[q] = new
        resource = _prune(prov, [new, *a.resource])
        return Assignment(tuple(prov), tuple(resource), a.n_available)

    raise ValueError(f"unknown revolution mode {mode!r}")


def exchange(e: Empire) -> Empire:
    """Swap the imperialist with its best colony if that colony is strictly better."""
    if not e.colonies:
        return e
    i = min(range(len(e.colonies)), key=lambda k: e.colonies[k].cost)
    if e.colonies[i].cost < e.imperialist.cost:
        e.imperialist, e.colonies[i] = e.colonies[i], e.imperialist
    return e


def empire_total_costs(empires: Sequence[Empire], zeta: float = 0.1) -> np.ndarray:
    return np.array([
        e.imperialist.cost + (zeta * float(np.mean([c.cost for c in e.colonies])) if e.colonies else 0.0)
        for e in empires
    ])


def selection_probabilities(empires: Sequence[Empire], loser: int, zeta: float = 0.1) -> np.ndarray:
    """Probability that each empire wins the loser's colony (loser gets 0)."""
    total = empire_total_costs(empires, zeta)
    others = [i for i in range(len(empires)) if i != loser]
    prob = np.zeros(len(empires))
    prob[others] = power(total[others])
    return prob


def compete(empires: list[Empire], rng: np.random.Generator, zeta: float = 0.1) -> list[Empire]:
    """Move the weakest colony of the weakest empire to another empire.

    An empire that has no colonies left is dissolved instead, its imperialist
    joining the winner as a colony.
    """
    if len(empires) < 2:
        return empires
    total = empire_total_costs(empires, zeta)
    loser = int(np.argmax(total))
    prob = selection_probabilities(empires, loser, zeta)
    winner = int(rng.choice(len(empires), p=prob))
    lose = empires[loser]
    if lose.colonies:
        k = max(range(len(lose.colonies)), key=lambda i: lose.colonies[i].cost)
        empires[winner].colonies.append(lose.colonies.pop(k))
    else:
        empires[winner].colonies.append(lose.imperialist)
        del empires[loser]
    return empires


# --- main loop -----------------------------------------------------------------

def _weakest_colonies(empires: Sequence[Empire]) -> list[tuple[int, int]]:
    """(empire, colony) slots in the worse half of all colonies by cost."""
    slots = [(ei, ci) for ei, e in enumerate(empires) for ci in range(len(e.colonies))]
    slots.sort(key=lambda s: -empires[s[0]].colonies[s[1]].cost)
    return slots[:max(1, (len(slots) + 1) // 2)]


def run(g: ConflictGraph, n_available: int, params: IcaParams = IcaParams(),
        pathloss: PathLossParams | None = None,
        callback: Callable[[int, list[Empire]], None] | None = None) -> RunResult:
    """Optimize a channel allocation for ``g`` with GICA.

    Each iteration assimilates the weakest colony of every empire (or all
    colonies with ``assimilate="all"``), applies revolution with probability
    ``revolution_rate``, exchanges leaders, and lets empires compete. The run
    stops after ``max_iterations`` or once a single empire remains and the best
    cost has not moved for ``stall_iterations`` iterations.
    """
    if n_available < 1:
        raise ValueError("n_available must be >= 1")
    rng = np.random.default_rng(params.seed)

    def evaluate(a: Assignment) -> Country:
        return Country(a, objective_cost(a, g, params.objective))

    empires = form_empires(init_population(g, n_available, params, rng), params, rng)
    best = min((e.imperialist for e in empires), key=lambda c: c.cost)
    history = RunHistory()
    history.record(0, best, g, pathloss)
    last_gain = 0

    for it in range(1, params.max_iterations + 1):
        for e in empires:
            if not e.colonies:
                continue
            if params.assimilate == "all":
                targets = range(len(e.colonies))
            else:
                targets = [max(range(len(e.colonies)), key=lambda k: e.colonies[k].cost)]
            for k in targets:
                e.colonies[k] = evaluate(assimilate(e.imperialist.assignment,
                                                    e.colonies[k].assignment, g, rng))

        if rng.random() < params.revolution_rate:
            slots = _weakest_colonies(empires)
            if any(e.colonies for e in empires):
                ei, ci = slots[int(rng.integers(len(slots)))]
                col = empires[ei].colonies[ci]
                empires[ei].colonies[ci] = evaluate(revolve(col.assignment, "remove", g, n_available, rng))
            weakest = empires[int(np.argmax(empire_total_costs(empires, params.zeta)))]
            weakest.imperialist = evaluate(
                revolve(weakest.imperialist.assignment, "add", g, n_available, rng))

        for e in empires:
            exchange(e)
        compete(empires, rng, params.zeta)

        leader = min((e.imperialist for e in empires), key=lambda c: c.cost)
        if leader.cost < best.cost:
            best, last_gain = leader, it
        history.record(it, best, g, pathloss)
        if callback is not None:
            callback(it, empires)
        if len(empires) == 1 and it - last_gain >= params.stall_iterations:
            break

    return RunResult(best, history)
