"""Sequential node-labeling problems as a shared MDP skeleton.

A problem assigns integer labels to nodes one at a time. A partial labeling
is extendable with (v, label) only if the problem's extensibility test
accepts; a deterministic label rule picks the label once a node is chosen,
so policies only choose nodes. Terminal states are complete labelings, the
episode return is minus the terminal cost, and every sequence of accepted
actions ends in a feasible solution.

Problems shipped: "gc" (coloring, labels 1..n, cost = distinct colors),
"mvc" (cover, labels {0,1}, cost = size of the 1-set), "mis" (independent
set, labels {0,1}, cost = -size of the 1-set).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import IllegalActionError, ParameterError, UsageError
from .graphs import Graph

UNLABELED = -1


class InfiniteCost:
    """Sentinel ordering above every finite cost; never enters arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return not isinstance(other, InfiniteCost)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, InfiniteCost)

    def __eq__(self, other):
        return isinstance(other, InfiniteCost)

    def __hash__(self):
        return hash("InfiniteCost")

    def __repr__(self):
        return "inf"


INFINITE_COST = InfiniteCost()


class PartialLabeling:
    """Label assignment over a subset of nodes, with the incremental
    bookkeeping each problem's tests need:

    - labels[v] is the label or UNLABELED
    - label_classes maps label -> set of nodes carrying it
    - uncovered_inside: edges with both endpoints labeled, neither 1
    - ones_conflicts: edges with both endpoints labeled 1
    - uncovered_by_ones: edges of the whole graph with no endpoint labeled 1
    """

    __slots__ = (
        "graph",
        "labels",
        "num_labeled",
        "label_classes",
        "uncovered_inside",
        "ones_conflicts",
        "uncovered_by_ones",
    )

    def __init__(self, graph: Graph):
        self.graph = graph
        self.labels = np.full(graph.n, UNLABELED, dtype=np.int32)
        self.num_labeled = 0
        self.label_classes: dict[int, set] = {}
        self.uncovered_inside = 0
        self.ones_conflicts = 0
        self.uncovered_by_ones = graph.m

    @classmethod
    def from_assignment(cls, graph: Graph, assignment) -> "PartialLabeling":
        """Build from {node: label}; counters recomputed by a full edge scan."""
        pl = cls(graph)
        for v, l in assignment.items():
            v = int(v)
            l = int(l)
            if not (0 <= v < graph.n):
                raise ParameterError(f"node {v} out of range")
            if l < 0:
                raise ParameterError(f"negative label {l}")
            if pl.labels[v] != UNLABELED:
                raise ParameterError(f"node {v} labeled twice")
            pl.labels[v] = l
            pl.label_classes.setdefault(l, set()).add(v)
            pl.num_labeled += 1
        pl._rescan()
        return pl

    def _rescan(self):
        lab = self.labels
        uncovered_inside = 0
        ones_conflicts = 0
        uncovered_by_ones = 0
        for u, v in self.graph.edges():
            lu, lv = lab[u], lab[v]
            if lu != 1 and lv != 1:
                uncovered_by_ones += 1
                if lu != UNLABELED and lv != UNLABELED:
                    uncovered_inside += 1
            elif lu == 1 and lv == 1:
                ones_conflicts += 1
        self.uncovered_inside = uncovered_inside
        self.ones_conflicts = ones_conflicts
        self.uncovered_by_ones = uncovered_by_ones

    @property
    def distinct_label_count(self) -> int:
        return len(self.label_classes)

    def is_labeled(self, v: int) -> bool:
        return self.labels[v] != UNLABELED

    def label_of(self, v: int) -> int:
        l = int(self.labels[v])
        if l == UNLABELED:
            raise UsageError(f"node {v} has no label")
        return l

    @property
    def complete(self) -> bool:
        return self.num_labeled == self.graph.n

    def labeled_nodes(self):
        return np.flatnonzero(self.labels != UNLABELED)

    def add(self, v: int, l: int) -> None:
        """Record label l on unlabeled node v, updating counters in O(deg)."""
        if self.labels[v] != UNLABELED:
            raise UsageError(f"node {v} already labeled")
        lab = self.labels
        for u in self.graph.neighbors(v):
            lu = lab[u]
            if l == 1:
                if lu == 1:
                    self.ones_conflicts += 1
                else:
                    self.uncovered_by_ones -= 1
            else:
                if lu != UNLABELED and lu != 1:
                    self.uncovered_inside += 1
        lab[v] = l
        self.label_classes.setdefault(l, set()).add(v)
        self.num_labeled += 1

    def copy(self) -> "PartialLabeling":
        pl = PartialLabeling.__new__(PartialLabeling)
        pl.graph = self.graph
        pl.labels = self.labels.copy()
        pl.num_labeled = self.num_labeled
        pl.label_classes = {l: set(s) for l, s in self.label_classes.items()}
        pl.uncovered_inside = self.uncovered_inside
        pl.ones_conflicts = self.ones_conflicts
        pl.uncovered_by_ones = self.uncovered_by_ones
        return pl


class MdpState:
    """Episode state: graph, partial labeling, action history, step counter."""

    __slots__ = ("graph", "labeling", "history", "step")

    def __init__(self, graph: Graph):
        self.graph = graph
        self.labeling = PartialLabeling(graph)
        self.history: list = []
        self.step = 0

    @property
    def last_action(self) -> Optional[tuple]:
        return self.history[-1] if self.history else None

    @property
    def terminal(self) -> bool:
        return self.labeling.complete

    def copy(self) -> "MdpState":
        s = MdpState.__new__(MdpState)
        s.graph = self.graph
        s.labeling = self.labeling.copy()
        s.history = list(self.history)
        s.step = self.step
        return s


@dataclass(frozen=True)
class ProblemDefinition:
    """One node-labeling problem.

    extensibility_test(labeling, v, l): may the partial labeling grow by
        assigning l to unlabeled v and still reach some feasible completion
        of the kind this problem promises?
    label_rule(state, v): the label a rule-driven solver gives node v now.
    legal_labels(labeling, v): all labels passing the test, ascending.
    cost(labels): cost of a complete feasible labeling (int; may be negative).
    feasible(graph, labels): is a complete labeling feasible?
    bulk_zero_when_covered: once no edge is uncovered by the 1-set, remaining
        nodes take label 0 in bulk (vertex cover's early-finish shortcut).
    """

    name: str
    extensibility_test: Callable[[PartialLabeling, int, int], bool]
    label_rule: Callable[[MdpState, int], int]
    legal_labels: Callable[[PartialLabeling, int], list]
    cost: Callable[[np.ndarray], int]
    feasible: Callable[[Graph, np.ndarray], bool]
    bulk_zero_when_covered: bool = False


def _check_target(labeling: PartialLabeling, v: int) -> None:
    if not (0 <= v < labeling.graph.n):
        raise UsageError(f"node {v} out of range")
    if labeling.is_labeled(v):
        raise UsageError(f"node {v} already labeled")


# --- graph coloring --------------------------------------------------------


def _gc_test(labeling: PartialLabeling, v: int, l: int) -> bool:
    _check_target(labeling, v)
    if l < 1 or l > labeling.distinct_label_count + 1:
        return False
    lab = labeling.labels
    for u in labeling.graph.neighbors(v):
        if lab[u] == l:
            return False
    return True


def _gc_rule(state: MdpState, v: int) -> int:
    lab = state.labeling.labels
    used = set()
    for u in state.graph.neighbors(v):
        lu = lab[u]
        if lu != UNLABELED:
            used.add(int(lu))
    l = 1
    while l in used:
        l += 1
    return l


def _gc_legal(labeling: PartialLabeling, v: int) -> list:
    lab = labeling.labels
    forbidden = {int(lab[u]) for u in labeling.graph.neighbors(v) if lab[u] != UNLABELED}
    top = labeling.distinct_label_count + 1
    return [l for l in range(1, top + 1) if l not in forbidden]


def _gc_cost(labels: np.ndarray) -> int:
    return int(len(np.unique(labels)))


def _gc_feasible(graph: Graph, labels: np.ndarray) -> bool:
    if labels.min() < 1:
        return False
    for u, v in graph.edges():
        if labels[u] == labels[v]:
            return False
    return True


# --- minimum vertex cover ---------------------------------------------------


def _mvc_test(labeling: PartialLabeling, v: int, l: int) -> bool:
    _check_target(labeling, v)
    if l not in (0, 1):
        return False
    if labeling.uncovered_inside > 0:
        return False
    if l == 1:
        return True
    lab = labeling.labels
    for u in labeling.graph.neighbors(v):
        lu = lab[u]
        if lu != UNLABELED and lu != 1:
            return False
    return True


def _mvc_rule(state: MdpState, v: int) -> int:
    return 1 if state.labeling.uncovered_by_ones > 0 else 0


def _mvc_legal(labeling: PartialLabeling, v: int) -> list:
    out = []
    if _mvc_test(labeling, v, 0):
        out.append(0)
    if _mvc_test(labeling, v, 1):
        out.append(1)
    return out


def _mvc_cost(labels: np.ndarray) -> int:
    return int(np.count_nonzero(labels == 1))


def _mvc_feasible(graph: Graph, labels: np.ndarray) -> bool:
    for u, v in graph.edges():
        if labels[u] != 1 and labels[v] != 1:
            return False
    return True


# --- maximum independent set -------------------------------------------------


def _mis_test(labeling: PartialLabeling, v: int, l: int) -> bool:
    _check_target(labeling, v)
    if l not in (0, 1):
        return False
    if labeling.ones_conflicts > 0:
        return False
    if l == 0:
        return True
    lab = labeling.labels
    for u in labeling.graph.neighbors(v):
        if lab[u] == 1:
            return False
    return True


def _mis_rule(state: MdpState, v: int) -> int:
    lab = state.labeling.labels
    for u in state.graph.neighbors(v):
        if lab[u] == 1:
            return 0
    return 1


def _mis_legal(labeling: PartialLabeling, v: int) -> list:
    out = []
    if _mis_test(labeling, v, 0):
        out.append(0)
    if _mis_test(labeling, v, 1):
        out.append(1)
    return out


def _mis_cost(labels: np.ndarray) -> int:
    return -int(np.count_nonzero(labels == 1))


def _mis_feasible(graph: Graph, labels: np.ndarray) -> bool:
    for u, v in graph.edges():
        if labels[u] == 1 and labels[v] == 1:
            return False
    return True


GC = ProblemDefinition("gc", _gc_test, _gc_rule, _gc_legal, _gc_cost, _gc_feasible)
MVC = ProblemDefinition(
    "mvc", _mvc_test, _mvc_rule, _mvc_legal, _mvc_cost, _mvc_feasible,
    bulk_zero_when_covered=True,
)
MIS = ProblemDefinition("mis", _mis_test, _mis_rule, _mis_legal, _mis_cost, _mis_feasible)

_REGISTRY = {p.name: p for p in (GC, MVC, MIS)}
PROBLEM_NAMES = tuple(_REGISTRY)


def get_problem(name: str) -> ProblemDefinition:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ParameterError(f"unknown problem {name!r}, want one of {PROBLEM_NAMES}") from None


def apply_action(problem: ProblemDefinition, state: MdpState, v: int, l: int) -> MdpState:
    """Advance the episode by labeling v with l.

    The state is updated in place (O(degree(v))) and returned; the previous
    state object is the returned one. Rejected actions raise
    IllegalActionError and leave the state untouched.
    """
    if not problem.extensibility_test(state.labeling, v, l):
        raise IllegalActionError(f"action ({v}, {l}) rejected for {problem.name}")
    state.labeling.add(v, l)
    state.history.append((v, l))
    state.step += 1
    return state


def verify_and_cost(problem: ProblemDefinition, graph: Graph, labels) -> tuple:
    """(feasible, cost) for a complete labeling; infeasible cost is the
    INFINITE_COST sentinel."""
    labels = np.asarray(labels, dtype=np.int32)
    if labels.shape != (graph.n,):
        raise UsageError(f"labels shape {labels.shape} does not match n={graph.n}")
    if np.any(labels == UNLABELED):
        raise UsageError("labeling incomplete")
    if problem.feasible(graph, labels):
        return True, problem.cost(labels)
    return False, INFINITE_COST


@dataclass
class Trajectory:
    """One finished episode. steps holds (node, label, log_probability) in
    execution order; for rule-driven (non-policy) steps the log-probability
    is 0.0. policy_steps counts steps before any bulk-zero completion."""

    steps: list
    labels: np.ndarray
    terminal_cost: int
    policy_steps: int

    @property
    def episode_return(self):
        return -self.terminal_cost


def _bulk_complete(labeling: PartialLabeling, steps: list) -> None:
    for v in np.flatnonzero(labeling.labels == UNLABELED):
        labeling.add(int(v), 0)
        steps.append((int(v), 0, 0.0))


def rollout_with_ordering(problem: ProblemDefinition, graph: Graph, order) -> Trajectory:
    """Apply the label rule along a node ordering (a permutation of V).

    For cover-style problems the episode finishes early with a bulk of zeros
    (ascending id) once every edge is covered.
    """
    order = np.asarray(order, dtype=np.int32)
    if sorted(order.tolist()) != list(range(graph.n)):
        raise UsageError("order is not a permutation of the nodes")
    if problem.name == "gc":
        labels, k = _kernels.color_rollout(graph.indptr, graph.indices, order)
        steps = [(int(v), int(labels[v]), 0.0) for v in order]
        return Trajectory(steps, labels, k, len(steps))
    if problem.name == "mvc":
        labels, rule_steps, size = _kernels.cover_rollout(graph.indptr, graph.indices, order)
        steps = [(int(v), 1, 0.0) for v in order[:rule_steps]]
        taken = set(int(v) for v in order[:rule_steps])
        steps.extend((v, 0, 0.0) for v in range(graph.n) if v not in taken)
        return Trajectory(steps, labels, size, rule_steps)
    if problem.name == "mis":
        labels, size = _kernels.mis_rollout(graph.indptr, graph.indices, order)
        steps = [(int(v), int(labels[v]), 0.0) for v in order]
        return Trajectory(steps, labels, -size, len(steps))
    return _rollout_generic(problem, graph, order)


def _rollout_generic(problem: ProblemDefinition, graph: Graph, order) -> Trajectory:
    state = MdpState(graph)
    steps = []
    for v in order:
        if problem.bulk_zero_when_covered and state.labeling.uncovered_by_ones == 0:
            break
        v = int(v)
        l = problem.label_rule(state, v)
        apply_action(problem, state, v, l)
        steps.append((v, l, 0.0))
    policy_steps = len(steps)
    if not state.terminal:
        _bulk_complete(state.labeling, steps)
    labels = state.labeling.labels
    return Trajectory(steps, labels, problem.cost(labels), policy_steps)


def random_episode(problem: ProblemDefinition, graph: Graph, rng) -> Trajectory:
    """Uniform random legal (node, label) actions until terminal."""
    state = MdpState(graph)
    steps = []
    while not state.terminal:
        actions = []
        lab = state.labeling.labels
        for v in range(graph.n):
            if lab[v] != UNLABELED:
                continue
            for l in problem.legal_labels(state.labeling, v):
                actions.append((v, l))
        if not actions:  # pragma: no cover - shipped problems never dead-end
            raise IllegalActionError("no legal action from a non-terminal state")
        v, l = actions[int(rng.integers(0, len(actions)))]
        apply_action(problem, state, v, l)
        steps.append((v, l, -float(np.log(len(actions)))))
    labels = state.labeling.labels
    return Trajectory(steps, labels, problem.cost(labels), len(steps))


# --- labeling JSON interchange ------------------------------------------------


def labeling_to_dict(problem: ProblemDefinition, labels, cost) -> dict:
    labels = np.asarray(labels)
    return {
        "problem": problem.name,
        "labels": [int(x) for x in labels],
        "cost": "inf" if isinstance(cost, InfiniteCost) else int(cost),
    }


def labeling_from_dict(d: dict) -> tuple:
    """(problem, labels array, cost) from the interchange dict."""
    try:
        problem = get_problem(d["problem"])
        labels = np.asarray([int(x) for x in d["labels"]], dtype=np.int32)
        cost = d["cost"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed labeling payload: {exc}") from None
    cost = INFINITE_COST if cost == "inf" else int(cost)
    return problem, labels, cost
