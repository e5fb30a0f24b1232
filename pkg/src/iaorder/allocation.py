"""Budgeting and grouping of cross-cell interference into shared directions.

Each cell ``j`` consumes ``S_j`` effective interference directions, split as
``t[(j, i)]`` directions sourced from each other BS ``i``. For every pair
``(j, i)`` the users of cell ``j`` are partitioned into ``t[(j, i)]``
disjoint groups; the interference every member of a group receives from BS
``i`` is later aligned onto one shared d-dimensional basis, so larger
groups buy transmit dimensions at the price of receive dimensions.

The planner below searches the grouping space exhaustively, certifies
candidates by integer dimension counting only (numeric ranks are checked
later, at solve time, against the actual channel draw), and picks a
deterministic winner: smallest maximum group size, ties broken by the
lexicographically smallest serialized plan.
"""

import itertools
from dataclasses import dataclass

from .channels import SystemConfig, validate_config
from .errors import AllocationInfeasibleError

__all__ = [
    "AllocationPlan",
    "effective_channel_budget",
    "allocate_ici",
    "cell_solvability_count",
]


@dataclass(frozen=True)
class AllocationPlan:
    """Assignment of cross-cell interference onto shared effective directions.

    ``s_per_cell[j]`` counts the effective directions budgeted for cell
    ``j``; ``t_counts[(j, i)]`` says how many of them are sourced from BS
    ``i != j``; ``groups[(j, i)]`` partitions the cell-``j`` users (0-based)
    into that many disjoint groups. Groups of size one impose no coupling;
    every larger group forces its members' receive filters to present one
    common image of BS ``i``.
    """

    s_per_cell: tuple[int, ...]
    t_counts: dict
    groups: dict

    def source_load(self, i: int) -> int:
        """Total directions BS ``i`` must reserve, ``T_i``."""
        return sum(t for (j, src), t in self.t_counts.items() if src == i)

    def max_group_size(self) -> int:
        return max(len(g) for parts in self.groups.values() for g in parts)

    def serialized(self) -> tuple:
        """Canonical comparable form used for deterministic tie-breaking."""
        keys = sorted(self.groups)
        return (
            self.s_per_cell,
            tuple((jk, self.t_counts[jk], self.groups[jk]) for jk in keys),
        )

    def nonsingleton_groups(self, j: int) -> list:
        """Coupled groups of cell ``j`` as ``(source, group_index, members)``,
        in ascending (source, group_index) order."""
        out = []
        for (cell, i) in sorted(self.groups):
            if cell != j:
                continue
            for s, members in enumerate(self.groups[(cell, i)]):
                if len(members) > 1:
                    out.append((i, s, members))
        return out

    def to_jsonable(self) -> dict:
        """1-based JSON form with integer fields only."""
        return {
            "s_per_cell": list(self.s_per_cell),
            "t_counts": [
                {"cell": j + 1, "source": i + 1, "count": self.t_counts[(j, i)]}
                for (j, i) in sorted(self.t_counts)
            ],
            "groups": [
                {
                    "cell": j + 1,
                    "source": i + 1,
                    "members": [[k + 1 for k in g] for g in self.groups[(j, i)]],
                }
                for (j, i) in sorted(self.groups)
            ],
        }


def effective_channel_budget(cfg: SystemConfig) -> tuple[int, ...]:
    """Per-cell lower bound on the effective-direction count,
    ``(C - 2) * K_j + 1``."""
    return tuple((cfg.cells - 2) * k + 1 for k in cfg.users_per_cell)


def _set_partitions(items: tuple, parts: int):
    """All partitions of ``items`` into exactly ``parts`` nonempty groups.

    Canonical form: each group ascending, groups ordered by smallest member.
    Enumeration order is deterministic (restricted-growth recursion).
    """
    n = len(items)
    if parts < 1 or parts > n:
        return
    groups: list[list] = []

    def rec(idx: int):
        if n - idx < parts - len(groups):
            return
        if idx == n:
            if len(groups) == parts:
                yield tuple(tuple(g) for g in groups)
            return
        x = items[idx]
        for g in groups:
            g.append(x)
            yield from rec(idx + 1)
            g.pop()
        if len(groups) < parts:
            groups.append([x])
            yield from rec(idx + 1)
            groups.pop()

    yield from rec(0)


def cell_solvability_count(cfg: SystemConfig, j: int, ns_groups) -> int:
    """Unknown-minus-equation count of cell ``j``'s coupled alignment system.

    ``ns_groups`` lists the coupled (size > 1) groups as ``(source, members)``
    pairs. Each constrained user contributes ``N_j`` unknowns, each group a
    basis of ``M_i`` unknowns and ``len(members) * M_i`` equations.
    """
    users = set()
    count = 0
    for i, members in ns_groups:
        users.update(members)
        count += cfg.M[i] - len(members) * cfg.M[i]
    return cfg.N[j] * len(users) + count


def _cell_groups_feasible(cfg: SystemConfig, j: int, ns_groups) -> bool:
    """Dimension-count certificate for cell ``j``'s coupled system.

    Requires every nonempty subset of the coupled groups to leave at least
    ``d`` spare dimensions: a locally overdetermined subsystem would force
    its members' receive filters to zero even when the full count is fine.
    """
    d = cfg.d
    n = len(ns_groups)
    for mask in range(1, 1 << n):
        subset = [ns_groups[b] for b in range(n) if mask >> b & 1]
        if cell_solvability_count(cfg, j, subset) < d:
            return False
    return True


def _row_choices(cfg: SystemConfig, j: int, s_j: int) -> list:
    """All splits of ``s_j`` directions across the sources ``i != j`` with
    ``1 <= t <= K_j`` each; each choice is a tuple aligned with the sorted
    source list."""
    sources = [i for i in range(cfg.cells) if i != j]
    k_j = cfg.K[j]
    out = []

    def rec(pos: int, left: int, acc: list):
        if pos == len(sources):
            if left == 0:
                out.append(tuple(acc))
            return
        remaining = len(sources) - pos - 1
        for t in range(1, min(k_j, left - remaining) + 1):
            acc.append(t)
            rec(pos + 1, left - t, acc)
            acc.pop()

    rec(0, s_j, [])
    return out


def _best_plan_at(cfg: SystemConfig, s: tuple[int, ...], source_caps):
    """Best feasible plan at the budget vector ``s``, or None."""
    C = cfg.cells
    users = [tuple(range(k)) for k in cfg.K]
    source_lists = [[i for i in range(C) if i != j] for j in range(C)]
    row_options = [_row_choices(cfg, j, s[j]) for j in range(C)]
    if any(not rows for rows in row_options):
        return None

    best = None
    best_key = None
    for rows in itertools.product(*row_options):
        loads = [0] * C
        for j in range(C):
            for i, t in zip(source_lists[j], rows[j]):
                loads[i] += t
        if any(loads[i] > source_caps[i] for i in range(C)):
            continue
        # independent per-cell grouping search under this split
        per_cell = []
        for j in range(C):
            combos = []
            partition_lists = [
                list(_set_partitions(users[j], t)) for t in rows[j]
            ]
            for assignment in itertools.product(*partition_lists):
                ns = [
                    (i, g)
                    for i, parts in zip(source_lists[j], assignment)
                    for g in parts
                    if len(g) > 1
                ]
                if _cell_groups_feasible(cfg, j, ns):
                    combos.append(assignment)
            if not combos:
                break
            per_cell.append(combos)
        if len(per_cell) < C:
            continue
        for choice in itertools.product(*per_cell):
            t_counts = {}
            groups = {}
            for j in range(C):
                for i, t, parts in zip(source_lists[j], rows[j], choice[j]):
                    t_counts[(j, i)] = t
                    groups[(j, i)] = parts
            plan = AllocationPlan(s, t_counts, groups)
            key = (plan.max_group_size(), plan.serialized())
            if best_key is None or key < best_key:
                best, best_key = plan, key
    return best


def _escalation_deltas(total: int, cells: int):
    """Nonnegative integer splits of ``total`` over ``cells`` positions, most
    weight on the first position first."""
    if cells == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _escalation_deltas(total - first, cells - 1):
            yield (first, *rest)


def allocate_ici(cfg: SystemConfig) -> AllocationPlan:
    """Find the deterministic best grouping plan for ``cfg``.

    Starts every cell at its lower budget bound and escalates budgets
    (smallest cell first, then cell index) only when no plan exists; among
    feasible plans at the first workable budget vector, returns the one
    with the smallest maximum group size, ties broken lexicographically on
    the serialized plan.

    Raises :class:`AllocationInfeasibleError` with the binding constraint
    when no plan fits the antenna budgets.
    """
    validate_config(cfg)
    C, d = cfg.cells, cfg.d
    lower = effective_channel_budget(cfg)
    source_caps = [cfg.M[i] // d - cfg.K[i] for i in range(C)]
    for i, cap in enumerate(source_caps):
        if cap < C - 1:
            raise AllocationInfeasibleError(
                f"per-BS budget binds: BS {i + 1} can reserve only {max(cap, 0)} "
                f"directions (bs_antennas[{i + 1}]={cfg.M[i]}, streams={d}, "
                f"users={cfg.K[i]}), but must serve {C - 1} other cells"
            )
    s_floor = tuple(max(lower[j], C - 1) for j in range(C))
    s_ceil = tuple((C - 1) * cfg.K[j] for j in range(C))
    total_cap = sum(source_caps)
    if sum(s_floor) > total_cap:
        raise AllocationInfeasibleError(
            f"per-BS budget binds: cells need at least {sum(s_floor)} effective "
            f"directions in total but the BSs can reserve only {total_cap} "
            "(sum of bs_antennas[i] // streams - users_per_cell[i])"
        )
    # escalation priority: smallest cell first, ties by index
    priority = sorted(range(C), key=lambda j: (cfg.K[j], j))
    for extra in range(total_cap - sum(s_floor) + 1):
        for delta in _escalation_deltas(extra, C):
            s = list(s_floor)
            for rank, j in enumerate(priority):
                s[j] += delta[rank]
            if any(s[j] > s_ceil[j] for j in range(C)):
                continue
            plan = _best_plan_at(cfg, tuple(s), source_caps)
            if plan is not None:
                return plan
    raise AllocationInfeasibleError(
        "no grouping plan is solvable within the antenna budgets: every budget "
        f"vector between {s_floor} and {s_ceil} (total <= {total_cap}) leaves "
        "some cell's coupled system short of spare dimensions"
    )
