import itertools

import pytest

from iaorder import (
    AllocationInfeasibleError,
    SystemConfig,
    allocate_ici,
    cell_solvability_count,
    effective_channel_budget,
)


def brute_force_feasible_plans(cfg, s_per_cell):
    """Independent enumeration oracle.

    Yields (t_counts, groups) for every plan at the given budget vector that
    satisfies the documented invariants, with feasibility re-derived from
    scratch: group partitions, per-BS budget M_i >= d * (K_i + T_i), and the
    per-cell unknown-minus-equation count >= d.
    """
    C, d = cfg.cells, cfg.d

    def partitions(users, parts):
        if parts == 1:
            yield (tuple(users),)
            return
        if len(users) == parts:
            yield tuple((u,) for u in users)
            return
        if len(users) < parts:
            return
        head, rest = users[0], users[1:]
        for sub in partitions(rest, parts - 1):
            yield ((head,),) + sub
        for sub in partitions(rest, parts):
            for g_idx in range(len(sub)):
                grown = tuple(
                    tuple(sorted(g + (head,))) if gi == g_idx else g
                    for gi, g in enumerate(sub)
                )
                yield tuple(sorted(grown))

    def cell_count(j, ns):
        users = set()
        total = 0
        for i, members in ns:
            users.update(members)
            total -= (len(members) - 1) * cfg.M[i]
        return cfg.N[j] * len(users) + total

    per_cell_options = []
    for j in range(C):
        sources = [i for i in range(C) if i != j]
        cell_opts = []
        for split in itertools.product(range(1, cfg.K[j] + 1), repeat=len(sources)):
            if sum(split) != s_per_cell[j]:
                continue
            part_lists = [
                sorted(set(partitions(tuple(range(cfg.K[j])), t))) for t in split
            ]
            for combo in itertools.product(*part_lists):
                ns = [
                    (i, g)
                    for i, parts in zip(sources, combo)
                    for g in parts
                    if len(g) > 1
                ]
                if cell_count(j, ns) >= d:
                    cell_opts.append((dict(zip(sources, split)), dict(zip(sources, combo))))
        per_cell_options.append(cell_opts)
    for cells in itertools.product(*per_cell_options):
        t_counts = {(j, i): t for j, (split, _) in enumerate(cells) for i, t in split.items()}
        loads = [sum(t for (jj, ii), t in t_counts.items() if ii == i) for i in range(C)]
        if any(cfg.M[i] < d * (cfg.K[i] + loads[i]) for i in range(C)):
            continue
        groups = {(j, i): parts for j, (_, combo) in enumerate(cells) for i, parts in combo.items()}
        yield t_counts, groups


def test_budget_formula_examples(cfg_sym, cfg_asym, cfg_tiny):
    assert effective_channel_budget(cfg_sym) == (4, 4, 4)
    assert effective_channel_budget(cfg_asym) == (4, 3, 5)
    assert effective_channel_budget(cfg_tiny) == (1, 1)


def test_symmetric_plan_matches_enumeration_oracle(cfg_sym, plan_sym):
    assert plan_sym.s_per_cell == (4, 4, 4)
    assert all(t == 2 for t in plan_sym.t_counts.values())
    for parts in plan_sym.groups.values():
        assert sorted(len(g) for g in parts) == [1, 2]
    # coupled-system count per cell: 29 unknowns vs 28 equations
    for j in range(3):
        ns = [(i, members) for i, _, members in plan_sym.nonsingleton_groups(j)]
        assert cell_solvability_count(cfg_sym, j, ns) == 1
    feasible = list(brute_force_feasible_plans(cfg_sym, (4, 4, 4)))
    assert (plan_sym.t_counts, plan_sym.groups) in [(t, g) for t, g in feasible]
    best_max = min(
        max(len(g) for parts in groups.values() for g in parts)
        for _, groups in feasible
    )
    assert plan_sym.max_group_size() == best_max == 2


def test_asymmetric_plan_certified(cfg_asym, plan_asym):
    assert plan_asym.s_per_cell == (4, 3, 5)
    expected_t = {(0, 1): 2, (0, 2): 2, (1, 0): 1, (1, 2): 2, (2, 0): 3, (2, 1): 2}
    assert plan_asym.t_counts == expected_t
    # budgets are tight: M_i == d * (K_i + T_i)
    for i in range(3):
        assert cfg_asym.M[i] == cfg_asym.d * (cfg_asym.K[i] + plan_asym.source_load(i))
    for j in range(3):
        ns = [(i, members) for i, _, members in plan_asym.nonsingleton_groups(j)]
        assert cell_solvability_count(cfg_asym, j, ns) == cfg_asym.d
    feasible = list(brute_force_feasible_plans(cfg_asym, (4, 3, 5)))
    assert (plan_asym.t_counts, plan_asym.groups) in [(t, g) for t, g in feasible]


def test_tiny_config_escalates_to_singletons(cfg_tiny):
    plan = allocate_ici(cfg_tiny)
    # at the lower bound (1, 1) the only grouping merges both users and its
    # count is 0 < d, so the budget must escalate to all-singleton splits
    merged_count = cell_solvability_count(cfg_tiny, 0, [(1, (0, 1))])
    assert merged_count == 0
    assert plan.s_per_cell == (2, 2)
    assert plan.t_counts == {(0, 1): 2, (1, 0): 2}
    assert all(len(g) == 1 for parts in plan.groups.values() for g in parts)


def test_budget_identity(plan_sym, plan_asym):
    for plan, cells in ((plan_sym, 3), (plan_asym, 3)):
        assert sum(plan.s_per_cell) == sum(plan.source_load(i) for i in range(cells))


def test_infeasible_config_diagnosed():
    cfg = SystemConfig(3, (3, 3, 3), 1, (5, 5, 5), (5, 5, 5))
    with pytest.raises(AllocationInfeasibleError, match="budget"):
        allocate_ici(cfg)


def test_partitions_are_disjoint_and_complete(plan_sym, plan_asym, cfg_sym, cfg_asym):
    for plan, cfg in ((plan_sym, cfg_sym), (plan_asym, cfg_asym)):
        for (j, i), parts in plan.groups.items():
            members = sorted(k for g in parts for k in g)
            assert members == list(range(cfg.K[j]))
            assert len(parts) == plan.t_counts[(j, i)]
        assert all(
            plan.s_per_cell[j] >= (cfg.cells - 2) * cfg.K[j] + 1 for j in range(cfg.cells)
        )


def test_allocation_deterministic(cfg_sym):
    a = allocate_ici(cfg_sym)
    b = allocate_ici(cfg_sym)
    assert a.serialized() == b.serialized()
