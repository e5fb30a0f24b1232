"""Grouping plans across layouts: tight, uneven, and escalating.

Shows what the planner returns for three representative systems, including
one where the budget lower bound is unsolvable and must escalate, and one
with no plan at all.
"""

import iaorder as ia


def describe(label, cfg):
    print(f"\n=== {label} ===")
    print(f"cells {cfg.cells}, users {list(cfg.K)}, streams {cfg.d}, "
          f"BS {list(cfg.M)}, MS {list(cfg.N)}")
    lower = ia.effective_channel_budget(cfg)
    try:
        plan = ia.allocate_ici(cfg)
    except ia.AllocationInfeasibleError as exc:
        print(f"lower bound {list(lower)} -> infeasible: {exc}")
        return
    print(f"budget: lower bound {list(lower)}, certified {list(plan.s_per_cell)}"
          + (" (escalated)" if plan.s_per_cell != lower else ""))
    for (j, i) in sorted(plan.groups):
        sizes = [len(g) for g in plan.groups[(j, i)]]
        print(f"  cell {j + 1} <- BS {i + 1}: t={plan.t_counts[(j, i)]}, group sizes {sizes}")
    for i in range(cfg.cells):
        need = cfg.d * (cfg.K[i] + plan.source_load(i))
        print(f"  BS {i + 1}: needs {need} of {cfg.M[i]} transmit dimensions")
    for j in range(cfg.cells):
        ns = [(i, members) for i, _, members in plan.nonsingleton_groups(j)]
        spare = ia.cell_solvability_count(cfg, j, ns) if ns else cfg.N[j]
        print(f"  cell {j + 1}: coupled-system spare dimensions {spare} (needs >= {cfg.d})")


def main():
    describe("symmetric single-stream", ia.SystemConfig(3, (3, 3, 3), 1, (7, 7, 7), (5, 5, 5)))
    describe("uneven cells, two streams", ia.SystemConfig(3, (3, 2, 4), 2, (14, 12, 16), (10, 8, 10)))
    describe("two cells, escalation required", ia.SystemConfig(2, (2, 2), 1, (4, 4), (2, 2)))
    describe("too few BS antennas", ia.SystemConfig(3, (3, 3, 3), 1, (5, 5, 5), (5, 5, 5)))


if __name__ == "__main__":
    main()
