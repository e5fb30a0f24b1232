"""Non-iterative aligned transceiver construction and rate evaluation.

The construction runs in two passes over a fixed grouping plan:

1. receive side: per cell, one coupled linear system ties together the
   receive filters of all users that share a group with someone and the
   shared per-group bases; its null space delivers all ``d`` streams
   jointly, so the interference each group member presents from the
   group's source BS lands exactly on the shared basis,
2. transmit side: per user and stream, the beamformer is a null-space
   vector of every effective channel it must not excite (other users of
   the same cell, all shared cross-cell bases at this BS, the user's own
   other streams), scaled to the equal per-stream power split.

Rates follow the standard per-stream SINR formula; interference is the sum
of the intra-user, intra-cell and cross-cell power terms.
"""

from dataclasses import dataclass, replace

import numpy as np

from .allocation import AllocationPlan
from .channels import (
    ChannelSet,
    Ordering,
    SimulationParams,
    apply_ordering,
)
from .errors import AlignmentRankDeficientError, NullSpaceEmptyError
from .linalg import null_space_basis

__all__ = [
    "TransceiverDesign",
    "DesignEvaluation",
    "alignment_system",
    "align_receive",
    "transmit_nulling",
    "evaluate_design",
    "design_for_ordering",
]


@dataclass(frozen=True)
class TransceiverDesign:
    """Beamformers of one complete (or receive-only) design.

    ``U[j]`` stacks the receive filters of cell ``j``: shape
    ``(K_j, N_j, d)``. ``V[i]`` stacks the precoders of BS ``i``: shape
    ``(K_i, M_i, d)``; ``None`` until the transmit pass runs. ``Q[(j, i)]``
    holds the shared effective bases from BS ``i`` toward cell ``j``, shape
    ``(t_ji, M_i, d)``. ``W[(i, j)]`` stacks the effective channels
    ``H^H @ u`` of every cell-``j`` user as seen from BS ``i``'s transmit
    space, shape ``(K_j, M_i, d)``.
    """

    U: tuple
    Q: dict
    W: dict
    V: tuple | None = None

    def u_of(self, k: int, j: int) -> np.ndarray:
        return self.U[j][k]

    def v_of(self, k: int, i: int) -> np.ndarray:
        return self.V[i][k]

    def q_of(self, j: int, i: int, s: int) -> np.ndarray:
        return self.Q[(j, i)][s]

    def w_of(self, i: int, k: int, j: int) -> np.ndarray:
        return self.W[(i, j)][k]


@dataclass(frozen=True)
class DesignEvaluation:
    """Per-user rates and per-stream interference of one design.

    ``rate_per_user[i]`` is a length-``K_i`` array of user sum rates in
    bits/s/Hz; ``interference[i]`` has shape ``(K_i, d)`` in power units;
    ``leakage`` is the worst interference-to-signal power ratio over all
    streams (dimensionless, ~0 under exact alignment).
    """

    rate_per_user: tuple
    interference: tuple
    leakage: float

    def total_rate(self) -> float:
        return float(sum(arr.sum() for arr in self.rate_per_user))

    def min_rate(self) -> float:
        return float(min(arr.min() for arr in self.rate_per_user))

    def rate_of(self, k: int, i: int) -> float:
        return float(self.rate_per_user[i][k])

    def all_rates(self) -> list[float]:
        return [float(r) for arr in self.rate_per_user for r in arr]


def alignment_system(ch: ChannelSet, plan: AllocationPlan, j: int) -> np.ndarray:
    """Stacked coupled system of cell ``j``: rows are the per-member,
    per-source equations ``H^H u - q = 0``; columns are the receive-filter
    unknowns of every constrained user followed by the shared-basis
    unknowns of every coupled group.

    Returns an empty ``(0, 0)`` matrix when the cell has no coupled group.
    """
    cfg = ch.config
    ns = plan.nonsingleton_groups(j)
    if not ns:
        return np.zeros((0, 0), dtype=complex)
    n_j = cfg.N[j]
    constrained = sorted({k for _, _, members in ns for k in members})
    user_col = {k: idx * n_j for idx, k in enumerate(constrained)}
    cols = len(constrained) * n_j
    group_col = []
    for i, _, _ in ns:
        group_col.append(cols)
        cols += cfg.M[i]
    rows = sum(len(members) * cfg.M[i] for i, _, members in ns)
    a = np.zeros((rows, cols), dtype=complex)
    row = 0
    for g_idx, (i, _, members) in enumerate(ns):
        m_i = cfg.M[i]
        for k in members:
            a[row : row + m_i, user_col[k] : user_col[k] + n_j] = (
                ch.matrix(i, k, j).conj().T
            )
            a[row : row + m_i, group_col[g_idx] : group_col[g_idx] + m_i] = -np.eye(m_i)
            row += m_i
    return a


def _align_cell(ch: ChannelSet, plan: AllocationPlan, j: int):
    """Receive filters of cell ``j`` plus the shared bases of its coupled
    groups, keyed ``(source, group_index)``."""
    cfg = ch.config
    n_j, d, k_j = cfg.N[j], cfg.d, cfg.K[j]
    ns = plan.nonsingleton_groups(j)
    u = np.zeros((k_j, n_j, d), dtype=complex)
    q_ns = {}
    constrained: list[int] = sorted({k for _, _, members in ns for k in members})
    if ns:
        a = alignment_system(ch, plan, j)
        z = null_space_basis(a)
        if z.shape[1] < d:
            raise AlignmentRankDeficientError(
                f"cell {j + 1}: coupled system has numeric nullity {z.shape[1]} < "
                f"streams {d}; plan was certified by counting, channels are degenerate"
            )
        z = z[:, :d]
        for idx, k in enumerate(constrained):
            u[k] = z[idx * n_j : (idx + 1) * n_j, :]
        offset = len(constrained) * n_j
        for i, s, _ in ns:
            q_ns[(i, s)] = z[offset : offset + cfg.M[i], :]
            offset += cfg.M[i]
        # each user's block of the unit-norm null vectors must carry d
        # directions above machine noise; a relative rank test would pass
        # even for an all-but-zero block
        floor = a.shape[1] * np.finfo(np.float64).eps
        for k in constrained:
            s = np.linalg.svd(u[k], compute_uv=False)
            if s.size < d or s[d - 1] <= floor:
                raise AlignmentRankDeficientError(
                    f"cell {j + 1}, user {k + 1}: receive filter is rank deficient "
                    "on this channel draw"
                )
    # unconstrained users capture the desired channel's top directions
    for k in range(k_j):
        if k not in constrained:
            left, _, _ = np.linalg.svd(ch.matrix(j, k, j), full_matrices=False)
            u[k] = left[:, :d]
    return u, q_ns


def align_receive(ch: ChannelSet, plan: AllocationPlan) -> TransceiverDesign:
    """Receive-side pass: filters ``U``, shared bases ``Q`` and effective
    channels ``W`` for every (source, user) pair; ``V`` is left unset.

    Raises :class:`AlignmentRankDeficientError` when a certified plan meets
    a channel draw whose coupled system cannot supply ``d`` streams.
    """
    cfg = ch.config
    u_cells = []
    q_ns_cells = []
    for j in range(cfg.cells):
        u_j, q_ns = _align_cell(ch, plan, j)
        u_cells.append(u_j)
        q_ns_cells.append(q_ns)
    w = {}
    for (i, j), h in ch.blocks.items():
        w[(i, j)] = np.einsum("knm,knd->kmd", h.conj(), u_cells[j])
    q = {}
    for (j, i), parts in plan.groups.items():
        stack = np.zeros((len(parts), cfg.M[i], cfg.d), dtype=complex)
        for s, members in enumerate(parts):
            if len(members) > 1:
                stack[s] = q_ns_cells[j][(i, s)]
            else:
                stack[s] = w[(i, j)][members[0]]
        q[(j, i)] = stack
    return TransceiverDesign(U=tuple(u_cells), Q=q, W=w, V=None)


def _null_directions(ch: ChannelSet, partial: TransceiverDesign, plan: AllocationPlan):
    """Unit-norm transmit directions, shape ``(K_i, M_i, d)`` per BS.

    Column order of the constraint stack: other users' effective channels
    (ascending user), shared cross-cell bases (ascending cell, then group),
    the user's own other streams (ascending stream).
    """
    cfg = ch.config
    directions = []
    for i in range(cfg.cells):
        k_i, m_i, d = cfg.K[i], cfg.M[i], cfg.d
        ici = [
            partial.Q[(j, i)][s]
            for j in range(cfg.cells)
            if j != i
            for s in range(partial.Q[(j, i)].shape[0])
        ]
        ici_cols = (
            np.concatenate(ici, axis=1) if ici else np.zeros((m_i, 0), dtype=complex)
        )
        w_own = partial.W[(i, i)]
        vhat = np.zeros((k_i, m_i, d), dtype=complex)
        for k in range(k_i):
            iui_cols = (
                np.concatenate([w_own[l] for l in range(k_i) if l != k], axis=1)
                if k_i > 1
                else np.zeros((m_i, 0), dtype=complex)
            )
            fixed = np.concatenate([iui_cols, ici_cols], axis=1)
            for m in range(d):
                isi_cols = w_own[k][:, [n for n in range(d) if n != m]]
                stack = np.concatenate([fixed, isi_cols], axis=1)
                if stack.shape[1] == 0:
                    # single user, single stream: matched direction
                    matched = ch.matrix(i, k, i).conj().T @ partial.U[i][k][:, m]
                    vhat[k, :, m] = matched / np.linalg.norm(matched)
                    continue
                basis = null_space_basis(stack.conj().T)
                if basis.shape[1] == 0:
                    raise NullSpaceEmptyError(
                        f"BS {i + 1}, user {k + 1}, stream {m + 1}: "
                        f"{stack.shape[1]} constraints fill all {m_i} transmit "
                        "dimensions; the plan's budget is violated numerically"
                    )
                vhat[k, :, m] = basis[:, 0]
        directions.append(vhat)
    return directions


def _scale_directions(directions, cfg, power: float):
    return tuple(
        directions[i] * np.sqrt(power / (cfg.K[i] * cfg.d)) for i in range(cfg.cells)
    )


def transmit_nulling(
    ch: ChannelSet,
    partial: TransceiverDesign,
    plan: AllocationPlan,
    power: float,
) -> TransceiverDesign:
    """Transmit-side pass: per-stream null-space beamformers scaled to the
    equal power split ``P / (K_i * d)`` per stream.

    Raises :class:`NullSpaceEmptyError` when a constraint stack is full
    rank, which signals a violated antenna budget.
    """
    directions = _null_directions(ch, partial, plan)
    return replace(partial, V=_scale_directions(directions, ch.config, power))


_mask_cache: dict = {}


def _offdiag(n: int) -> np.ndarray:
    mask = _mask_cache.get(n)
    if mask is None:
        mask = 1.0 - np.eye(n)
        _mask_cache[n] = mask
    return mask


def evaluate_design(
    ch: ChannelSet, design: TransceiverDesign, params: SimulationParams
) -> DesignEvaluation:
    """Per-user rates, per-stream interference and worst-case leakage.

    For stream ``m`` of user ``k`` in cell ``i`` the rate term is
    ``log2(1 + |u^H H v|^2 / (sigma2 * |u|^2 + I))`` with ``I`` the summed
    interference power from the user's other streams, the other users of
    its cell, and every other cell's transmissions.
    """
    cfg = ch.config
    sigma2 = params.sigma2
    rates = []
    interference = []
    leakage = 0.0
    for i in range(cfg.cells):
        u = design.U[i]
        u2 = np.einsum("knd,knd->kd", u.conj(), u).real
        sig = None
        inter = np.zeros((cfg.K[i], cfg.d))
        for j in range(cfg.cells):
            g = np.einsum("knd,knm->kdm", u.conj(), ch.blocks[(j, i)])
            x = np.einsum("kdm,lmn->kdln", g, design.V[j])
            p2 = x.real**2 + x.imag**2
            if j == i:
                idx = np.arange(cfg.K[i])
                own = p2[idx, :, idx, :]  # (K_i, d, d)
                sig = own[:, np.arange(cfg.d), np.arange(cfg.d)]
                inter += np.einsum("kmn,mn->km", own, _offdiag(cfg.d))
                per_user = p2.sum(axis=3)  # (K_i, d, K_i)
                inter += np.einsum("kml,kl->km", per_user, _offdiag(cfg.K[i]))
            else:
                inter += p2.sum(axis=(2, 3))
        rates.append(np.log2(1.0 + sig / (sigma2 * u2 + inter)).sum(axis=1))
        interference.append(inter)
        leakage = max(leakage, float((inter / sig).max()))
    return DesignEvaluation(
        rate_per_user=tuple(rates), interference=tuple(interference), leakage=leakage
    )


def _unpermute_cellwise(arrays, ordering: Ordering):
    out = []
    for arr, perm in zip(arrays, ordering.perms):
        restored = np.empty_like(arr)
        restored[np.asarray(perm, dtype=np.intp)] = arr
        out.append(restored)
    return tuple(out)


def design_for_ordering(
    ch: ChannelSet,
    plan: AllocationPlan,
    ordering: Ordering,
    params: SimulationParams,
):
    """Full pipeline under a user ordering: permute, align, null, evaluate.

    Returns ``(design, evaluation)`` re-indexed to the original user
    identities, so caller-visible results never depend on slot positions.
    The shared bases ``Q`` stay keyed by plan slots.
    """
    permuted = apply_ordering(ch, ordering)
    partial = align_receive(permuted, plan)
    design = transmit_nulling(permuted, partial, plan, params.power)
    ev = evaluate_design(permuted, design, params)
    w = {
        (i, j): _unpermute_cellwise((design.W[(i, j)],), Ordering((ordering.perms[j],)))[0]
        for (i, j) in design.W
    }
    restored = TransceiverDesign(
        U=_unpermute_cellwise(design.U, ordering),
        Q=design.Q,
        W=w,
        V=_unpermute_cellwise(design.V, ordering),
    )
    restored_ev = DesignEvaluation(
        rate_per_user=_unpermute_cellwise(ev.rate_per_user, ordering),
        interference=_unpermute_cellwise(ev.interference, ordering),
        leakage=ev.leakage,
    )
    return restored, restored_ev
