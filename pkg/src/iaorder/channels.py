"""System configuration, Rayleigh channel generation and user orderings.

Conventions used throughout the package:

* cells, users, streams and antennas are indexed 0-based in code; the JSON
  interchange formats are 1-based,
* ``blocks[(i, j)]`` stacks the channel matrices from BS ``i`` to every user
  of cell ``j`` as an array of shape ``(K_j, N_j, M_i)``,
* channel entries are i.i.d. circularly-symmetric complex Gaussian with
  unit variance (real and imaginary parts each of variance 1/2).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalidError, OrderingMismatchError

__all__ = [
    "SystemConfig",
    "SimulationParams",
    "Ordering",
    "ChannelSet",
    "validate_config",
    "derive_seed",
    "generate_channels",
    "apply_ordering",
    "compose",
    "channel_set_to_jsonable",
    "channel_set_from_jsonable",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SystemConfig:
    """Cell/user/antenna layout of a multi-cell MIMO downlink.

    Field names mirror the JSON config schema. The short read-only aliases
    ``C``, ``K``, ``d``, ``M``, ``N`` (cells, users per cell, streams per
    user, BS antennas, MS antennas) are provided for formula-dense code.
    """

    cells: int
    users_per_cell: tuple[int, ...]
    streams: int
    bs_antennas: tuple[int, ...]
    ms_antennas: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", int(self.cells))
        object.__setattr__(self, "streams", int(self.streams))
        for name in ("users_per_cell", "bs_antennas", "ms_antennas"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))

    @property
    def C(self) -> int:
        return self.cells

    @property
    def K(self) -> tuple[int, ...]:
        return self.users_per_cell

    @property
    def d(self) -> int:
        return self.streams

    @property
    def M(self) -> tuple[int, ...]:
        return self.bs_antennas

    @property
    def N(self) -> tuple[int, ...]:
        return self.ms_antennas

    def total_users(self) -> int:
        return sum(self.users_per_cell)


def validate_config(cfg: SystemConfig) -> SystemConfig:
    """Return ``cfg`` unchanged if every structural constraint holds.

    Raises :class:`ConfigInvalidError` naming the first violated constraint.
    """
    if cfg.cells < 2:
        raise ConfigInvalidError(f"cells must be >= 2, got {cfg.cells}")
    for name, seq in (
        ("users_per_cell", cfg.users_per_cell),
        ("bs_antennas", cfg.bs_antennas),
        ("ms_antennas", cfg.ms_antennas),
    ):
        if len(seq) != cfg.cells:
            raise ConfigInvalidError(
                f"{name} must have one entry per cell ({cfg.cells}), got {len(seq)}"
            )
    for j, k in enumerate(cfg.users_per_cell):
        if k < 1:
            raise ConfigInvalidError(f"users_per_cell[{j + 1}] must be >= 1, got {k}")
    if cfg.streams < 1:
        raise ConfigInvalidError(f"streams must be >= 1, got {cfg.streams}")
    for i in range(cfg.cells):
        if cfg.streams > cfg.ms_antennas[i]:
            raise ConfigInvalidError(
                f"streams={cfg.streams} exceeds ms_antennas[{i + 1}]={cfg.ms_antennas[i]}"
            )
        if cfg.ms_antennas[i] > cfg.bs_antennas[i]:
            raise ConfigInvalidError(
                f"ms_antennas[{i + 1}]={cfg.ms_antennas[i]} exceeds "
                f"bs_antennas[{i + 1}]={cfg.bs_antennas[i]}"
            )
    return cfg


@dataclass(frozen=True)
class SimulationParams:
    """Operating point of one evaluation.

    The noise variance is fixed at 1 by default, so the total BS transmit
    power is ``P = 10 ** (snr_db / 10) * sigma2``; only the ratio matters.
    """

    snr_db: float
    sigma2: float = 1.0

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ConfigInvalidError(f"sigma2 must be positive, got {self.sigma2}")

    @property
    def power(self) -> float:
        return 10.0 ** (self.snr_db / 10.0) * self.sigma2


@dataclass(frozen=True)
class Ordering:
    """Per-cell user permutations.

    ``perms[j][k]`` is the original (0-based) index of the user occupying
    slot ``k`` of cell ``j`` once the ordering is applied.
    """

    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        perms = tuple(tuple(int(v) for v in p) for p in self.perms)
        object.__setattr__(self, "perms", perms)
        for j, p in enumerate(perms):
            if sorted(p) != list(range(len(p))):
                raise OrderingMismatchError(
                    f"cell {j + 1}: {p} is not a permutation of 0..{len(p) - 1}"
                )

    @classmethod
    def identity(cls, users_per_cell) -> "Ordering":
        return cls(tuple(tuple(range(k)) for k in users_per_cell))

    @classmethod
    def random(cls, users_per_cell, rng: np.random.Generator) -> "Ordering":
        return cls(tuple(tuple(int(v) for v in rng.permutation(k)) for k in users_per_cell))

    def inverse(self) -> "Ordering":
        inv = []
        for p in self.perms:
            q = [0] * len(p)
            for slot, orig in enumerate(p):
                q[orig] = slot
            inv.append(tuple(q))
        return Ordering(tuple(inv))

    def is_identity(self) -> bool:
        return all(p == tuple(range(len(p))) for p in self.perms)


def compose(first: Ordering, second: Ordering) -> Ordering:
    """Ordering equivalent to applying ``first`` and then ``second``.

    ``apply_ordering(apply_ordering(ch, first), second)`` equals
    ``apply_ordering(ch, compose(first, second))``.
    """
    if len(first.perms) != len(second.perms):
        raise OrderingMismatchError("orderings span different cell counts")
    return Ordering(
        tuple(
            tuple(p[q[k]] for k in range(len(q)))
            for p, q in zip(first.perms, second.perms)
        )
    )


class ChannelSet:
    """All cross-cell channel matrices of one realization.

    ``blocks[(i, j)]`` has shape ``(K_j, N_j, M_i)``; row ``k`` is the
    channel from BS ``i`` to the user currently occupying slot ``k`` of
    cell ``j``. Instances are treated as immutable and may be shared across
    concurrent readers.
    """

    __slots__ = ("config", "blocks")

    def __init__(self, config: SystemConfig, blocks: dict):
        self.config = config
        self.blocks = blocks

    def matrix(self, i: int, k: int, j: int) -> np.ndarray:
        """Channel from BS ``i`` to the user in slot ``k`` of cell ``j``."""
        return self.blocks[(i, j)][k]

    def same_as(self, other: "ChannelSet") -> bool:
        """Entry-for-entry equality (exact, no tolerance)."""
        if self.config != other.config:
            return False
        return all(
            np.array_equal(self.blocks[key], other.blocks[key]) for key in self.blocks
        )


def derive_seed(base_seed: int, index: int) -> int:
    """Mix ``(base_seed, index)`` into an independent 64-bit stream seed.

    SplitMix64 finalizer over ``base_seed + (index + 1) * golden-gamma``;
    documented here because it is the within-build reproducibility contract
    for parallel realization workers.
    """
    z = (int(base_seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def generate_channels(cfg: SystemConfig, realization_seed: int) -> ChannelSet:
    """Draw one i.i.d. Rayleigh-faded channel realization.

    Entries are circularly-symmetric complex Gaussian with unit variance.
    The draw order is fixed (source cells outer, receiving cells inner,
    interleaved real/imaginary parts per block) so a given
    ``(cfg, realization_seed)`` pair is bit-reproducible within a build.
    """
    validate_config(cfg)
    rng = np.random.Generator(np.random.PCG64(int(realization_seed) & _MASK64))
    blocks = {}
    for i in range(cfg.cells):
        for j in range(cfg.cells):
            parts = rng.standard_normal((cfg.K[j], cfg.N[j], cfg.M[i], 2))
            blocks[(i, j)] = (parts[..., 0] + 1j * parts[..., 1]) * np.sqrt(0.5)
    return ChannelSet(cfg, blocks)


def apply_ordering(ch: ChannelSet, ordering: Ordering) -> ChannelSet:
    """Re-slot users: slot ``k`` of cell ``j`` receives the matrices of
    original user ``ordering.perms[j][k]``."""
    cfg = ch.config
    if len(ordering.perms) != cfg.cells:
        raise OrderingMismatchError(
            f"ordering has {len(ordering.perms)} cells, config has {cfg.cells}"
        )
    for j, p in enumerate(ordering.perms):
        if len(p) != cfg.K[j]:
            raise OrderingMismatchError(
                f"cell {j + 1}: permutation length {len(p)} != users_per_cell {cfg.K[j]}"
            )
    blocks = {}
    for (i, j), arr in ch.blocks.items():
        blocks[(i, j)] = arr[np.asarray(ordering.perms[j], dtype=np.intp)]
    return ChannelSet(cfg, blocks)


def _round9(x: float) -> float:
    return float(f"{x:.9g}")


def _matrix_to_jsonable(a: np.ndarray) -> list:
    return [[[_round9(z.real), _round9(z.imag)] for z in row] for row in a]


def _matrix_from_jsonable(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def channel_set_to_jsonable(ch: ChannelSet) -> dict:
    """Serialize as ``{"H_i_k_j": nested rows of [re, im]}`` (1-based keys)."""
    out = {}
    cfg = ch.config
    for i in range(cfg.cells):
        for j in range(cfg.cells):
            for k in range(cfg.K[j]):
                out[f"H_{i + 1}_{k + 1}_{j + 1}"] = _matrix_to_jsonable(ch.matrix(i, k, j))
    return out


def channel_set_from_jsonable(cfg: SystemConfig, data: dict) -> ChannelSet:
    """Inverse of :func:`channel_set_to_jsonable` (up to the 9-digit rounding)."""
    blocks = {}
    for i in range(cfg.cells):
        for j in range(cfg.cells):
            arr = np.zeros((cfg.K[j], cfg.N[j], cfg.M[i]), dtype=complex)
            for k in range(cfg.K[j]):
                arr[k] = _matrix_from_jsonable(data[f"H_{i + 1}_{k + 1}_{j + 1}"])
            blocks[(i, j)] = arr
    return ChannelSet(cfg, blocks)
