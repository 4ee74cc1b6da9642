"""Track-table simulator for uniform, basis-aligned superpositions.

Both quantum algorithms create superposition only once, with a Hadamard
block on an index register; every later gate is a classical reversible map
applied independently to each basis state. The joint state is therefore
always ``sum_j N**-0.5 |j>|f(j)>`` and can be stored as one classical row
(a "track") per index value. Cells are stored column-wise: one numpy array
of length ``n_tracks`` per qubit or register.

Amplitudes are implicit (uniform) and never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ScratchNotClean, UsageError


@dataclass
class QramArray:
    """Classical data addressable by quantum index registers.

    ``cells`` may be multi-dimensional; a read supplies one index register
    per dimension. Any out-of-range coordinate returns ``pad_value``.
    """

    name: str
    cells: np.ndarray
    pad_value: int = 0
    width: int = 1

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.int64)
        self.cells.setflags(write=False)
        # one pad slot past the end of every axis; registers are unsigned, so
        # clamping an index at the axis size lands on the pad slot
        self._padded = np.full([d + 1 for d in self.cells.shape], self.pad_value, dtype=np.int64)
        self._padded[tuple(slice(0, d) for d in self.cells.shape)] = self.cells

    def lookup(self, *coords: np.ndarray) -> np.ndarray:
        if len(coords) != self.cells.ndim:
            raise UsageError(
                f"QRAM {self.name!r} has {self.cells.ndim} dims, got {len(coords)} indices"
            )
        idx = tuple(np.minimum(c, size) for c, size in zip(coords, self.cells.shape))
        return self._padded[idx]


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


@dataclass
class TrackTable:
    """Uniform superposition stored as one classical row per index value.

    Every primitive operation bumps ``gates`` by one; ``apply_or`` counts as
    the six gates it is built from.
    """

    index_register: str | None = None
    n_tracks: int = 1
    cells: dict = field(default_factory=dict)
    widths: dict = field(default_factory=dict)
    gates: int = 0
    trace: Callable[[str], None] | None = None

    # -- declarations ------------------------------------------------------

    def declare(self, name: str, width: int = 1, value: int = 0) -> None:
        if name in self.cells:
            raise UsageError(f"{name!r} already declared")
        if width < 0 or not 0 <= value < (1 << width):
            raise UsageError(f"bad declaration for {name!r}")
        self.widths[name] = width
        self.cells[name] = np.full(self.n_tracks, value, dtype=np.int64)

    def declare_many(self, names: Sequence[str], width: int = 1) -> None:
        for name in names:
            self.declare(name, width)

    def has(self, name: str) -> bool:
        return name in self.cells

    def __getitem__(self, name: str) -> np.ndarray:
        """Read-only view of a cell column (one entry per track)."""
        col = self._col(name).view()
        col.setflags(write=False)
        return col

    def _col(self, name: str) -> np.ndarray:
        try:
            return self.cells[name]
        except KeyError:
            raise UsageError(f"unknown qubit/register {name!r}") from None

    def _bit(self, name: str) -> np.ndarray:
        if self.widths.get(name) != 1:
            if name not in self.widths:
                raise UsageError(f"unknown qubit {name!r}")
            raise UsageError(f"{name!r} is a register, not a qubit")
        return self.cells[name]

    def _tick(self, op: str, args, count: int = 1) -> None:
        self.gates += count
        if self.trace is not None:
            self.trace(f"op={op} args={_fmt(args)} gates={self.gates}")

    def _require_zero(self, name: str) -> None:
        if self._col(name).any():
            raise ScratchNotClean(f"{name!r} is not |0> on every track")

    def is_zero(self, name: str) -> bool:
        return not self._col(name).any()

    def copy(self) -> TrackTable:
        return TrackTable(
            index_register=self.index_register,
            n_tracks=self.n_tracks,
            cells={k: v.copy() for k, v in self.cells.items()},
            widths=dict(self.widths),
            gates=self.gates,
        )

    def same_state(self, other: TrackTable) -> bool:
        """Cell-wise equality, ignoring gate counters."""
        return (
            self.n_tracks == other.n_tracks
            and self.widths == other.widths
            and all(np.array_equal(self.cells[k], other.cells[k]) for k in self.cells)
        )

    def row(self, t: int) -> dict:
        return {k: int(v[t]) for k, v in self.cells.items()}

    # -- gates -------------------------------------------------------------

    def hadamard_init(self, register: str, width: int) -> None:
        """Put ``register`` (declared here) in a uniform superposition of
        ``2**width`` values; each resulting track holds its own id."""
        if self.n_tracks != 1:
            raise UsageError("hadamard_init needs a single-track table")
        if register in self.cells:
            if self.widths[register] != width:
                raise UsageError(f"{register!r} has width {self.widths[register]}")
            if self.cells[register][0] != 0:
                raise UsageError(f"{register!r} must start at 0")
        n = 1 << width
        for k in self.cells:
            self.cells[k] = np.repeat(self.cells[k], n)
        self.widths[register] = width
        self.cells[register] = np.arange(n, dtype=np.int64)
        self.n_tracks = n
        self.index_register = register
        self._tick("H", (register, width))

    def apply_x(self, q: str) -> None:
        col = self._bit(q)
        col ^= 1
        self._tick("X", q)

    def apply_cx(self, control: str, target: str) -> None:
        if control == target:
            raise UsageError("control and target must differ")
        c, t = self._bit(control), self._bit(target)
        t ^= c
        self._tick("CX", (control, target))

    def apply_ccx(self, c1: str, c2: str, target: str, require_clean: bool = False) -> None:
        if target in (c1, c2):
            raise UsageError("controls and target must differ")
        a, b, t = self._bit(c1), self._bit(c2), self._bit(target)
        if require_clean:
            self._require_zero(target)
        t ^= a & b
        self._tick("CCX", (c1, c2, target))

    def apply_or(self, a: str, b: str, target: str) -> None:
        """``target = a | b`` via X a, X b, CCX, X target, X a, X b."""
        if target in (a, b):
            raise UsageError("operands and target must differ")
        ca, cb, ct = self._bit(a), self._bit(b), self._bit(target)
        self._require_zero(target)
        # with target clean the six gates net out to target = a | b
        ct ^= ca | cb
        self._tick("OR", (a, b, target), count=6)

    def apply_delta_init(self, register: str, value: int, target: str) -> None:
        """XOR ``[register == value]`` into a clean ``target``."""
        reg, t = self._col(register), self._bit(target)
        self._require_zero(target)
        t ^= (reg == value).astype(np.int64)
        self._tick("MCX", (register, value, target))

    def apply_delta_toggle(self, register: str, value: int, target: str) -> None:
        """Same generalized Toffoli without the clean-target precondition;
        used to uncompute a delta state."""
        reg, t = self._col(register), self._bit(target)
        t ^= (reg == value).astype(np.int64)
        self._tick("MCX", (register, value, target))

    def apply_function(self, source: str, target: str, fn: Callable[[np.ndarray], np.ndarray], name: str = "F") -> None:
        """Reversible ``target ^= fn(source)`` (source left unchanged)."""
        src, tgt = self._col(source), self._col(target)
        vals = np.asarray(fn(src), dtype=np.int64)
        if (vals >= (1 << self.widths[target])).any() or (vals < 0).any():
            raise UsageError(f"value does not fit {target!r}")
        tgt ^= vals
        self._tick(name, (source, target))

    def qram_read(self, index: str | Sequence[str], array: QramArray, target: str) -> None:
        """``target ^= cell(index)``; self-inverse."""
        names = [index] if isinstance(index, str) else list(index)
        t = self._col(target)
        if self.widths[target] < array.width:
            raise UsageError(f"{target!r} narrower than QRAM cell width")
        vals = array.lookup(*(self._col(n) for n in names))
        t ^= vals
        self._tick("QRAM", (array.name, *names, target))

    def increment(self, register: str, addend: str | None = None) -> None:
        """``register = (register + addend) mod 2**width``.

        ``addend`` names the register holding the constant 1; ``None`` adds
        a literal 1.
        """
        reg = self._col(register)
        inc = 1 if addend is None else self._col(addend)
        reg[:] = (reg + inc) % (1 << self.widths[register])
        self._tick("INC", (register, addend or 1))

    # -- classical read-out -------------------------------------------------

    def count_marked(self, qubit: str) -> int:
        return int(self._bit(qubit).sum())

    def marked_tracks(self, qubit: str) -> np.ndarray:
        return np.flatnonzero(self._bit(qubit))


# functional aliases mirroring the gate names
def apply_x(state: TrackTable, q: str) -> TrackTable:
    state.apply_x(q)
    return state


def apply_cx(state: TrackTable, control: str, target: str) -> TrackTable:
    state.apply_cx(control, target)
    return state


def apply_ccx(state: TrackTable, c1: str, c2: str, target: str) -> TrackTable:
    state.apply_ccx(c1, c2, target)
    return state


def apply_or(state: TrackTable, a: str, b: str, target: str) -> TrackTable:
    state.apply_or(a, b, target)
    return state
