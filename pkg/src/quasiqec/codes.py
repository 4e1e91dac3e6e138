"""Pauli-Z error strings and the stabilizer codes used throughout.

The noise model only ever produces Z-type errors, so a code is fully
described by its X-checks (which detect Z errors), the Z-type stabilizer
generators (the degeneracy group of Z errors), one destabilizer per
X-check, and the logical Z / logical-X support of the single encoded
qubit.  Everything is stored as bit masks over the data qubits so that
group operations are plain XORs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Literal, Optional

import numpy as np

LogicalClass = Literal["trivial", "logical"]

GRAY_ENUMERATION_CAP = 24


def _parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class ZString:
    """A product of Pauli-Z operators, as a bit mask over n data qubits."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bit mask {self.bits:#x} out of range for n={self.n}")

    @classmethod
    def from_qubits(cls, n: int, qubits) -> "ZString":
        mask = 0
        for q in qubits:
            if not 0 <= q < n:
                raise ValueError(f"qubit index {q} out of range for n={n}")
            mask |= 1 << q
        return cls(n, mask)

    def __mul__(self, other: "ZString") -> "ZString":
        if self.n != other.n:
            raise ValueError("cannot multiply Z strings on different qubit counts")
        return ZString(self.n, self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def is_identity(self) -> bool:
        return self.bits == 0

    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n) if (self.bits >> q) & 1)

    def overlap_parity(self, mask: int) -> int:
        """Parity of the overlap with a qubit-set mask (0 commute, 1 anticommute)."""
        return _parity(self.bits & mask)


@dataclass(frozen=True)
class Syndrome:
    """X-check outcomes; bit f set means check f measured -1."""

    n_checks: int
    bits: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.bits < (1 << self.n_checks):
            raise ValueError("syndrome bits out of range")

    def __xor__(self, other: "Syndrome") -> "Syndrome":
        if self.n_checks != other.n_checks:
            raise ValueError("syndrome length mismatch")
        return Syndrome(self.n_checks, self.bits ^ other.bits)

    @property
    def trivial(self) -> bool:
        return self.bits == 0

    def bit(self, f: int) -> int:
        return (self.bits >> f) & 1


# A multi-cycle syndrome is simply a tuple of per-cycle Syndromes, index 0
# being the first measurement cycle.
MultiCycleSyndrome = tuple[Syndrome, ...]


@dataclass(frozen=True)
class StabilizerCode:
    """Check structure of a CSS code restricted to its Z-error sector.

    x_checks are qubit-set masks; destabilizers[f] anticommutes with
    x_checks[f] and commutes with every other check.  logical_x is the
    qubit-set mask of the logical X operator (used only for class
    parities), logical_z is the logical Z string.
    """

    name: str
    n: int
    x_checks: tuple[int, ...]
    z_stab_generators: tuple[ZString, ...]
    destabilizers: tuple[ZString, ...]
    logical_x: int
    logical_z: ZString

    @property
    def n_checks(self) -> int:
        return len(self.x_checks)

    def syndrome_of(self, error: ZString) -> Syndrome:
        if error.n != self.n:
            raise ValueError("error string is on the wrong number of qubits")
        bits = 0
        for f, mask in enumerate(self.x_checks):
            bits |= _parity(error.bits & mask) << f
        return Syndrome(self.n_checks, bits)

    def canonical_representative(self, syndrome: Syndrome) -> ZString:
        """Deterministic error string with the given syndrome.

        Product of the destabilizers of the set syndrome bits; a section
        of syndrome_of.
        """
        if syndrome.n_checks != self.n_checks:
            raise ValueError("syndrome length mismatch")
        bits = 0
        s = syndrome.bits
        f = 0
        while s:
            if s & 1:
                bits ^= self.destabilizers[f].bits
            s >>= 1
            f += 1
        return ZString(self.n, bits)

    def class_bit(self, error: ZString) -> int:
        """Parity of the overlap with the logical-X support (no syndrome check)."""
        return error.overlap_parity(self.logical_x)

    def logical_class_of(self, error: ZString) -> LogicalClass:
        """Classify a trivial-syndrome string as stabilizer or logical."""
        if not self.syndrome_of(error).trivial:
            raise ValueError("logical class is only defined for trivial-syndrome strings")
        return "logical" if self.class_bit(error) else "trivial"

    def enumerate_z_stabilizer_group(
        self, cap: int = GRAY_ENUMERATION_CAP
    ) -> Iterator[tuple[ZString, Optional[int]]]:
        """Yield all Z-stabilizer group elements in Gray-code order.

        Each item comes with the index of the generator flipped relative to
        the previous item (None for the first, the identity).
        """
        gens = self.z_stab_generators
        if len(gens) > cap:
            raise ValueError(f"{len(gens)} generators exceed the enumeration cap {cap}")
        bits = 0
        yield ZString(self.n, 0), None
        for i in range(1, 1 << len(gens)):
            j = (i & -i).bit_length() - 1
            bits ^= gens[j].bits
            yield ZString(self.n, bits), j

    def identity(self) -> ZString:
        return ZString(self.n, 0)

    def trivial_syndrome(self) -> Syndrome:
        return Syndrome(self.n_checks, 0)


def _validate(code: StabilizerCode) -> StabilizerCode:
    for f, dst in enumerate(code.destabilizers):
        if code.syndrome_of(dst).bits != (1 << f):
            raise AssertionError(f"destabilizer {f} does not flip exactly check {f}")
    for g in code.z_stab_generators:
        if not code.syndrome_of(g).trivial:
            raise AssertionError("Z stabilizer generator has nontrivial syndrome")
        if g.overlap_parity(code.logical_x):
            raise AssertionError("Z stabilizer generator anticommutes with logical X")
    if not code.syndrome_of(code.logical_z).trivial:
        raise AssertionError("logical Z has nontrivial syndrome")
    if not code.logical_z.overlap_parity(code.logical_x):
        raise AssertionError("logical Z commutes with logical X")
    # the decoder maps check-graph edges to unique shared qubits
    for a in range(code.n_checks):
        for b in range(a + 1, code.n_checks):
            if (code.x_checks[a] & code.x_checks[b]).bit_count() > 1:
                raise AssertionError(f"checks {a},{b} share more than one qubit")
    return code


def build_repetition_code() -> StabilizerCode:
    """Two-qubit phase-flip repetition code with the single check X_A X_B."""
    n = 2
    return _validate(
        StabilizerCode(
            name="repetition-2",
            n=n,
            x_checks=(0b11,),
            z_stab_generators=(),
            destabilizers=(ZString(n, 0b01),),  # Z_A
            logical_x=0b01,  # X_A
            logical_z=ZString(n, 0b11),  # Z_A Z_B
        )
    )


def build_surface_code(d: int) -> StabilizerCode:
    """Rotated surface code of odd distance d on a d x d qubit grid.

    Checks live on plaquettes of the (d+1) x (d+1) cell grid: interior
    cells are checkerboard-coloured (X where cell row+col is odd), and
    weight-2 cells survive on the left/right edges for X and top/bottom
    for Z.  The logical Z is the left column of qubits, the logical X
    support is the top row.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError("distance must be an odd integer >= 3")

    def qubit(r: int, c: int) -> int:
        return r * d + c

    def cell_mask(a: int, b: int) -> int:
        mask = 0
        for r, c in ((a, b), (a, b + 1), (a + 1, b), (a + 1, b + 1)):
            if 0 <= r < d and 0 <= c < d:
                mask |= 1 << qubit(r, c)
        return mask

    x_cells: list[tuple[int, int]] = []
    for a in range(0, d - 1, 2):  # left edge, X-coloured cells
        x_cells.append((a, -1))
    for a in range(d - 1):
        for b in range(d - 1):
            if (a + b) % 2 == 1:
                x_cells.append((a, b))
    for a in range(1, d - 1, 2):  # right edge
        x_cells.append((a, d - 1))
    x_cells.sort()

    z_cells: list[tuple[int, int]] = []
    for c in range(1, d - 1, 2):  # top edge, Z-coloured cells
        z_cells.append((-1, c))
    for a in range(d - 1):
        for b in range(d - 1):
            if (a + b) % 2 == 0:
                z_cells.append((a, b))
    for c in range(0, d - 1, 2):  # bottom edge
        z_cells.append((d - 1, c))
    z_cells.sort()

    x_checks = tuple(cell_mask(a, b) for a, b in x_cells)
    z_gens = tuple(ZString(d * d, cell_mask(a, b)) for a, b in z_cells)

    # Destabilizer for the X-check on cell (a, b): the vertical Z chain
    # running from the top edge down to row a, in the column that touches
    # the cell from the left (column 0 / d-1 for the edge cells).
    destabs = []
    for a, b in x_cells:
        col = 0 if b == -1 else min(b, d - 1)
        mask = 0
        for r in range(a + 1):
            mask |= 1 << qubit(r, col)
        destabs.append(ZString(d * d, mask))

    logical_z = ZString(d * d, sum(1 << qubit(r, 0) for r in range(d)))
    logical_x = sum(1 << qubit(0, c) for c in range(d))

    return _validate(
        StabilizerCode(
            name=f"surface-{d}",
            n=d * d,
            x_checks=x_checks,
            z_stab_generators=z_gens,
            destabilizers=tuple(destabs),
            logical_x=logical_x,
            logical_z=logical_z,
        )
    )


@lru_cache(maxsize=None)
def check_matrix(code: StabilizerCode) -> np.ndarray:
    """X-check incidence matrix as a (n_checks, n) uint8 array."""
    h = np.zeros((code.n_checks, code.n), dtype=np.uint8)
    for f, mask in enumerate(code.x_checks):
        for q in range(code.n):
            h[f, q] = (mask >> q) & 1
    return h


@lru_cache(maxsize=None)
def logical_x_vector(code: StabilizerCode) -> np.ndarray:
    """Logical-X support as a length-n uint8 vector."""
    return np.array([(code.logical_x >> q) & 1 for q in range(code.n)], dtype=np.uint8)


@lru_cache(maxsize=None)
def canonical_representative_table(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """Per-syndrome canonical representative bits and their class parities.

    Only sensible for small check counts; used by the coherent backend,
    which is capped at d = 5 (12 checks).
    """
    n_s = 1 << code.n_checks
    if code.n_checks > 20:
        raise ValueError("canonical representative table would be too large")
    reps = np.zeros(n_s, dtype=np.int64)
    cls = np.zeros(n_s, dtype=np.uint8)
    destab_bits = [dst.bits for dst in code.destabilizers]
    destab_cls = [code.class_bit(dst) for dst in code.destabilizers]
    for s in range(1, n_s):
        f = (s & -s).bit_length() - 1
        prev = s ^ (1 << f)
        reps[s] = reps[prev] ^ destab_bits[f]
        cls[s] = cls[prev] ^ destab_cls[f]
    return reps, cls
