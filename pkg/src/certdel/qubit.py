"""Single-qubit pure states, product registers and a small dense simulator.

Conventions
-----------
* Hadamard basis labels follow the encoding used throughout this package:
  bit 1 is ``|+>`` and bit 0 is ``|->``.
* ``General(theta, psi)`` encodes bit 0 as
  ``cos(theta/2)|0> + e^{i psi} sin(theta/2)|1>`` and bit 1 as
  ``sin(theta/2)|0> - e^{i psi} cos(theta/2)|1>``.
* In a :class:`DenseState` qubit 0 is the most significant bit of the
  amplitude index, so the string ``s_0 s_1 ... s_{n-1}`` sits at index
  ``int(s, 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import AlreadyConsumed, EmptyOutcome, LengthMismatch, RegisterTooLarge

QUBIT_TOL = 1e-12
DENSE_TOL = 1e-9
DENSE_CAP = 20

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class Basis:
    """A single-qubit orthonormal measurement/preparation basis.

    Use the module constants :data:`COMPUTATIONAL` and :data:`HADAMARD`, or
    :meth:`Basis.general` for a point on the Bloch sphere. The three kinds are
    distinct values even where their vectors coincide in a limit.
    """

    kind: str
    theta: float | None = None
    psi: float | None = None
    vectors: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "computational":
            vecs = ((1 + 0j, 0j), (0j, 1 + 0j))
        elif self.kind == "hadamard":
            h = complex(_SQRT_HALF)
            vecs = ((h, -h), (h, h))
        elif self.kind == "general":
            if self.theta is None or self.psi is None:
                raise ValueError("general basis needs theta and psi")
            if not 0.0 < self.theta < math.pi:
                raise ValueError(f"theta must lie in (0, pi), got {self.theta}")
            if not 0.0 < self.psi < 2 * math.pi:
                raise ValueError(f"psi must lie in (0, 2pi), got {self.psi}")
            c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
            phase = complex(math.cos(self.psi), math.sin(self.psi))
            vecs = ((complex(c), phase * s), (complex(s), -phase * c))
        else:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def general(cls, theta: float, psi: float) -> "Basis":
        return cls("general", float(theta), float(psi))

    @classmethod
    def random_general(cls, rng: np.random.Generator) -> "Basis":
        """Uniform polar angle in (0, pi) and azimuth in (0, 2pi)."""
        theta = psi = 0.0
        while theta == 0.0:
            theta = rng.random() * math.pi
        while psi == 0.0:
            psi = rng.random() * 2 * math.pi
        return cls.general(theta, psi)

    @property
    def is_conjugate(self) -> bool:
        return self.kind in ("computational", "hadamard")

    def matrix(self) -> np.ndarray:
        """Rows are the bras <b| so that ``matrix() @ amps`` gives coordinates."""
        return np.conj(np.array(self.vectors, dtype=complex))

    def to_dict(self) -> dict:
        if self.kind == "general":
            return {"kind": "general", "theta": self.theta, "psi": self.psi}
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Basis":
        kind = data["kind"]
        if kind == "general":
            return cls.general(data["theta"], data["psi"])
        return cls(kind)


COMPUTATIONAL = Basis("computational")
HADAMARD = Basis("hadamard")
CONJUGATE_BASES = (COMPUTATIONAL, HADAMARD)


@dataclass(frozen=True)
class Qubit:
    """Normalized single-qubit pure state ``amp0|0> + amp1|1>``."""

    amp0: complex
    amp1: complex

    def __post_init__(self):
        norm = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm - 1.0) > QUBIT_TOL:
            raise ValueError(f"qubit not normalized (|a0|^2+|a1|^2 = {norm!r})")

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)


def basis_state(basis: Basis, bit: int) -> Qubit:
    v = basis.vectors[bit]
    return Qubit(v[0], v[1])


def outcome_probability(q: Qubit, basis: Basis, bit: int) -> float:
    """Born-rule probability of reading ``bit`` when measuring ``q`` in ``basis``."""
    v0, v1 = basis.vectors[bit]
    amp = v0.conjugate() * q.amp0 + v1.conjugate() * q.amp1
    return amp.real * amp.real + amp.imag * amp.imag


def measure_qubit(q: Qubit, basis: Basis, rng: np.random.Generator) -> tuple[int, Qubit]:
    """Projective measurement; returns the outcome and the collapsed state."""
    p0 = outcome_probability(q, basis, 0)
    bit = 0 if rng.random() < p0 else 1
    return bit, basis_state(basis, bit)


def same_state(a: Qubit, b: Qubit, tol: float = 1e-9) -> bool:
    """Equality up to global phase."""
    overlap = a.amp0.conjugate() * b.amp0 + a.amp1.conjugate() * b.amp1
    return abs(abs(overlap) - 1.0) < tol


class ProductRegister:
    """An ordered, fixed-length collection of unentangled qubits.

    Measuring a slot replaces its state by the collapsed eigenstate and sets
    the slot's consumed flag; the pre-measurement amplitudes are dropped.
    """

    def __init__(self, qubits: Sequence[Qubit], consumed: Sequence[bool] | None = None):
        self._qubits = list(qubits)
        if consumed is None:
            consumed = [False] * len(self._qubits)
        if len(consumed) != len(self._qubits):
            raise LengthMismatch("consumed flags must match register length")
        self._consumed = [bool(c) for c in consumed]

    @classmethod
    def from_bits(cls, bits: Sequence[int], bases: Basis | Sequence[Basis]) -> "ProductRegister":
        if isinstance(bases, Basis):
            bases = [bases] * len(bits)
        return cls([basis_state(B, b) for B, b in zip(bases, bits, strict=True)])

    def __len__(self) -> int:
        return len(self._qubits)

    @property
    def qubits(self) -> tuple[Qubit, ...]:
        return tuple(self._qubits)

    @property
    def consumed(self) -> tuple[bool, ...]:
        return tuple(self._consumed)

    def any_consumed(self) -> bool:
        return any(self._consumed)

    def measure(self, index: int, basis: Basis, rng: np.random.Generator) -> int:
        bit, collapsed = measure_qubit(self._qubits[index], basis, rng)
        self._qubits[index] = collapsed
        self._consumed[index] = True
        return bit

    def measure_all(self, bases: Basis | Sequence[Basis], rng: np.random.Generator) -> list[int]:
        if isinstance(bases, Basis):
            bases = [bases] * len(self)
        if len(bases) != len(self):
            raise LengthMismatch(f"{len(bases)} bases for {len(self)} qubits")
        return [self.measure(i, B, rng) for i, B in enumerate(bases)]

    def copy(self) -> "ProductRegister":
        return ProductRegister(self._qubits, self._consumed)

    def __repr__(self) -> str:
        return f"ProductRegister(n={len(self)}, |{render_register(self)}>)"


def render_register(reg: ProductRegister) -> str:
    """Ket label per qubit: ``0 1`` computational, ``+ -`` Hadamard, ``?`` otherwise."""
    symbols = []
    for q in reg.qubits:
        for sym, B, b in (("0", COMPUTATIONAL, 0), ("1", COMPUTATIONAL, 1),
                          ("+", HADAMARD, 1), ("-", HADAMARD, 0)):
            if same_state(q, basis_state(B, b)):
                symbols.append(sym)
                break
        else:
            symbols.append("?")
    return "".join(symbols)


@dataclass(frozen=True)
class DenseState:
    """Full ``2**n`` amplitude vector in the computational basis."""

    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n,):
            raise LengthMismatch(f"expected {2 ** self.n} amplitudes, got {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > DENSE_TOL:
            raise ValueError(f"dense state not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


def to_dense(reg: ProductRegister, cap: int = DENSE_CAP) -> DenseState:
    n = len(reg)
    if n > cap:
        raise RegisterTooLarge(f"{n} qubits exceeds dense cap {cap}")
    if reg.any_consumed():
        raise AlreadyConsumed("cannot densify a register with measured slots")
    amps = np.ones(1, dtype=complex)
    for q in reg.qubits:
        amps = np.kron(amps, np.array([q.amp0, q.amp1], dtype=complex))
    return DenseState(amps, n)


def _apply_local(amps: np.ndarray, n: int, mat: np.ndarray) -> np.ndarray:
    """Apply the same 2x2 matrix to every qubit of a dense vector."""
    out = amps
    for i in range(n):
        x = out.reshape(2 ** i, 2, 2 ** (n - i - 1))
        out = np.einsum("ab,ibj->iaj", mat, x).reshape(-1)
    return out


def partition_labels(partition: Mapping, n: int) -> tuple[np.ndarray, list]:
    """Convert ``{label: strings}`` into a per-index label array.

    Strings may be ``str`` / :class:`~certdel.bits.BitString` / ``int``.
    Raises ``ValueError`` unless every n-bit string appears exactly once.
    """
    labels = np.full(2 ** n, -1, dtype=np.int64)
    names = list(partition)
    for j, name in enumerate(names):
        for s in partition[name]:
            idx = s if isinstance(s, (int, np.integer)) else int(str(s), 2)
            if labels[idx] != -1:
                raise ValueError(f"string index {idx} appears in two subsets")
            labels[idx] = j
    if (labels < 0).any():
        raise ValueError("subsets do not cover every string")
    return labels, names


def dense_project_onto_strings(d: DenseState, partition, rng: np.random.Generator,
                               basis: Basis | None = None):
    """Projective measurement whose outcomes are sets of basis strings.

    Parameters
    ----------
    d : DenseState
    partition : numpy.ndarray or mapping
        Either an integer label per string index (length ``2**n``, any
        non-negative labels) or a mapping ``{label: iterable of strings}``
        which must partition ``{0,1}^n``.
    rng : numpy.random.Generator
    basis : Basis, optional
        Strings are read in this basis on every qubit (computational if
        omitted).

    Returns
    -------
    label, DenseState
        The sampled label and the renormalized restriction of ``d`` to that
        subset, expressed back in the computational basis.
    """
    if isinstance(partition, Mapping):
        labels, names = partition_labels(partition, d.n)
    else:
        labels = np.asarray(partition, dtype=np.int64)
        if labels.shape != (2 ** d.n,):
            raise LengthMismatch(f"need {2 ** d.n} labels, got {labels.shape}")
        names = None

    change = basis is not None and basis != COMPUTATIONAL
    if change:
        m = basis.matrix()
        coords = _apply_local(d.amplitudes, d.n, m)
    else:
        coords = d.amplitudes
    probs = np.abs(coords) ** 2
    mass = np.bincount(labels, weights=probs)
    cdf = np.cumsum(mass)
    u = rng.random() * cdf[-1]
    j = int(np.searchsorted(cdf, u, side="right"))
    if j >= len(mass) or mass[j] <= 0.0:
        raise EmptyOutcome("sampled subset has zero probability mass")

    kept = np.where(labels == j, coords, 0.0) / math.sqrt(mass[j])
    if change:
        kept = _apply_local(kept, d.n, m.conj().T)
    label = names[j] if names is not None else j
    return label, DenseState(kept, d.n)


def dense_measure_qubit(d: DenseState, index: int, basis: Basis,
                        rng: np.random.Generator) -> tuple[int, DenseState]:
    if not 0 <= index < d.n:
        raise IndexError(f"qubit {index} out of range for n={d.n}")
    x = d.amplitudes.reshape(2 ** index, 2, 2 ** (d.n - index - 1))
    (a0, a1), (b0, b1) = basis.vectors
    coef0 = np.conj(a0) * x[:, 0, :] + np.conj(a1) * x[:, 1, :]
    p0 = float(np.vdot(coef0, coef0).real)
    bit = 0 if rng.random() < p0 else 1
    if bit == 0:
        coef, vec, p = coef0, (a0, a1), p0
    else:
        coef = np.conj(b0) * x[:, 0, :] + np.conj(b1) * x[:, 1, :]
        vec, p = (b0, b1), float(np.vdot(coef, coef).real)
    if p <= 0.0:
        raise EmptyOutcome("sampled qubit outcome has zero probability")
    out = np.empty_like(x)
    out[:, 0, :] = vec[0] * coef
    out[:, 1, :] = vec[1] * coef
    out /= math.sqrt(p)
    return bit, DenseState(out.reshape(-1), d.n)
