"""Dense-state quantum algebra for small qubit registers.

Exact brute-force routines that serve as the numerical oracle for the
rest of the library: GHZ and Dicke constructors, tensor-product
expectation values, partial traces, and Pauli-string anticommutation.
Everything is dense and capped at ``MAX_QUBITS`` qubits; basis states
are ordered lexicographically with qubit 0 most significant, and the
computational value 0 of a qubit is the +1 eigenstate of sigma_z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import CapabilityError

MAX_QUBITS = 12

_NORM_ATOL = 1e-12
_HERM_ATOL = 1e-12
_EIG_FLOOR = -1e-10
# Spectrum checks cost O(8^n); run them automatically only below this size.
_EIG_CHECK_DIM = 256

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True)
class PlaneObservable:
    """A +/-1-valued single-qubit observable confined to one Bloch plane.

    ``plane="xz"`` represents cos(angle) sx + sin(angle) sz and
    ``plane="xy"`` represents cos(angle) sx + sin(angle) sy, with the
    angle in radians.  Use :meth:`xy_turns` for the turn-based
    parameterization cos(2 pi a) sx + sin(2 pi a) sy that is natural for
    GHZ correlation functions.
    """

    plane: str
    angle: float

    def __post_init__(self):
        if self.plane not in ("xz", "xy"):
            raise ValueError(f"unknown plane {self.plane!r}, expected 'xz' or 'xy'")

    @classmethod
    def xy_turns(cls, alpha: float) -> "PlaneObservable":
        return cls("xy", 2.0 * math.pi * alpha)

    @classmethod
    def xz(cls, beta: float) -> "PlaneObservable":
        return cls("xz", beta)

    @property
    def turns(self) -> float:
        return self.angle / (2.0 * math.pi)

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        if self.plane == "xz":
            return np.array([[s, c], [c, -s]], dtype=complex)
        return np.array([[0.0, c - 1.0j * s], [c + 1.0j * s, 0.0]], dtype=complex)


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Pauli operators, e.g. ``XZI``.

    The letter ``0`` is accepted as an alias for the identity ``I``.
    """

    letters: str

    def __post_init__(self):
        normalized = self.letters.upper().replace("0", "I")
        if not normalized or any(ch not in "IXYZ" for ch in normalized):
            raise ValueError(f"invalid Pauli string {self.letters!r}")
        object.__setattr__(self, "letters", normalized)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters

    def matrix(self) -> np.ndarray:
        if len(self) > MAX_QUBITS:
            raise CapabilityError(f"dense matrix for {len(self)} qubits exceeds cap")
        out = np.array([[1.0 + 0.0j]])
        for ch in self.letters:
            out = np.kron(out, PAULI_MATRICES[ch])
        return out


def anticommutes(p: Union[PauliString, str], q: Union[PauliString, str]) -> bool:
    """Whether two Pauli strings anticommute.

    Two strings anticommute iff the number of positions where both
    letters are non-identity and different is odd.
    """
    p = p if isinstance(p, PauliString) else PauliString(p)
    q = q if isinstance(q, PauliString) else PauliString(q)
    if len(p) != len(q):
        raise ValueError(f"length mismatch: {len(p)} vs {len(q)}")
    clashes = sum(
        1
        for a, b in zip(p.letters, q.letters)
        if a != "I" and b != "I" and a != b
    )
    return clashes % 2 == 1


@dataclass(frozen=True)
class DenseState:
    """A pure state vector or a density operator on ``n_qubits`` qubits.

    Immutable after construction; the backing array is marked read-only
    so instances can be shared freely across threads.
    """

    n_qubits: int
    data: np.ndarray
    pure: bool

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise CapabilityError(
                f"{self.n_qubits} qubits outside supported range 1..{MAX_QUBITS}"
            )
        dim = 2**self.n_qubits
        arr = np.array(self.data, dtype=complex)
        if self.pure:
            if arr.shape != (dim,):
                raise ValueError(f"pure state needs shape ({dim},), got {arr.shape}")
            norm = float(np.sum(np.abs(arr) ** 2))
            if abs(norm - 1.0) > 1e-9:
                raise ValueError(f"state not normalized: |psi|^2 = {norm}")
        else:
            if arr.shape != (dim, dim):
                raise ValueError(f"density operator needs shape ({dim},{dim})")
            tr = complex(np.trace(arr))
            if abs(tr - 1.0) > 1e-9:
                raise ValueError(f"density operator trace {tr} != 1")
            if not np.allclose(arr, arr.conj().T, atol=_HERM_ATOL * dim):
                raise ValueError("density operator not Hermitian")
            if dim <= _EIG_CHECK_DIM:
                self._check_spectrum(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @staticmethod
    def _check_spectrum(arr: np.ndarray) -> None:
        eigs = np.linalg.eigvalsh(arr)
        if float(eigs.min()) < _EIG_FLOOR:
            raise ValueError(f"density operator has negative eigenvalue {eigs.min()}")

    @property
    def amplitudes(self) -> np.ndarray:
        if not self.pure:
            raise ValueError("density operators have no amplitude vector")
        return self.data

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def density(self) -> np.ndarray:
        """The state as a density matrix (outer product for pure states)."""
        if self.pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def to_density_state(self) -> "DenseState":
        if not self.pure:
            return self
        return DenseState(self.n_qubits, self.density(), pure=False)

    def validate_spectrum(self) -> None:
        """Eigenvalue positivity check, regardless of size (may be slow)."""
        if not self.pure:
            self._check_spectrum(np.asarray(self.data))


def ghz_state(l: int, phase: float = 0.0) -> DenseState:
    """The l-qubit GHZ state (|0...0> + e^{i phase} |1...1>)/sqrt(2).

    The relative phase is a local-unitary degree of freedom (a product
    of z rotations); it matters when pairing a fixed state with fixed
    equatorial measurement angles.
    """
    if not 1 <= l <= MAX_QUBITS:
        raise CapabilityError(f"GHZ size {l} outside supported range 1..{MAX_QUBITS}")
    amp = np.zeros(2**l, dtype=complex)
    amp[0] = 1.0 / math.sqrt(2.0)
    amp[-1] = np.exp(1.0j * phase) / math.sqrt(2.0)
    return DenseState(l, amp, pure=True)


def dicke_state(n: int, m: int) -> DenseState:
    """The Dicke state with exactly ``m`` qubits in |0> out of ``n``.

    Equal amplitudes binom(n, m)^(-1/2) on every computational basis
    state containing exactly m zeros.
    """
    if not 1 <= n <= MAX_QUBITS:
        raise CapabilityError(f"{n} qubits outside supported range 1..{MAX_QUBITS}")
    if not 0 <= m <= n:
        raise ValueError(f"zero count m={m} must satisfy 0 <= m <= n={n}")
    amp = np.zeros(2**n, dtype=complex)
    value = 1.0 / math.sqrt(math.comb(n, m))
    # a basis index with m zeros has n - m one bits
    want = n - m
    for idx in range(2**n):
        if idx.bit_count() == want:
            amp[idx] = value
    return DenseState(n, amp, pure=True)


def mixture(states: Sequence[DenseState], weights: Sequence[float]) -> DenseState:
    """Convex mixture of states, returned in density form."""
    if len(states) != len(weights) or not states:
        raise ValueError("need equally many states and weights, at least one each")
    if any(w < 0 for w in weights):
        raise ValueError("mixture weights must be nonnegative")
    total = float(sum(weights))
    if abs(total - 1.0) > _NORM_ATOL * max(10, len(weights)):
        raise ValueError(f"mixture weights sum to {total}, expected 1")
    n = states[0].n_qubits
    if any(s.n_qubits != n for s in states):
        raise ValueError("all mixture components must share the qubit count")
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for s, w in zip(states, weights):
        rho += float(w) * s.density()
    return DenseState(n, rho, pure=False)


def random_pure_state(n: int, rng: Union[np.random.Generator, int, None] = None) -> DenseState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    vec = rng.normal(size=2**n) + 1.0j * rng.normal(size=2**n)
    vec /= np.linalg.norm(vec)
    return DenseState(n, vec, pure=True)


SiteOperator = Union[PlaneObservable, str, np.ndarray]


def _site_matrix(op: SiteOperator) -> tuple[np.ndarray, bool]:
    """2x2 matrix for a per-qubit operator plus a unit-spectrum flag."""
    if isinstance(op, PlaneObservable):
        return op.matrix(), True
    if isinstance(op, str):
        key = op.upper().replace("0", "I")
        if key not in PAULI_MATRICES:
            raise ValueError(f"unknown single-qubit operator {op!r}")
        return PAULI_MATRICES[key], True
    arr = np.asarray(op, dtype=complex)
    if arr.shape != (2, 2):
        raise ValueError(f"site operator must be 2x2, got shape {arr.shape}")
    return arr, False


def _pauli_masks(ps: PauliString, n: int) -> tuple[int, int, int]:
    flip = sign = 0
    n_y = 0
    for pos, ch in enumerate(ps.letters):
        bit = 1 << (n - 1 - pos)
        if ch == "X":
            flip |= bit
        elif ch == "Y":
            flip |= bit
            sign |= bit
            n_y += 1
        elif ch == "Z":
            sign |= bit
    return flip, sign, n_y


def _pauli_expectation(state: DenseState, ps: PauliString) -> complex:
    n = state.n_qubits
    flip, sign, n_y = _pauli_masks(ps, n)
    idx = np.arange(state.dim)
    parities = np.zeros(state.dim, dtype=np.int64)
    masked = idx & sign
    while masked.any():
        parities += masked & 1
        masked >>= 1
    signs = np.where(parities % 2 == 0, 1.0, -1.0)
    prefactor = 1.0j**n_y
    if state.pure:
        amp = state.data
        return prefactor * np.sum(np.conj(amp[idx ^ flip]) * signs * amp)
    rho = state.data
    return prefactor * np.sum(rho[idx, idx ^ flip] * signs)


def expectation(
    state: DenseState,
    observables: Union[PauliString, str, Sequence[SiteOperator]],
) -> float:
    """Expectation value of a tensor product of single-qubit observables.

    ``observables`` is either a Pauli string covering the whole register
    or a sequence with one entry per qubit, each a
    :class:`PlaneObservable`, a Pauli letter, or an explicit 2x2 matrix.
    """
    n = state.n_qubits
    if isinstance(observables, str):
        observables = PauliString(observables)
    if isinstance(observables, PauliString):
        if len(observables) != n:
            raise ValueError(
                f"operator acts on {len(observables)} qubits, state has {n}"
            )
        value = _pauli_expectation(state, observables)
        return _as_real(value, unit_spectrum=True)

    if len(observables) != n:
        raise ValueError(f"need {n} site operators, got {len(observables)}")
    mats = []
    all_unit = True
    for op in observables:
        mat, unit = _site_matrix(op)
        mats.append(mat)
        all_unit = all_unit and unit

    if state.pure:
        psi = state.data.reshape((2,) * n)
        phi = psi
        for axis, mat in enumerate(mats):
            phi = np.moveaxis(np.tensordot(mat, phi, axes=([1], [axis])), 0, axis)
        value = complex(np.vdot(psi, phi))
    else:
        rho = state.data.reshape((2,) * (2 * n))
        for axis, mat in enumerate(mats):
            rho = np.moveaxis(np.tensordot(mat, rho, axes=([1], [axis])), 0, axis)
        value = complex(np.trace(rho.reshape(state.dim, state.dim)))
    return _as_real(value, unit_spectrum=all_unit)


def _as_real(value: complex, unit_spectrum: bool) -> float:
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation has non-real value {value}")
    real = float(value.real)
    if unit_spectrum and abs(real) > 1.0 + 1e-10:
        raise ValueError(f"expectation {real} outside [-1, 1]")
    return real


def partial_trace(state: DenseState, traced: Sequence[int]) -> DenseState:
    """Trace out the given qubits, returning a density-form state.

    The remaining qubits keep their original relative order.  Tracing
    nothing returns the same state in density form.
    """
    n = state.n_qubits
    traced_list = sorted(traced)
    if len(set(traced_list)) != len(traced_list):
        raise ValueError(f"duplicate qubit indices in {traced!r}")
    if any(not 0 <= q < n for q in traced_list):
        raise ValueError(f"qubit indices {traced!r} out of range for {n} qubits")
    if len(traced_list) == n:
        raise ValueError("cannot trace out every qubit")
    if not traced_list:
        return state.to_density_state()

    keep = [q for q in range(n) if q not in traced_list]
    k, t = len(keep), len(traced_list)
    if state.pure:
        psi = state.data.reshape((2,) * n).transpose(keep + traced_list)
        mat = psi.reshape(2**k, 2**t)
        rho = mat @ mat.conj().T
    else:
        full = state.data.reshape((2,) * (2 * n))
        order = keep + traced_list + [n + q for q in keep] + [n + q for q in traced_list]
        full = full.transpose(order).reshape(2**k, 2**t, 2**k, 2**t)
        rho = np.einsum("atbt->ab", full)
    return DenseState(k, rho, pure=False)
