"""Dense statevector simulation of the gates QAOA needs.

Qubit ``i`` holds spin variable ``i``. Basis index ``z`` reads the qubits as
a binary number with qubit 0 as the most significant bit, so the bitstring
``"10"`` is index 2. Bit value ``b`` corresponds to spin ``2b - 1``.

All gate functions return a new StateVector and leave their input alone.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 24


@dataclass
class StateVector:
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        n = int(self.amps.size).bit_length() - 1
        if self.amps.ndim != 1 or 2**n != self.amps.size:
            raise ValueError("amplitude vector length must be a power of two")
        if n > MAX_QUBITS:
            raise ValueError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit limit")

    @property
    def n(self) -> int:
        return self.amps.size.bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def _wrap(amps: np.ndarray) -> StateVector:
    # gate outputs keep the input's shape and dtype; skip re-validation
    state = object.__new__(StateVector)
    state.amps = amps
    return state


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [0, {MAX_QUBITS}], got {n}")


def plus_state(n: int) -> StateVector:
    _check_n(n)
    return StateVector(np.full(2**n, 2 ** (-n / 2), dtype=np.complex128))


def basis_state(bits) -> StateVector:
    bits = [int(b) for b in bits]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    _check_n(len(bits))
    amps = np.zeros(2 ** len(bits), dtype=np.complex128)
    amps[int("".join(map(str, bits)) or "0", 2)] = 1.0
    return StateVector(amps)


def prepare(kind: str, n: int | None = None, bits=None) -> StateVector:
    """``prepare("plus", n)`` or ``prepare("basis", bits=...)``."""
    if kind == "plus":
        return plus_state(n)
    if kind == "basis":
        if n is not None and len(bits) != n:
            raise ValueError(f"expected {n} bits, got {len(bits)}")
        return basis_state(bits)
    raise ValueError(f"unknown initial state kind {kind!r}")


def _check_table(state: StateVector, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != state.amps.shape:
        raise ValueError(f"cost table has {values.size} entries, state has {state.amps.size}")
    return values


def apply_cost_phase(state: StateVector, values, gamma: float) -> StateVector:
    """Diagonal ``exp(-i gamma C)``."""
    values = _check_table(state, values)
    return _wrap(state.amps * np.exp(-1j * gamma * values))


def apply_rx_all(state: StateVector, beta: float, order=None) -> StateVector:
    """``exp(-i beta X)`` on each qubit, in ``order`` (default ascending)."""
    c, s = np.cos(beta), -1j * np.sin(beta)
    n = state.n
    amps = state.amps.copy()
    for q in range(n) if order is None else order:
        psi = amps.reshape(2**q, 2, 2 ** (n - q - 1))
        a0 = psi[:, 0, :].copy()
        a1 = psi[:, 1, :]
        psi[:, 0, :] = c * a0 + s * a1
        psi[:, 1, :] = s * a0 + c * a1
    return _wrap(amps)


def apply_x_mixer(state: StateVector, beta: float) -> StateVector:
    """Transverse-field mixer ``exp(-i beta sum_i X_i)``."""
    return apply_rx_all(state, beta)


def apply_xy_pair(state: StateVector, qa: int, qb: int, beta: float) -> StateVector:
    """``exp(-i beta (XX + YY))`` on qubits ``qa``, ``qb``.

    XX + YY vanishes on |00>, |11> and acts as ``2 * sigma_x`` between |01>
    and |10>, so the odd-parity block rotates by ``2 beta``.
    """
    if qa == qb:
        raise ValueError(f"XY rotation needs two distinct qubits, got {qa} twice")
    n = state.n
    for q in (qa, qb):
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range for {n} qubits")
    lo, hi = sorted((qa, qb))
    c, s = np.cos(2 * beta), -1j * np.sin(2 * beta)
    amps = state.amps.copy()
    psi = amps.reshape(2**lo, 2, 2 ** (hi - lo - 1), 2, 2 ** (n - hi - 1))
    # XX + YY is symmetric in the pair, so only the sorted order matters
    a01 = psi[:, 0, :, 1, :].copy()
    a10 = psi[:, 1, :, 0, :]
    psi[:, 0, :, 1, :] = c * a01 + s * a10
    psi[:, 1, :, 0, :] = s * a01 + c * a10
    return _wrap(amps)


def ring_schedule(m: int) -> list[list[tuple[int, int]]]:
    """Pair passes (odd, even, last) of the parity ring mixer on ``m`` qubits.

    Positions are 0-based offsets into the register. The ring is 1-based in
    its usual statement: odd pass ``(a, a+1)`` for odd ``a < m``, even pass
    ``(a, a+1 mod m)`` for even ``a <= m``, and a wrap pair ``(m, 1)`` only
    when ``m`` is odd. For ``m = 2`` the same pair appears in both passes.
    """
    if m < 2:
        return [[], [], []]

    def wrap(a: int) -> int:
        return (a % m) + 1 if a >= m else a + 1

    odd = [(a - 1, wrap(a) - 1) for a in range(1, m, 2)]
    even = [(a - 1, wrap(a) - 1) for a in range(2, m + 1, 2)]
    last = [(m - 1, 0)] if m % 2 else []
    return [odd, even, last]


def apply_parity_mixer(state: StateVector, register, beta: float) -> StateVector:
    """Hamming-weight preserving XY ring mixer on one register of qubits."""
    register = list(register)
    for pass_ in ring_schedule(len(register)):
        for a, b in pass_:
            state = apply_xy_pair(state, register[a], register[b], beta)
    return state


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amps) ** 2


def expectation(state: StateVector, values) -> float:
    values = _check_table(state, values)
    return float(probabilities(state) @ values)
