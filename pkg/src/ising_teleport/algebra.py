"""Dense complex linear algebra for few-qubit states and unitaries.

Plain numpy on small arrays: 4x4 operators for the two-qubit work, up to
2^12 amplitudes for protocol simulation.  Every function is pure and
nothing mutates its inputs.

Conventions
-----------
* Qubit 0 is the leftmost tensor factor (most significant bit); the
  two-qubit computational basis is ordered |00>, |01>, |10>, |11>.
* The Bell basis is ordered b00, b01, b10, b11 with
  b_AB = (|0 B> + (-1)^A |1 (1-B)>) / sqrt(2).
* hbar = 1 throughout: time and energy are reciprocal dimensionless
  scales, and exp_hermitian(H, t) means exp(-i H t).
"""

from __future__ import annotations

import numpy as np

#: Default tolerance for Frobenius-norm comparisons; callers may override.
DEFAULT_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

#: Pauli matrices keyed by spatial direction 1, 2, 3 (= x, y, z).
SIGMA = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}

#: Bell labels (A, B) in basis order: b00, b01, b10, b11.
BELL_LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with the standard row-major entry layout."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def bell_state(a: int, b: int) -> np.ndarray:
    """Two-qubit Bell state b_AB as a computational-basis 4-vector."""
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError(f"Bell labels must be bits, got ({a}, {b})")
    vec = np.zeros(4, dtype=complex)
    vec[2 * 0 + b] = 1.0
    vec[2 * 1 + (1 - b)] = (-1.0) ** a
    return vec / np.sqrt(2.0)


def bell_change_of_basis() -> np.ndarray:
    """Unitary P whose columns are the Bell states in the fixed order.

    P maps Bell-ordered coordinates to computational-basis coordinates;
    P is unitary, so the inverse conversion is P's conjugate transpose.
    """
    return np.column_stack([bell_state(a, b) for a, b in BELL_LABELS])


_P = None


def _bell_p() -> np.ndarray:
    global _P
    if _P is None:
        _P = bell_change_of_basis()
        _P.setflags(write=False)
    return _P


def conjugate_to_bell(u_comp: np.ndarray) -> np.ndarray:
    """Re-express a computational-basis 4x4 operator in the Bell basis."""
    u_comp = np.asarray(u_comp, dtype=complex)
    if u_comp.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got shape {u_comp.shape}")
    p = _bell_p()
    return p.conj().T @ u_comp @ p


def conjugate_from_bell(u_bell: np.ndarray) -> np.ndarray:
    """Inverse of :func:`conjugate_to_bell`."""
    u_bell = np.asarray(u_bell, dtype=complex)
    if u_bell.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got shape {u_bell.shape}")
    p = _bell_p()
    return p @ u_bell @ p.conj().T


def exp_hermitian(h: np.ndarray, t: float, *, herm_tol: float = 1e-12) -> np.ndarray:
    """exp(-i h t) for Hermitian h, by eigendecomposition.

    Raises ValueError if h is not Hermitian within ``herm_tol`` in
    Frobenius norm.  The result is unitary to machine precision.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if np.linalg.norm(h - h.conj().T) > herm_tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def is_unitary(u: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) < tol)


def global_phase_distance(u: np.ndarray, v: np.ndarray, *, unitary_tol: float = DEFAULT_TOL) -> float:
    """min over phi of ||u - e^{i phi} v||_F for unitary u, v.

    Analytically this is sqrt(2 d - 2 |tr(u^dag v)|) for dimension d;
    it is evaluated here at the optimal phase as an elementwise
    difference norm, which stays accurate near zero where the trace
    form loses half its digits to cancellation.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if not is_unitary(u, unitary_tol) or not is_unitary(v, unitary_tol):
        raise ValueError("global_phase_distance requires unitary inputs")
    overlap = np.trace(u.conj().T @ v)
    if abs(overlap) == 0.0:
        return float(np.sqrt(2.0 * u.shape[0]))
    return float(np.linalg.norm(u - (np.conj(overlap) / abs(overlap)) * v))


def n_qubits(state: np.ndarray) -> int:
    """Number of qubits of a state vector; rejects non-power-of-two sizes."""
    size = len(state)
    n = size.bit_length() - 1
    if size <= 0 or 2**n != size:
        raise ValueError(f"state length {size} is not a power of two")
    return n


def normalize(amplitudes: np.ndarray) -> np.ndarray:
    """Return the normalized copy of an amplitude vector."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if not np.all(np.isfinite(amplitudes.view(float))):
        raise ValueError("amplitudes must be finite")
    norm = np.linalg.norm(amplitudes)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return amplitudes / norm


def basis_state(n: int, index: int) -> np.ndarray:
    """Computational basis state |index> on n qubits."""
    state = np.zeros(2**n, dtype=complex)
    state[index] = 1.0
    return state


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random normalized state (Gaussian amplitudes)."""
    amps = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return normalize(amps)


def apply_gate(state: np.ndarray, gate: np.ndarray, targets: tuple[int, ...] | list[int]) -> np.ndarray:
    """Embed ``gate`` on the ordered ``targets`` of ``state``.

    ``gate`` must be 2^k x 2^k for k = len(targets); targets are distinct
    qubit indices into the state's big-endian qubit order.  Returns a new
    state vector; the norm is preserved for unitary gates.
    """
    state = np.asarray(state, dtype=complex)
    gate = np.asarray(gate, dtype=complex)
    n = n_qubits(state)
    targets = list(targets)
    k = len(targets)
    if len(set(targets)) != k:
        raise ValueError(f"duplicate target qubits: {targets}")
    if any(not 0 <= q < n for q in targets):
        raise ValueError(f"target out of range for {n} qubits: {targets}")
    if gate.shape != (2**k, 2**k):
        raise ValueError(f"gate shape {gate.shape} does not act on {k} qubits")
    psi = state.reshape([2] * n)
    out = np.tensordot(gate.reshape([2] * (2 * k)), psi, axes=(list(range(k, 2 * k)), targets))
    # tensordot puts the gate's output axes first, in target order
    out = np.moveaxis(out, list(range(k)), targets)
    return np.ascontiguousarray(out).reshape(-1)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Phase-insensitive overlap |<a|b>|^2 of two normalized states."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) ** 2)
