"""Anisotropic two-spin Ising Hamiltonian with a collinear local field.

The interaction is H = -sum_k J_k s1_k s2_k + B1_h s1_h + B2_h s2_h with
the local fields restricted to a single spatial direction h in {1,2,3}.
This module builds the 4x4 Hamiltonian and evaluates the scalar
quantities that drive its Bell-basis evolution: scaled field/coupling
ratios, the four energy levels, and the per-block phases and amplitudes.

Sign scripts (mu, nu, alpha, beta) are the integers -1, +1 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import I2, SIGMA, kron

#: (i, j) companions of each field direction h, cyclic in (1, 2, 3).
CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}

SIGNS = (-1, +1)


def _vec3(values, name: str) -> tuple[float, float, float]:
    vec = tuple(float(x) for x in values)
    if len(vec) != 3:
        raise ValueError(f"{name} must have exactly 3 components, got {len(vec)}")
    if not all(math.isfinite(x) for x in vec):
        raise ValueError(f"{name} must be finite, got {vec}")
    return vec


@dataclass(frozen=True)
class CouplingConfig:
    """Physical knobs: couplings J, local fields B1/B2, field direction h.

    The fields must vanish off the h-direction; energies are in units
    with hbar = 1.
    """

    J: tuple[float, float, float]
    B1: tuple[float, float, float]
    B2: tuple[float, float, float]
    h: int

    def __post_init__(self):
        object.__setattr__(self, "J", _vec3(self.J, "J"))
        object.__setattr__(self, "B1", _vec3(self.B1, "B1"))
        object.__setattr__(self, "B2", _vec3(self.B2, "B2"))
        if self.h not in (1, 2, 3):
            raise ValueError(f"h must be 1, 2 or 3, got {self.h}")
        for name, vec in (("B1", self.B1), ("B2", self.B2)):
            for k in (1, 2, 3):
                if k != self.h and vec[k - 1] != 0.0:
                    raise ValueError(
                        f"{name} has a component along direction {k}, "
                        f"but the field is restricted to direction h={self.h}"
                    )

    @classmethod
    def with_fields(cls, J, h: int, b1: float, b2: float) -> "CouplingConfig":
        """Build a config from scalar field strengths along h."""
        B1 = [0.0, 0.0, 0.0]
        B2 = [0.0, 0.0, 0.0]
        B1[h - 1] = float(b1)
        B2[h - 1] = float(b2)
        return cls(J=tuple(J), B1=tuple(B1), B2=tuple(B2), h=h)

    @property
    def b1h(self) -> float:
        return self.B1[self.h - 1]

    @property
    def b2h(self) -> float:
        return self.B2[self.h - 1]

    def to_dict(self) -> dict:
        return {"J": list(self.J), "B1": list(self.B1), "B2": list(self.B2), "h": self.h}

    @classmethod
    def from_dict(cls, data: dict) -> "CouplingConfig":
        try:
            return cls(J=tuple(data["J"]), B1=tuple(data["B1"]), B2=tuple(data["B2"]), h=int(data["h"]))
        except KeyError as exc:
            raise ValueError(f"coupling config is missing key {exc}") from exc


def coupling_pair(J, h: int, sign: int) -> float:
    """J_i + sign * J_j for the cyclic companions (i, j) of h."""
    i, j = CYCLIC[h]
    return float(J[i - 1]) + sign * float(J[j - 1])


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless field/coupling ratios and their normalizers.

    ``b(s)`` and ``j(s)`` are undefined (None) when the corresponding
    normalizer R(s) vanishes; downstream evolution formulas take the
    sin(0) * undefined -> 0 limit instead of dividing 0/0.

    Pairing: R(s) = sqrt(B(s)^2 + Jpair(-s)^2), b(s) = B(s)/R(s) and
    j(s) = Jpair(-s)/R(s), so b(s)^2 + j(s)^2 = 1 whenever R(s) > 0.
    """

    b_plus: float | None
    b_minus: float | None
    j_plus: float | None
    j_minus: float | None
    R_plus: float
    R_minus: float
    Jsum: float
    Jdiff: float
    Bsum: float
    Bdiff: float
    Jh: float

    def b(self, sign: int) -> float | None:
        return self.b_plus if sign > 0 else self.b_minus

    def j(self, sign: int) -> float | None:
        return self.j_plus if sign > 0 else self.j_minus

    def R(self, sign: int) -> float:
        return self.R_plus if sign > 0 else self.R_minus

    def J_pair(self, sign: int) -> float:
        return self.Jsum if sign > 0 else self.Jdiff

    def B_pair(self, sign: int) -> float:
        return self.Bsum if sign > 0 else self.Bdiff

    def degenerate(self, sign: int) -> bool:
        return self.R(sign) == 0.0


def scaled_params(cfg: CouplingConfig) -> ScaledParams:
    """Scaled parameters of a coupling config.

    For each sign s: B(s) = B1_h + s B2_h, Jpair(s) = J_i + s J_j, and
    R(s) = sqrt(B(s)^2 + Jpair(-s)^2).  Note the cross-pairing of signs
    between the numerators: b(s) scales B(s) while j(s) scales Jpair(-s),
    which is exactly what makes b^2 + j^2 = 1 per sign branch.
    """
    jsum = coupling_pair(cfg.J, cfg.h, +1)
    jdiff = coupling_pair(cfg.J, cfg.h, -1)
    bsum = cfg.b1h + cfg.b2h
    bdiff = cfg.b1h - cfg.b2h
    jpair = {+1: jsum, -1: jdiff}
    bpair = {+1: bsum, -1: bdiff}
    r = {s: math.hypot(bpair[s], jpair[-s]) for s in SIGNS}
    b = {s: (bpair[s] / r[s] if r[s] > 0.0 else None) for s in SIGNS}
    j = {s: (jpair[-s] / r[s] if r[s] > 0.0 else None) for s in SIGNS}
    return ScaledParams(
        b_plus=b[+1], b_minus=b[-1],
        j_plus=j[+1], j_minus=j[-1],
        R_plus=r[+1], R_minus=r[-1],
        Jsum=jsum, Jdiff=jdiff, Bsum=bsum, Bdiff=bdiff,
        Jh=cfg.J[cfg.h - 1],
    )


def hamiltonian_matrix(cfg: CouplingConfig) -> np.ndarray:
    """4x4 computational-basis Hamiltonian of the config.

    H = -sum_k J_k (sigma_k x sigma_k) + B1_h (sigma_h x I) + B2_h (I x sigma_h).
    Always Hermitian and traceless.
    """
    h_mat = np.zeros((4, 4), dtype=complex)
    for k in (1, 2, 3):
        h_mat -= cfg.J[k - 1] * kron(SIGMA[k], SIGMA[k])
    h_mat += cfg.b1h * kron(SIGMA[cfg.h], I2)
    h_mat += cfg.b2h * kron(I2, SIGMA[cfg.h])
    return h_mat


def eigenvalues(cfg: CouplingConfig) -> tuple[float, float, float, float]:
    """Energy levels E(mu, nu) = mu*Jh + nu*R(-mu), ordered (--, -+, +-, ++)."""
    sp = scaled_params(cfg)
    return tuple(mu * sp.Jh + nu * sp.R(-mu) for mu in SIGNS for nu in SIGNS)


@dataclass(frozen=True)
class ReducedQuantities:
    """Per-block phases and amplitudes of the Bell-basis evolution at time t.

    delta_plus[mu]  = mu * Jh * t            (block phase angle)
    delta_minus[mu] = R(-mu) * t             (block rotation angle)
    e[(alpha, beta)] = cos(delta_minus[alpha]) + i*beta*j(-alpha)*sin(...)
    d[alpha]         = b(-alpha) * sin(delta_minus[alpha])

    Each block column is normalized: |e|^2 + d^2 = 1.
    """

    delta_plus: dict[int, float]
    delta_minus: dict[int, float]
    e: dict[tuple[int, int], complex]
    d: dict[int, float]


def reduced_quantities(cfg: CouplingConfig, t: float) -> ReducedQuantities:
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    sp = scaled_params(cfg)
    delta_plus = {mu: mu * sp.Jh * t for mu in SIGNS}
    delta_minus = {mu: sp.R(-mu) * t for mu in SIGNS}
    e: dict[tuple[int, int], complex] = {}
    d: dict[int, float] = {}
    for alpha in SIGNS:
        if sp.degenerate(-alpha):
            # R(-alpha) = 0 forces delta_minus[alpha] = 0; the undefined
            # b, j ratios only ever appear multiplied by sin(0).
            for beta in SIGNS:
                e[(alpha, beta)] = complex(math.cos(delta_minus[alpha]))
            d[alpha] = 0.0
            continue
        s = math.sin(delta_minus[alpha])
        c = math.cos(delta_minus[alpha])
        for beta in SIGNS:
            e[(alpha, beta)] = c + 1j * beta * sp.j(-alpha) * s
        d[alpha] = sp.b(-alpha) * s
    return ReducedQuantities(delta_plus=delta_plus, delta_minus=delta_minus, e=e, d=d)
