"""Two-pulse synthesis of the controlled Bell-block gates.

A controlled gate here is a 4x4 Bell-ordered unitary with one 2x2 block
equal to the identity and the other antidiagonalized to [[0,1],[-1,0]]
(directions 1, 3) or [[0,i],[i,0]] (direction 2).  Such a gate is
realized by composing two constant-field evolutions U_h(t') U_h(t)
whose field magnitudes and durations come from a small family of
algebraic prescriptions indexed by integers.

The solver enumerates the integer tuples and sign branches inside
explicit bounds, derives the candidate fields and durations, builds the
product with the closed-form evolution operators, and accepts the first
candidate (in ascending total pulse time) whose product matches the
requested gate.  Acceptance is always numeric; the block-sign algebra
is carried along purely as bookkeeping in the report.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .algebra import global_phase_distance, is_unitary
from .evolution import BLOCK_TEMPLATES, evolution_closed_form
from .ising import CouplingConfig, coupling_pair

VERIFY_TOL = 1e-8

_A = {}


def _gate(rows):
    return np.array(rows, dtype=complex)


#: The six controlled-gate targets, keyed by (direction h, block label j).
_A[(1, 1)] = _gate([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
_A[(2, 1)] = _gate([[0, 0, 0, 1j], [0, 1, 0, 0], [0, 0, 1, 0], [1j, 0, 0, 0]])
_A[(3, 1)] = _gate([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]])
_A[(1, 2)] = _gate([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
_A[(2, 2)] = _gate([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]])
_A[(3, 2)] = _gate([[0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]])
for _m in _A.values():
    _m.setflags(write=False)


@dataclass(frozen=True)
class GateTarget:
    """One controlled gate from the library, as a literal matrix."""

    h: int
    j: int
    matrix: np.ndarray


def gate_library(h: int, j: int) -> GateTarget:
    """The literal controlled-gate matrix for direction h, block label j."""
    if (h, j) not in _A:
        raise ValueError(f"no gate with h={h}, j={j}; h in 1..3, j in 1..2")
    return GateTarget(h=h, j=j, matrix=_A[(h, j)])


def target_diagonal_alpha(target: GateTarget) -> int:
    """Block sign alpha of the identity-shaped block of a library gate."""
    for spec in BLOCK_TEMPLATES[target.h]:
        k, l = spec.rows[0] - 1, spec.rows[1] - 1
        block = target.matrix[np.ix_((k, l), (k, l))]
        if np.allclose(block, np.eye(2)):
            return spec.alpha
    raise ValueError("target has no identity block")


@dataclass(frozen=True)
class SearchBounds:
    """Integer search box for the candidate enumeration.

    ``n_minus`` / ``np_minus`` are inclusive (lo, hi) ranges for the
    antidiagonal-pair half-turn counts (durations need them >= 0);
    ``m_plus_n_abs_max`` bounds the nonzero phase integer m+n; and
    ``n_alpha_abs_max`` bounds the nonzero diagonal-pair turn count.
    ``s_allowed`` optionally restricts the bookkeeping exponent solved
    from the phase condition (None disables that filter).
    """

    n_minus: tuple[int, int] = (0, 4)
    np_minus: tuple[int, int] = (0, 4)
    m_plus_n_abs_max: int = 8
    n_alpha_abs_max: int = 8
    s_allowed: tuple[float, ...] | None = (-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5)

    def to_dict(self) -> dict:
        return {
            "n_minus": list(self.n_minus),
            "np_minus": list(self.np_minus),
            "m_plus_n_abs_max": self.m_plus_n_abs_max,
            "n_alpha_abs_max": self.n_alpha_abs_max,
            "s_allowed": None if self.s_allowed is None else list(self.s_allowed),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SearchBounds":
        kwargs = {}
        if "n_minus" in data:
            kwargs["n_minus"] = tuple(int(x) for x in data["n_minus"])
        if "np_minus" in data:
            kwargs["np_minus"] = tuple(int(x) for x in data["np_minus"])
        if "m_plus_n_abs_max" in data:
            kwargs["m_plus_n_abs_max"] = int(data["m_plus_n_abs_max"])
        if "n_alpha_abs_max" in data:
            kwargs["n_alpha_abs_max"] = int(data["n_alpha_abs_max"])
        if "s_allowed" in data:
            s = data["s_allowed"]
            kwargs["s_allowed"] = None if s is None else tuple(float(x) for x in s)
        return cls(**kwargs)


@dataclass(frozen=True)
class SynthesisProblem:
    """Couplings available in each pulse plus the search bounds.

    ``alpha_diag`` may be None, in which case it is inferred from the
    identity block of the requested target gate.
    """

    h: int
    J: tuple[float, float, float]
    Jp: tuple[float, float, float]
    alpha_diag: int | None = None
    bounds: SearchBounds = field(default_factory=SearchBounds)

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "J": list(self.J),
            "Jp": list(self.Jp),
            "alpha_diag": self.alpha_diag,
            "bounds": self.bounds.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SynthesisProblem":
        try:
            bounds = SearchBounds.from_dict(data.get("bounds", {}))
            return cls(
                h=int(data["h"]),
                J=tuple(float(x) for x in data["J"]),
                Jp=tuple(float(x) for x in data["Jp"]),
                alpha_diag=None if data.get("alpha_diag") is None else int(data["alpha_diag"]),
                bounds=bounds,
            )
        except KeyError as exc:
            raise ValueError(f"synthesis problem is missing key {exc}") from exc


@dataclass(frozen=True)
class SequenceIntegers:
    n_minus: int
    np_minus: int
    m_alpha: int
    n_alpha: int
    s_alpha: float
    s_minus_alpha: float

    def to_dict(self) -> dict:
        return {
            "n_minus": self.n_minus,
            "np_minus": self.np_minus,
            "m_alpha": self.m_alpha,
            "n_alpha": self.n_alpha,
            "s_alpha": self.s_alpha,
            "s_minus_alpha": self.s_minus_alpha,
        }


@dataclass(frozen=True)
class PulseSequence:
    """Two constant-field pulses realizing a controlled gate."""

    pulse1: CouplingConfig
    t1: float
    pulse2: CouplingConfig
    t2: float
    xi: float
    chi: float
    integers: SequenceIntegers
    signs: dict

    @property
    def total_time(self) -> float:
        return self.t1 + self.t2

    def build(self) -> np.ndarray:
        """Rebuild the composed Bell-basis operator from the parameters."""
        u1 = evolution_closed_form(self.pulse1, self.t1).matrix
        u2 = evolution_closed_form(self.pulse2, self.t2).matrix
        return u2 @ u1

    def to_dict(self) -> dict:
        return {
            "pulse1": {"config": self.pulse1.to_dict(), "t": self.t1},
            "pulse2": {"config": self.pulse2.to_dict(), "t": self.t2},
            "xi": self.xi,
            "chi": self.chi,
            "integers": self.integers.to_dict(),
            "signs": dict(self.signs),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PulseSequence":
        ints = data["integers"]
        return cls(
            pulse1=CouplingConfig.from_dict(data["pulse1"]["config"]),
            t1=float(data["pulse1"]["t"]),
            pulse2=CouplingConfig.from_dict(data["pulse2"]["config"]),
            t2=float(data["pulse2"]["t"]),
            xi=float(data["xi"]),
            chi=float(data["chi"]),
            integers=SequenceIntegers(
                n_minus=int(ints["n_minus"]),
                np_minus=int(ints["np_minus"]),
                m_alpha=int(ints["m_alpha"]),
                n_alpha=int(ints["n_alpha"]),
                s_alpha=float(ints["s_alpha"]),
                s_minus_alpha=float(ints["s_minus_alpha"]),
            ),
            signs=dict(data["signs"]),
        )


@dataclass(frozen=True)
class SynthesisReport:
    problem: SynthesisProblem
    target: tuple[int, int]
    feasible: bool
    sequence: PulseSequence | None
    residual: float | None
    candidates_total: int
    candidates_verified: int
    rejections: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "problem": self.problem.to_dict(),
            "target": {"h": self.target[0], "j": self.target[1]},
            "feasible": self.feasible,
            "sequence": None if self.sequence is None else self.sequence.to_dict(),
            "residual": self.residual,
            "candidates_total": self.candidates_total,
            "candidates_verified": self.candidates_verified,
            "rejections": dict(sorted(self.rejections.items())),
        }


def candidate_xi(a: float, b: float) -> list[float]:
    """Field-ratio candidates from the quadratic (a + b*xi)^2 = 1 + xi^2.

    Returns the strictly positive magnitudes (-a*b +/- sqrt(a^2+b^2-1))
    / (b^2-1), each expanded to both sign branches by the caller.
    Empty when a^2 + b^2 < 1 (no real root) or b^2 = 1 (the printed
    quotient is singular there).
    """
    disc = a * a + b * b - 1.0
    if disc < 0.0:
        return []
    denom = b * b - 1.0
    if denom == 0.0:
        return []
    root = math.sqrt(disc)
    out = []
    for sign in (+1.0, -1.0):
        value = (-a * b + sign * root) / denom
        if value > 0.0 and value not in out:
            out.append(value)
    return sorted(out)


def candidate_chi(
    xi: float,
    n_alpha: int,
    n_minus: int,
    np_minus: int,
    s_alpha_ratio: float,
    sp_alpha_ratio: float,
    p_alpha: int,
) -> float | None:
    """|chi| from the diagonal-pair closure condition, or None.

    chi^2 = (2 n_alpha sqrt(xi^2+1) / (S (2n+1) + P S' (2n'+1) |xi|))^2 - 1.
    None signals chi^2 < 0 (infeasible candidate); a zero denominator
    raises ZeroDivisionError for the caller to classify.
    """
    denom = s_alpha_ratio * (2 * n_minus + 1) + p_alpha * sp_alpha_ratio * (2 * np_minus + 1) * abs(xi)
    if denom == 0.0:
        raise ZeroDivisionError("chi denominator vanished")
    ratio = 2.0 * n_alpha * math.sqrt(xi * xi + 1.0) / denom
    chi_sq = ratio * ratio - 1.0
    if chi_sq < 0.0:
        return None
    return math.sqrt(chi_sq)


def solve_s_minus_alpha(h: int, n_minus: int, np_minus: int, m_plus_n: int, sign_term: int) -> float:
    """Bookkeeping exponent solved from the combined-phase condition.

    2(m+n) = -(h + sign_term + 2(n + n' - s + 1)), solved for s.  An
    integer for h = 1, 3 and a semi-integer for h = 2.
    """
    return m_plus_n + n_minus + np_minus + 1 + (h + sign_term) / 2.0


def phase_condition(h: int, integers: SequenceIntegers, sign_term: int, m_plus_n: int | None = None) -> bool:
    """Check 2(m+n) = -(h + sign_term + 2(n + n' - s + 1)) exactly."""
    total = integers.m_alpha + integers.n_alpha if m_plus_n is None else m_plus_n
    lhs = 2 * total
    rhs = -(h + sign_term + 2 * (integers.n_minus + integers.np_minus - integers.s_minus_alpha + 1))
    return lhs == rhs


def s_parity_class(h: int) -> str:
    return "semi_integer" if h == 2 else "integer"


@dataclass(frozen=True)
class _Candidate:
    total_time: float
    order_key: tuple
    n_minus: int
    np_minus: int
    m_plus_n: int
    n_alpha: int
    xi: float
    chi: float
    s_minus_alpha: float
    sigma: int
    signs: dict
    cfg1: CouplingConfig
    t1: float
    cfg2: CouplingConfig
    t2: float


def _antidiag_sign_exponent(product: np.ndarray, target: GateTarget, alpha_diag: int) -> float:
    """Exponent s with (-1)^s equal to the realized upper antidiagonal
    entry; an integer for h = 1, 3 and a semi-integer (the entry is +-i)
    for h = 2."""
    h = target.h
    for spec in BLOCK_TEMPLATES[h]:
        if spec.alpha == -alpha_diag:
            k, l = spec.rows[0] - 1, spec.rows[1] - 1
            upper = product[k, l]
            angle = math.atan2(upper.imag, upper.real)
            return (round(2.0 * angle / math.pi) / 2.0) % 2.0
    raise RuntimeError("no antidiagonal block found")


def _diag_block_q_beta(h: int, alpha_diag: int) -> tuple[int, int]:
    for spec in BLOCK_TEMPLATES[h]:
        if spec.alpha == alpha_diag:
            return spec.q, spec.beta
    raise RuntimeError(f"no block with alpha={alpha_diag} for h={h}")


def solve_two_pulse(
    problem: SynthesisProblem,
    target: GateTarget,
    tol: float = VERIFY_TOL,
) -> SynthesisReport:
    """Search the prescription family for a two-pulse gate realization.

    Candidates are enumerated over the integer bounds and all sign
    branches of xi and chi, ordered by ascending total pulse time, and
    verified by building U_h(t') U_h(t) with the closed forms and
    comparing against the literal target matrix.  The first verified
    candidate wins; every discarded candidate is tallied under a
    machine-readable rejection reason.
    """
    if target.h != problem.h:
        raise ValueError(f"target direction {target.h} != problem direction {problem.h}")
    alpha = problem.alpha_diag if problem.alpha_diag is not None else target_diagonal_alpha(target)
    if alpha not in (-1, +1):
        raise ValueError(f"alpha_diag must be -1 or +1, got {alpha}")
    if problem.alpha_diag is not None and problem.alpha_diag != target_diagonal_alpha(target):
        raise ValueError("alpha_diag does not match the identity block of the target gate")

    h = problem.h
    j_anti_1 = coupling_pair(problem.J, h, -alpha)   # divides the prescription
    jp_anti_1 = coupling_pair(problem.Jp, h, -alpha)
    j_diag_1 = coupling_pair(problem.J, h, alpha)
    jp_diag_1 = coupling_pair(problem.Jp, h, alpha)
    if j_anti_1 == 0.0 or jp_anti_1 == 0.0:
        raise ValueError("prescription requires nonzero J_pair(-alpha) in both pulses")
    jh, jph = problem.J[h - 1], problem.Jp[h - 1]

    s_ratio = abs(j_diag_1 / j_anti_1)
    sp_ratio = abs(jp_diag_1 / jp_anti_1)
    p_alpha = int(math.copysign(1.0, jp_diag_1 * j_diag_1)) if j_diag_1 * jp_diag_1 != 0.0 else 0
    q_diag, beta_diag = _diag_block_q_beta(h, alpha)

    bounds = problem.bounds
    rejections: Counter[str] = Counter()
    candidates: list[_Candidate] = []
    total = 0

    m_values = [m for m in range(-bounds.m_plus_n_abs_max, bounds.m_plus_n_abs_max + 1) if m != 0]
    n_alpha_values = [n for n in range(-bounds.n_alpha_abs_max, bounds.n_alpha_abs_max + 1) if n != 0]

    for n_minus in range(bounds.n_minus[0], bounds.n_minus[1] + 1):
        for np_minus in range(bounds.np_minus[0], bounds.np_minus[1] + 1):
            for m_plus_n in m_values:
                a = (2 * n_minus + 1) * jh / (2 * m_plus_n * abs(j_anti_1))
                b = (2 * np_minus + 1) * jph / (2 * m_plus_n * abs(jp_anti_1))
                magnitudes = candidate_xi(a, b)
                if not magnitudes:
                    # kills the whole (n, n', m+n) family at once
                    total += 1
                    rejections["no_real_xi"] += 1
                    continue
                for root_index, magnitude in enumerate(magnitudes):
                    for xi_sign in (+1, -1):
                        xi = xi_sign * magnitude
                        for n_alpha in n_alpha_values:
                            try:
                                chi_mag = candidate_chi(
                                    xi, n_alpha, n_minus, np_minus, s_ratio, sp_ratio, p_alpha
                                )
                            except ZeroDivisionError:
                                total += 2
                                rejections["chi_denominator_zero"] += 2
                                continue
                            if chi_mag is None:
                                total += 2
                                rejections["negative_chi2"] += 2
                                continue
                            chi_signs = (+1,) if chi_mag == 0.0 else (+1, -1)
                            for chi_sign in chi_signs:
                                total += 1
                                chi = chi_sign * chi_mag
                                cand = _assemble_candidate(
                                    problem, h, alpha, xi, chi,
                                    n_minus, np_minus, m_plus_n, n_alpha,
                                    root_index, xi_sign, chi_sign,
                                    j_anti_1, jp_anti_1, j_diag_1, jp_diag_1,
                                    q_diag, beta_diag,
                                )
                                if bounds.s_allowed is not None and cand.s_minus_alpha not in bounds.s_allowed:
                                    rejections["phase_condition_failed"] += 1
                                    continue
                                candidates.append(cand)

    candidates.sort(key=lambda c: (c.total_time, c.order_key))

    verified = 0
    for cand in candidates:
        verified += 1
        u1 = evolution_closed_form(cand.cfg1, cand.t1).matrix
        u2 = evolution_closed_form(cand.cfg2, cand.t2).matrix
        product = u2 @ u1
        if np.linalg.norm(product - target.matrix) < tol:
            residual = global_phase_distance(product, target.matrix)
            s_alpha = _antidiag_sign_exponent(product, target, alpha)
            seq = PulseSequence(
                pulse1=cand.cfg1, t1=cand.t1,
                pulse2=cand.cfg2, t2=cand.t2,
                xi=cand.xi, chi=cand.chi,
                integers=SequenceIntegers(
                    n_minus=cand.n_minus, np_minus=cand.np_minus,
                    m_alpha=cand.m_plus_n - cand.n_alpha, n_alpha=cand.n_alpha,
                    s_alpha=s_alpha, s_minus_alpha=cand.s_minus_alpha,
                ),
                signs=cand.signs,
            )
            return SynthesisReport(
                problem=problem, target=(target.h, target.j), feasible=True,
                sequence=seq, residual=residual,
                candidates_total=total, candidates_verified=verified,
                rejections=dict(rejections),
            )
        rejections["verify_failed"] += 1

    return SynthesisReport(
        problem=problem, target=(target.h, target.j), feasible=False,
        sequence=None, residual=None,
        candidates_total=total, candidates_verified=verified,
        rejections=dict(rejections),
    )


def _assemble_candidate(
    problem, h, alpha, xi, chi,
    n_minus, np_minus, m_plus_n, n_alpha,
    root_index, xi_sign, chi_sign,
    j_anti_1, jp_anti_1, j_diag_1, jp_diag_1,
    q_diag, beta_diag,
) -> _Candidate:
    # Fields per pulse: B(alpha) tracks xi against the antidiagonal-pair
    # coupling, B(-alpha) tracks chi against the diagonal-pair coupling.
    b_pair_1 = {alpha: xi * j_anti_1, -alpha: chi * j_diag_1}
    b_pair_2 = {alpha: -(1.0 / xi) * jp_anti_1, -alpha: chi * jp_diag_1}
    cfg1 = CouplingConfig.with_fields(
        problem.J, h,
        0.5 * (b_pair_1[+1] + b_pair_1[-1]),
        0.5 * (b_pair_1[+1] - b_pair_1[-1]),
    )
    cfg2 = CouplingConfig.with_fields(
        problem.Jp, h,
        0.5 * (b_pair_2[+1] + b_pair_2[-1]),
        0.5 * (b_pair_2[+1] - b_pair_2[-1]),
    )
    scale = math.sqrt(xi * xi + 1.0)
    t1 = (2 * n_minus + 1) * math.pi / (2.0 * abs(j_anti_1) * scale)
    t2 = (2 * np_minus + 1) * abs(xi) * math.pi / (2.0 * abs(jp_anti_1) * scale)

    # Bookkeeping: sign term and the solved s exponent of the phase
    # condition (diagnostic only; never used for acceptance).
    b2_alpha = -math.copysign(1.0, xi * jp_anti_1) / scale
    j1_alpha = math.copysign(1.0, j_anti_1) / scale
    sigma = int(math.copysign(1.0, q_diag * beta_diag * b2_alpha * j1_alpha))
    s_minus = solve_s_minus_alpha(h, n_minus, np_minus, m_plus_n, sigma)

    return _Candidate(
        total_time=t1 + t2,
        order_key=(n_minus, np_minus, m_plus_n, n_alpha, root_index, -xi_sign, -chi_sign),
        n_minus=n_minus, np_minus=np_minus, m_plus_n=m_plus_n, n_alpha=n_alpha,
        xi=xi, chi=chi, s_minus_alpha=s_minus, sigma=sigma,
        signs={"xi_sign": xi_sign, "chi_sign": chi_sign, "root_index": root_index},
        cfg1=cfg1, t1=t1, cfg2=cfg2, t2=t2,
    )


def verify_sequence(seq: PulseSequence, target: GateTarget) -> float:
    """Residual of a rebuilt sequence against its target gate."""
    product = seq.build()
    if not is_unitary(product):
        raise ValueError("rebuilt pulse product is not unitary")
    return global_phase_distance(product, target.matrix)
