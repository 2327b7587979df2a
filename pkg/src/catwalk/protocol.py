"""Parameter mapping and the two measurement-conditioned protocols.

A two-level system coupled to a mechanical mode (coupling g, mode frequency
omega) is driven by a strong resonant field Omega1 and a weak one Omega2,
both square-pulsed: on for the first half of each mechanical period, off for
the second half.  Conditioning the qubit on the ground outcome after every
pulse pair drives the mode through a random walk over coherent amplitudes;
keeping the strong drive on throughout and measuring once instead produces a
two-component (cat) superposition.

Everything here is dimensionless: the kick strength l1 = Omega2*eta/omega,
the rotation fraction l2 = Omega1*eta^2/omega, the per-cycle drive phase
phi = Omega1(1 - eta^2/2)*pi/omega, with eta = g/omega.

Phase-sign convention: the n-pulse state is assembled by literally composing
the kick operators of :mod:`catwalk.algebra`, which yields the component
phases e^{+i theta_j}, theta_j = theta_{j-1} + l1*Re(alpha_{j-1} + alpha_j).
This sign is the one consistent with the single-cycle branch phases
e^{-+i phi} e^{-+i l1 Re(...)} and with direct Hamiltonian evolution (see
catwalk.fock); writing e^{-i theta_j} instead breaks both.
"""

import cmath
import math
import warnings
from dataclasses import dataclass
from math import comb

from .algebra import (
    CoherentLabel,
    PulseOperatorSpec,
    SuperposedState,
    apply_pulse_operator,
    displace,
    norm_squared,
    normalize,
    rotate,
)
from .errors import DegenerateState, RegimeViolation

TAU = 2.0 * math.pi

ETA_MAX = 0.05          # validity gate for the second-order expansion
HIERARCHY_MIN = 10.0    # Omega1 must dominate Omega2 and g at least this much
HIERARCHY_SOFT = 100.0  # below this ratio a warning is emitted


@dataclass(frozen=True)
class PhysicalParams:
    """Physical rates, all in rad/s.

    omega   mechanical mode frequency
    g       qubit-mode coupling
    Omega1  strong drive
    Omega2  weak drive
    Gamma   qubit spontaneous decay
    """

    omega: float
    g: float
    Omega1: float
    Omega2: float
    Gamma: float = 0.0

    def __post_init__(self):
        if self.omega <= 0:
            raise RegimeViolation("omega must be positive")
        if min(self.g, self.Omega1, self.Omega2, self.Gamma) < 0:
            raise RegimeViolation("rates must be non-negative")
        if self.eta > ETA_MAX:
            raise RegimeViolation(
                f"eta = g/omega = {self.eta:.3g} exceeds {ETA_MAX}; the "
                "second-order expansion is not trustworthy there"
            )
        dominated = max(self.Omega2, self.g)
        if dominated > 0:
            ratio = self.Omega1 / dominated
            if ratio < HIERARCHY_MIN:
                raise RegimeViolation(
                    f"Omega1/max(Omega2, g) = {ratio:.3g} < {HIERARCHY_MIN}; "
                    "the strong drive must dominate"
                )
            if ratio < HIERARCHY_SOFT:
                warnings.warn(
                    f"Omega1/max(Omega2, g) = {ratio:.3g} is below "
                    f"{HIERARCHY_SOFT}; drive-hierarchy corrections may be "
                    "noticeable",
                    stacklevel=2,
                )

    @property
    def eta(self) -> float:
        return self.g / self.omega

    @property
    def period(self) -> float:
        """Mechanical period T = 2 pi / omega, in seconds."""
        return TAU / self.omega


@dataclass(frozen=True)
class ProtocolParams:
    """Dimensionless protocol knobs.

    l1, l2  kick strength and rotation fraction (non-negative)
    phi     per-cycle drive phase, stored reduced mod 2 pi
    n       number of pulse pairs
    xi      per-pulse dephasing exponent (3*Gamma*T/8)
    alpha0  initial coherent amplitude of the mode
    """

    l1: float
    l2: float
    phi: float
    n: int
    xi: float = 0.0
    alpha0: complex = 0j

    def __post_init__(self):
        if self.l1 < 0 or self.l2 < 0:
            raise ValueError("l1 and l2 must be non-negative")
        if self.xi < 0:
            raise ValueError("xi must be non-negative")
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError("n must be a non-negative integer")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "phi", float(self.phi) % TAU)
        object.__setattr__(self, "alpha0", complex(self.alpha0))


def derive_protocol(p: PhysicalParams, n: int, alpha0: complex = 0j) -> ProtocolParams:
    """Map physical rates to protocol knobs.

    l1 = Omega2*g/omega^2, l2 = Omega1*g^2/omega^3,
    phi = Omega1*(1 - eta^2/2)*pi/omega (mod 2 pi), xi = 3*Gamma*T/8
    with T = 2 pi/omega the pulse-pair period.
    """
    eta = p.eta
    return ProtocolParams(
        l1=p.Omega2 * eta / p.omega,
        l2=p.Omega1 * eta**2 / p.omega,
        phi=p.Omega1 * (1.0 - eta**2 / 2.0) * math.pi / p.omega,
        n=n,
        xi=3.0 * p.Gamma * p.period / 8.0,
        alpha0=alpha0,
    )


def kick_labels(l1: float, l2: float, alpha0: complex, n: int) -> dict:
    """Labels reached by j composite kicks, j = -n..n.

    Positive j applies O(l1, l2) j times, negative j its inverse; the
    accumulated phases ride on the labels.  For real alpha0 the table is
    conjugate-symmetric: amplitude(-j) = conj(amplitude(j)).
    """
    fwd = PulseOperatorSpec(l1, l2, +1)
    bwd = PulseOperatorSpec(l1, l2, -1)
    table = {0: CoherentLabel(alpha0, 0.0)}
    lab = table[0]
    for j in range(1, n + 1):
        lab = apply_pulse_operator(fwd, lab)
        table[j] = lab
    lab = table[0]
    for j in range(1, n + 1):
        lab = apply_pulse_operator(bwd, lab)
        table[-j] = lab
    return table


def walk_components(pp: ProtocolParams) -> list:
    """Raw (unnormalized) components of the n-pulse conditioned walk state.

    Component m carries coefficient binomial(n, m) * e^{i (n-2m) phi} on the
    label alpha_{n-2m}; the theta phases are tracked on the labels.
    """
    table = kick_labels(pp.l1, pp.l2, pp.alpha0, pp.n)
    out = []
    for m in range(pp.n + 1):
        j = pp.n - 2 * m
        coeff = comb(pp.n, m) * cmath.exp(1j * j * pp.phi)
        out.append((coeff, table[j]))
    return out


def walk_state(pp: ProtocolParams) -> SuperposedState:
    """Normalized conditioned state after n pulse pairs, all-ground record.

    Equals [e^{-i phi} O(-l1,-l2) + e^{+i phi} O(l1,l2)]^n |alpha0>, expanded
    binomially (the two kicks commute and are mutual inverses) and
    renormalized.  n = 0 returns |alpha0> itself.
    """
    return normalize(SuperposedState(tuple(walk_components(pp))))


def _cat_kick(label: CoherentLabel, l1: float, l2: float, sign: int) -> CoherentLabel:
    # One full cycle with the strong drive never switched off:
    # D(i s l1 e^{-i s l2 pi}) R(2 s l2 pi) D(i s l1); amplitude map
    # beta -> (beta + i s l1) e^{-2 i s l2 pi} + i s l1 e^{-i s l2 pi}.
    out = displace(label, 1j * sign * l1)
    out = rotate(out, 2.0 * sign * l2 * math.pi)
    return displace(out, 1j * sign * l1 * cmath.exp(-1j * sign * l2 * math.pi))


def cat_labels(l1: float, l2: float, n: int) -> tuple:
    """(plus, minus) labels after n cat cycles from the vacuum.

    plus runs the recursion with (l1, l2), minus with (-l1, -l2); for the
    vacuum start the two are conjugate mirrors of each other.
    """
    plus = CoherentLabel.vacuum()
    minus = CoherentLabel.vacuum()
    for _ in range(n):
        plus = _cat_kick(plus, l1, l2, +1)
        minus = _cat_kick(minus, l1, l2, -1)
    return plus, minus


def cat_state(pp: ProtocolParams) -> SuperposedState:
    """Two-component superposition after n uninterrupted drive cycles.

    K [ e^{-i phi'} |beta_{-n}> - e^{+i phi'} |beta_{+n}> ] with phi' = 2 n phi
    and the theta' phases tracked on the labels.  Requires n >= 1 and
    alpha0 = 0.  Raises DegenerateState when the two components cancel
    (e.g. l1 = l2 = 0 with phi' an integer multiple of pi).
    """
    if pp.n < 1:
        raise ValueError("cat protocol needs at least one cycle")
    if pp.alpha0 != 0:
        raise ValueError("cat protocol starts from the vacuum (alpha0 = 0)")
    plus, minus = cat_labels(pp.l1, pp.l2, pp.n)
    phi_c = (2.0 * pp.n * pp.phi) % TAU
    comps = (
        (cmath.exp(-1j * phi_c), minus),
        (-cmath.exp(1j * phi_c), plus),
    )
    return normalize(SuperposedState(comps))


def cat_success_probability(pp: ProtocolParams) -> float:
    """Probability of the single conditioning measurement of the cat protocol.

    The conditioned (unnormalized) state is
    [e^{-i phi'}|beta_{-n}> - e^{+i phi'}|beta_{+n}>] / 2, so the outcome
    probability is its squared norm.
    """
    if pp.n < 1:
        raise ValueError("cat protocol needs at least one cycle")
    plus, minus = cat_labels(pp.l1, pp.l2, pp.n)
    phi_c = 2.0 * pp.n * pp.phi
    raw = SuperposedState(
        (
            (0.5 * cmath.exp(-1j * phi_c), minus),
            (-0.5 * cmath.exp(1j * phi_c), plus),
        )
    )
    return norm_squared(raw)


@dataclass(frozen=True)
class JointState:
    """Oscillator branches attached to the two dressed qubit states.

    ``plus``/``minus`` are unnormalized superpositions whose squared norms
    sum to one; the ground qubit state decomposes as (|+> - |->)/sqrt(2),
    so a ground start puts +1/sqrt(2) on plus and -1/sqrt(2) on minus.
    """

    plus: SuperposedState
    minus: SuperposedState


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of projecting the qubit: outcome label, conditioned mode
    state (normalized), and the outcome probability."""

    qubit_state: str
    projected: SuperposedState
    probability: float


def initial_joint(alpha0: complex = 0j) -> JointState:
    """Joint state for a ground-state qubit and coherent mode |alpha0>."""
    lab = CoherentLabel(alpha0, 0.0)
    amp = 1.0 / math.sqrt(2.0)
    return JointState(
        plus=SuperposedState(((amp, lab),)),
        minus=SuperposedState(((-amp, lab),)),
    )


def embed_ground(state: SuperposedState) -> JointState:
    """Re-embed a conditioned mode state with the qubit back in the ground state."""
    amp = 1.0 / math.sqrt(2.0)
    return JointState(
        plus=SuperposedState(tuple((amp * c, lab) for c, lab in state.components)),
        minus=SuperposedState(tuple((-amp * c, lab) for c, lab in state.components)),
    )


def single_cycle(pp: ProtocolParams, joint: JointState) -> JointState:
    """Evolve one pulse pair before measurement.

    The upper dressed branch is kicked with O(-l1, -l2) and gains e^{-i phi};
    the lower branch is kicked with O(l1, l2) and gains e^{+i phi}.
    """
    minus_kick = PulseOperatorSpec(pp.l1, pp.l2, -1)
    plus_kick = PulseOperatorSpec(pp.l1, pp.l2, +1)
    ph = cmath.exp(1j * pp.phi)
    new_plus = tuple(
        (c * ph.conjugate(), apply_pulse_operator(minus_kick, lab))
        for c, lab in joint.plus.components
    )
    new_minus = tuple(
        (c * ph, apply_pulse_operator(plus_kick, lab))
        for c, lab in joint.minus.components
    )
    return JointState(SuperposedState(new_plus), SuperposedState(new_minus))


def project_qubit(joint: JointState, outcome: str = "ground") -> MeasurementOutcome:
    """Project the qubit onto |g> or |e> and condition the mode.

    Ground combines the branches as (plus - minus)/sqrt(2), excited as
    (plus + minus)/sqrt(2); together the outcome probabilities sum to one.
    Raises DegenerateState when the selected combination cancels.
    """
    if outcome not in ("ground", "excited"):
        raise ValueError("outcome must be 'ground' or 'excited'")
    sign = -1.0 if outcome == "ground" else 1.0
    amp = 1.0 / math.sqrt(2.0)
    comps = tuple((amp * c, lab) for c, lab in joint.plus.components) + tuple(
        (sign * amp * c, lab) for c, lab in joint.minus.components
    )
    raw = SuperposedState(comps)
    prob = norm_squared(raw)
    if prob <= 1e-14:
        raise DegenerateState(f"outcome '{outcome}' has probability {prob:.3e}")
    return MeasurementOutcome(outcome, normalize(raw), prob)


def run_conditioned_walk(pp: ProtocolParams):
    """Run n cycles, conditioning on the ground outcome after each.

    Returns (final state, record probability, per-cycle probabilities).
    The final state reproduces :func:`walk_state` exactly; the probability
    of actually observing the all-ground record is the product of the
    per-cycle ground probabilities.
    """
    joint = initial_joint(pp.alpha0)
    probs = []
    state = None
    for _ in range(pp.n):
        joint = single_cycle(pp, joint)
        out = project_qubit(joint, "ground")
        probs.append(out.probability)
        state = out.projected
        joint = embed_ground(state)
    if state is None:  # n = 0
        state = normalize(SuperposedState(((1.0, CoherentLabel(pp.alpha0)),)))
    return state, math.prod(probs) if probs else 1.0, probs
