"""The two-path apparatus with agents Alice and Bob and an external observer Eve.

Two descriptions are used side by side. In the *position* picture each
system is a qubit recording which path it takes: ``A|E, B|E`` for Eve and
the relative qubit ``B|A`` for Alice (``0`` = same path). In the *mode*
picture every path carries one two-level occupation mode per system, and
only the states with one excitation per system are physical.

Conventions: controls fire on ``occ``; registers start in ``|0>``; a
register reading ``1`` is the ``+`` outcome of a momentum measurement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .circuits import GATES, Circuit, Gate, cnot, gate, wire_marginal
from .errors import DimMismatch, TheoremViolation
from .linalg import DEFAULT_TOL, ComplexMatrix, Tolerance, dagger, max_abs, permute_subsystems

ALICE = "alice"
EVE = "eve"
POSITION = "position"
MODES = "modes"

X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)


# --- mode spaces ---------------------------------------------------------------


@dataclass(frozen=True)
class ModeSpace:
    """Occupation modes with a sectorially correlated allowed subspace.

    ``allowed[k]`` is the occupation pattern (one bit per mode, 1 = occ) that
    the ``k``-th kinematical basis state is identified with.
    """

    modes: tuple[str, ...]
    allowed: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.allowed)) != len(self.allowed):
            raise ValueError("allowed states must be distinct")
        if any(len(s) != len(self.modes) for s in self.allowed):
            raise ValueError("occupation pattern length must match mode count")

    @property
    def full_dim(self) -> int:
        return 2 ** len(self.modes)

    def pattern_index(self, bits) -> int:
        idx = 0
        for b in bits:
            idx = 2 * idx + int(b)
        return idx

    @property
    def embed(self) -> np.ndarray:
        """Isometry from the kinematical space onto the allowed subspace."""
        e = np.zeros((self.full_dim, len(self.allowed)), dtype=np.complex128)
        for k, bits in enumerate(self.allowed):
            e[self.pattern_index(bits), k] = 1
        return e

    @property
    def restrict(self) -> np.ndarray:
        return dagger(self.embed)

    @property
    def allowed_projector(self) -> np.ndarray:
        e = self.embed
        return e @ dagger(e)

    def embed_state(self, psi: np.ndarray) -> np.ndarray:
        return self.embed @ np.asarray(psi, dtype=np.complex128)

    def embed_operator(self, u: ComplexMatrix) -> ComplexMatrix:
        """``E u E^dagger``, extended by the identity on the disallowed complement."""
        e = self.embed
        return e @ u @ dagger(e) + (np.eye(self.full_dim) - e @ dagger(e))


def build_apparatus() -> ModeSpace:
    """Eve's four modes with the two-excitation sector; kinematical order ``|a b>``."""
    allowed = []
    labels = []
    for a, b in product((0, 1), repeat=2):
        # A_0, A_1, B_0, B_1
        allowed.append((int(a == 0), int(a == 1), int(b == 0), int(b == 1)))
        labels.append(f"{a}{b}")
    return ModeSpace(("A0", "A1", "B0", "B1"), tuple(allowed), tuple(labels))


def alice_modes() -> ModeSpace:
    """Alice's two modes: Bob in her path (``A``) or in the other one (``Abar``)."""
    return ModeSpace(("A", "Abar"), ((1, 0), (0, 1)), ("same", "other"))


def beam_splitter() -> ComplexMatrix:
    """Two-mode beam splitter; identity on the empty and doubly occupied states."""
    return GATES["BS"].copy()


# --- routes ---------------------------------------------------------------------


@dataclass(frozen=True)
class Route:
    """Permitted (input sector, output sector) pairs for a linear map."""

    pairs: tuple[tuple[np.ndarray, np.ndarray], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.pairs[0][0].shape[0]

    @property
    def input_support(self) -> np.ndarray:
        return sum(p for p, _ in self.pairs)

    @property
    def output_support(self) -> np.ndarray:
        return sum(q for _, q in self.pairs)


def delta_route(projectors) -> Route:
    """Each sector must be mapped into itself."""
    return Route(tuple((p, p) for p in projectors))


def route_residual(u: ComplexMatrix, route: Route) -> float:
    """Largest amplitude that ``u`` sends outside what ``route`` permits.

    Covers: each declared input sector into its paired output; the declared
    support into the complement of the outputs; and the complement of the
    declared support into the outputs.
    """
    if u.shape[0] != route.dim:
        raise DimMismatch(f"map dim {u.shape[0]} != route dim {route.dim}")
    eye = np.eye(route.dim)
    worst = 0.0
    for p_in, p_out in route.pairs:
        worst = max(worst, max_abs((eye - p_out) @ u @ p_in))
    p, q = route.input_support, route.output_support
    worst = max(worst, max_abs((eye - q) @ u @ p), max_abs(q @ u @ (eye - p)))
    return worst


def route_compliant(u: ComplexMatrix, route: Route, tol: Tolerance = DEFAULT_TOL) -> bool:
    return route_residual(u, route) < tol.eq_tol


def apparatus_route(wires: tuple[str, ...]) -> Route:
    """Sectorial constraint on a circuit's wires: one excitation per system.

    Wires named ``A0, A1`` (Eve) or ``A, Abar`` (Alice) and ``B0, B1`` are mode
    wires; any other wire, registers included, is unconstrained.
    """
    groups = [g for g in (("A0", "A1"), ("B0", "B1"), ("A", "Abar")) if all(w in wires for w in g)]
    if not groups:
        raise ValueError("no mode wires in circuit")
    diag = np.zeros(2 ** len(wires))
    for idx, bits in enumerate(product((0, 1), repeat=len(wires))):
        val = dict(zip(wires, bits))
        diag[idx] = all(sum(val[w] for w in g) == 1 for g in groups)
    p = np.diag(diag).astype(np.complex128)
    return Route(((p, p),))


# --- circuits -------------------------------------------------------------------


def _check_picture(picture: str, basis: str):
    if picture not in (ALICE, EVE):
        raise ValueError(f"picture must be {ALICE!r} or {EVE!r}")
    if basis not in (POSITION, MODES):
        raise ValueError(f"basis must be {POSITION!r} or {MODES!r}")


def _write_same_path_position() -> tuple[Gate, ...]:
    # reg ^= [a == b]
    return (cnot("B|E", "reg", polarity=0), cnot("A|E", "reg", polarity=1))


def _write_same_path_modes() -> tuple[Gate, ...]:
    return (
        gate("X", "reg0", controls=("A0", "B0")),
        gate("X", "reg1", controls=("A1", "B1")),
    )


def alice_position_circuit(picture: str = ALICE, basis: str = POSITION) -> Circuit:
    """Alice writes 1 in her register when Bob is in her path."""
    _check_picture(picture, basis)
    if picture == ALICE and basis == POSITION:
        return Circuit(("reg", "B|A"), (cnot("B|A", "reg", polarity=0),), "alice position / alice")
    if picture == ALICE:
        return Circuit(("reg", "A", "Abar"), (cnot("A", "reg"),), "alice position / alice modes")
    if basis == POSITION:
        return Circuit(("reg", "A|E", "B|E"), _write_same_path_position(), "alice position / eve")
    return Circuit(("reg0", "A0", "B0", "reg1", "A1", "B1"), _write_same_path_modes(), "alice position / eve modes")


def _frame_hadamard_position() -> tuple[Gate, ...]:
    # Hadamard on B oriented by Alice's path: CX(A->B) H_B CX(A->B)
    return (cnot("A|E", "B|E"), gate("H", "B|E"), cnot("A|E", "B|E"))


def _frame_beam_splitter_modes() -> tuple[Gate, ...]:
    cswap = gate("SWAP", "B0", "B1", controls=("A1",))
    return (cswap, gate("BS", "B0", "B1"), cswap)


def alice_momentum_circuit(picture: str = ALICE, basis: str = POSITION) -> Circuit:
    """Alice's interference measurement of Bob's momentum.

    Alice: beam splitter, same-path write, beam splitter. Eve: the same with
    every beam splitter oriented by Alice's path through a controlled swap
    and the write split over the two per-path registers.
    """
    _check_picture(picture, basis)
    if picture == ALICE and basis == POSITION:
        gates = (gate("H", "B|A"), cnot("B|A", "reg", polarity=0), gate("H", "B|A"))
        return Circuit(("reg", "B|A"), gates, "alice momentum / alice")
    if picture == ALICE:
        bs = gate("BS", "A", "Abar")
        return Circuit(("reg", "A", "Abar"), (bs, cnot("A", "reg"), bs), "alice momentum / alice modes")
    if basis == POSITION:
        h = _frame_hadamard_position()
        return Circuit(("reg", "A|E", "B|E"), h + _write_same_path_position() + h, "alice momentum / eve")
    bs = _frame_beam_splitter_modes()
    return Circuit(
        ("reg0", "A0", "B0", "reg1", "A1", "B1"), bs + _write_same_path_modes() + bs, "alice momentum / eve modes"
    )


def momentum_comparison_circuits(convention: str = "same_path") -> tuple[Circuit, Circuit]:
    """Eve's position-basis momentum circuit and the bare ``H, write, H`` on ``B|E``.

    ``convention="same_path"`` uses the register convention of this module
    (write fires when both systems share a path). ``"drawn"`` uses plain
    ``|1>`` controls throughout, so the register fires on the opposite path.
    """
    wires = ("reg", "A|E", "B|E")
    if convention == "same_path":
        pol_b = 0
    elif convention == "drawn":
        pol_b = 1
    else:
        raise ValueError("convention must be 'same_path' or 'drawn'")
    h = _frame_hadamard_position()
    write = (cnot("B|E", "reg", polarity=pol_b), cnot("A|E", "reg", polarity=1))
    eve = Circuit(wires, h + write + h, f"eve momentum ({convention})")
    bare = Circuit(
        wires, (gate("H", "B|E"), cnot("B|E", "reg", polarity=pol_b), gate("H", "B|E")), f"X on B|E ({convention})"
    )
    return eve, bare


# --- isomorphisms between pictures ------------------------------------------------


def relative_position_change() -> np.ndarray:
    """``|a, b> -> |a, a xor b>``: Eve's positions to (Alice's path, ``B|A``)."""
    return Circuit(("A|E", "B|E"), (cnot("A|E", "B|E"),)).unitary


def lift_alice(u_alice: ComplexMatrix) -> ComplexMatrix:
    """Eve's description of a (register, ``B|A``) operation performed by Alice.

    The operation acts on ``B|A = A|E xor B|E``, whatever Alice's path is.
    Result acts on (reg, ``A|E``, ``B|E``).
    """
    s = np.kron(I2, relative_position_change())
    # reorder (reg, B|A) x A  ->  (reg, A, B|A)
    u = np.kron(u_alice, I2).reshape([2] * 6).transpose(0, 2, 1, 3, 5, 4).reshape(8, 8)
    return dagger(s) @ u @ s


def eve_register_embedding() -> np.ndarray:
    """Isometry (reg, ``A|E``, ``B|E``) -> (reg0, A0, B0, reg1, A1, B1).

    Alice's register is localized with her: value ``r`` on path ``a`` becomes
    ``reg_a = r`` with the other register mode empty.
    """
    out = Circuit(("reg0", "A0", "B0", "reg1", "A1", "B1"))
    e = np.zeros((64, 8), dtype=np.complex128)
    for col, (r, a, b) in enumerate(product((0, 1), repeat=3)):
        bits = {f"A{a}": 1, f"B{b}": 1, f"reg{a}": r}
        e[:, col] = out.basis_state(**bits)
    return e


def alice_register_embedding() -> np.ndarray:
    """Isometry (reg, ``B|A``) -> (reg, A, Abar)."""
    return np.kron(I2, alice_modes().embed)


def push_through(u: ComplexMatrix, embedding: np.ndarray) -> ComplexMatrix:
    """``E u E^dagger`` plus the identity on the complement of the image."""
    big = embedding.shape[0]
    return embedding @ u @ dagger(embedding) + (np.eye(big) - embedding @ dagger(embedding))


# --- measurement readout ---------------------------------------------------------


def measured_observable(u: ComplexMatrix, n_system_wires: int, reg_wires: int = 1, values=(-1.0, 1.0)) -> ComplexMatrix:
    """Observable measured by writing into register wires in front of the system.

    The register (outermost ``reg_wires`` wires) starts in ``|0...0>``; the
    readout value is ``values[1]`` when any register wire reads 1 and
    ``values[0]`` otherwise. Returns ``V^dagger (sum_r v_r |r><r| (x) I) V``
    with ``V = u (|0> (x) I)``.
    """
    ds = 2**n_system_wires
    dr = 2**reg_wires
    v = u[:, :ds] if reg_wires else u
    weights = np.full(dr, values[1])
    weights[0] = values[0]
    readout = np.kron(np.diag(weights), np.eye(ds))
    return dagger(v) @ readout @ v


def register_distribution(u: ComplexMatrix, psi: np.ndarray, n_system_wires: int, reg_wires: int = 1) -> np.ndarray:
    """Probabilities of (nothing written, something written) for system input ``psi``."""
    ds = 2**n_system_wires
    full = np.zeros(u.shape[0], dtype=np.complex128)
    full[:ds] = psi
    out = (u @ full).reshape(2**reg_wires, ds)
    probs = np.sum(np.abs(out) ** 2, axis=1)
    return np.array([probs[0], probs[1:].sum()])


# --- the main check -------------------------------------------------------------


@dataclass
class TheoremReport:
    deviation: float
    observable: ComplexMatrix = field(repr=False)
    observable_deviation: float
    tolerance: float
    passed: bool
    convention: str

    def to_dict(self) -> dict:
        return {
            "convention": self.convention,
            "max_entry_deviation": round(self.deviation, 15),
            "observable": "I (x) X on (A|E, B|E)" if self.observable_deviation < self.tolerance else "unexpected",
            "observable_deviation": round(self.observable_deviation, 15),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def verify_theorem1(
    tol: Tolerance = DEFAULT_TOL, convention: str = "same_path", corrupt: bool = False, raise_on_fail: bool = True
) -> TheoremReport:
    """Compile Eve's and the bare circuit and compare them entrywise.

    ``corrupt`` drops one gate from Eve's circuit; it exists as a negative
    control for tests.

    Raises:
        TheoremViolation: if the circuits differ by ``tol.eq_tol`` or more and
            ``raise_on_fail`` is set.
    """
    eve, bare = momentum_comparison_circuits(convention)
    if corrupt:
        eve = eve.without_gate(len(eve.gates) - 1)
    u_eve, u_bare = eve.unitary, bare.unitary
    dev = max_abs(u_eve - u_bare)
    values = (-1.0, 1.0) if convention == "same_path" else (1.0, -1.0)
    obs = measured_observable(u_bare, 2, values=values)
    obs_dev = max_abs(obs - np.kron(I2, X))
    obs_eve_dev = max_abs(measured_observable(u_eve, 2, values=values) - np.kron(I2, X))
    passed = dev < tol.eq_tol and obs_dev < tol.eq_tol and obs_eve_dev < tol.eq_tol
    report = TheoremReport(dev, obs, max(obs_dev, obs_eve_dev), tol.eq_tol, passed, convention)
    if raise_on_fail and not passed:
        raise TheoremViolation(f"circuits differ: deviation {dev:.3e}, observable deviation {obs_dev:.3e}")
    return report


def scenario_circuits() -> list[Circuit]:
    out = []
    for picture, basis in product((ALICE, EVE), (POSITION, MODES)):
        out.append(alice_position_circuit(picture, basis))
        out.append(alice_momentum_circuit(picture, basis))
    out.extend(momentum_comparison_circuits("same_path"))
    out.extend(momentum_comparison_circuits("drawn"))
    return out


def mode_picture_unitary(c: Circuit) -> tuple[ComplexMatrix, tuple[str, ...]]:
    """A circuit's unitary on mode wires, pushing position-basis circuits through the isomorphisms."""
    if "B|A" in c.wires:
        return push_through(c.unitary, alice_register_embedding()), ("reg", "A", "Abar")
    if "B|E" in c.wires:
        return push_through(c.unitary, eve_register_embedding()), ("reg0", "A0", "B0", "reg1", "A1", "B1")
    return c.unitary, c.wires


def probe_circuit() -> Circuit:
    """Eve reads Alice's delocalized register by controlled writes from each path register."""
    wires = ("reg0", "A0", "B0", "reg1", "A1", "B1", "eve")
    return Circuit(wires, (cnot("reg0", "eve"), cnot("reg1", "eve")), "eve probe")


def alice_superposition_projector(wires: tuple[str, ...]) -> np.ndarray:
    """Projector onto Alice in ``(|occ vac> + |vac occ>)/sqrt2`` on (A0, A1), identity elsewhere."""
    psi = np.array([0, 1, 1, 0], dtype=np.complex128) / np.sqrt(2)
    local = np.outer(psi, psi.conj())
    rest = [w for w in wires if w not in ("A0", "A1")]
    full = np.kron(local, np.eye(2 ** len(rest)))
    order = ["A0", "A1"] + rest
    perm = [order.index(w) for w in wires]
    return permute_subsystems(full, [2] * len(wires), perm)


def probe_commutator() -> float:
    """Largest entry of ``[probe, P]`` with ``P`` Alice's path superposition."""
    c = probe_circuit()
    p = alice_superposition_projector(c.wires)
    u = c.unitary
    return max_abs(u @ p - p @ u)


def cross_picture_deviations() -> dict[str, float]:
    """How far each circuit pair is from agreeing under the picture isomorphisms.

    ``alice_vs_eve``: Alice's operation lifted to Eve's positions against
    Eve's position circuit. ``eve_modes``: Eve's mode circuit against her
    position circuit pushed through the register embedding. ``alice_modes``:
    the same for Alice.
    """
    e_eve, e_alice = eve_register_embedding(), alice_register_embedding()
    out = {}
    for label, build in (("position", alice_position_circuit), ("momentum", alice_momentum_circuit)):
        ua = build(ALICE, POSITION).unitary
        ue = build(EVE, POSITION).unitary
        out[f"{label}/alice_vs_eve"] = max_abs(lift_alice(ua) - ue)
        out[f"{label}/eve_modes"] = max_abs(build(EVE, MODES).unitary @ e_eve - e_eve @ ue)
        out[f"{label}/alice_modes"] = max_abs(build(ALICE, MODES).unitary @ e_alice - e_alice @ ua)
    return out


def outcome_statistics(psi: np.ndarray, measurement: str = "momentum") -> dict[str, np.ndarray]:
    """Register distribution for a kinematical input ``psi`` on (``A|E``, ``B|E``) in every picture.

    Alice's pictures receive ``psi`` rewritten in relative coordinates.
    """
    build = alice_momentum_circuit if measurement == "momentum" else alice_position_circuit
    psi = np.asarray(psi, dtype=np.complex128)
    rel = relative_position_change() @ psi  # (A|E, B|A)
    out = {"eve/position": register_distribution(build(EVE, POSITION).unitary, psi, 2)}
    rel_m = rel.reshape(2, 2)
    # Alice's circuit ignores her own path, so average over it
    alice = build(ALICE, POSITION).unitary
    out["alice/position"] = sum(register_distribution(alice, rel_m[a], 1) for a in range(2))
    modes = build(EVE, MODES)
    state = modes.unitary @ eve_register_embedding() @ np.concatenate([psi, np.zeros(4)])
    marg = wire_marginal(state, modes.wires, ["reg0", "reg1"])
    out["eve/modes"] = np.array([marg[(0, 0)], 1 - marg[(0, 0)]])
    return out
