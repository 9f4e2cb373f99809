"""Small named-wire circuits compiled to dense unitaries.

Wire 0 is the outermost tensor factor. Every wire is two-level; for mode
wires ``|1>`` is ``occ`` and ``|0>`` is ``vac``. A control with polarity 1
fires on ``|1>``, with polarity 0 on ``|0>``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import ComplexMatrix, permute_subsystems

_S2 = 1 / np.sqrt(2)

GATES: dict[str, np.ndarray] = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "H": _S2 * np.array([[1, 1], [1, -1]], dtype=np.complex128),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128),
    # Two-mode beam splitter: Hadamard on span{|10>, |01>}, identity on |00> and |11>.
    "BS": np.array(
        [[1, 0, 0, 0], [0, -_S2, _S2, 0], [0, _S2, _S2, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
}


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[str, ...]
    controls: tuple[str, ...] = ()
    polarity: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in GATES:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        n_t = int(np.log2(GATES[self.kind].shape[0]))
        if len(self.targets) != n_t:
            raise ValueError(f"{self.kind} acts on {n_t} wire(s), got {self.targets}")
        pol = self.polarity or (1,) * len(self.controls)
        if len(pol) != len(self.controls) or any(p not in (0, 1) for p in pol):
            raise ValueError("polarity must give 0 or 1 for each control")
        object.__setattr__(self, "polarity", tuple(pol))
        if len(set(self.targets + self.controls)) != len(self.targets) + len(self.controls):
            raise ValueError("a wire appears twice in one gate")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "targets": list(self.targets),
            "controls": list(self.controls),
            "polarity": list(self.polarity),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Gate":
        return cls(d["kind"], tuple(d["targets"]), tuple(d.get("controls", ())), tuple(d.get("polarity", ())))


def gate(kind: str, *targets: str, controls=(), polarity=()) -> Gate:
    return Gate(kind, tuple(targets), tuple(controls), tuple(polarity))


def cnot(control: str, target: str, polarity: int = 1) -> Gate:
    return Gate("X", (target,), (control,), (polarity,))


@dataclass(frozen=True)
class Circuit:
    wires: tuple[str, ...]
    gates: tuple[Gate, ...] = field(default=())
    name: str = ""

    def __post_init__(self):
        if len(set(self.wires)) != len(self.wires):
            raise ValueError("duplicate wire names")
        known = set(self.wires)
        for g in self.gates:
            missing = set(g.targets + g.controls) - known
            if missing:
                raise ValueError(f"gate {g.kind} references unknown wires {sorted(missing)}")

    @property
    def dim(self) -> int:
        return 2 ** len(self.wires)

    def index(self, wire: str) -> int:
        return self.wires.index(wire)

    def gate_unitary(self, g: Gate) -> ComplexMatrix:
        """Full-register unitary of one gate."""
        n = len(self.wires)
        local_wires = list(g.controls) + list(g.targets)
        nc, nt = len(g.controls), len(g.targets)
        fire = np.ones(1)
        for p in g.polarity:
            fire = np.kron(fire, np.array([1 - p, p], dtype=float))
        fire = np.diag(fire)
        u = GATES[g.kind]
        local = np.kron(fire, u) + np.kron(np.eye(2**nc) - fire, np.eye(2**nt))
        rest = [w for w in self.wires if w not in local_wires]
        full = np.kron(local, np.eye(2 ** len(rest)))
        order = local_wires + rest
        perm = [order.index(w) for w in self.wires]
        return permute_subsystems(full, [2] * n, perm)

    @cached_property
    def unitary(self) -> ComplexMatrix:
        out = np.eye(self.dim, dtype=np.complex128)
        for g in self.gates:
            out = self.gate_unitary(g) @ out
        return out

    def then(self, other: "Circuit") -> "Circuit":
        if other.wires != self.wires:
            raise ValueError("circuits act on different wires")
        return Circuit(self.wires, self.gates + other.gates, self.name)

    def without_gate(self, i: int) -> "Circuit":
        gates = list(self.gates)
        del gates[i]
        return Circuit(self.wires, tuple(gates), self.name + " (faulty)")

    def basis_state(self, **bits: int) -> np.ndarray:
        """Computational basis vector; unnamed wires are ``|0>``."""
        unknown = set(bits) - set(self.wires)
        if unknown:
            raise ValueError(f"unknown wires {sorted(unknown)}")
        idx = 0
        for w in self.wires:
            idx = 2 * idx + int(bits.get(w, 0))
        v = np.zeros(self.dim, dtype=np.complex128)
        v[idx] = 1
        return v

    def to_dict(self) -> dict:
        return {"name": self.name, "wires": list(self.wires), "gates": [g.to_dict() for g in self.gates]}

    @classmethod
    def from_dict(cls, d: dict) -> "Circuit":
        return cls(tuple(d["wires"]), tuple(Gate.from_dict(g) for g in d["gates"]), d.get("name", ""))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def wire_marginal(state: np.ndarray, wires: tuple[str, ...], keep: list[str]) -> dict[tuple[int, ...], float]:
    """Outcome distribution of the computational-basis readout of ``keep``."""
    probs = np.abs(state.reshape([2] * len(wires))) ** 2
    axes = tuple(i for i, w in enumerate(wires) if w not in keep)
    marg = probs.sum(axis=axes)
    order = [w for w in wires if w in keep]
    marg = np.transpose(marg, [order.index(w) for w in keep])
    out = {}
    for idx in np.ndindex(*marg.shape):
        out[idx] = float(marg[idx])
    return out
