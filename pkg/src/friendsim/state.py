"""Registers, product-term state vectors, bases, events and probabilities.

A system is an ordered list of finite registers.  A state is a sparse map from
full assignments (one label per register, in register order) to exact
:class:`~friendsim.scalar.RadicalScalar` amplitudes.  Registers that have not
been written yet sit at their ``ready`` label, so the dimension of the system
never changes during a run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    NonMonomialDivision,
    NonUnitInit,
    NotMonomial,
    StateError,
    SystemMismatch,
    ZeroCondition,
)
from .scalar import ONE, ZERO, RadicalScalar, as_scalar

__all__ = [
    "RegisterSpec",
    "SystemSpec",
    "StateVector",
    "BasisVector",
    "Basis",
    "BasisError",
    "LabelAtom",
    "BasisAtom",
    "Event",
    "Decomposition",
    "build_initial",
    "inner_product",
    "norm_squared",
    "probability",
    "conditional_probability",
    "project",
    "decompose",
    "embed",
    "render_state",
]


class BasisError(StateError, ValueError):
    """A basis or basis vector violates orthonormality or shape rules."""


# ---------------------------------------------------------------------------
# Registers and systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegisterSpec:
    name: str
    labels: tuple[str, ...]
    ready_label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError(f"register {self.name!r} has no labels")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"register {self.name!r} has duplicate labels")
        if self.ready_label is not None and self.ready_label not in self.labels:
            raise ValueError(
                f"ready label {self.ready_label!r} of {self.name!r} is not one of its labels"
            )


@dataclass(frozen=True)
class SystemSpec:
    registers: tuple[RegisterSpec, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        regs = tuple(self.registers)
        object.__setattr__(self, "registers", regs)
        index = {}
        for i, reg in enumerate(regs):
            if reg.name in index:
                raise ValueError(f"duplicate register {reg.name!r}")
            index[reg.name] = i
        object.__setattr__(self, "_index", index)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    def __contains__(self, name):
        return name in self._index

    def __len__(self):
        return len(self.registers)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SystemMismatch(f"unknown register {name!r}") from None

    def register(self, name: str) -> RegisterSpec:
        return self.registers[self.index(name)]

    def complement(self, names: Iterable[str]) -> "SystemSpec":
        drop = set(names)
        return SystemSpec(tuple(r for r in self.registers if r.name not in drop))

    def assignment(self, labels: Mapping[str, str]) -> tuple[str, ...]:
        """Full assignment tuple from a mapping; missing registers take their ready label."""
        unknown = set(labels) - set(self._index)
        if unknown:
            raise SystemMismatch(f"unknown registers {sorted(unknown)}")
        out = []
        for reg in self.registers:
            lab = labels.get(reg.name, reg.ready_label)
            if lab is None:
                raise StateError(f"register {reg.name!r} needs a label (no ready label)")
            if lab not in reg.labels:
                raise StateError(f"{lab!r} is not a label of register {reg.name!r}")
            out.append(lab)
        return tuple(out)


# ---------------------------------------------------------------------------
# State vectors
# ---------------------------------------------------------------------------

class StateVector:
    """Immutable sparse superposition of product terms over a fixed system."""

    __slots__ = ("system", "_terms")

    def __init__(self, system: SystemSpec, terms=()):
        self.system = system
        merged: dict[tuple[str, ...], RadicalScalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        n = len(system)
        for assignment, coeff in items:
            assignment = tuple(assignment)
            if len(assignment) != n:
                raise SystemMismatch(
                    f"assignment {assignment} does not cover the {n} registers"
                )
            coeff = coeff if isinstance(coeff, RadicalScalar) else as_scalar(coeff)
            merged[assignment] = merged.get(assignment, ZERO) + coeff
        self._terms = {a: c for a, c in merged.items() if c}

    @classmethod
    def ket(cls, system: SystemSpec, coeff=ONE, **labels) -> "StateVector":
        return cls(system, [(system.assignment(labels), coeff)])

    @property
    def terms(self) -> dict[tuple[str, ...], RadicalScalar]:
        return dict(self._terms)

    def items(self):
        """Terms sorted by assignment (stable, golden-file friendly)."""
        return sorted(self._terms.items())

    def coefficient(self, assignment) -> RadicalScalar:
        if isinstance(assignment, Mapping):
            assignment = self.system.assignment(assignment)
        return self._terms.get(tuple(assignment), ZERO)

    def labelled_terms(self):
        names = self.system.names
        for a, c in self.items():
            yield dict(zip(names, a)), c

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.system == other.system and self._terms == other._terms

    __hash__ = None

    def _check(self, other):
        if not isinstance(other, StateVector):
            raise TypeError(f"expected StateVector, got {type(other).__name__}")
        if other.system != self.system:
            raise SystemMismatch("states live on different systems")

    def __add__(self, other):
        self._check(other)
        return StateVector(self.system, list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return StateVector(self.system, {a: -c for a, c in self._terms.items()})

    def scale(self, s) -> "StateVector":
        s = s if isinstance(s, RadicalScalar) else as_scalar(s)
        return StateVector(self.system, {a: c * s for a, c in self._terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def relabel(self, register: str, label: str) -> "StateVector":
        """Copy with ``register`` set to ``label`` in every term."""
        i = self.system.index(register)
        if label not in self.system.registers[i].labels:
            raise StateError(f"{label!r} is not a label of register {register!r}")
        return StateVector(
            self.system, [(a[:i] + (label,) + a[i + 1:], c) for a, c in self._terms.items()]
        )

    def __repr__(self):
        return f"<StateVector {len(self._terms)} terms over {self.system.names}>"

    def __str__(self):
        return render_state(self)


def render_state(state: StateVector, float_echo: bool = False) -> str:
    """One ``coeff · |label,…⟩`` line per term, sorted by assignment."""
    if not state:
        return "0"
    lines = []
    for a, c in state.items():
        line = f"{c} · |{','.join(a)}⟩"
        if float_echo:
            line += f"  ({float(c):.12g})"
        lines.append(line)
    return "\n".join(lines)


def norm_squared(state: StateVector) -> RadicalScalar:
    total = ZERO
    for c in state._terms.values():
        total = total + c * c
    return total


def inner_product(a: StateVector, b: StateVector) -> RadicalScalar:
    """Real inner product; no conjugation since every amplitude is real."""
    if a.system != b.system:
        raise SystemMismatch("inner product of states on different systems")
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    total = ZERO
    for assignment, c in small._terms.items():
        d = big._terms.get(assignment)
        if d is not None:
            total = total + c * d
    return total


# ---------------------------------------------------------------------------
# Bases
# ---------------------------------------------------------------------------

def _combine(components):
    merged: dict[tuple[str, ...], RadicalScalar] = {}
    for labels, c in components:
        c = c if isinstance(c, RadicalScalar) else as_scalar(c)
        merged[tuple(labels)] = merged.get(tuple(labels), ZERO) + c
    return tuple((k, v) for k, v in merged.items() if v)


@dataclass(frozen=True)
class BasisVector:
    """Named unit vector over an ordered list of registers.

    ``components`` pairs label tuples with amplitudes, e.g. the pair
    ``(("h", "h"), 1/sqrt(2))``.
    """

    name: str
    subsystems: tuple[str, ...]
    components: tuple[tuple[tuple[str, ...], RadicalScalar], ...]

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        comps = tuple((tuple(t), c if isinstance(c, RadicalScalar) else as_scalar(c))
                      for t, c in self.components)
        labels = [t for t, _ in comps]
        if len(set(labels)) != len(labels):
            raise BasisError(f"basis vector {self.name!r} repeats a label tuple")
        for t in labels:
            if len(t) != len(self.subsystems):
                raise BasisError(
                    f"basis vector {self.name!r}: {t} does not match subsystems {self.subsystems}"
                )
        object.__setattr__(self, "components", tuple((t, c) for t, c in comps if c))
        if self.norm_squared() != 1:
            raise BasisError(
                f"basis vector {self.name!r} has squared norm {self.norm_squared()}, not 1"
            )

    def norm_squared(self) -> RadicalScalar:
        total = ZERO
        for _, c in self.components:
            total = total + c * c
        return total

    def amplitude(self, labels) -> RadicalScalar:
        for t, c in self.components:
            if t == tuple(labels):
                return c
        return ZERO

    def dot(self, other: "BasisVector") -> RadicalScalar:
        mine = dict(self.components)
        total = ZERO
        for t, c in other.components:
            if t in mine:
                total = total + mine[t] * c
        return total


@dataclass(frozen=True)
class Basis:
    """Orthonormal set of named vectors over ``subsystems``.

    The vectors need not span the whole subsystem space; callers that need a
    complete decomposition check the residual of :func:`decompose`.
    """

    name: str
    subsystems: tuple[str, ...]
    vectors: tuple[BasisVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))
        object.__setattr__(self, "vectors", tuple(self.vectors))
        if len(set(self.subsystems)) != len(self.subsystems):
            raise BasisError(f"basis {self.name!r} lists a subsystem twice")
        if not self.vectors:
            raise BasisError(f"basis {self.name!r} has no vectors")
        names = [v.name for v in self.vectors]
        if len(set(names)) != len(names):
            raise BasisError(f"basis {self.name!r} has duplicate vector names")
        for v in self.vectors:
            if v.subsystems != self.subsystems:
                raise BasisError(f"vector {v.name!r} is not over {self.subsystems}")
        for i, u in enumerate(self.vectors):
            for v in self.vectors[i + 1:]:
                ip = u.dot(v)
                if ip:
                    raise BasisError(
                        f"basis {self.name!r}: <{u.name}|{v.name}> = {ip}, not orthogonal"
                    )

    @classmethod
    def from_dict(cls, name, subsystems, vectors: Mapping[str, Iterable]) -> "Basis":
        """``vectors`` maps a vector name to ``[(label_tuple, amplitude), ...]``."""
        subsystems = tuple(subsystems)
        return cls(name, subsystems,
                   tuple(BasisVector(vn, subsystems, _combine(comps))
                         for vn, comps in vectors.items()))

    @classmethod
    def computational(cls, register: RegisterSpec) -> "Basis":
        """One vector per non-ready label of ``register``, named after the label."""
        labels = [lab for lab in register.labels if lab != register.ready_label]
        return cls(register.name, (register.name,),
                   tuple(BasisVector(lab, (register.name,), (((lab,), ONE),)) for lab in labels))

    @property
    def vector_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vectors)

    def vector(self, name: str) -> BasisVector:
        for v in self.vectors:
            if v.name == name:
                return v
        raise KeyError(f"basis {self.name!r} has no vector {name!r}")


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """``state == sum(embed(vector, branch)) + residual``.

    Branches live on the complement of the basis subsystems; the residual
    lives on the full system.
    """

    basis: Basis
    branches: tuple[tuple[str, StateVector], ...]
    residual: StateVector

    def branch(self, name: str) -> StateVector:
        return dict(self.branches)[name]

    def reconstruct(self) -> StateVector:
        out = self.residual
        for name, br in self.branches:
            out = out + embed(self.basis.vector(name), br, self.residual.system)
        return out


def _split_positions(system: SystemSpec, subsystems: Sequence[str]):
    sub_idx = [system.index(n) for n in subsystems]
    sub_set = set(sub_idx)
    rest_idx = [i for i in range(len(system)) if i not in sub_set]
    return sub_idx, rest_idx


def embed(vector: BasisVector, branch: StateVector, system: SystemSpec) -> StateVector:
    """Tensor ``vector`` (over its subsystems) with ``branch`` (over the rest)."""
    sub_idx, rest_idx = _split_positions(system, vector.subsystems)
    if branch.system != system.complement(vector.subsystems):
        raise SystemMismatch("branch does not live on the complement of the vector's subsystems")
    n = len(system)
    terms = []
    for labels, a in vector.components:
        for rest, b in branch._terms.items():
            full = [None] * n
            for i, lab in zip(sub_idx, labels):
                full[i] = lab
            for i, lab in zip(rest_idx, rest):
                full[i] = lab
            terms.append((tuple(full), a * b))
    return StateVector(system, terms)


def decompose(state: StateVector, basis: Basis) -> Decomposition:
    system = state.system
    sub_idx, rest_idx = _split_positions(system, basis.subsystems)
    rest_system = system.complement(basis.subsystems)
    # group amplitudes by (subsystem labels, rest labels)
    grouped: dict[tuple[str, ...], dict[tuple[str, ...], RadicalScalar]] = {}
    for a, c in state._terms.items():
        sub = tuple(a[i] for i in sub_idx)
        rest = tuple(a[i] for i in rest_idx)
        grouped.setdefault(rest, {})[sub] = c
    branches = []
    covered = StateVector(system)
    for v in basis.vectors:
        terms = []
        for rest, subs in grouped.items():
            amp = ZERO
            for labels, w in v.components:
                c = subs.get(labels)
                if c is not None:
                    amp = amp + w * c
            if amp:
                terms.append((rest, amp))
        br = StateVector(rest_system, terms)
        branches.append((v.name, br))
        if br:
            covered = covered + embed(v, br, system)
    return Decomposition(basis, tuple(branches), state - covered)


# ---------------------------------------------------------------------------
# Events and probabilities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabelAtom:
    register: str
    label: str

    def __str__(self):
        return f"{self.register}={self.label}"


@dataclass(frozen=True)
class BasisAtom:
    basis: Basis
    vector: str

    def __post_init__(self):
        self.basis.vector(self.vector)

    def __str__(self):
        return f"{self.basis.name}:{self.vector}"


Atom = Union[LabelAtom, BasisAtom]


@dataclass(frozen=True)
class Event:
    """Conjunction of label and basis-vector atoms over disjoint registers."""

    atoms: tuple[Atom, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        seen: set[str] = set()
        for atom in atoms:
            regs = (atom.register,) if isinstance(atom, LabelAtom) else atom.basis.subsystems
            overlap = seen.intersection(regs)
            if overlap:
                raise ValueError(f"event constrains {sorted(overlap)} more than once")
            seen.update(regs)

    @classmethod
    def of(cls, *atoms, **labels) -> "Event":
        """``Event.of(W_L="ok", Wbar="ok")`` or ``Event.of(LabelAtom(...), ...)``."""
        return cls(tuple(atoms) + tuple(LabelAtom(r, lab) for r, lab in labels.items()))

    @property
    def registers(self) -> tuple[str, ...]:
        out = []
        for atom in self.atoms:
            out.extend((atom.register,) if isinstance(atom, LabelAtom) else atom.basis.subsystems)
        return tuple(out)

    def conjoin(self, other: "Event") -> "Event | None":
        """Conjunction, or ``None`` when the two events are mutually exclusive.

        Raises ``ValueError`` when they constrain overlapping registers in
        incompatible ways (e.g. two different bases over shared registers).
        """
        atoms = list(self.atoms)
        for atom in other.atoms:
            if atom in atoms:
                continue
            if isinstance(atom, LabelAtom):
                clash = [a for a in atoms if isinstance(a, LabelAtom) and a.register == atom.register]
                if clash:
                    return None
            else:
                clash = [a for a in atoms if isinstance(a, BasisAtom)
                         and a.basis == atom.basis and a.vector != atom.vector]
                if clash:
                    return None
            atoms.append(atom)
        return Event(tuple(atoms))

    def __str__(self):
        return " & ".join(str(a) for a in self.atoms)


def project(state: StateVector, event: Event) -> StateVector:
    """Apply the event's projector to ``state`` (unnormalized)."""
    system = state.system
    out = state
    for atom in event.atoms:
        if isinstance(atom, LabelAtom):
            i = system.index(atom.register)
            out = StateVector(system, [(a, c) for a, c in out._terms.items() if a[i] == atom.label])
        else:
            v = atom.basis.vector(atom.vector)
            br = decompose(out, Basis(atom.basis.name, atom.basis.subsystems, (v,))).branch(v.name)
            out = embed(v, br, system)
    return out


def probability(state: StateVector, event: Event) -> RadicalScalar:
    for reg in event.registers:
        state.system.index(reg)
    return norm_squared(project(state, event))


def conditional_probability(state: StateVector, given: Event, query: Event) -> RadicalScalar:
    p_given = probability(state, given)
    if not p_given:
        raise ZeroCondition(f"P({given}) = 0")
    joint_event = query.conjoin(given)
    if joint_event is None:
        return ZERO
    joint = probability(state, joint_event)
    try:
        return joint / p_given
    except NotMonomial:
        raise NonMonomialDivision(f"P({given}) = {p_given} is not a monomial") from None


# ---------------------------------------------------------------------------
# Initial states
# ---------------------------------------------------------------------------

def build_initial(system: SystemSpec, inits: Mapping[str, Iterable] | None = None) -> StateVector:
    """Product state from per-register superpositions.

    ``inits`` maps a register name to ``[(label, amplitude), ...]``; registers
    left out start at their ready label.
    """
    inits = dict(inits or {})
    unknown = set(inits) - set(system.names)
    if unknown:
        raise SystemMismatch(f"unknown registers {sorted(unknown)}")
    factors = []
    for reg in system.registers:
        if reg.name in inits:
            merged = _combine(((lab,), c) for lab, c in inits[reg.name])
            for (lab,), _ in merged:
                if lab not in reg.labels:
                    raise StateError(f"{lab!r} is not a label of register {reg.name!r}")
            n2 = ZERO
            for _, c in merged:
                n2 = n2 + c * c
            if n2 != 1:
                raise NonUnitInit(f"initial state of {reg.name!r} has squared norm {n2}")
            factors.append([(lab, c) for (lab,), c in merged])
        elif reg.ready_label is not None:
            factors.append([(reg.ready_label, ONE)])
        else:
            raise NonUnitInit(f"register {reg.name!r} has no initial state and no ready label")
    terms = [((), ONE)]
    for factor in factors:
        terms = [(a + (lab,), c * w) for a, c in terms for lab, w in factor]
    return StateVector(system, terms)
