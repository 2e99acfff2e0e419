"""Dictionary atoms and finite signed combinations of them."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, SupportViolation

UNIT_TOL = 1e-12
OFFSET_BOUND = 2.0
L1_SLACK = 1e-12
RIDGE = "ridge"
SPECTRAL = "spectral"


@dataclass(frozen=True)
class RidgeAtom:
    """x -> max(0, omega.x + b)^k, with 0^0 = 1."""

    direction: tuple
    offset: float
    power: int

    def __post_init__(self):
        w = np.asarray(self.direction, dtype=float).ravel()
        if w.size < 1 or not np.all(np.isfinite(w)):
            raise InvalidArgument("direction must be a finite nonempty vector")
        if abs(np.linalg.norm(w) - 1.0) > UNIT_TOL:
            raise InvalidArgument(f"direction must be a unit vector, |omega| = {np.linalg.norm(w)!r}")
        b = float(self.offset)
        if not np.isfinite(b) or abs(b) > OFFSET_BOUND + UNIT_TOL:
            raise InvalidArgument(f"offset {b!r} outside [-2, 2]")
        if int(self.power) != self.power or self.power < 0:
            raise InvalidArgument(f"power must be a nonnegative integer, got {self.power!r}")
        object.__setattr__(self, "direction", tuple(float(t) for t in w))
        object.__setattr__(self, "offset", float(np.clip(b, -OFFSET_BOUND, OFFSET_BOUND)))
        object.__setattr__(self, "power", int(self.power))

    @property
    def omega(self) -> np.ndarray:
        return np.asarray(self.direction)

    @property
    def d(self) -> int:
        return len(self.direction)

    def key(self):
        return (RIDGE, self.direction, self.offset, self.power)


@dataclass(frozen=True)
class SpectralAtom:
    """x -> (1 + |omega|)^{-s} exp(2 pi i omega.x)."""

    frequency: tuple
    decay: float

    def __post_init__(self):
        w = np.asarray(self.frequency, dtype=float).ravel()
        if w.size < 1 or not np.all(np.isfinite(w)):
            raise InvalidArgument("frequency must be a finite nonempty vector")
        if not np.isfinite(self.decay) or self.decay < 0:
            raise InvalidArgument(f"decay must be >= 0, got {self.decay!r}")
        object.__setattr__(self, "frequency", tuple(float(t) for t in w))
        object.__setattr__(self, "decay", float(self.decay))

    @property
    def omega(self) -> np.ndarray:
        return np.asarray(self.frequency)

    @property
    def d(self) -> int:
        return len(self.frequency)

    @property
    def amplitude(self) -> float:
        return (1.0 + float(np.linalg.norm(self.omega))) ** (-self.decay)

    def key(self):
        return (SPECTRAL, self.frequency, self.decay)


def relu_power(t, k: int):
    t = np.asarray(t, dtype=float)
    if k == 0:
        return np.where(t >= 0.0, 1.0, 0.0)
    return np.maximum(t, 0.0) ** k


def _points(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    pts = x.reshape(1, -1) if x.ndim == 1 else x
    if pts.shape[-1] != d:
        raise InvalidArgument(f"points must have dimension {d}, got {pts.shape[-1]}")
    if np.any(np.sum(pts * pts, axis=-1) > 1.0 + 1e-12):
        raise SupportViolation("evaluation points must lie in the closed unit ball")
    return pts


def eval_atom(atom, x):
    pts = _points(x, atom.d)
    if isinstance(atom, RidgeAtom):
        out = relu_power(pts @ atom.omega + atom.offset, atom.power)
    elif isinstance(atom, SpectralAtom):
        out = atom.amplitude * np.exp(2j * np.pi * (pts @ atom.omega))
    else:
        raise InvalidArgument(f"not a dictionary atom: {atom!r}")
    return out[0] if np.asarray(x).ndim == 1 else out


@dataclass(frozen=True)
class SparseCombo:
    """sum_i coeffs[i] * atoms[i], with l1 budget M >= sum |coeffs|.

    ``coords`` optionally carries chart coordinates of each ridge atom (one row
    per atom) and ``charts`` the index of the chart they refer to.
    """

    atoms: tuple
    coeffs: np.ndarray
    l1_budget: float | None = None
    coords: np.ndarray | None = None
    charts: np.ndarray | None = None
    _kind: str | None = field(default=None, repr=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        coeffs = np.asarray(self.coeffs)
        if not np.iscomplexobj(coeffs):
            coeffs = coeffs.astype(float)
        coeffs = coeffs.ravel()
        if len(atoms) != len(coeffs):
            raise InvalidArgument("atoms and coeffs must have equal length")
        kinds = {RIDGE if isinstance(a, RidgeAtom) else SPECTRAL if isinstance(a, SpectralAtom) else None
                 for a in atoms}
        if None in kinds:
            raise InvalidArgument("combo entries must be RidgeAtom or SpectralAtom")
        if len(kinds) > 1:
            raise InvalidArgument("a combo must hold a single atom kind")
        kind = kinds.pop() if kinds else self._kind
        if kind == RIDGE and np.iscomplexobj(coeffs):
            raise InvalidArgument("ridge combos take real coefficients")
        dims = {a.d for a in atoms}
        if len(dims) > 1:
            raise InvalidArgument("atoms must share the ambient dimension")
        l1 = float(np.sum(np.abs(coeffs)))
        M = l1 if self.l1_budget is None else float(self.l1_budget)
        if l1 > M + L1_SLACK:
            raise InvalidArgument(f"coefficient l1 norm {l1!r} exceeds budget {M!r}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "l1_budget", M)
        object.__setattr__(self, "_kind", kind)
        if self.coords is not None:
            u = np.atleast_2d(np.asarray(self.coords, dtype=float))
            if u.shape[0] != len(atoms):
                raise InvalidArgument("one chart coordinate row per atom is required")
            u.setflags(write=False)
            object.__setattr__(self, "coords", u)
            ch = np.zeros(len(atoms), dtype=int) if self.charts is None else np.asarray(self.charts, dtype=int)
            if ch.shape != (len(atoms),):
                raise InvalidArgument("one chart index per atom is required")
            ch.setflags(write=False)
            object.__setattr__(self, "charts", ch)

    @property
    def kind(self):
        return self._kind

    @property
    def d(self):
        return self.atoms[0].d if self.atoms else None

    def __len__(self):
        return len(self.atoms)

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def directions(self) -> np.ndarray:
        return np.array([a.direction for a in self.atoms], dtype=float).reshape(len(self), -1)

    def offsets(self) -> np.ndarray:
        return np.array([a.offset for a in self.atoms], dtype=float)

    def scaled(self, alpha: float) -> "SparseCombo":
        return SparseCombo(self.atoms, alpha * self.coeffs, abs(alpha) * self.l1_budget,
                           self.coords, self.charts, self._kind)

    def merged(self) -> "SparseCombo":
        """Combine atoms with identical parameters (sorted key order)."""
        acc: dict = {}
        for a, c in zip(self.atoms, self.coeffs):
            k = a.key()
            if k in acc:
                acc[k] = (acc[k][0], acc[k][1] + c)
            else:
                acc[k] = (a, c)
        keys = sorted(acc)
        atoms = tuple(acc[k][0] for k in keys)
        coeffs = np.array([acc[k][1] for k in keys]) if keys else np.zeros(0)
        return SparseCombo(atoms, coeffs, self.l1_budget, _kind=self._kind)

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, "d": self.d}
        if self.kind == SPECTRAL:
            doc["s"] = self.atoms[0].decay if self.atoms else None
            doc["atoms"] = [{"omega_freq": list(a.frequency)} for a in self.atoms]
            doc["coeffs"] = [[float(c.real), float(c.imag)] for c in np.asarray(self.coeffs, dtype=complex)]
        else:
            doc["k"] = self.atoms[0].power if self.atoms else None
            doc["atoms"] = [{"omega": list(a.direction), "b": a.offset} for a in self.atoms]
            doc["coeffs"] = [float(c) for c in self.coeffs]
        doc["l1_budget"] = self.l1_budget
        if self.coords is not None:
            doc["coords"] = self.coords.tolist()
            doc["charts"] = self.charts.tolist()
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "SparseCombo":
        kind = doc.get("kind")
        if kind == SPECTRAL:
            s = doc["s"]
            atoms = [SpectralAtom(tuple(a["omega_freq"]), s) for a in doc["atoms"]]
            coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]], dtype=complex)
        elif kind == RIDGE:
            k = doc["k"]
            atoms = [RidgeAtom(tuple(a["omega"]), a["b"], k) for a in doc["atoms"]]
            coeffs = np.array(doc["coeffs"], dtype=float)
        else:
            raise InvalidArgument(f"unknown combo kind {kind!r}")
        return cls(tuple(atoms), coeffs, doc.get("l1_budget"), doc.get("coords"),
                   doc.get("charts"), _kind=kind)

    @classmethod
    def from_json(cls, text: str) -> "SparseCombo":
        return cls.from_dict(json.loads(text))


def ridge_combo(dirs, offsets, coeffs, k: int, l1_budget=None, coords=None, charts=None) -> SparseCombo:
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    atoms = tuple(RidgeAtom(tuple(w), float(b), k) for w, b in zip(dirs, np.ravel(offsets)))
    return SparseCombo(atoms, coeffs, l1_budget, coords, charts, _kind=RIDGE)


def empty_combo(kind: str = RIDGE) -> SparseCombo:
    return SparseCombo((), np.zeros(0), 0.0, _kind=kind)


def eval_combo(c: SparseCombo, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if len(c) == 0:
        n = 1 if single else x.shape[0]
        out = np.zeros(n, dtype=complex if c.kind == SPECTRAL else float)
        return out[0] if single else out
    pts = _points(x, c.d)
    if c.kind == RIDGE:
        ks = {a.power for a in c.atoms}
        proj = pts @ c.directions().T + c.offsets()
        if len(ks) == 1:
            vals = relu_power(proj, ks.pop())
        else:
            vals = np.stack([relu_power(proj[:, i], a.power) for i, a in enumerate(c.atoms)], axis=1)
        out = vals @ c.coeffs
    else:
        freqs = np.array([a.frequency for a in c.atoms])
        amps = np.array([a.amplitude for a in c.atoms])
        out = np.exp(2j * np.pi * (pts @ freqs.T)) @ (amps * c.coeffs)
    return out[0] if single else out
