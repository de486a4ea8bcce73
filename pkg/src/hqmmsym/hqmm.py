"""Generative triples, causal structures and finite-volume state evaluation.

A generative triple is an initial state phi0 on the hidden algebra together
with two completely positive unital maps, a transition map on
hidden tensor hidden and an emission map on hidden tensor observable.  A
word of site observables (X_k, Y_k) is evaluated in the Heisenberg picture
by folding sliced one-site maps from the last site down to the first and
closing with phi0.  The fold never materializes a tensor product over
sites, so the cost is linear in the word length.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import ConfigError, DimensionMismatchError
from .opalg import (
    BipartiteMap,
    ComplexOperator,
    CpuCertificate,
    OperatorMap,
    certify_cpu,
    hermitian_eigenvalues,
)
from .sampling import random_operator, rng_from


class CausalStructure(enum.Enum):
    """Order in which transition and emission act inside a one-site map."""

    CONVENTIONAL = "conventional"
    CAUSAL = "causal"

    @classmethod
    def parse(cls, value) -> "CausalStructure":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise ConfigError(
                f"unknown causal structure {value!r}; expected 'conventional' or 'causal'"
            ) from None


@dataclass(frozen=True)
class GenerativeTriple:
    """Initial state plus transition and emission maps of a hidden model."""

    hidden_dim: int
    obs_dim: int
    phi0: ComplexOperator
    transition: BipartiteMap  # hidden tensor hidden -> hidden
    emission: BipartiteMap  # hidden tensor observable -> hidden

    def __post_init__(self):
        h, o = self.hidden_dim, self.obs_dim
        if self.phi0.dim != h:
            raise DimensionMismatchError("phi0", h, self.phi0.dim)
        if (self.transition.dim_in1, self.transition.dim_in2, self.transition.dim_out) != (h, h, h):
            raise DimensionMismatchError(
                "transition",
                (h, h, h),
                (self.transition.dim_in1, self.transition.dim_in2, self.transition.dim_out),
            )
        if (self.emission.dim_in1, self.emission.dim_in2, self.emission.dim_out) != (h, o, h):
            raise DimensionMismatchError(
                "emission",
                (h, o, h),
                (self.emission.dim_in1, self.emission.dim_in2, self.emission.dim_out),
            )

    def certificates(self, tol: float = 1e-10) -> dict[str, CpuCertificate]:
        return {
            "transition": certify_cpu(self.transition, tol),
            "emission": certify_cpu(self.emission, tol),
        }

    def validate(self, tol_state: float = 1e-12, tol_map: float = 1e-10) -> None:
        """Raise when phi0 is not a state or either map is not CPU."""
        problems = []
        eigs = hermitian_eigenvalues(self.phi0, tol=1e-10)
        if eigs[0] < -tol_state:
            problems.append(f"phi0 has negative eigenvalue {eigs[0]:.3e}")
        if abs(self.phi0.trace() - 1.0) > tol_state:
            problems.append(f"phi0 trace {self.phi0.trace():} is not 1")
        for name, cert in self.certificates(tol_map).items():
            if not cert.cp:
                problems.append(f"{name} map is not CP (min eigenvalue {cert.min_eigenvalue:.3e})")
            if not cert.unital:
                problems.append(
                    f"{name} map is not unital (deviation {cert.unitality_deviation:.3e})"
                )
        if problems:
            raise ValueError("invalid generative triple: " + "; ".join(problems))


@dataclass(frozen=True)
class ObservableWord:
    """Finite word of per-site pairs (hidden observable, physical observable)."""

    sites: tuple[tuple[ComplexOperator, ComplexOperator], ...]

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[ComplexOperator, ComplexOperator]]) -> "ObservableWord":
        return cls(tuple((x, y) for x, y in pairs))

    @classmethod
    def all_identity(cls, n_sites: int, hidden_dim: int, obs_dim: int) -> "ObservableWord":
        x = ComplexOperator.identity(hidden_dim)
        y = ComplexOperator.identity(obs_dim)
        return cls(tuple((x, y) for _ in range(n_sites)))

    def append_identity(self) -> "ObservableWord":
        if not self.sites:
            raise ValueError("cannot extend an empty word")
        x0, y0 = self.sites[0]
        return ObservableWord(
            self.sites + ((ComplexOperator.identity(x0.dim), ComplexOperator.identity(y0.dim)),)
        )

    def check_dims(self, triple: GenerativeTriple) -> None:
        for k, (x, y) in enumerate(self.sites):
            if x.dim != triple.hidden_dim:
                raise DimensionMismatchError(f"site {k} hidden", triple.hidden_dim, x.dim)
            if y.dim != triple.obs_dim:
                raise DimensionMismatchError(f"site {k} observable", triple.obs_dim, y.dim)

    def to_json_list(self) -> list:
        return [{"X": x.to_json_dict(), "Y": y.to_json_dict()} for x, y in self.sites]

    @classmethod
    def from_json_list(cls, items, hidden_dim: int, obs_dim: int) -> "ObservableWord":
        sites = []
        for k, item in enumerate(items):
            try:
                x = item["X"]
                y = item["Y"]
            except (TypeError, KeyError):
                raise ConfigError(f"word entry {k} needs keys 'X' and 'Y'") from None
            x_op = ComplexOperator.identity(hidden_dim) if x == "I" else ComplexOperator.from_json_dict(x)
            y_op = ComplexOperator.identity(obs_dim) if y == "I" else ComplexOperator.from_json_dict(y)
            sites.append((x_op, y_op))
        return cls(tuple(sites))


def _apply_sliced(
    triple: GenerativeTriple,
    structure: CausalStructure,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
) -> np.ndarray:
    if structure is CausalStructure.CONVENTIONAL:
        emitted = triple.emission.apply_array(np.kron(x, y))
        return triple.transition.apply_array(np.kron(emitted, z))
    linked = triple.transition.apply_array(np.kron(x, z))
    return triple.emission.apply_array(np.kron(linked, y))


def sliced_map(
    triple: GenerativeTriple,
    structure,
    x: ComplexOperator,
    y: ComplexOperator,
) -> OperatorMap:
    """One-site map Z -> T(X tensor Z tensor Y) on the hidden algebra."""
    structure = CausalStructure.parse(structure)
    if x.dim != triple.hidden_dim:
        raise DimensionMismatchError("hidden", triple.hidden_dim, x.dim)
    if y.dim != triple.obs_dim:
        raise DimensionMismatchError("observable", triple.obs_dim, y.dim)
    h = triple.hidden_dim
    return OperatorMap.from_function(
        h, h, lambda z: _apply_sliced(triple, structure, x.entries, y.entries, z)
    )


def composite_map(triple: GenerativeTriple, structure) -> BipartiteMap:
    """Full one-site map on hidden tensor hidden tensor observable.

    Slot order is (X, X', Y): current hidden, next hidden, physical.  The
    conventional structure feeds the emitted operator into the transition,
    the causal structure feeds the transition output into the emission.
    """
    structure = CausalStructure.parse(structure)
    h, o = triple.hidden_dim, triple.obs_dim
    total = h * h * o
    coeff = np.zeros((h, h, total, total), dtype=complex)
    units_h = [np.zeros((h, h), dtype=complex) for _ in range(h * h)]
    for i, j in product(range(h), range(h)):
        units_h[i * h + j][i, j] = 1.0
    units_o = [np.zeros((o, o), dtype=complex) for _ in range(o * o)]
    for i, j in product(range(o), range(o)):
        units_o[i * o + j][i, j] = 1.0
    for a, a2, b, b2, c, c2 in product(range(h), range(h), range(h), range(h), range(o), range(o)):
        row = (a * h + b) * o + c
        col = (a2 * h + b2) * o + c2
        coeff[:, :, row, col] = _apply_sliced(
            triple, structure, units_h[a * h + a2], units_o[c * o + c2], units_h[b * h + b2]
        )
    return BipartiteMap(total, h, coeff, h * h, o)


def finite_volume_state(triple: GenerativeTriple, structure, word: ObservableWord) -> complex:
    """Value of the word under the folded one-site maps and phi0.

    The fold runs from the last site to the first, starting from the
    identity, and closes with phi0(.) = trace(rho0 .).
    """
    structure = CausalStructure.parse(structure)
    if len(word) == 0:
        raise ValueError("empty word; finite-volume states need at least one site")
    word.check_dims(triple)
    m = np.eye(triple.hidden_dim, dtype=complex)
    for x, y in reversed(word.sites):
        m = _apply_sliced(triple, structure, x.entries, y.entries, m)
    return complex(np.trace(triple.phi0.entries @ m))


def hidden_marginal(triple: GenerativeTriple, structure, xs: Sequence[ComplexOperator]) -> complex:
    """Word value with identity on every physical slot."""
    y = ComplexOperator.identity(triple.obs_dim)
    word = ObservableWord.from_pairs([(x, y) for x in xs])
    return finite_volume_state(triple, structure, word)


def observable_marginal(triple: GenerativeTriple, structure, ys: Sequence[ComplexOperator]) -> complex:
    """Word value with identity on every hidden slot."""
    x = ComplexOperator.identity(triple.hidden_dim)
    word = ObservableWord.from_pairs([(x, y) for y in ys])
    return finite_volume_state(triple, structure, word)


def random_word(rng: np.random.Generator, triple: GenerativeTriple, n_sites: int) -> ObservableWord:
    """Word of independent norm-one random site observables."""
    pairs = []
    for _ in range(n_sites):
        x = ComplexOperator(triple.hidden_dim, random_operator(rng, triple.hidden_dim))
        y = ComplexOperator(triple.obs_dim, random_operator(rng, triple.obs_dim))
        pairs.append((x, y))
    return ObservableWord.from_pairs(pairs)


def kolmogorov_check(
    triple: GenerativeTriple,
    structure,
    depth: int = 6,
    samples: int = 25,
    seed: int = 0,
) -> float:
    """Largest change of a word value under appending an identity site.

    For unital maps the appended site acts as the identity, so the value is
    unchanged; a non-unital transition shows up as a per-site inflation.
    The all-identity word is always included at every length, alongside
    seeded random words.
    """
    structure = CausalStructure.parse(structure)
    rng = rng_from(seed)
    base = float(triple.phi0.trace().real)
    one_site = finite_volume_state(
        triple, structure, ObservableWord.all_identity(1, triple.hidden_dim, triple.obs_dim)
    )
    worst = abs(one_site - base)
    for n_sites in range(1, depth):
        words = [ObservableWord.all_identity(n_sites, triple.hidden_dim, triple.obs_dim)]
        words += [random_word(rng, triple, n_sites) for _ in range(samples)]
        for word in words:
            value = finite_volume_state(triple, structure, word)
            extended = finite_volume_state(triple, structure, word.append_identity())
            worst = max(worst, abs(extended - value))
    return worst


def classical_diagonal_triple(
    initial: np.ndarray, transition: np.ndarray, emission: np.ndarray
) -> GenerativeTriple:
    """Embed a classical hidden Markov chain as a diagonal generative triple.

    initial is a probability vector, transition a row-stochastic matrix over
    hidden states and emission a row-stochastic matrix from hidden states to
    symbols.  All maps dephase in the fixed bases, so word values of
    diagonal projectors reproduce classical likelihoods.
    """
    p = np.asarray(initial, dtype=float)
    t = np.asarray(transition, dtype=float)
    b = np.asarray(emission, dtype=float)
    d = p.size
    o = b.shape[1]
    if t.shape != (d, d):
        raise DimensionMismatchError("transition", (d, d), t.shape)
    if b.shape[0] != d:
        raise DimensionMismatchError("emission", d, b.shape[0])
    for name, mat in (("initial", p[None, :]), ("transition", t), ("emission", b)):
        if mat.min() < 0 or np.abs(mat.sum(axis=1) - 1.0).max() > 1e-12:
            raise ValueError(f"{name} is not stochastic")
    kraus_t = []
    for i, j in product(range(d), range(d)):
        k = np.zeros((d, d * d), dtype=complex)
        k[i, i * d + j] = np.sqrt(t[i, j])
        kraus_t.append(k)
    kraus_e = []
    for i, y in product(range(d), range(o)):
        k = np.zeros((d, d * o), dtype=complex)
        k[i, i * o + y] = np.sqrt(b[i, y])
        kraus_e.append(k)
    return GenerativeTriple(
        hidden_dim=d,
        obs_dim=o,
        phi0=ComplexOperator(d, np.diag(p).astype(complex)),
        transition=BipartiteMap.build_from_kraus(d, d, d, kraus_t),
        emission=BipartiteMap.build_from_kraus(d, o, d, kraus_e),
    )


def _kraus_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (TypeError, KeyError, ValueError):
        raise ConfigError("kraus entries need keys 'rows', 'cols', 're', 'im'") from None
    if re.size != rows * cols or im.size != rows * cols:
        raise ConfigError(f"kraus entry arrays must have {rows * cols} values")
    return (re + 1j * im).reshape(rows, cols)


def _bipartite_from_config(obj: dict, d1: int, d2: int, d_out: int, name: str) -> BipartiteMap:
    kind = obj.get("kind")
    if kind == "normalized_partial_trace":
        kraus = [np.kron(np.eye(d1), unit.reshape(1, d2)) / np.sqrt(d2) for unit in np.eye(d2)]
        return BipartiteMap.build_from_kraus(d1, d2, d_out, kraus)
    if kind == "aklt_emission":
        from . import aklt

        tensors = aklt.build_tensors(obj.get("variant", "normalized_cartesian"))
        return aklt.emission_map(tensors)
    if kind == "kraus":
        kraus = [_kraus_from_json(entry) for entry in obj.get("kraus", [])]
        if not kraus:
            raise ConfigError(f"{name}: kind 'kraus' needs a nonempty 'kraus' list")
        return BipartiteMap.build_from_kraus(d1, d2, d_out, kraus)
    raise ConfigError(f"{name}: unknown map kind {kind!r}")


def triple_from_config(obj: dict) -> tuple[GenerativeTriple, CausalStructure]:
    """Build a triple from the model-config JSON schema."""
    try:
        h = int(obj["hidden_dim"])
        o = int(obj["obs_dim"])
    except (TypeError, KeyError, ValueError):
        raise ConfigError("model config needs integer 'hidden_dim' and 'obs_dim'") from None
    phi0_obj = obj.get("phi0", "maximally_mixed")
    if phi0_obj == "maximally_mixed":
        phi0 = ComplexOperator(h, np.eye(h, dtype=complex) / h)
    else:
        phi0 = ComplexOperator.from_json_dict(phi0_obj)
    if "E_H" not in obj or "E_HO" not in obj:
        raise ConfigError("model config needs 'E_H' and 'E_HO' map entries")
    transition = _bipartite_from_config(obj["E_H"], h, h, h, "E_H")
    emission = _bipartite_from_config(obj["E_HO"], h, o, h, "E_HO")
    structure = CausalStructure.parse(obj.get("structure", "conventional"))
    try:
        triple = GenerativeTriple(h, o, phi0, transition, emission)
    except DimensionMismatchError as err:
        raise ConfigError(f"model config dimensions are inconsistent: {err}") from None
    return triple, structure


def load_model_config(path: str) -> tuple[GenerativeTriple, CausalStructure]:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read model config {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"model config {path} is not valid JSON: {err}") from None
    return triple_from_config(obj)


def load_word(path: str, hidden_dim: int, obs_dim: int) -> ObservableWord:
    try:
        with open(path) as fh:
            items = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read word file {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"word file {path} is not valid JSON: {err}") from None
    if not isinstance(items, list):
        raise ConfigError("word file must hold a JSON list of sites")
    return ObservableWord.from_json_list(items, hidden_dim, obs_dim)
