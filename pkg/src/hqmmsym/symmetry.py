"""Symmetry checks for generative triples under a rotation action.

A symmetry action carries a projective unitary rep pi on the hidden space
and a linear rep rho on the observable space.  Each check samples group
elements (and test operators where needed), measures the worst deviation
of the defining identity and reports it against a tolerance.  Map-level
identities are compared through the operator norm of the difference of
Choi matrices, so a passing check bounds the deviation on every input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankEstimationError
from .grouprep import LinearRep, ProjectiveRep, RotationElement, haar_rotations
from .hqmm import (
    CausalStructure,
    GenerativeTriple,
    ObservableWord,
    finite_volume_state,
    random_word,
    sliced_map,
)
from .opalg import BipartiteMap, ComplexOperator, OperatorMap, operator_norm
from .sampling import random_operator, rng_from


@dataclass(frozen=True)
class SymmetryAction:
    """Hidden-space projective rep paired with an observable-space rep."""

    pi: ProjectiveRep
    rho: LinearRep

    def hidden_unitary(self, g: RotationElement) -> np.ndarray:
        return self.pi.evaluate(g).entries

    def observable_unitary(self, g: RotationElement) -> np.ndarray:
        return self.rho.evaluate(g).entries


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one sampled symmetry check."""

    condition: str
    samples: int
    seed: int
    max_deviation: float
    tolerance: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "condition": self.condition,
            "samples": self.samples,
            "seed": self.seed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _choi_distance(m1: OperatorMap, m2: OperatorMap) -> float:
    return operator_norm(m1.choi().mat - m2.choi().mat)


def _conjugation_defect(m: OperatorMap, v_in: np.ndarray, u_out: np.ndarray) -> float:
    """Choi distance between E(V . V+) and U E(.) U+."""
    left = OperatorMap.from_function(
        m.dim_in, m.dim_out, lambda w: m.apply_array(v_in @ w @ v_in.conj().T)
    )
    right = OperatorMap.from_function(
        m.dim_in, m.dim_out, lambda w: u_out @ m.apply_array(w) @ u_out.conj().T
    )
    return _choi_distance(left, right)


def check_initial_invariance(
    phi0: ComplexOperator,
    action: SymmetryAction,
    samples: int = 200,
    seed: int = 0,
    tolerance: float = 1e-10,
) -> CheckResult:
    """Invariance of the initial state under the hidden-space action."""
    rng = rng_from(seed)
    worst = 0.0
    for g in haar_rotations(rng, samples):
        u = action.hidden_unitary(g)
        worst = max(worst, operator_norm(u @ phi0.entries @ u.conj().T - phi0.entries))
    return CheckResult("initial_invariance", samples, seed, worst, tolerance, worst <= tolerance)


def check_transition_equivariance(
    transition: BipartiteMap,
    action: SymmetryAction,
    samples: int = 200,
    seed: int = 0,
    tolerance: float = 1e-10,
) -> CheckResult:
    """E_H intertwines pi tensor pi on the input with pi on the output."""
    rng = rng_from(seed)
    worst = 0.0
    for g in haar_rotations(rng, samples):
        u = action.hidden_unitary(g)
        worst = max(worst, _conjugation_defect(transition, np.kron(u, u), u))
    return CheckResult(
        "transition_equivariance", samples, seed, worst, tolerance, worst <= tolerance
    )


def check_emission_covariance(
    emission: BipartiteMap,
    action: SymmetryAction,
    samples: int = 200,
    seed: int = 0,
    tolerance: float = 1e-10,
) -> CheckResult:
    """E_HO intertwines pi tensor rho on the input with pi on the output."""
    rng = rng_from(seed)
    worst = 0.0
    for g in haar_rotations(rng, samples):
        u = action.hidden_unitary(g)
        v = action.observable_unitary(g)
        worst = max(worst, _conjugation_defect(emission, np.kron(u, v), u))
    return CheckResult("emission_covariance", samples, seed, worst, tolerance, worst <= tolerance)


def check_sliced_covariance(
    triple: GenerativeTriple,
    structure,
    action: SymmetryAction,
    samples: int = 200,
    seed: int = 0,
    tolerance: float = 1e-10,
) -> CheckResult:
    """Rotating the site observables conjugates the sliced one-site map."""
    structure = CausalStructure.parse(structure)
    rng = rng_from(seed)
    h, o = triple.hidden_dim, triple.obs_dim
    worst = 0.0
    for g in haar_rotations(rng, samples):
        u = action.hidden_unitary(g)
        v = action.observable_unitary(g)
        x = random_operator(rng, h)
        y = random_operator(rng, o)
        rotated = sliced_map(
            triple,
            structure,
            ComplexOperator(h, u @ x @ u.conj().T),
            ComplexOperator(o, v @ y @ v.conj().T),
        )
        plain = sliced_map(triple, structure, ComplexOperator(h, x), ComplexOperator(o, y))
        conjugated = OperatorMap.from_function(
            h, h, lambda z: u @ plain.apply_array(u.conj().T @ z @ u) @ u.conj().T
        )
        worst = max(worst, _choi_distance(rotated, conjugated))
    return CheckResult("sliced_covariance", samples, seed, worst, tolerance, worst <= tolerance)


def _rotate_word(word: ObservableWord, u: np.ndarray, v: np.ndarray) -> ObservableWord:
    pairs = [
        (
            ComplexOperator(x.dim, u @ x.entries @ u.conj().T),
            ComplexOperator(y.dim, v @ y.entries @ v.conj().T),
        )
        for x, y in word
    ]
    return ObservableWord.from_pairs(pairs)


def check_global_invariance(
    triple: GenerativeTriple,
    structure,
    action: SymmetryAction,
    n_max: int = 6,
    samples: int = 50,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> dict[int, CheckResult]:
    """Invariance of every finite-volume value under sitewise rotation.

    Volume n holds sites 0..n, so the words have n+1 sites.  Each sample
    draws a fresh group element and a fresh random word.
    """
    structure = CausalStructure.parse(structure)
    rng = rng_from(seed)
    results = {}
    for n in range(n_max + 1):
        worst = 0.0
        for g in haar_rotations(rng, samples):
            u = action.hidden_unitary(g)
            v = action.observable_unitary(g)
            word = random_word(rng, triple, n + 1)
            value = finite_volume_state(triple, structure, word)
            rotated = finite_volume_state(triple, structure, _rotate_word(word, u, v))
            worst = max(worst, abs(rotated - value))
        results[n] = CheckResult(
            f"global_invariance[n={n}]", samples, seed, worst, tolerance, worst <= tolerance
        )
    return results


def invariant_states(
    rep: ProjectiveRep,
    group_samples: int = 200,
    seed: int = 0,
    rel_threshold: float = 1e-8,
) -> list[ComplexOperator]:
    """Basis of invariant density operators of a projective rep.

    Solves the common commutant of sampled rep unitaries as the nullspace
    of stacked commutator matrices, read off from the singular spectrum.
    Singular values falling between the cutoff and ten times the cutoff
    leave the rank ambiguous and raise RankEstimationError rather than
    silently picking a side.
    """
    d = rep.dim
    rng = rng_from(seed)
    eye = np.eye(d)
    blocks = []
    for g in haar_rotations(rng, group_samples):
        u = rep.evaluate(g).entries
        # row-major vec: vec(UX - XU) = (U kron I - I kron U^T) vec(X)
        blocks.append(np.kron(u, eye) - np.kron(eye, u.T))
    stacked = np.vstack(blocks)
    _, s, vh = np.linalg.svd(stacked, full_matrices=False)
    threshold = rel_threshold * s[0]
    if np.any((s > threshold) & (s <= 10.0 * threshold)):
        raise RankEstimationError(s, threshold)
    nullity = int(np.sum(s <= threshold))
    if nullity == 0:
        return []
    basis = [vh[k].reshape(d, d) for k in range(d * d - nullity, d * d)]
    # the commutant is closed under adjoints, so Hermitian parts span it
    candidates = []
    for m in basis:
        candidates.append((m + m.conj().T) / 2.0)
        candidates.append((m - m.conj().T) / 2.0j)
    picked = []
    vecs: list[np.ndarray] = []
    for h in candidates:
        v = h.reshape(-1).copy()
        for w in vecs:
            v -= np.vdot(w, v) * w
        nrm = np.linalg.norm(v)
        if nrm > 1e-10:
            vecs.append(v / nrm)
            picked.append((v / nrm).reshape(d, d))
        if len(picked) == nullity:
            break
    states = []
    for h in picked:
        h = (h + h.conj().T) / 2.0
        evals = np.linalg.eigvalsh(h)
        shifted = h + (abs(evals[0]) + 1.0) * eye
        states.append(ComplexOperator(d, shifted / np.trace(shifted).real))
    return states


def twirl_invariant_state(
    rep: ProjectiveRep,
    rho0: ComplexOperator,
    group_samples: int = 200,
    seed: int = 0,
    tol: float = 1e-12,
    max_iter: int = 500,
) -> ComplexOperator:
    """Project a density onto the invariant states by iterated averaging.

    The sampled unitaries define a mixed-unitary channel whose fixed points
    are exactly the common commutant; iterating the channel converges
    geometrically, which reaches far tighter agreement than a single
    averaging pass over the same samples.
    """
    rng = rng_from(seed)
    unitaries = [rep.evaluate(g).entries for g in haar_rotations(rng, group_samples)]
    current = rho0.entries.astype(complex)
    for _ in range(max_iter):
        stacked = sum(u @ current @ u.conj().T for u in unitaries) / len(unitaries)
        if operator_norm(stacked - current) <= tol:
            current = stacked
            break
        current = stacked
    else:
        raise ValueError(f"twirl did not converge within {max_iter} iterations")
    current = (current + current.conj().T) / 2.0
    current = current / np.trace(current).real
    return ComplexOperator(rho0.dim, current)
