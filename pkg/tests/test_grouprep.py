import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats

import util
from hqmmsym import (
    NonCommutingError,
    NonUnimodularError,
    RotationElement,
    SubgroupStructureError,
    UnsupportedSpinError,
    cocycle_eval,
    commutator_pairing,
    detect_nontrivial_class,
    gauge_transform,
    haar_sample,
    operator_norm,
    section_cocycle,
    spin_half_rep,
    spin_one_rep,
    spin_rep,
    trivial_rep,
)
from hqmmsym.grouprep import (
    CONDON_SHORTLEY,
    PAULI,
    _spin_matrices,
    haar_rotations,
    raw_quaternion_sample,
    tensor_rep_cocycle_check,
)
from hqmmsym.sampling import rng_from


def test_canonical_sign_first_nonzero_positive():
    g = RotationElement((-0.5, 0.5, 0.5, 0.5))
    assert g.quat[0] > 0
    h = RotationElement((0.0, -1.0, 0.0, 0.0))
    assert h.quat == (0.0, 1.0, 0.0, 0.0)


def test_pi_rotations_have_exact_components():
    for axis, idx in (((1, 0, 0), 1), ((0, 1, 0), 2), ((0, 0, 1), 3)):
        g = RotationElement.from_axis_angle(axis, np.pi)
        expected = [0.0, 0.0, 0.0, 0.0]
        expected[idx] = 1.0
        assert g.quat == tuple(expected)


def test_quaternion_validation():
    with pytest.raises(ValueError):
        RotationElement((1.0, 1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        RotationElement((0.0, 0.0, 0.0, 0.0))


def test_group_laws():
    rng = rng_from(0)
    for g, h, k in zip(*(haar_rotations(rng, 20) for _ in range(3))):
        assert g.compose(g.inverse()).distance(RotationElement.identity()) < 1e-12
        assert g.compose(RotationElement.identity()).distance(g) < 1e-12
        lhs = g.compose(h).compose(k)
        rhs = g.compose(h.compose(k))
        assert lhs.distance(rhs) < 1e-12


def test_rotation_matrix_is_special_orthogonal():
    for g in haar_sample(1, 25):
        r = g.rotation_matrix()
        assert operator_norm(r @ r.T - np.eye(3)) < 1e-12
        assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)
        assert operator_norm(g.inverse().rotation_matrix() - r.T) < 1e-12


def test_rotation_matrix_multiplicative():
    rng = rng_from(2)
    for g, h in zip(haar_rotations(rng, 15), haar_rotations(rng, 15)):
        assert operator_norm(
            g.compose(h).rotation_matrix() - g.rotation_matrix() @ h.rotation_matrix()
        ) < 1e-12


@settings(max_examples=60, deadline=None)
@given(
    floats(min_value=-1.0, max_value=1.0),
    floats(min_value=-1.0, max_value=1.0),
    floats(min_value=0.05, max_value=6.2),
)
def test_su2_adjoint_reproduces_rotation(ax, ay, angle):
    axis = np.array([ax, ay, 1.0 - ax])
    if np.linalg.norm(axis) < 1e-3:
        return
    g = RotationElement.from_axis_angle(axis, angle)
    u = g.su2_matrix()
    r = g.rotation_matrix()
    for a in range(3):
        rotated = u @ PAULI[a] @ u.conj().T
        recombined = sum(r[b, a] * PAULI[b] for b in range(3))
        assert operator_norm(rotated - recombined) < 1e-12


@settings(max_examples=60, deadline=None)
@given(floats(min_value=-3.0, max_value=3.0), floats(min_value=-3.0, max_value=3.0))
def test_same_axis_angles_add(alpha, beta):
    axis = (0.3, -0.4, 0.9)
    g = RotationElement.from_axis_angle(axis, alpha)
    h = RotationElement.from_axis_angle(axis, beta)
    combined = RotationElement.from_axis_angle(axis, alpha + beta)
    assert g.compose(h).distance(combined) < 1e-12


def test_angle_axis_round_trip():
    g = RotationElement.from_axis_angle((0.0, 1.0, 0.0), 1.2)
    theta, axis = g.angle_axis()
    assert theta == pytest.approx(1.2, abs=1e-12)
    assert np.allclose(axis, [0.0, 1.0, 0.0])
    theta0, axis0 = RotationElement.identity().angle_axis()
    assert theta0 == 0.0
    assert np.allclose(axis0, [0.0, 0.0, 1.0])


def test_haar_sampling_is_deterministic():
    a = haar_sample(42, 10)
    b = haar_sample(42, 10)
    assert [g.quat for g in a] == [g.quat for g in b]
    assert haar_sample(43, 10)[0].quat != a[0].quat


def test_canonicalization_versus_raw_sample():
    raw = raw_quaternion_sample(5, 400)
    # raw quaternions hit both sheets of the double cover
    assert (raw[:, 0] < 0).sum() > 100
    for g in haar_sample(5, 50):
        first_nonzero = next(c for c in g.quat if c != 0.0)
        assert first_nonzero > 0


def test_json_round_trip():
    g = haar_sample(6, 1)[0]
    assert RotationElement.from_json_dict(g.to_json_dict()).quat == g.quat


def test_cocycle_values_are_exact_signs():
    rng = rng_from(7)
    seen = set()
    for g, h in zip(haar_rotations(rng, 300), haar_rotations(rng, 300)):
        omega = cocycle_eval(g, h)
        assert omega == 1.0 or omega == -1.0
        seen.add(omega)
    assert seen == {1.0, -1.0}


def test_section_property_of_su2_lift():
    rng = rng_from(8)
    for g, h in zip(haar_rotations(rng, 100), haar_rotations(rng, 100)):
        omega = cocycle_eval(g, h)
        lift = g.su2_matrix() @ h.su2_matrix()
        assert operator_norm(lift - omega * g.compose(h).su2_matrix()) < 1e-12


def test_cocycle_identity_is_exact():
    rng = rng_from(9)
    for g, h, k in zip(*(haar_rotations(rng, 200) for _ in range(3))):
        lhs = cocycle_eval(g, h) * cocycle_eval(g.compose(h), k)
        rhs = cocycle_eval(h, k) * cocycle_eval(g, h.compose(k))
        assert lhs == rhs


def test_gauge_transform_by_trivial_lambda():
    omega = section_cocycle()
    gauged = gauge_transform(omega, lambda g: 1.0)
    rng = rng_from(10)
    for g, h in zip(haar_rotations(rng, 30), haar_rotations(rng, 30)):
        assert gauged.evaluate(g, h) == omega.evaluate(g, h)
    assert gauged.tag == "gauge(canonical-section)"


def test_gauge_transform_rejects_non_unimodular_lambda():
    gauged = gauge_transform(section_cocycle(), lambda g: 2.0)
    g, h = haar_sample(11, 2)
    with pytest.raises(NonUnimodularError) as info:
        gauged.evaluate(g, h)
    assert info.value.modulus_deviation == pytest.approx(1.0)


def test_commutator_pairing_gauge_invariant():
    x = RotationElement.from_axis_angle((1, 0, 0), np.pi)
    y = RotationElement.from_axis_angle((0, 1, 0), np.pi)
    assert commutator_pairing(x, y) == pytest.approx(-1.0)
    # a generic unimodular gauge leaves the pairing untouched
    rng = rng_from(12)
    phases = {}

    def lam(g):
        key = tuple(round(c, 12) for c in g.quat)
        if key not in phases:
            phases[key] = np.exp(1j * rng.uniform(0, 2 * np.pi))
        return phases[key]

    gauged = gauge_transform(section_cocycle(), lam)
    ratio = gauged.evaluate(x, y) / gauged.evaluate(y, x)
    assert ratio == pytest.approx(-1.0)


def test_commutator_pairing_same_axis_is_trivial():
    g = RotationElement.from_axis_angle((0, 0, 1), 0.7)
    h = RotationElement.from_axis_angle((0, 0, 1), 2.1)
    assert commutator_pairing(g, h) == pytest.approx(1.0)


def test_commutator_pairing_requires_commuting_pair():
    g = RotationElement.from_axis_angle((0, 0, 1), 0.7)
    h = RotationElement.from_axis_angle((1, 0, 0), 0.9)
    with pytest.raises(NonCommutingError) as info:
        commutator_pairing(g, h)
    assert info.value.deviation > 0.1


def _z2z2():
    return [
        RotationElement.identity(),
        RotationElement.from_axis_angle((1, 0, 0), np.pi),
        RotationElement.from_axis_angle((0, 1, 0), np.pi),
        RotationElement.from_axis_angle((0, 0, 1), np.pi),
    ]


def test_detect_nontrivial_class_on_flip_group():
    report = detect_nontrivial_class(_z2z2())
    assert report.nontrivial
    assert report.witness is not None
    table = np.real(report.pairing_table)
    assert np.allclose(np.abs(table), 1.0)
    # identity row and column pair trivially, distinct flips anticommute
    assert np.allclose(table[0], 1.0)
    assert np.allclose(table[:, 0], 1.0)
    assert table[1, 2] == pytest.approx(-1.0)
    off = table[1:, 1:]
    assert np.allclose(np.diag(off), 1.0)
    assert np.allclose(off[~np.eye(3, dtype=bool)], -1.0)


def test_detect_nontrivial_class_on_cyclic_group_is_trivial():
    elements = [
        RotationElement.from_axis_angle((0, 0, 1), 2 * np.pi * k / 4) for k in range(4)
    ]
    report = detect_nontrivial_class(elements)
    assert not report.nontrivial
    assert report.witness is None
    assert np.allclose(report.pairing_table, 1.0)


def test_detect_nontrivial_class_rejects_non_closed_set():
    elements = [RotationElement.identity(), RotationElement.from_axis_angle((0, 0, 1), np.pi / 2)]
    with pytest.raises(SubgroupStructureError, match="leaves"):
        detect_nontrivial_class(elements)


def test_detect_nontrivial_class_rejects_non_abelian_set():
    # dihedral group of the triangle: closed but not abelian
    elements = [RotationElement.from_axis_angle((0, 0, 1), 2 * np.pi * k / 3) for k in range(3)]
    elements += [
        RotationElement.from_axis_angle((np.cos(phi), np.sin(phi), 0), np.pi)
        for phi in (0.0, np.pi / 3, 2 * np.pi / 3)
    ]
    with pytest.raises(SubgroupStructureError, match="commute"):
        detect_nontrivial_class(elements)


@pytest.mark.parametrize("j", [0.7, -0.5, 0.0, 1.3])
def test_spin_rep_rejects_bad_labels(j):
    with pytest.raises(UnsupportedSpinError):
        spin_rep(j, RotationElement.identity())


def test_spin_half_is_the_canonical_lift():
    for g in haar_sample(13, 10):
        assert operator_norm(spin_rep(0.5, g) - g.su2_matrix()) == 0.0


def test_spin_one_cartesian_is_the_rotation_matrix():
    for g in haar_sample(14, 10):
        assert operator_norm(spin_rep(1, g, "cartesian") - g.rotation_matrix()) < 1e-14


def test_spin_one_spherical_is_conjugated():
    for g in haar_sample(15, 10):
        u = CONDON_SHORTLEY
        expected = u @ g.rotation_matrix() @ u.conj().T
        assert operator_norm(spin_rep(1, g, "spherical") - expected) < 1e-13
    with pytest.raises(ValueError):
        spin_rep(1, RotationElement.identity(), "cylindrical")


def test_spin_one_spherical_matches_wigner_entries():
    theta = 0.83
    gz = RotationElement.from_axis_angle((0, 0, 1), theta)
    uz = spin_rep(1, gz, "spherical")
    assert uz[0, 0] == pytest.approx(np.exp(-1j * theta), abs=1e-13)
    assert uz[1, 1] == pytest.approx(1.0, abs=1e-13)
    assert uz[2, 2] == pytest.approx(np.exp(1j * theta), abs=1e-13)
    beta = 1.37
    gy = RotationElement.from_axis_angle((0, 1, 0), beta)
    assert operator_norm(spin_rep(1, gy, "spherical") - util.wigner_d1(beta)) < 1e-12


@pytest.mark.parametrize("j", [1.5, 2.0, 2.5])
def test_higher_spins_match_series_exponential(j):
    jx, jy, jz = _spin_matrices(j)
    for g in haar_sample(16, 6):
        theta, axis = g.angle_axis()
        generator = -1j * theta * (axis[0] * jx + axis[1] * jy + axis[2] * jz)
        assert operator_norm(spin_rep(j, g) - util.expm_series(generator)) < 1e-12


def test_integer_spin_is_multiplicative():
    rng = rng_from(17)
    for g, h in zip(haar_rotations(rng, 20), haar_rotations(rng, 20)):
        prod = spin_rep(2, g) @ spin_rep(2, h)
        assert operator_norm(prod - spin_rep(2, g.compose(h))) < 1e-12


def test_half_integer_spin_is_projective_with_the_section_cocycle():
    rng = rng_from(18)
    for g, h in zip(haar_rotations(rng, 20), haar_rotations(rng, 20)):
        omega = cocycle_eval(g, h)
        prod = spin_rep(1.5, g) @ spin_rep(1.5, h)
        assert operator_norm(prod - omega * spin_rep(1.5, g.compose(h))) < 1e-12


def test_rep_wrappers():
    half = spin_half_rep()
    one = spin_one_rep("spherical")
    triv = trivial_rep(2)
    assert (half.dim, one.dim, triv.dim) == (2, 3, 2)
    assert half.cocycle.tag == "canonical-section"
    assert one.cocycle.tag == "trivial"
    g = haar_sample(19, 1)[0]
    assert half.evaluate(g).dim == 2
    assert operator_norm(triv.evaluate(g).entries - np.eye(2)) == 0.0


def test_tensor_of_two_projective_reps_is_linear():
    # the sign cocycle squares to one, so half tensor half multiplies exactly
    half = spin_half_rep()
    dev = tensor_rep_cocycle_check(half, half, samples=50, seed=20)
    assert dev < 1e-12
    dev_mixed = tensor_rep_cocycle_check(half, spin_one_rep(), samples=50, seed=21)
    assert dev_mixed < 1e-12
